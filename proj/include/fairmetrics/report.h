#ifndef FAIRMETRICS_REPORT_H_
#define FAIRMETRICS_REPORT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "fairmetrics/metrics.h"
#include "fairmetrics/rates.h"
#include "fairmetrics/sweep.h"

namespace fairmetrics {

inline constexpr std::string_view kReportSchema = "fairmetrics.report/1";

std::string_view ToolVersion();

// Lower-case hex SHA-256.
std::string Sha256Hex(std::string_view bytes);

// Provenance block embedded in every structured report.
struct ReportMetadata {
  std::string command;
  std::string input_path;
  std::string input_sha256;
  std::optional<std::uint64_t> seed;
  nlohmann::json config = nlohmann::json::object();
};

// Shortest decimal that round-trips to the same double. Text tables and
// delimited exports use this, so every rendering shows identical numbers.
std::string FormatNumber(double value);
// Percent with two decimals, rounded half away from zero (display only).
std::string FormatPercent(double fraction);

nlohmann::json MetadataJson(const ReportMetadata& meta);
nlohmann::json ToJson(const Rate& rate);
nlohmann::json ToJson(const MetricResult& result);
nlohmann::json ToJson(const SweepCell& cell);
nlohmann::json ToJson(const FmrThreshold& threshold);
nlohmann::json ToJson(const RateTable& table);
nlohmann::json ToJson(const DistributionSummary& summary);
nlohmann::json ToJson(const ComponentSummary& summary);
nlohmann::json ToJson(const FfmcReport& report);
nlohmann::json ToJson(std::span<const DetCurve> curves);
nlohmann::json ToJson(std::span<const CurvePoint> points);
nlohmann::json ToJson(const SweepResult& sweep);

// Wraps a payload with schema, tool version and provenance.
nlohmann::json MakeReport(const ReportMetadata& meta, std::string_view kind,
                          nlohmann::json payload);

// Flat comma-separated exports, one record per line, header first.
// Not-computable values are written as empty fields.
void WriteSweepCsv(std::ostream& out, const SweepResult& sweep);
void WriteRateTableCsv(std::ostream& out, const RateTable& table);
void WriteDetCsv(std::ostream& out, std::span<const DetCurve> curves);
void WriteCurveCsv(std::ostream& out, std::span<const CurvePoint> points);
void WriteMetricResultsCsv(std::ostream& out, std::span<const SweepCell> cells);

// Aligned plain-text tables.
void RenderRateTable(std::ostream& out, const RateTable& table, bool percent);
void RenderMetricResults(std::ostream& out, std::span<const SweepCell> cells);
void RenderFfmc(std::ostream& out, const FfmcReport& report);
void RenderComponentSummaries(std::ostream& out,
                              std::span<const ComponentSummary> summaries);

}  // namespace fairmetrics

#endif  // FAIRMETRICS_REPORT_H_
