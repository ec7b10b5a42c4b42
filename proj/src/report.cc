#include "fairmetrics/report.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "fairmetrics/rng.h"

namespace fairmetrics {

using nlohmann::json;

namespace {

json Optional(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

// JSON has no infinities; sentinel thresholds become null.
json Threshold(double t) { return std::isfinite(t) ? json(t) : json(nullptr); }

std::string Field(const std::optional<double>& v) {
  return v ? FormatNumber(*v) : std::string();
}

std::string ThresholdField(double t) {
  if (std::isfinite(t)) return FormatNumber(t);
  return t > 0 ? "inf" : "-inf";
}

}  // namespace

std::string_view ToolVersion() { return FAIRMETRICS_VERSION; }

std::string FormatNumber(double value) { return fmt::format("{}", value); }

std::string FormatPercent(double fraction) {
  const double hundredths = std::round(fraction * 10000.0);
  return fmt::format("{:.2f}", hundredths / 100.0);
}

json MetadataJson(const ReportMetadata& meta) {
  json j;
  j["tool"] = "fairmetrics";
  j["version"] = std::string(ToolVersion());
  j["command"] = meta.command;
  j["input"] = {{"path", meta.input_path}, {"sha256", meta.input_sha256}};
  j["seed"] = meta.seed ? json(*meta.seed) : json(nullptr);
  j["prng"] = std::string(Rng::kAlgorithm);
  j["config"] = meta.config;
  return j;
}

json ToJson(const Rate& rate) {
  return {{"value", rate.value()}, {"errors", rate.errors},
          {"trials", rate.trials}};
}

json ToJson(const MetricResult& r) {
  return {{"metric", std::string(MetricName(r.metric))},
          {"alpha", r.alpha},
          {"threshold", Threshold(r.threshold)},
          {"computable", r.computable()},
          {"value", Optional(r.value)},
          {"fpd", Optional(r.fpd)},
          {"fnd", Optional(r.fnd)}};
}

json ToJson(const SweepCell& cell) {
  json j = ToJson(cell.result);
  j["fmr_target"] = cell.fmr_target;
  j["achieved_fmr"] = cell.achieved_fmr;
  j["target_reached"] = cell.target_reached;
  return j;
}

json ToJson(const FmrThreshold& t) {
  return {{"fmr_target", t.target},
          {"threshold", Threshold(t.threshold)},
          {"achieved_fmr", ToJson(t.achieved)},
          {"target_reached", t.reached()},
          {"closest_positive_fmr", t.closest_positive.value()}};
}

json ToJson(const RateTable& table) {
  json groups = json::array();
  for (const GroupRate& g : table.rates.groups) {
    groups.push_back({{"group", g.group},
                      {"threshold", Threshold(table.rates.threshold)},
                      {"fmr", ToJson(g.fmr)},
                      {"fnmr", ToJson(g.fnmr)}});
  }
  return {{"pooled_eer", table.pooled.eer},
          {"eer_threshold", Threshold(table.pooled.threshold)},
          {"groups", groups}};
}

json ToJson(const DistributionSummary& s) {
  json j = {{"min", s.min},       {"q1", s.q1},   {"median", s.median},
            {"q3", s.q3},         {"max", s.max}, {"count", s.count}};
  if (s.raw) j["raw"] = *s.raw;
  return j;
}

json ToJson(const ComponentSummary& s) {
  return {{"metric", std::string(MetricName(s.metric))},
          {"cells", s.cells},
          {"computable_cells", s.computable_cells},
          {"fpd", s.fpd ? ToJson(*s.fpd) : json(nullptr)},
          {"fnd", s.fnd ? ToJson(*s.fnd) : json(nullptr)}};
}

json ToJson(const FfmcReport& report) {
  json metrics = json::array();
  for (const FfmcMetricReport& m : report.metrics) {
    metrics.push_back(
        {{"metric", std::string(MetricName(m.metric))},
         {"ffmc1",
          {{"pass", m.ffmc1},
           {"fpd_median", Optional(m.fpd_median)},
           {"fnd_median", Optional(m.fnd_median)},
           {"scale_ratio", Optional(m.scale_ratio)}}},
         {"ffmc2",
          {{"pass", m.ffmc2},
           {"lower_bound", m.lower_bound},
           {"upper_bound", Optional(m.upper_bound)}}},
         {"ffmc3",
          {{"pass", m.ffmc3},
           {"cells", m.cells},
           {"computable_cells", m.computable_cells},
           {"computable_fraction", m.computable_fraction}}}});
  }
  return {{"scale_ratio_limit", report.config.scale_ratio_limit},
          {"metrics", metrics}};
}

json ToJson(std::span<const DetCurve> curves) {
  json out = json::array();
  for (const DetCurve& c : curves) {
    json points = json::array();
    for (const DetPoint& p : c.points) {
      json jp = {{"threshold", Threshold(p.threshold)},
                 {"fmr", p.fmr.value()},
                 {"fnmr", p.fnmr.value()}};
      if (!std::isfinite(p.threshold)) {
        jp["sentinel"] = p.threshold > 0 ? "+inf" : "-inf";
      }
      points.push_back(std::move(jp));
    }
    out.push_back({{"group", c.group}, {"points", points}});
  }
  return out;
}

json ToJson(std::span<const CurvePoint> points) {
  json out = json::array();
  for (const CurvePoint& p : points) {
    out.push_back({{"fmr_target", p.fmr_target},
                   {"achieved_fmr", p.achieved_fmr},
                   {"threshold", Threshold(p.threshold)},
                   {"garbe", p.garbe},
                   {"target_reached", p.target_reached}});
  }
  return out;
}

json ToJson(const SweepResult& sweep) {
  json metrics = json::array();
  for (Metric m : sweep.metrics) metrics.push_back(std::string(MetricName(m)));
  json resolved = json::array();
  for (const FmrThreshold& t : sweep.resolved) resolved.push_back(ToJson(t));
  json cells = json::array();
  for (const SweepCell& c : sweep.cells) cells.push_back(ToJson(c));
  return {{"grid",
           {{"fmr_targets", sweep.grid.fmr_targets},
            {"alphas", sweep.grid.alphas}}},
          {"metrics", metrics},
          {"resolved", resolved},
          {"unreachable_targets", sweep.unreachable_targets()},
          {"cells", cells}};
}

json MakeReport(const ReportMetadata& meta, std::string_view kind,
                json payload) {
  return {{"schema", std::string(kReportSchema)},
          {"kind", std::string(kind)},
          {"metadata", MetadataJson(meta)},
          {"result", std::move(payload)}};
}

void WriteMetricResultsCsv(std::ostream& out,
                           std::span<const SweepCell> cells) {
  out << "metric,threshold,fmr_target,achieved_fmr,target_reached,alpha,"
         "value,fpd,fnd,computable\n";
  for (const SweepCell& c : cells) {
    const MetricResult& r = c.result;
    out << MetricName(r.metric) << ',' << ThresholdField(r.threshold) << ','
        << FormatNumber(c.fmr_target) << ',' << FormatNumber(c.achieved_fmr)
        << ',' << (c.target_reached ? "true" : "false") << ','
        << FormatNumber(r.alpha) << ',' << Field(r.value) << ','
        << Field(r.fpd) << ',' << Field(r.fnd) << ','
        << (r.computable() ? "true" : "false") << '\n';
  }
}

void WriteSweepCsv(std::ostream& out, const SweepResult& sweep) {
  WriteMetricResultsCsv(out, sweep.cells);
}

void WriteRateTableCsv(std::ostream& out, const RateTable& table) {
  out << "group,threshold,fmr,fnmr,fmr_errors,nonmated,fnmr_errors,mated\n";
  for (const GroupRate& g : table.rates.groups) {
    out << g.group << ',' << ThresholdField(table.rates.threshold) << ','
        << FormatNumber(g.fmr.value()) << ',' << FormatNumber(g.fnmr.value())
        << ',' << g.fmr.errors << ',' << g.fmr.trials << ',' << g.fnmr.errors
        << ',' << g.fnmr.trials << '\n';
  }
}

void WriteDetCsv(std::ostream& out, std::span<const DetCurve> curves) {
  out << "group,threshold,fmr,fnmr\n";
  for (const DetCurve& c : curves) {
    for (const DetPoint& p : c.points) {
      out << c.group << ',' << ThresholdField(p.threshold) << ','
          << FormatNumber(p.fmr.value()) << ','
          << FormatNumber(p.fnmr.value()) << '\n';
    }
  }
}

void WriteCurveCsv(std::ostream& out, std::span<const CurvePoint> points) {
  out << "fmr_target,achieved_fmr,threshold,garbe,target_reached\n";
  for (const CurvePoint& p : points) {
    out << FormatNumber(p.fmr_target) << ',' << FormatNumber(p.achieved_fmr)
        << ',' << ThresholdField(p.threshold) << ',' << FormatNumber(p.garbe)
        << ',' << (p.target_reached ? "true" : "false") << '\n';
  }
}

void RenderRateTable(std::ostream& out, const RateTable& table, bool percent) {
  const auto show = [percent](const Rate& r) {
    return percent ? FormatPercent(r.value()) : FormatNumber(r.value());
  };
  std::size_t width = 5;
  for (const GroupRate& g : table.rates.groups) {
    width = std::max(width, g.group.size());
  }
  const char* unit = percent ? " (%)" : "";
  fmt::print(out, "{:<{}}  {:>24}  {:>24}\n", "group", width,
             fmt::format("FMR{}", unit), fmt::format("FNMR{}", unit));
  for (const GroupRate& g : table.rates.groups) {
    fmt::print(out, "{:<{}}  {:>24}  {:>24}\n", g.group, width, show(g.fmr),
               show(g.fnmr));
  }
  fmt::print(out, "pooled EER{}: {}  threshold: {}\n", unit,
             percent ? FormatPercent(table.pooled.eer)
                     : FormatNumber(table.pooled.eer),
             ThresholdField(table.pooled.threshold));
}

void RenderMetricResults(std::ostream& out, std::span<const SweepCell> cells) {
  fmt::print(out, "{:<6} {:>24} {:>24} {:>8} {:>24} {:>24} {:>24}\n", "metric",
             "threshold", "achieved_fmr", "alpha", "value", "fpd", "fnd");
  const auto show = [](const std::optional<double>& v) {
    return v ? FormatNumber(*v) : std::string("not-computable");
  };
  for (const SweepCell& c : cells) {
    const MetricResult& r = c.result;
    fmt::print(out, "{:<6} {:>24} {:>24} {:>8} {:>24} {:>24} {:>24}\n",
               MetricName(r.metric), ThresholdField(r.threshold),
               FormatNumber(c.achieved_fmr), FormatNumber(r.alpha),
               show(r.value), show(r.fpd), show(r.fnd));
  }
}

void RenderFfmc(std::ostream& out, const FfmcReport& report) {
  const auto mark = [](bool pass) { return pass ? "pass" : "fail"; };
  fmt::print(out, "{:<8}", "FFMC");
  for (const auto& m : report.metrics) fmt::print(out, " {:>8}", MetricName(m.metric));
  out << '\n';
  const auto row = [&](const char* name, auto pick) {
    fmt::print(out, "{:<8}", name);
    for (const auto& m : report.metrics) fmt::print(out, " {:>8}", mark(pick(m)));
    out << '\n';
  };
  row("FFMC.1", [](const FfmcMetricReport& m) { return m.ffmc1; });
  row("FFMC.2", [](const FfmcMetricReport& m) { return m.ffmc2; });
  row("FFMC.3", [](const FfmcMetricReport& m) { return m.ffmc3; });
  out << '\n';
  for (const auto& m : report.metrics) {
    const auto opt = [](const std::optional<double>& v) {
      return v ? FormatNumber(*v) : std::string("n/a");
    };
    fmt::print(out,
               "{}: median FPD {} median FND {} scale ratio {} (limit {}); "
               "range [{}, {}]; computable {}/{} ({})\n",
               MetricName(m.metric), opt(m.fpd_median), opt(m.fnd_median),
               opt(m.scale_ratio),
               FormatNumber(report.config.scale_ratio_limit),
               FormatNumber(m.lower_bound),
               m.upper_bound ? FormatNumber(*m.upper_bound) : "inf",
               m.computable_cells, m.cells,
               FormatNumber(m.computable_fraction));
  }
}

void RenderComponentSummaries(std::ostream& out,
                              std::span<const ComponentSummary> summaries) {
  fmt::print(out, "{:<6} {:<4} {:>14} {:>14} {:>14} {:>14} {:>14} {:>8}\n",
             "metric", "term", "min", "q1", "median", "q3", "max", "count");
  for (const ComponentSummary& s : summaries) {
    const auto line = [&](const char* term,
                          const std::optional<DistributionSummary>& d) {
      if (!d) {
        fmt::print(out, "{:<6} {:<4} {:>14}\n", MetricName(s.metric), term,
                   "not-computable");
        return;
      }
      fmt::print(out, "{:<6} {:<4} {:>14} {:>14} {:>14} {:>14} {:>14} {:>8}\n",
                 MetricName(s.metric), term, FormatNumber(d->min),
                 FormatNumber(d->q1), FormatNumber(d->median),
                 FormatNumber(d->q3), FormatNumber(d->max), d->count);
    };
    line("FPD", s.fpd);
    line("FND", s.fnd);
  }
}

}  // namespace fairmetrics
