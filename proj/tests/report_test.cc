#include "fairmetrics/report.h"

#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "fairmetrics/rng.h"
#include "fixtures.h"

namespace fairmetrics {
namespace {

using nlohmann::json;

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(FormatTest, ShortestRoundTrip) {
  EXPECT_EQ(FormatNumber(0.1), "0.1");
  EXPECT_EQ(FormatNumber(1.0), "1");
  EXPECT_EQ(std::stod(FormatNumber(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(FormatNumber(0.0213), "0.0213");
}

TEST(FormatTest, PercentDisplay) {
  EXPECT_EQ(FormatPercent(0.0122), "1.22");
  EXPECT_EQ(FormatPercent(0.0), "0.00");
  EXPECT_EQ(FormatPercent(1.0), "100.00");
  EXPECT_EQ(FormatPercent(0.1234), "12.34");
}

TEST(Sha256Test, KnownDigests) {
  EXPECT_EQ(Sha256Hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(JsonTest, NotComputableIsNullWithFlag) {
  MetricResult r;
  r.metric = Metric::kIr;
  r.alpha = 0.5;
  r.threshold = 1.25;
  r.fnd = 2.0;
  const json j = ToJson(r);
  EXPECT_EQ(j["metric"], "IR");
  EXPECT_FALSE(j["computable"].get<bool>());
  EXPECT_TRUE(j["value"].is_null());
  EXPECT_TRUE(j["fpd"].is_null());
  EXPECT_EQ(j["fnd"].get<double>(), 2.0);
  EXPECT_EQ(j.dump().find("NaN"), std::string::npos);
}

TEST(JsonTest, SweepReportHasStableFieldsAndNoNonFiniteNumbers) {
  const TrialSet trials = fixtures::MixedRegimeTrials();
  const Metric metrics[] = {Metric::kFdr, Metric::kIr, Metric::kGarbe};
  const SweepResult sweep =
      RunSweep(trials, {LogSpaced(0.001, 0.1, 5), LinSpaced(0, 1, 3)}, metrics);
  ReportMetadata meta{"sweep", "s.csv", Sha256Hex("x"), 7, {{"k", 1}}};
  const json report = MakeReport(meta, "sweep", ToJson(sweep));
  EXPECT_EQ(report["schema"], "fairmetrics.report/1");
  EXPECT_EQ(report["kind"], "sweep");
  EXPECT_EQ(report["metadata"]["tool"], "fairmetrics");
  EXPECT_EQ(report["metadata"]["version"], std::string(ToolVersion()));
  EXPECT_EQ(report["metadata"]["seed"], 7);
  EXPECT_EQ(report["metadata"]["input"]["sha256"], Sha256Hex("x"));
  EXPECT_EQ(report["metadata"]["prng"], std::string(Rng::kAlgorithm));
  const json& cells = report["result"]["cells"];
  ASSERT_EQ(cells.size(), 45u);
  for (const json& c : cells) {
    for (const char* key : {"metric", "threshold", "fmr_target", "achieved_fmr",
                            "alpha", "value", "fpd", "fnd", "computable",
                            "target_reached"}) {
      EXPECT_TRUE(c.contains(key)) << key;
    }
    EXPECT_EQ(c["value"].is_null(), !c["computable"].get<bool>());
  }
  const std::string text = report.dump();
  EXPECT_EQ(text.find("NaN"), std::string::npos);
  EXPECT_EQ(text.find("Infinity"), std::string::npos);
  EXPECT_EQ(json::parse(text), report);
}

TEST(JsonTest, DetSentinelsAreMarked) {
  const TrialSet trials = TrialSet::FromRecords(
      {{"A", Label::kMated, 0.8, {}, {}}, {"A", Label::kNonmated, 0.2, {}, {}}});
  const auto curves = DetPoints(trials, Scope::kPooled);
  const json j = ToJson(std::span<const DetCurve>(curves));
  EXPECT_TRUE(j[0]["points"][0]["threshold"].is_null());
  EXPECT_EQ(j[0]["points"][0]["sentinel"], "-inf");
  EXPECT_EQ(j[0]["points"][3]["sentinel"], "+inf");
  EXPECT_FALSE(j[0]["points"][1].contains("sentinel"));
}

TEST(CsvTest, MetricResultsLeaveNotComputableFieldsEmpty) {
  SweepCell ok;
  ok.result = {Metric::kGarbe, 0.25, 0.5, 0.0, 0.5, 1.5};
  ok.fmr_target = 0.01;
  ok.achieved_fmr = 0.0095;
  SweepCell bad;
  bad.result = {Metric::kIr, std::nullopt, std::nullopt, 2.0, 0.5, 1.5};
  bad.fmr_target = 0.001;
  bad.target_reached = false;
  const std::vector<SweepCell> cells{ok, bad};
  std::ostringstream out;
  WriteMetricResultsCsv(out, cells);
  const auto lines = Lines(out.str());
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0],
            "metric,threshold,fmr_target,achieved_fmr,target_reached,alpha,"
            "value,fpd,fnd,computable");
  EXPECT_EQ(lines[1], "GARBE,1.5,0.01,0.0095,true,0.5,0.25,0.5,0,true");
  EXPECT_EQ(lines[2], "IR,1.5,0.001,0,false,0.5,,,2,false");
}

TEST(CsvTest, RateTableAndDet) {
  RateTable table;
  table.pooled = {0.05, 0.75};
  table.rates = fixtures::MakeRates({{Rate{1, 10}, Rate{2, 10}},
                                     {Rate{0, 5}, Rate{1, 4}}},
                                    0.75);
  std::ostringstream out;
  WriteRateTableCsv(out, table);
  const auto lines = Lines(out.str());
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[1], "g0,0.75,0.1,0.2,1,10,2,10");
  EXPECT_EQ(lines[2], "g1,0.75,0,0.25,0,5,1,4");

  const TrialSet trials = TrialSet::FromRecords(
      {{"A", Label::kMated, 0.8, {}, {}}, {"A", Label::kNonmated, 0.2, {}, {}}});
  const auto curves = DetPoints(trials, Scope::kPooled);
  std::ostringstream det;
  WriteDetCsv(det, curves);
  const auto det_lines = Lines(det.str());
  ASSERT_EQ(det_lines.size(), 5u);
  EXPECT_EQ(det_lines[1], "pooled,-inf,1,0");
  EXPECT_EQ(det_lines[4], "pooled,inf,0,1");
}

TEST(TextTest, TableShowsSameNumbersAsJson) {
  const RateTable table = GroupRateTable(fixtures::MixedRegimeTrials());
  std::ostringstream text;
  RenderRateTable(text, table, false);
  const json j = ToJson(table);
  for (const json& g : j["groups"]) {
    const std::string fmr = FormatNumber(g["fmr"]["value"].get<double>());
    EXPECT_NE(text.str().find(fmr), std::string::npos) << fmr;
  }
  std::ostringstream percent;
  RenderRateTable(percent, table, true);
  EXPECT_NE(percent.str().find("FMR (%)"), std::string::npos);
}

}  // namespace
}  // namespace fairmetrics
