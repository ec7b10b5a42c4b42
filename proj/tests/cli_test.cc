#include "fairmetrics/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fairmetrics/report.h"
#include "fixtures.h"

namespace fairmetrics {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(fs::temp_directory_path() /
                        ("fairmetrics_cli_test_" + std::to_string(::getpid())));
    fs::create_directories(*dir_);
    std::ofstream regime(*dir_ / "regime.csv");
    WriteScores(regime, fixtures::MixedRegimeTrials());
    std::ofstream small(*dir_ / "small.csv");
    small << "group,label,score\n"
             "A,mated,0.9\nA,nonmated,0.1\nA,mated,0.7\nA,nonmated,0.3\n"
             "B,mated,0.8\nB,nonmated,0.2\nB,mated,0.4\nB,nonmated,0.6\n";
    std::ofstream bad(*dir_ / "bad.csv");
    bad << "A,mated,0.9\nA,nonmated,abc\n";
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete dir_;
  }
  static std::string Path(const std::string& name) {
    return (*dir_ / name).string();
  }
  static fs::path* dir_;
};

fs::path* CliTest::dir_ = nullptr;

TEST_F(CliTest, EvalSingleCellTable) {
  const CliRun r = Cli({"eval", "--scores", Path("regime.csv"), "--metric", "garbe",
                     "--alpha", "0.5", "--fmr", "0.001"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string header, row, extra;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_NE(header.find("metric"), std::string::npos);
  EXPECT_EQ(row.rfind("GARBE", 0), 0u);
  EXPECT_FALSE(std::getline(lines, extra));
}

TEST_F(CliTest, EvalJsonMatchesTableNumbers) {
  const std::vector<std::string> base = {"eval", "--scores", Path("regime.csv"),
                                         "--metrics", "fdr,ir,garbe"};
  auto json_args = base;
  json_args.insert(json_args.end(), {"--format", "json"});
  const CliRun j = Cli(json_args);
  const CliRun t = Cli(base);
  ASSERT_EQ(j.code, kExitOk) << j.err;
  const json report = json::parse(j.out);
  ASSERT_EQ(report["result"].size(), 3u);
  for (const json& cell : report["result"]) {
    if (cell["computable"].get<bool>()) {
      const std::string v = FormatNumber(cell["value"].get<double>());
      EXPECT_NE(t.out.find(v), std::string::npos) << v;
    }
  }
}

TEST_F(CliTest, FullSweepReport) {
  const CliRun r = Cli({"sweep", "--scores", Path("regime.csv"), "--metrics",
                     "fdr,ir,garbe", "--fmr-range", "0.001:0.1:50log",
                     "--alpha-range", "0:1:101", "--out", Path("report.json"),
                     "--seed", "17"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const json report = json::parse(Slurp(*dir_ / "report.json"));
  EXPECT_EQ(report["schema"], std::string(kReportSchema));
  EXPECT_EQ(report["result"]["cells"].size(), 15150u);
  const json& meta = report["metadata"];
  EXPECT_EQ(meta["version"], std::string(ToolVersion()));
  EXPECT_EQ(meta["seed"], 17);
  EXPECT_EQ(meta["input"]["sha256"], Sha256Hex(Slurp(*dir_ / "regime.csv")));
  EXPECT_EQ(meta["config"]["alphas"].size(), 101u);
  EXPECT_EQ(meta["config"]["fmr_targets"].size(), 50u);
  EXPECT_EQ(meta["config"]["polarity"], "similarity");
  std::size_t ir_missing = 0;
  for (const json& c : report["result"]["cells"]) {
    ir_missing += c["metric"] == "IR" && !c["computable"].get<bool>();
  }
  EXPECT_GT(ir_missing, 0u);
  EXPECT_TRUE(report["result"].contains("component_summaries"));
  EXPECT_EQ(report["result"]["garbe_curve"]["points"].size(), 50u);
}

TEST_F(CliTest, SweepCsvHasOneLinePerCell) {
  const CliRun r = Cli({"sweep", "--scores", Path("regime.csv"), "--fmr-range",
                     "0.001:0.1:4log", "--alpha-range", "0:1:3", "--format",
                     "csv"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::size_t n = 0;
  for (std::string line; std::getline(lines, line);) ++n;
  EXPECT_EQ(n, 1u + 12u);
}

TEST_F(CliTest, FfmcShowsCriteriaPattern) {
  const CliRun r = Cli({"ffmc", "--scores", Path("regime.csv"), "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json report = json::parse(r.out);
  const json& m = report["result"]["metrics"];
  ASSERT_EQ(m.size(), 3u);
  const auto pass = [&](int i, const char* key) {
    return m[i][key]["pass"].get<bool>();
  };
  EXPECT_EQ(m[0]["metric"], "FDR");
  EXPECT_FALSE(pass(0, "ffmc1"));
  EXPECT_TRUE(pass(0, "ffmc2"));
  EXPECT_TRUE(pass(0, "ffmc3"));
  EXPECT_EQ(m[1]["metric"], "IR");
  EXPECT_TRUE(pass(1, "ffmc1"));
  EXPECT_FALSE(pass(1, "ffmc2"));
  EXPECT_FALSE(pass(1, "ffmc3"));
  EXPECT_EQ(m[2]["metric"], "GARBE");
  EXPECT_TRUE(pass(2, "ffmc1"));
  EXPECT_TRUE(pass(2, "ffmc2"));
  EXPECT_TRUE(pass(2, "ffmc3"));

  const CliRun text = Cli({"ffmc", "--scores", Path("regime.csv")});
  EXPECT_NE(text.out.find("FFMC.1"), std::string::npos);
}

TEST_F(CliTest, RatesTableAndPercent) {
  const CliRun r = Cli({"rates", "--scores", Path("small.csv"), "--percent"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("FMR (%)"), std::string::npos);
  EXPECT_NE(r.out.find("pooled EER"), std::string::npos);
  const CliRun csv = Cli({"rates", "--scores", Path("small.csv"), "--format", "csv",
                       "--threshold", "0.5"});
  ASSERT_EQ(csv.code, kExitOk) << csv.err;
  EXPECT_NE(csv.out.find("A,0.5,0,0,0,2,0,2"), std::string::npos) << csv.out;
  EXPECT_NE(csv.out.find("B,0.5,0.5,0.5,1,2,1,2"), std::string::npos) << csv.out;
}

TEST_F(CliTest, DetJson) {
  const CliRun r = Cli({"det", "--scores", Path("small.csv"), "--scope", "group",
                     "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json report = json::parse(r.out);
  ASSERT_EQ(report["result"].size(), 2u);
  EXPECT_EQ(report["result"][0]["points"].size(), 6u);
}

TEST_F(CliTest, ValidationErrorsExitOneWithSingleLine) {
  const std::vector<std::vector<std::string>> cases = {
      {"eval", "--scores", Path("regime.csv"), "--alpha", "1.5"},
      {"eval", "--scores", Path("regime.csv"), "--metric", "auc"},
      {"eval", "--scores", Path("regime.csv"), "--bogus"},
      {"eval", "--scores", Path("missing.csv")},
      {"eval"},
      {"eval", "--scores", Path("bad.csv")},
      {"eval", "--scores", Path("small.csv"), "--distance", "--polarity",
       "similarity"},
      {"sweep", "--scores", Path("small.csv"), "--alpha-range", "1:0:3"},
      {"sweep", "--scores", Path("small.csv"), "--fmr-range", "0.1:x:3"},
      {"det", "--scores", Path("small.csv"), "--scope", "both"},
      {},
  };
  for (const auto& args : cases) {
    const CliRun r = Cli(args);
    EXPECT_EQ(r.code, kExitInvalid) << (args.empty() ? "" : args[0]);
    ASSERT_FALSE(r.err.empty());
    EXPECT_EQ(r.err.find('\n'), r.err.size() - 1) << r.err;
  }
  const CliRun bad = Cli({"eval", "--scores", Path("bad.csv")});
  EXPECT_NE(bad.err.find("line 2"), std::string::npos) << bad.err;
}

TEST_F(CliTest, DistanceFlagFlipsPolarity) {
  const CliRun sim = Cli({"rates", "--scores", Path("small.csv"), "--format", "json"});
  const CliRun dist = Cli({"rates", "--scores", Path("small.csv"), "--distance",
                        "--format", "json"});
  const CliRun both = Cli({"rates", "--scores", Path("small.csv"), "--distance",
                        "--polarity", "distance", "--format", "json"});
  ASSERT_EQ(dist.code, kExitOk) << dist.err;
  ASSERT_EQ(both.code, kExitOk) << both.err;
  EXPECT_EQ(json::parse(dist.out)["metadata"]["config"]["polarity"], "distance");
  EXPECT_NE(json::parse(sim.out)["result"]["pooled_eer"],
            json::parse(dist.out)["result"]["pooled_eer"]);
}

TEST_F(CliTest, UnreachableTargetExitsDegradedWithOutput) {
  const CliRun r = Cli({"eval", "--scores", Path("small.csv"), "--fmr", "0.001",
                     "--format", "json"});
  EXPECT_EQ(r.code, kExitDegraded);
  const json report = json::parse(r.out);
  EXPECT_FALSE(report["result"][0]["target_reached"].get<bool>());
  const CliRun sweep = Cli({"sweep", "--scores", Path("small.csv"), "--fmr-range",
                         "0.001:0.5:3log", "--alpha-range", "0:1:3"});
  EXPECT_EQ(sweep.code, kExitDegraded);
  EXPECT_FALSE(sweep.out.empty());
}

TEST_F(CliTest, AllNotComputableExitsDegraded) {
  // Group A has FMR 0 and group B a positive FMR at the chosen threshold.
  const CliRun r = Cli({"eval", "--scores", Path("small.csv"), "--metric", "ir",
                     "--threshold", "0.5", "--alpha", "0.5"});
  EXPECT_EQ(r.code, kExitDegraded);
  EXPECT_NE(r.out.find("not-computable"), std::string::npos);
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  const fs::path out_dir = *dir_ / "envout";
  ::setenv(kOutputDirEnv, out_dir.c_str(), 1);
  const CliRun r = Cli({"rates", "--scores", Path("small.csv"), "--format", "json",
                     "--out", "nested/rates.json"});
  ::unsetenv(kOutputDirEnv);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  const json report = json::parse(Slurp(out_dir / "nested" / "rates.json"));
  EXPECT_EQ(report["kind"], "rates");
}

TEST_F(CliTest, ProtocolAndSynthAreDeterministic) {
  const std::vector<std::string> protocol = {
      "protocol", "--groups", "A,B", "--speakers", "8", "--utterances", "24",
      "--nonmated", "2208", "--seed", "3"};
  const CliRun p1 = Cli(protocol);
  const CliRun p2 = Cli(protocol);
  ASSERT_EQ(p1.code, kExitOk) << p1.err;
  EXPECT_EQ(p1.out, p2.out);
  std::size_t mated = 0, nonmated = 0;
  std::istringstream lines(p1.out);
  for (std::string line; std::getline(lines, line);) {
    if (line.find(",mated,") != std::string::npos) ++mated;
    if (line.find(",nonmated,") != std::string::npos) ++nonmated;
  }
  EXPECT_EQ(mated, 2u * 2208u);
  EXPECT_EQ(nonmated, 2u * 2208u);

  const std::vector<std::string> synth = {
      "synth", "--group", "A:2:1:0:1:100:200", "--group", "B:1:1:0:1:50:60:0",
      "--seed", "9", "--out", Path("synth.csv")};
  ASSERT_EQ(Cli(synth).code, kExitOk);
  const std::string first = Slurp(*dir_ / "synth.csv");
  ASSERT_EQ(Cli(synth).code, kExitOk);
  EXPECT_EQ(first, Slurp(*dir_ / "synth.csv"));
  EXPECT_NE(first.find("# seed: 9"), std::string::npos);
  const CliRun rates = Cli({"rates", "--scores", Path("synth.csv")});
  EXPECT_EQ(rates.code, kExitOk) << rates.err;
}

TEST_F(CliTest, HelpAndVersion) {
  EXPECT_EQ(Cli({"--help"}).code, kExitOk);
  const CliRun v = Cli({"--version"});
  EXPECT_EQ(v.code, kExitOk);
  EXPECT_NE(v.out.find(std::string(ToolVersion())), std::string::npos);
}

}  // namespace
}  // namespace fairmetrics
