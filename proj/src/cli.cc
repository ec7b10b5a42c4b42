#include "fairmetrics/cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "fairmetrics/error.h"
#include "fairmetrics/metrics.h"
#include "fairmetrics/rates.h"
#include "fairmetrics/report.h"
#include "fairmetrics/sweep.h"
#include "fairmetrics/trial_io.h"

namespace fairmetrics {

namespace {

using nlohmann::json;

enum class Format { kTable, kJson, kCsv };

struct RunConfig {
  std::string command;
  std::string scores_path;
  std::string roster_path;
  std::string polarity = "similarity";
  bool distance = false;
  std::string format = "table";
  std::string out_path;
  bool percent = false;
  std::uint64_t seed = 0;

  std::optional<double> threshold;
  std::optional<double> fmr;
  double alpha = 0.5;
  std::string metrics = "garbe";
  std::string fmr_range = "0.001:0.1:50log";
  std::string alpha_range = "0:1:101";
  double curve_alpha = 0.5;
  double scale_ratio_limit = 10.0;
  unsigned threads = 0;
  std::string scope = "pooled";

  std::vector<std::string> groups;
  std::size_t speakers = 8;
  std::size_t utterances = 24;
  std::size_t nonmated = 2208;
  std::vector<std::string> synth_groups;
};

Format FormatOf(const std::string& name) {
  if (name == "json") return Format::kJson;
  if (name == "csv") return Format::kCsv;
  return Format::kTable;
}

double ParseNumber(const std::string& token, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != token.size()) {
    throw InvalidArgument(fmt::format("bad number '{}' in {}", token, what));
  }
  return value;
}

// "v", "lo:hi:N" (linear) or "lo:hi:Nlog" (geometric).
std::vector<double> ParseRange(const std::string& spec, const std::string& what) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() == 1) return {ParseNumber(parts[0], what)};
  if (parts.size() != 3) {
    throw InvalidArgument(fmt::format("{} must be 'v' or 'lo:hi:N[log]'", what));
  }
  const double lo = ParseNumber(parts[0], what);
  const double hi = ParseNumber(parts[1], what);
  std::string count = parts[2];
  bool log = false;
  if (count.size() > 3 && count.ends_with("log")) {
    log = true;
    count.resize(count.size() - 3);
  }
  const double n = ParseNumber(count, what);
  if (n < 1 || n != static_cast<double>(static_cast<std::size_t>(n))) {
    throw InvalidArgument(fmt::format("{} point count must be a positive integer",
                                      what));
  }
  const auto points = static_cast<std::size_t>(n);
  return log ? LogSpaced(lo, hi, points) : LinSpaced(lo, hi, points);
}

std::vector<Metric> ParseMetrics(const std::string& list) {
  std::vector<Metric> out;
  std::stringstream ss(list);
  for (std::string token; std::getline(ss, token, ',');) {
    const auto metric = ParseMetric(token);
    if (!metric) throw InvalidArgument("unknown metric '" + token + "'");
    out.push_back(*metric);
  }
  if (out.empty()) throw InvalidArgument("no metrics given");
  return out;
}

SyntheticGroup ParseSyntheticGroup(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 7 && parts.size() != 8) {
    throw InvalidArgument(
        "--group expects name:mated_mean:mated_sigma:nonmated_mean:"
        "nonmated_sigma:mated_count:nonmated_count[:seed_offset]");
  }
  const auto count = [&](const std::string& token) {
    const double v = ParseNumber(token, "--group");
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw InvalidArgument("--group counts must be non-negative integers");
    }
    return static_cast<std::size_t>(v);
  };
  SyntheticGroup g;
  g.name = parts[0];
  g.mated_mean = ParseNumber(parts[1], "--group");
  g.mated_sigma = ParseNumber(parts[2], "--group");
  g.nonmated_mean = ParseNumber(parts[3], "--group");
  g.nonmated_sigma = ParseNumber(parts[4], "--group");
  g.mated_count = count(parts[5]);
  g.nonmated_count = count(parts[6]);
  if (parts.size() == 8) g.seed_offset = count(parts[7]);
  return g;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open input '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::filesystem::path ResolveOutput(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
      p = std::filesystem::path(dir) / p;
    }
  }
  return p;
}

class Session {
 public:
  Session(const RunConfig& config, std::ostream& out)
      : config_(config), out_(out) {}

  int Run() {
    const std::string& c = config_.command;
    if (c == "protocol") return Protocol();
    if (c == "synth") return Synth();
    LoadScores();
    if (c == "rates") return Rates();
    if (c == "eval") return Eval();
    if (c == "sweep") return SweepCommand();
    if (c == "ffmc") return Ffmc();
    if (c == "det") return Det();
    throw InvalidArgument("unknown command '" + c + "'");
  }

 private:
  Polarity ResolvePolarity() const {
    const auto polarity = ParsePolarity(config_.polarity);
    if (!polarity) {
      throw InvalidArgument("--polarity must be similarity or distance");
    }
    if (config_.distance && *polarity == Polarity::kSimilarity &&
        polarity_given_) {
      throw InvalidArgument("conflicting polarity: --distance with "
                            "--polarity similarity");
    }
    return config_.distance ? Polarity::kDistance : *polarity;
  }

  void LoadScores() {
    if (config_.scores_path.empty()) {
      throw InvalidArgument("--scores is required for '" + config_.command + "'");
    }
    const std::string bytes = ReadFile(config_.scores_path);
    meta_.input_path = config_.scores_path;
    meta_.input_sha256 = Sha256Hex(bytes);
    trials_.emplace(ParseScores(std::string_view(bytes), ResolvePolarity()));
  }

  json BaseConfig() const {
    return {{"command", config_.command},
            {"scores", config_.scores_path},
            {"polarity", std::string(PolarityName(ResolvePolarity()))},
            {"format", config_.format},
            {"percent", config_.percent},
            {"seed", config_.seed}};
  }

  SweepGrid GridFromConfig() const {
    SweepGrid grid{ParseRange(config_.fmr_range, "--fmr-range"),
                   ParseRange(config_.alpha_range, "--alpha-range")};
    grid.Validate();
    return grid;
  }

  // Writes to --out (or stdout); text formats are emitted as given.
  void Emit(const std::string& kind, const json& payload,
            const std::function<void(std::ostream&)>& table,
            const std::function<void(std::ostream&)>& csv) {
    std::ofstream file;
    std::ostream* sink = &out_;
    if (!config_.out_path.empty()) {
      const auto path = ResolveOutput(config_.out_path);
      if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
      }
      file.open(path, std::ios::binary);
      if (!file) throw InvalidArgument("cannot write '" + path.string() + "'");
      sink = &file;
    }
    meta_.command = config_.command;
    meta_.seed = config_.seed;
    switch (FormatOf(config_.format)) {
      case Format::kJson:
        *sink << MakeReport(meta_, kind, payload).dump(2) << '\n';
        break;
      case Format::kCsv:
        csv(*sink);
        break;
      case Format::kTable:
        table(*sink);
        break;
    }
    if (file.is_open() && !file) throw Error("write failed");
  }

  int Rates() {
    meta_.config = BaseConfig();
    RateEvaluator evaluator(*trials_);
    RateTable table = evaluator.GroupRateTable();
    if (config_.threshold) {
      table.rates = evaluator.RatesAt(*config_.threshold, Scope::kPerGroup);
      meta_.config["threshold"] = *config_.threshold;
    }
    Emit("rates", ToJson(table),
         [&](std::ostream& o) { RenderRateTable(o, table, config_.percent); },
         [&](std::ostream& o) { WriteRateTableCsv(o, table); });
    return kExitOk;
  }

  int Eval() {
    const std::vector<Metric> metrics = ParseMetrics(config_.metrics);
    ValidateAlpha(config_.alpha);
    if (config_.fmr && config_.threshold) {
      throw InvalidArgument("give either --fmr or --threshold, not both");
    }
    meta_.config = BaseConfig();
    meta_.config["metrics"] = config_.metrics;
    meta_.config["alpha"] = config_.alpha;

    RateEvaluator evaluator(*trials_);
    FmrThreshold resolved;
    bool reached = true;
    double threshold = 0.0;
    if (config_.threshold) {
      threshold = *config_.threshold;
      meta_.config["threshold"] = threshold;
    } else {
      const double target = config_.fmr.value_or(0.001);
      meta_.config["fmr"] = target;
      resolved = evaluator.ThresholdForFmr(target);
      reached = resolved.reached();
      threshold = resolved.threshold;
    }
    const GroupRates rates = evaluator.RatesAt(threshold, Scope::kPerGroup);
    const double achieved =
        evaluator.RatesAt(threshold, Scope::kPooled).groups.front().fmr.value();
    std::vector<SweepCell> cells;
    for (Metric m : metrics) {
      cells.push_back({Evaluate(m, rates, config_.alpha),
                       config_.threshold ? achieved : resolved.target, achieved,
                       reached});
    }
    json payload = json::array();
    for (const SweepCell& cell : cells) payload.push_back(ToJson(cell));
    Emit("eval", payload,
         [&](std::ostream& o) { RenderMetricResults(o, cells); },
         [&](std::ostream& o) { WriteMetricResultsCsv(o, cells); });
    const bool any_computable = std::any_of(
        cells.begin(), cells.end(),
        [](const SweepCell& c) { return c.result.computable(); });
    return reached && any_computable ? kExitOk : kExitDegraded;
  }

  // Degraded when a target is unreachable or a metric has no computable cell.
  static bool Degraded(const SweepResult& sweep) {
    if (sweep.unreachable_targets() > 0) return true;
    for (Metric m : sweep.metrics) {
      const auto cells = sweep.CellsFor(m);
      if (std::none_of(cells.begin(), cells.end(), [](const SweepCell& c) {
            return c.result.computable();
          })) {
        return true;
      }
    }
    return false;
  }

  json SweepConfig(const SweepGrid& grid) const {
    json j = BaseConfig();
    j["metrics"] = config_.metrics;
    j["fmr_range"] = config_.fmr_range;
    j["alpha_range"] = config_.alpha_range;
    j["fmr_targets"] = grid.fmr_targets;
    j["alphas"] = grid.alphas;
    j["threads"] = config_.threads;
    return j;
  }

  int SweepCommand() {
    const std::vector<Metric> metrics = ParseMetrics(config_.metrics);
    const SweepGrid grid = GridFromConfig();
    ValidateAlpha(config_.curve_alpha);
    meta_.config = SweepConfig(grid);
    meta_.config["curve_alpha"] = config_.curve_alpha;

    const SweepResult sweep =
        RunSweep(*trials_, grid, metrics, SweepOptions{config_.threads});
    json payload = ToJson(sweep);
    std::vector<ComponentSummary> summaries;
    try {
      summaries = SummarizeComponents(sweep.cells);
    } catch (const Error&) {
      // all cells not computable; the report still carries every cell
    }
    json summary_json = json::array();
    for (const auto& s : summaries) summary_json.push_back(ToJson(s));
    payload["component_summaries"] = summary_json;
    if (std::find(metrics.begin(), metrics.end(), Metric::kGarbe) !=
        metrics.end()) {
      const auto curve =
          GarbeCurveData(*trials_, grid.fmr_targets, config_.curve_alpha);
      payload["garbe_curve"] = {{"alpha", config_.curve_alpha},
                                {"points", ToJson(curve)}};
    }
    Emit("sweep", payload,
         [&](std::ostream& o) {
           RenderComponentSummaries(o, summaries);
           o << '\n';
           RenderMetricResults(o, sweep.cells);
         },
         [&](std::ostream& o) { WriteSweepCsv(o, sweep); });
    return Degraded(sweep) ? kExitDegraded : kExitOk;
  }

  int Ffmc() {
    const std::string requested =
        metrics_given_ ? config_.metrics : std::string("fdr,ir,garbe");
    const std::vector<Metric> metrics = ParseMetrics(requested);
    const SweepGrid grid = GridFromConfig();
    meta_.config = SweepConfig(grid);
    meta_.config["metrics"] = requested;
    meta_.config["scale_ratio_limit"] = config_.scale_ratio_limit;

    const SweepResult sweep =
        RunSweep(*trials_, grid, metrics, SweepOptions{config_.threads});
    const FfmcReport report = BuildFfmcReport(
        sweep.cells, FfmcConfig{config_.scale_ratio_limit});
    json payload = ToJson(report);
    payload["unreachable_targets"] = sweep.unreachable_targets();
    Emit("ffmc", payload, [&](std::ostream& o) { RenderFfmc(o, report); },
         [&](std::ostream& o) {
           o << "metric,ffmc1,ffmc2,ffmc3,fpd_median,fnd_median,scale_ratio,"
                "computable_fraction\n";
           for (const auto& m : report.metrics) {
             const auto opt = [](const std::optional<double>& v) {
               return v ? FormatNumber(*v) : std::string();
             };
             o << MetricName(m.metric) << ',' << (m.ffmc1 ? "pass" : "fail")
               << ',' << (m.ffmc2 ? "pass" : "fail") << ','
               << (m.ffmc3 ? "pass" : "fail") << ',' << opt(m.fpd_median)
               << ',' << opt(m.fnd_median) << ',' << opt(m.scale_ratio) << ','
               << FormatNumber(m.computable_fraction) << '\n';
           }
         });
    return sweep.unreachable_targets() > 0 ? kExitDegraded : kExitOk;
  }

  int Det() {
    Scope scope;
    if (config_.scope == "pooled") {
      scope = Scope::kPooled;
    } else if (config_.scope == "group") {
      scope = Scope::kPerGroup;
    } else {
      throw InvalidArgument("--scope must be pooled or group");
    }
    meta_.config = BaseConfig();
    meta_.config["scope"] = config_.scope;
    const auto curves = DetPoints(*trials_, scope);
    Emit("det", ToJson(curves),
         [&](std::ostream& o) { WriteDetCsv(o, curves); },
         [&](std::ostream& o) { WriteDetCsv(o, curves); });
    return kExitOk;
  }

  int Protocol() {
    ProtocolSpec spec;
    spec.speakers_per_group = config_.speakers;
    spec.utterances_per_speaker = config_.utterances;
    spec.nonmated_per_group = config_.nonmated;
    spec.seed = config_.seed;
    Roster roster;
    if (!config_.roster_path.empty()) {
      const std::string bytes = ReadFile(config_.roster_path);
      std::istringstream in(bytes);
      roster = ParseRoster(in);
      spec.groups = config_.groups;
      if (spec.groups.empty()) {
        for (const auto& [group, speakers] : roster) spec.groups.push_back(group);
      }
      meta_.input_path = config_.roster_path;
      meta_.input_sha256 = Sha256Hex(bytes);
    } else {
      if (config_.groups.empty()) {
        throw InvalidArgument("protocol needs --roster or --groups");
      }
      spec.groups = config_.groups;
      spec.Validate();
      roster = MakeSyntheticRoster(spec);
    }
    const auto trials = GenerateProtocol(spec, roster);
    std::ostringstream body;
    WriteProtocol(body, spec, trials);
    EmitText(body.str());
    return kExitOk;
  }

  int Synth() {
    if (config_.synth_groups.empty()) {
      throw InvalidArgument("synth needs at least one --group");
    }
    std::vector<SyntheticGroup> groups;
    for (const auto& g : config_.synth_groups) {
      groups.push_back(ParseSyntheticGroup(g));
    }
    const TrialSet trials = GenerateSynthetic(groups, config_.seed);
    std::ostringstream body;
    body << "# fairmetrics synthetic scores " << ToolVersion() << '\n'
         << "# prng: " << MetadataJson(meta_)["prng"].get<std::string>()
         << '\n'
         << "# seed: " << config_.seed << '\n';
    for (const auto& g : config_.synth_groups) body << "# group: " << g << '\n';
    WriteScores(body, trials);
    EmitText(body.str());
    return kExitOk;
  }

  void EmitText(const std::string& text) {
    if (config_.out_path.empty()) {
      out_ << text;
      return;
    }
    const auto path = ResolveOutput(config_.out_path);
    if (path.has_parent_path()) {
      std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw InvalidArgument("cannot write '" + path.string() + "'");
    file << text;
  }

 public:
  bool polarity_given_ = false;
  bool metrics_given_ = false;

 private:
  const RunConfig& config_;
  std::ostream& out_;
  ReportMetadata meta_;
  std::optional<TrialSet> trials_;
};

void AddCommon(CLI::App* sub, RunConfig& c) {
  sub->add_option("--scores", c.scores_path, "Trial score file")
      ->check(CLI::ExistingFile);
  sub->add_option("--polarity", c.polarity, "similarity or distance")
      ->check(CLI::IsMember({"similarity", "distance"}));
  sub->add_flag("--distance", c.distance, "Scores are distances");
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  sub->add_option("--out", c.out_path, "Output file (default: stdout)");
  sub->add_option("--seed", c.seed, "PRNG seed recorded in reports");
}

void AddGrid(CLI::App* sub, RunConfig& c) {
  sub->add_option("--fmr-range", c.fmr_range,
                  "FMR targets: v | lo:hi:N | lo:hi:Nlog");
  sub->add_option("--alpha-range", c.alpha_range, "Alphas: v | lo:hi:N");
  sub->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  RunConfig config;
  CLI::App app{"Demographic fairness evaluation for biometric verifiers",
               "fairmetrics"};
  app.set_version_flag("--version", std::string(ToolVersion()));
  app.require_subcommand(1);

  auto* rates = app.add_subcommand("rates", "Per-group FMR/FNMR at the pooled EER threshold");
  AddCommon(rates, config);
  rates->add_option("--threshold", config.threshold, "Use this threshold instead");
  rates->add_flag("--percent", config.percent, "Show rates in percent");

  auto* eval = app.add_subcommand("eval", "Fairness metrics at one operating point");
  AddCommon(eval, config);
  auto* eval_metric =
      eval->add_option("--metric,--metrics", config.metrics, "fdr, ir, garbe (comma list)");
  eval->add_option("--alpha", config.alpha, "Risk parameter in [0, 1]");
  eval->add_option("--fmr", config.fmr, "Target pooled FMR (default 0.001)");
  eval->add_option("--threshold", config.threshold, "Explicit score threshold");

  auto* sweep = app.add_subcommand("sweep", "Metrics over the FMR x alpha grid");
  AddCommon(sweep, config);
  AddGrid(sweep, config);
  auto* sweep_metric =
      sweep->add_option("--metrics,--metric", config.metrics, "fdr, ir, garbe (comma list)");
  sweep->add_option("--curve-alpha", config.curve_alpha,
                    "Alpha for the embedded GARBE-vs-FMR curve");

  auto* ffmc = app.add_subcommand("ffmc", "Functional fairness measure criteria report");
  AddCommon(ffmc, config);
  AddGrid(ffmc, config);
  auto* ffmc_metric =
      ffmc->add_option("--metrics,--metric", config.metrics, "Metrics to assess");
  ffmc->add_option("--scale-ratio-limit", config.scale_ratio_limit,
                   "FFMC.1 limit on the FPD/FND median ratio");

  auto* det = app.add_subcommand("det", "DET operating points");
  AddCommon(det, config);
  det->add_option("--scope", config.scope, "pooled or group")
      ->check(CLI::IsMember({"pooled", "group"}));

  auto* protocol = app.add_subcommand("protocol", "Generate a balanced trial protocol");
  AddCommon(protocol, config);
  protocol->add_option("--roster", config.roster_path, "group,speaker,utterance file")
      ->check(CLI::ExistingFile);
  protocol->add_option("--groups", config.groups, "Group labels")->delimiter(',');
  protocol->add_option("--speakers", config.speakers, "Speakers per group");
  protocol->add_option("--utterances", config.utterances, "Utterances per speaker");
  protocol->add_option("--nonmated", config.nonmated, "Nonmated trials per group");

  auto* synth = app.add_subcommand("synth", "Generate synthetic Gaussian scores");
  AddCommon(synth, config);
  synth->add_option("--group", config.synth_groups,
                    "name:mated_mean:mated_sigma:nonmated_mean:nonmated_sigma:"
                    "mated_count:nonmated_count[:seed_offset]");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << ToolVersion() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  CLI::App* chosen = app.get_subcommands().front();
  config.command = chosen->get_name();
  Session session(config, out);
  if (auto* opt = chosen->get_option_no_throw("--polarity")) {
    session.polarity_given_ = opt->count() > 0;
  }
  // Without --format, a .json or .csv --out path selects the format.
  if (auto* opt = chosen->get_option_no_throw("--format");
      opt && opt->count() == 0) {
    const auto ext = std::filesystem::path(config.out_path).extension();
    if (ext == ".json") config.format = "json";
    if (ext == ".csv") config.format = "csv";
  }
  session.metrics_given_ = (eval_metric->count() + sweep_metric->count() +
                            ffmc_metric->count()) > 0;
  try {
    return session.Run();
  } catch (const std::exception& e) {
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    err << "error: " << message << '\n';
    return kExitInvalid;
  }
}

}  // namespace fairmetrics
