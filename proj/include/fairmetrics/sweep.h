#ifndef FAIRMETRICS_SWEEP_H_
#define FAIRMETRICS_SWEEP_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fairmetrics/metrics.h"
#include "fairmetrics/rates.h"
#include "fairmetrics/trial_io.h"

namespace fairmetrics {

// count points, geometric spacing, exact endpoints.
std::vector<double> LogSpaced(double lo, double hi, std::size_t count);
// count points, arithmetic spacing, exact endpoints.
std::vector<double> LinSpaced(double lo, double hi, std::size_t count);

// The (FMR target x alpha) evaluation lattice.
struct SweepGrid {
  std::vector<double> fmr_targets;  // strictly increasing, each in (0, 1)
  std::vector<double> alphas;       // strictly increasing, each in [0, 1]

  // 50 log-spaced targets over [0.001, 0.1] and 101 alphas over [0, 1].
  static SweepGrid Default();

  // Throws InvalidArgument on an empty axis or a violated ordering/range.
  void Validate() const;
};

struct SweepCell {
  MetricResult result;
  double fmr_target = 0.0;
  double achieved_fmr = 0.0;
  bool target_reached = true;
};

struct SweepResult {
  SweepGrid grid;
  std::vector<Metric> metrics;
  std::vector<FmrThreshold> resolved;  // parallel to grid.fmr_targets
  // Ordered by target, then metric (in request order), then alpha.
  std::vector<SweepCell> cells;

  std::size_t unreachable_targets() const;
  std::vector<SweepCell> CellsFor(Metric metric) const;
};

struct SweepOptions {
  // 0 = std::thread::hardware_concurrency().
  unsigned threads = 0;
};

// Resolves each target with ThresholdForFmr, computes per-group rates once
// per threshold and every requested metric at every alpha. Unreachable
// targets are evaluated at their quantized-to-zero threshold and flagged.
// Throws InvalidArgument on an invalid grid or an empty/duplicated metric set.
SweepResult RunSweep(const TrialSet& trials, const SweepGrid& grid,
                     std::span<const Metric> metrics,
                     const SweepOptions& options = {});

struct DistributionSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  std::optional<std::vector<double>> raw;
};

// Quartiles by linear interpolation between order statistics.
// Throws InvalidArgument on empty input.
DistributionSummary Summarize(std::vector<double> values, bool keep_raw = false);

struct ComponentSummary {
  Metric metric = Metric::kGarbe;
  std::size_t cells = 0;
  std::size_t computable_cells = 0;
  std::optional<DistributionSummary> fpd;
  std::optional<DistributionSummary> fnd;
};

// FPD/FND distributions per metric over the computable cells. Metrics are
// reported in order of first appearance. Throws Error when no cell is
// computable.
std::vector<ComponentSummary> SummarizeComponents(
    std::span<const SweepCell> cells, bool keep_raw = false);

struct FfmcConfig {
  double scale_ratio_limit = 10.0;
};

struct FfmcMetricReport {
  Metric metric = Metric::kGarbe;
  // FFMC.1: max(median FPD, median FND) / min(...) <= limit.
  bool ffmc1 = false;
  std::optional<double> fpd_median;
  std::optional<double> fnd_median;
  std::optional<double> scale_ratio;  // unset when undefined (zero median)
  // FFMC.2: declared range of the metric.
  bool ffmc2 = false;
  double lower_bound = 0.0;
  std::optional<double> upper_bound;  // unset = unbounded
  // FFMC.3: every grid cell computable.
  bool ffmc3 = false;
  std::size_t cells = 0;
  std::size_t computable_cells = 0;
  double computable_fraction = 0.0;
};

struct FfmcReport {
  FfmcConfig config;
  std::vector<FfmcMetricReport> metrics;
};

// Static value range of each metric's definition.
struct MetricBounds {
  double lower;
  std::optional<double> upper;
};
MetricBounds BoundsOf(Metric metric);

// Throws InvalidArgument on empty input or a non-positive limit.
FfmcReport BuildFfmcReport(std::span<const SweepCell> cells,
                           const FfmcConfig& config = {});

struct CurvePoint {
  double fmr_target = 0.0;
  double achieved_fmr = 0.0;
  double threshold = 0.0;
  double garbe = 0.0;
  bool target_reached = true;
};

// GARBE at a single alpha across FMR targets, sorted by achieved FMR.
std::vector<CurvePoint> GarbeCurveData(const TrialSet& trials,
                                       std::span<const double> fmr_targets,
                                       double alpha);

}  // namespace fairmetrics

#endif  // FAIRMETRICS_SWEEP_H_
