#include "fairmetrics/sweep.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "fairmetrics/error.h"

namespace fairmetrics {

std::vector<double> LogSpaced(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (!(lo > 0.0 && hi > 0.0)) {
    throw InvalidArgument("log spacing needs positive endpoints");
  }
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double log_lo = std::log10(lo);
  const double step = (std::log10(hi) - log_lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::pow(10.0, log_lo + step * static_cast<double>(i));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> LinSpaced(double lo, double hi, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const auto last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const auto k = static_cast<double>(i);
    out[i] = (lo * (last - k) + hi * k) / last;
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

SweepGrid SweepGrid::Default() {
  return SweepGrid{LogSpaced(0.001, 0.1, 50), LinSpaced(0.0, 1.0, 101)};
}

void SweepGrid::Validate() const {
  if (fmr_targets.empty()) throw InvalidArgument("sweep grid has no FMR targets");
  if (alphas.empty()) throw InvalidArgument("sweep grid has no alphas");
  for (std::size_t i = 0; i < fmr_targets.size(); ++i) {
    if (!(fmr_targets[i] > 0.0 && fmr_targets[i] < 1.0)) {
      throw InvalidArgument("FMR targets must lie in (0, 1)");
    }
    if (i > 0 && !(fmr_targets[i] > fmr_targets[i - 1])) {
      throw InvalidArgument("FMR targets must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    ValidateAlpha(alphas[i]);
    if (i > 0 && !(alphas[i] > alphas[i - 1])) {
      throw InvalidArgument("alphas must be strictly increasing");
    }
  }
}

std::size_t SweepResult::unreachable_targets() const {
  return static_cast<std::size_t>(
      std::count_if(resolved.begin(), resolved.end(),
                    [](const FmrThreshold& t) { return !t.reached(); }));
}

std::vector<SweepCell> SweepResult::CellsFor(Metric metric) const {
  std::vector<SweepCell> out;
  std::copy_if(cells.begin(), cells.end(), std::back_inserter(out),
               [metric](const SweepCell& c) { return c.result.metric == metric; });
  return out;
}

SweepResult RunSweep(const TrialSet& trials, const SweepGrid& grid,
                     std::span<const Metric> metrics,
                     const SweepOptions& options) {
  grid.Validate();
  if (metrics.empty()) throw InvalidArgument("no metrics requested");
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    if (std::find(metrics.begin(), metrics.begin() + i, metrics[i]) !=
        metrics.begin() + i) {
      throw InvalidArgument("metric requested twice");
    }
  }

  SweepResult result;
  result.grid = grid;
  result.metrics.assign(metrics.begin(), metrics.end());
  result.resolved.resize(grid.fmr_targets.size());
  const std::size_t per_target = metrics.size() * grid.alphas.size();
  result.cells.resize(grid.fmr_targets.size() * per_target);

  const RateEvaluator evaluator(trials);
  // Rejected before any worker starts so no exception crosses a thread.
  if (evaluator.groups().size() < 2) {
    throw InvalidArgument("fairness metrics need at least two groups");
  }

  auto evaluate_target = [&](std::size_t t) {
    const FmrThreshold resolved = evaluator.ThresholdForFmr(grid.fmr_targets[t]);
    result.resolved[t] = resolved;
    const GroupRates rates =
        evaluator.RatesAt(resolved.threshold, Scope::kPerGroup);
    std::size_t slot = t * per_target;
    for (Metric metric : metrics) {
      const MetricComponents components = ComputeComponents(metric, rates);
      for (double alpha : grid.alphas) {
        result.cells[slot++] = SweepCell{Combine(components, alpha),
                                         resolved.target,
                                         resolved.achieved.value(),
                                         resolved.reached()};
      }
    }
  };

  unsigned threads = options.threads != 0 ? options.threads
                                          : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(
      threads, 1, static_cast<unsigned>(grid.fmr_targets.size()));
  if (threads == 1) {
    for (std::size_t t = 0; t < grid.fmr_targets.size(); ++t) {
      evaluate_target(t);
    }
    return result;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t t = next++; t < grid.fmr_targets.size(); t = next++) {
        evaluate_target(t);
      }
    });
  }
  workers.clear();  // joins
  return result;
}

DistributionSummary Summarize(std::vector<double> values, bool keep_raw) {
  if (values.empty()) throw InvalidArgument("cannot summarize an empty sample");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
  };
  DistributionSummary s;
  s.min = sorted.front();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.max = sorted.back();
  s.count = sorted.size();
  if (keep_raw) s.raw = std::move(values);
  return s;
}

std::vector<ComponentSummary> SummarizeComponents(
    std::span<const SweepCell> cells, bool keep_raw) {
  struct Accumulator {
    Metric metric;
    std::size_t cells = 0;
    std::size_t computable = 0;
    std::vector<double> fpd;
    std::vector<double> fnd;
  };
  std::vector<Accumulator> acc;
  for (const SweepCell& cell : cells) {
    const MetricResult& r = cell.result;
    auto it = std::find_if(acc.begin(), acc.end(), [&](const Accumulator& a) {
      return a.metric == r.metric;
    });
    if (it == acc.end()) it = acc.insert(acc.end(), Accumulator{r.metric, 0, 0, {}, {}});
    ++it->cells;
    if (!r.computable()) continue;
    ++it->computable;
    if (r.fpd) it->fpd.push_back(*r.fpd);
    if (r.fnd) it->fnd.push_back(*r.fnd);
  }
  const bool any = std::any_of(acc.begin(), acc.end(), [](const Accumulator& a) {
    return a.computable > 0;
  });
  if (!any) throw Error("no computable results to summarize");

  std::vector<ComponentSummary> out;
  for (Accumulator& a : acc) {
    ComponentSummary s;
    s.metric = a.metric;
    s.cells = a.cells;
    s.computable_cells = a.computable;
    if (!a.fpd.empty()) s.fpd = Summarize(std::move(a.fpd), keep_raw);
    if (!a.fnd.empty()) s.fnd = Summarize(std::move(a.fnd), keep_raw);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CurvePoint> GarbeCurveData(const TrialSet& trials,
                                       std::span<const double> fmr_targets,
                                       double alpha) {
  SweepGrid grid{{fmr_targets.begin(), fmr_targets.end()}, {alpha}};
  const Metric garbe[] = {Metric::kGarbe};
  const SweepResult sweep = RunSweep(trials, grid, garbe);
  std::vector<CurvePoint> points;
  points.reserve(sweep.cells.size());
  for (std::size_t t = 0; t < sweep.cells.size(); ++t) {
    const SweepCell& cell = sweep.cells[t];
    points.push_back({cell.fmr_target, cell.achieved_fmr,
                      cell.result.threshold, *cell.result.value,
                      cell.target_reached});
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const CurvePoint& a, const CurvePoint& b) {
                     return a.achieved_fmr < b.achieved_fmr;
                   });
  return points;
}

}  // namespace fairmetrics
