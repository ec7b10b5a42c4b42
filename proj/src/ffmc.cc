#include <algorithm>
#include <limits>

#include "fairmetrics/error.h"
#include "fairmetrics/sweep.h"

namespace fairmetrics {

MetricBounds BoundsOf(Metric metric) {
  switch (metric) {
    case Metric::kFdr:
      return {0.0, 1.0};
    case Metric::kGarbe:
      return {0.0, 1.0};
    case Metric::kIr:
      return {1.0, std::nullopt};
  }
  return {0.0, std::nullopt};
}

FfmcReport BuildFfmcReport(std::span<const SweepCell> cells,
                           const FfmcConfig& config) {
  if (cells.empty()) throw InvalidArgument("FFMC report needs sweep results");
  if (!(config.scale_ratio_limit > 0.0)) {
    throw InvalidArgument("scale ratio limit must be positive");
  }

  std::vector<Metric> order;
  for (const SweepCell& c : cells) {
    if (std::find(order.begin(), order.end(), c.result.metric) == order.end()) {
      order.push_back(c.result.metric);
    }
  }

  FfmcReport report;
  report.config = config;
  for (Metric metric : order) {
    std::vector<SweepCell> mine;
    std::copy_if(cells.begin(), cells.end(), std::back_inserter(mine),
                 [metric](const SweepCell& c) { return c.result.metric == metric; });

    FfmcMetricReport m;
    m.metric = metric;
    m.cells = mine.size();
    m.computable_cells = static_cast<std::size_t>(std::count_if(
        mine.begin(), mine.end(),
        [](const SweepCell& c) { return c.result.computable(); }));
    m.computable_fraction =
        static_cast<double>(m.computable_cells) / static_cast<double>(m.cells);
    m.ffmc3 = m.computable_cells == m.cells;

    const MetricBounds bounds = BoundsOf(metric);
    m.lower_bound = bounds.lower;
    m.upper_bound = bounds.upper;
    m.ffmc2 = bounds.upper.has_value();

    if (m.computable_cells > 0) {
      const ComponentSummary summary = SummarizeComponents(mine).front();
      if (summary.fpd) m.fpd_median = summary.fpd->median;
      if (summary.fnd) m.fnd_median = summary.fnd->median;
    }
    if (m.fpd_median && m.fnd_median) {
      const double hi = std::max(*m.fpd_median, *m.fnd_median);
      const double lo = std::min(*m.fpd_median, *m.fnd_median);
      if (hi == 0.0) {
        m.scale_ratio = 1.0;
      } else if (lo > 0.0) {
        m.scale_ratio = hi / lo;
      }
    }
    m.ffmc1 = m.scale_ratio && *m.scale_ratio <= config.scale_ratio_limit;
    report.metrics.push_back(m);
  }
  return report;
}

}  // namespace fairmetrics
