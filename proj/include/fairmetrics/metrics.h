#ifndef FAIRMETRICS_METRICS_H_
#define FAIRMETRICS_METRICS_H_

#include <optional>
#include <span>
#include <string_view>

#include "fairmetrics/rates.h"

namespace fairmetrics {

enum class Metric { kFdr, kIr, kGarbe };

std::string_view MetricName(Metric metric);  // "FDR", "IR", "GARBE"
std::optional<Metric> ParseMetric(std::string_view token);  // case-insensitive

// Throws InvalidArgument unless 0 <= alpha <= 1.
void ValidateAlpha(double alpha);

// The alpha-independent part of a metric: its false positive and false
// negative differentials. std::nullopt marks a not-computable term.
struct MetricComponents {
  Metric metric = Metric::kGarbe;
  double threshold = 0.0;
  std::optional<double> fpd;
  std::optional<double> fnd;
};

struct MetricResult {
  Metric metric = Metric::kGarbe;
  std::optional<double> value;
  std::optional<double> fpd;
  std::optional<double> fnd;
  double alpha = 0.0;
  double threshold = 0.0;

  bool computable() const { return value.has_value(); }
};

// FDR:   fpd = max pairwise |FMR diff|,  fnd = max pairwise |FNMR diff|.
// IR:    fpd = max FMR / min FMR,        fnd = max FNMR / min FNMR;
//        a zero minimum makes the term not computable unless the maximum is
//        zero too, in which case the term is 1.
// GARBE: fpd = Gini(FMR),                fnd = Gini(FNMR).
// Throws InvalidArgument when rates.n() < 2.
MetricComponents ComputeComponents(Metric metric, const GroupRates& rates);

// FDR = 1 - (a*fpd + (1-a)*fnd); IR = fpd^a * fnd^(1-a);
// GARBE = a*fpd + (1-a)*fnd. A term whose weight is exactly zero is not
// needed, so it cannot make the value not computable.
MetricResult Combine(const MetricComponents& components, double alpha);

MetricResult Evaluate(Metric metric, const GroupRates& rates, double alpha);
MetricResult Fdr(const GroupRates& rates, double alpha);
MetricResult Ir(const GroupRates& rates, double alpha);
MetricResult Garbe(const GroupRates& rates, double alpha);

// Gini coefficient with the n/(n-1) small-sample correction:
//   G = n/(n-1) * sum_ij |v_i - v_j| / (2 n^2 mean).
// Zero mean gives 0. Throws InvalidArgument for n < 2 or negative/non-finite
// input.
double Gini(std::span<const double> values);

}  // namespace fairmetrics

#endif  // FAIRMETRICS_METRICS_H_
