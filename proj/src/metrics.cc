#include "fairmetrics/metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "fairmetrics/error.h"

namespace fairmetrics {

namespace {

void RequireTwoGroups(const GroupRates& rates) {
  if (rates.n() < 2) {
    throw InvalidArgument("fairness metrics need at least two groups, got " +
                          std::to_string(rates.n()));
  }
}

template <typename Field>
std::pair<Rate, Rate> Extremes(const GroupRates& rates, Field field) {
  Rate lo = rates.groups.front().*field;
  Rate hi = lo;
  for (const GroupRate& g : rates.groups) {
    lo = std::min(lo, g.*field);
    hi = std::max(hi, g.*field);
  }
  return {lo, hi};
}

std::optional<double> RatioTerm(const Rate& lo, const Rate& hi) {
  if (lo.is_zero()) {
    if (hi.is_zero()) return 1.0;
    return std::nullopt;
  }
  const long double num = static_cast<long double>(hi.errors) * lo.trials;
  const long double den = static_cast<long double>(lo.errors) * hi.trials;
  return static_cast<double>(num / den);
}

template <typename Field>
std::vector<double> Values(const GroupRates& rates, Field field) {
  std::vector<double> out;
  out.reserve(rates.n());
  for (const GroupRate& g : rates.groups) out.push_back((g.*field).value());
  return out;
}

}  // namespace

std::string_view MetricName(Metric metric) {
  switch (metric) {
    case Metric::kFdr:
      return "FDR";
    case Metric::kIr:
      return "IR";
    case Metric::kGarbe:
      return "GARBE";
  }
  return "?";
}

std::optional<Metric> ParseMetric(std::string_view token) {
  std::string lower(token);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "fdr") return Metric::kFdr;
  if (lower == "ir") return Metric::kIr;
  if (lower == "garbe") return Metric::kGarbe;
  return std::nullopt;
}

void ValidateAlpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("alpha must lie in [0, 1], got " +
                          std::to_string(alpha));
  }
}

double Gini(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw InvalidArgument("Gini needs at least two values");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidArgument("Gini input must be finite and non-negative");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  // sum_{i<j} (v_(j) - v_(i)) = sum_k v_(k) * (2k - n + 1) over sorted order.
  long double pair_sum = 0.0L;
  long double total = 0.0L;
  for (std::size_t k = 0; k < n; ++k) {
    const long double weight = 2.0L * static_cast<long double>(k) -
                               static_cast<long double>(n) + 1.0L;
    pair_sum += weight * sorted[k];
    total += sorted[k];
  }
  if (total == 0.0L) return 0.0;
  // Ordered-pair sum is 2 * pair_sum; n/(n-1) / (2 n^2 mean) = 1/(2 (n-1) total).
  return static_cast<double>(pair_sum /
                             (static_cast<long double>(n - 1) * total));
}

MetricComponents ComputeComponents(Metric metric, const GroupRates& rates) {
  RequireTwoGroups(rates);
  MetricComponents c;
  c.metric = metric;
  c.threshold = rates.threshold;
  switch (metric) {
    case Metric::kFdr: {
      const auto [fmr_lo, fmr_hi] = Extremes(rates, &GroupRate::fmr);
      const auto [fnmr_lo, fnmr_hi] = Extremes(rates, &GroupRate::fnmr);
      c.fpd = AbsDifference(fmr_hi, fmr_lo);
      c.fnd = AbsDifference(fnmr_hi, fnmr_lo);
      break;
    }
    case Metric::kIr: {
      const auto [fmr_lo, fmr_hi] = Extremes(rates, &GroupRate::fmr);
      const auto [fnmr_lo, fnmr_hi] = Extremes(rates, &GroupRate::fnmr);
      c.fpd = RatioTerm(fmr_lo, fmr_hi);
      c.fnd = RatioTerm(fnmr_lo, fnmr_hi);
      break;
    }
    case Metric::kGarbe: {
      const auto fmr = Values(rates, &GroupRate::fmr);
      const auto fnmr = Values(rates, &GroupRate::fnmr);
      c.fpd = Gini(fmr);
      c.fnd = Gini(fnmr);
      break;
    }
  }
  return c;
}

MetricResult Combine(const MetricComponents& c, double alpha) {
  ValidateAlpha(alpha);
  MetricResult r;
  r.metric = c.metric;
  r.fpd = c.fpd;
  r.fnd = c.fnd;
  r.alpha = alpha;
  r.threshold = c.threshold;
  const bool need_fpd = alpha > 0.0;
  const bool need_fnd = alpha < 1.0;
  if ((need_fpd && !c.fpd) || (need_fnd && !c.fnd)) return r;
  const double fpd = c.fpd.value_or(0.0);
  const double fnd = c.fnd.value_or(0.0);
  switch (c.metric) {
    case Metric::kFdr:
      r.value = 1.0 - (alpha * fpd + (1.0 - alpha) * fnd);
      break;
    case Metric::kIr: {
      double v = 1.0;
      if (need_fpd) v *= std::pow(fpd, alpha);
      if (need_fnd) v *= std::pow(fnd, 1.0 - alpha);
      r.value = v;
      break;
    }
    case Metric::kGarbe:
      r.value = alpha * fpd + (1.0 - alpha) * fnd;
      break;
  }
  return r;
}

MetricResult Evaluate(Metric metric, const GroupRates& rates, double alpha) {
  ValidateAlpha(alpha);
  return Combine(ComputeComponents(metric, rates), alpha);
}

MetricResult Fdr(const GroupRates& rates, double alpha) {
  return Evaluate(Metric::kFdr, rates, alpha);
}

MetricResult Ir(const GroupRates& rates, double alpha) {
  return Evaluate(Metric::kIr, rates, alpha);
}

MetricResult Garbe(const GroupRates& rates, double alpha) {
  return Evaluate(Metric::kGarbe, rates, alpha);
}

}  // namespace fairmetrics
