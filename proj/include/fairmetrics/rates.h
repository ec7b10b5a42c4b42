#ifndef FAIRMETRICS_RATES_H_
#define FAIRMETRICS_RATES_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairmetrics/trial_io.h"

namespace fairmetrics {

// An error rate kept as an exact fraction errors / trials.
struct Rate {
  std::uint64_t errors = 0;
  std::uint64_t trials = 1;

  // Throws InvalidArgument unless trials > 0 and errors <= trials.
  static Rate Of(std::uint64_t errors, std::uint64_t trials);

  double value() const {
    return static_cast<double>(errors) / static_cast<double>(trials);
  }
  bool is_zero() const { return errors == 0; }

  // Exact rational comparison.
  friend std::strong_ordering operator<=>(const Rate& a, const Rate& b) {
    const auto lhs = static_cast<unsigned __int128>(a.errors) * b.trials;
    const auto rhs = static_cast<unsigned __int128>(b.errors) * a.trials;
    return lhs <=> rhs;
  }
  friend bool operator==(const Rate& a, const Rate& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }
};

// |a - b| evaluated exactly and rounded once.
double AbsDifference(const Rate& a, const Rate& b);

struct GroupRate {
  std::string group;
  Rate fmr;
  Rate fnmr;
};

// Per-group FMR/FNMR at one threshold.
struct GroupRates {
  double threshold = 0.0;
  std::vector<GroupRate> groups;

  std::size_t n() const { return groups.size(); }
};

enum class Scope { kPooled, kPerGroup };
inline constexpr std::string_view kPooledLabel = "pooled";

struct DetPoint {
  double threshold = 0.0;  // -inf / +inf for the sentinels
  Rate fmr;
  Rate fnmr;
};

struct DetCurve {
  std::string group;
  std::vector<DetPoint> points;
};

struct Eer {
  double eer = 0.0;
  double threshold = 0.0;
};

struct FmrThreshold {
  double target = 0.0;
  double threshold = 0.0;
  Rate achieved;
  // No observed nonmated score gives a positive FMR <= target; the threshold
  // then sits just above the highest nonmated score and achieved FMR is 0.
  bool quantized_to_zero = false;
  // Smallest positive FMR the data can produce (FMR at the top nonmated score).
  Rate closest_positive;

  bool reached() const { return !quantized_to_zero; }
};

struct RateTable {
  Eer pooled;
  GroupRates rates;  // per group, at pooled.threshold
};

// Sorted per-group and pooled score arrays. Immutable after construction,
// so one instance may serve concurrent queries.
class RateEvaluator {
 public:
  explicit RateEvaluator(const TrialSet& trials);

  // Decision rule: accept iff score >= threshold.
  GroupRates RatesAt(double threshold, Scope scope) const;

  // Smallest observed nonmated score whose pooled FMR <= target.
  // Throws InvalidArgument unless 0 < target < 1.
  FmrThreshold ThresholdForFmr(double target) const;

  // Pooled EER by linear interpolation (in threshold) between the adjacent
  // empirical operating points where FMR - FNMR changes sign.
  Eer PooledEer() const;

  RateTable GroupRateTable() const;

  // One point per distinct observed score plus the -inf/+inf sentinels.
  std::vector<DetCurve> DetPoints(Scope scope) const;

  const std::vector<std::string>& groups() const { return group_names_; }

 private:
  struct Scores {
    std::vector<double> mated;     // ascending
    std::vector<double> nonmated;  // ascending
  };

  static Rate FmrOf(const Scores& s, double threshold);
  static Rate FnmrOf(const Scores& s, double threshold);
  static DetCurve CurveOf(const std::string& name, const Scores& s);

  std::vector<std::string> group_names_;
  std::vector<Scores> per_group_;
  Scores pooled_;
};

GroupRates RatesAt(const TrialSet& trials, double threshold, Scope scope);
FmrThreshold ThresholdForFmr(const TrialSet& trials, double target);
// As ThresholdForFmr, but throws UnreachableTarget when quantized to zero.
FmrThreshold ThresholdForFmrStrict(const TrialSet& trials, double target);
Eer PooledEer(const TrialSet& trials);
RateTable GroupRateTable(const TrialSet& trials);
std::vector<DetCurve> DetPoints(const TrialSet& trials, Scope scope);

}  // namespace fairmetrics

#endif  // FAIRMETRICS_RATES_H_
