#include "fairmetrics/rates.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "fairmetrics/error.h"

namespace fairmetrics {

Rate Rate::Of(std::uint64_t errors, std::uint64_t trials) {
  if (trials == 0) throw InvalidArgument("rate with zero trials");
  if (errors > trials) throw InvalidArgument("rate with errors > trials");
  return Rate{errors, trials};
}

double AbsDifference(const Rate& a, const Rate& b) {
  const auto lhs = static_cast<unsigned __int128>(a.errors) * b.trials;
  const auto rhs = static_cast<unsigned __int128>(b.errors) * a.trials;
  const auto num = lhs > rhs ? lhs - rhs : rhs - lhs;
  const auto den = static_cast<unsigned __int128>(a.trials) * b.trials;
  return static_cast<double>(static_cast<long double>(num) /
                             static_cast<long double>(den));
}

RateEvaluator::RateEvaluator(const TrialSet& trials)
    : group_names_(trials.groups()), per_group_(trials.groups().size()) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < group_names_.size(); ++i) {
    index.emplace(group_names_[i], i);
  }
  for (const TrialRecord& r : trials.records()) {
    Scores& s = per_group_[index.at(r.group)];
    if (r.label == Label::kMated) {
      s.mated.push_back(r.score);
      pooled_.mated.push_back(r.score);
    } else {
      s.nonmated.push_back(r.score);
      pooled_.nonmated.push_back(r.score);
    }
  }
  auto sort_scores = [](Scores& s) {
    std::sort(s.mated.begin(), s.mated.end());
    std::sort(s.nonmated.begin(), s.nonmated.end());
  };
  for (Scores& s : per_group_) sort_scores(s);
  sort_scores(pooled_);
}

Rate RateEvaluator::FmrOf(const Scores& s, double threshold) {
  const auto below = std::lower_bound(s.nonmated.begin(), s.nonmated.end(),
                                      threshold) -
                     s.nonmated.begin();
  return Rate{s.nonmated.size() - static_cast<std::size_t>(below),
              s.nonmated.size()};
}

Rate RateEvaluator::FnmrOf(const Scores& s, double threshold) {
  const auto below =
      std::lower_bound(s.mated.begin(), s.mated.end(), threshold) -
      s.mated.begin();
  return Rate{static_cast<std::uint64_t>(below), s.mated.size()};
}

GroupRates RateEvaluator::RatesAt(double threshold, Scope scope) const {
  GroupRates out;
  out.threshold = threshold;
  if (scope == Scope::kPooled) {
    out.groups.push_back({std::string(kPooledLabel), FmrOf(pooled_, threshold),
                          FnmrOf(pooled_, threshold)});
    return out;
  }
  out.groups.reserve(per_group_.size());
  for (std::size_t i = 0; i < per_group_.size(); ++i) {
    out.groups.push_back({group_names_[i], FmrOf(per_group_[i], threshold),
                          FnmrOf(per_group_[i], threshold)});
  }
  return out;
}

FmrThreshold RateEvaluator::ThresholdForFmr(double target) const {
  if (!(target > 0.0 && target < 1.0)) {
    throw InvalidArgument("FMR target must lie in (0, 1)");
  }
  const std::vector<double>& nm = pooled_.nonmated;
  const std::size_t total = nm.size();
  const auto fmr_at_index = [&](std::size_t i) {
    return static_cast<double>(total - i) / static_cast<double>(total);
  };

  FmrThreshold out;
  out.target = target;
  out.closest_positive = FmrOf(pooled_, nm.back());

  // Smallest index whose tail fraction is within target, then snapped up to
  // a distinct-score boundary so ties at the threshold are all accepted.
  std::size_t lo = 0;
  std::size_t hi = total;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (fmr_at_index(mid) <= target) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  std::size_t index = lo;
  if (index < total) {
    const auto first_tie =
        std::lower_bound(nm.begin(), nm.end(), nm[index]) - nm.begin();
    if (static_cast<std::size_t>(first_tie) != index) {
      index = std::upper_bound(nm.begin(), nm.end(), nm[index]) - nm.begin();
    }
  }
  if (index >= total) {
    out.quantized_to_zero = true;
    out.threshold =
        std::nextafter(nm.back(), std::numeric_limits<double>::infinity());
    out.achieved = Rate{0, total};
    return out;
  }
  out.threshold = nm[index];
  out.achieved = Rate{total - index, total};
  return out;
}

Eer RateEvaluator::PooledEer() const {
  std::vector<double> thresholds;
  thresholds.reserve(pooled_.mated.size() + pooled_.nonmated.size());
  std::merge(pooled_.mated.begin(), pooled_.mated.end(),
             pooled_.nonmated.begin(), pooled_.nonmated.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  double prev_t = 0.0;
  double prev_fmr = 1.0;
  double prev_fnmr = 0.0;
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    const double t = thresholds[k];
    const Rate fmr_rate = FmrOf(pooled_, t);
    const Rate fnmr_rate = FnmrOf(pooled_, t);
    const double fmr = fmr_rate.value();
    const double fnmr = fnmr_rate.value();
    const double d = fmr - fnmr;
    if (fmr_rate == fnmr_rate) return Eer{fmr, t};
    if (fmr_rate < fnmr_rate) {
      // k > 0 here: at the lowest score FMR = 1 and FNMR = 0.
      const double prev_d = prev_fmr - prev_fnmr;
      const double w = prev_d / (prev_d - d);
      const double fmr_x = prev_fmr + w * (fmr - prev_fmr);
      const double fnmr_x = prev_fnmr + w * (fnmr - prev_fnmr);
      return Eer{0.5 * (fmr_x + fnmr_x), prev_t + w * (t - prev_t)};
    }
    prev_t = t;
    prev_fmr = fmr;
    prev_fnmr = fnmr;
  }
  // Crossing lies between the top score and the +inf sentinel (FMR 0,
  // FNMR 1); interpolate in rate space, report the last finite threshold.
  const double prev_d = prev_fmr - prev_fnmr;
  const double w = prev_d / (prev_d + 1.0);
  const double fmr_x = prev_fmr * (1.0 - w);
  const double fnmr_x = prev_fnmr + w * (1.0 - prev_fnmr);
  return Eer{0.5 * (fmr_x + fnmr_x), prev_t};
}

RateTable RateEvaluator::GroupRateTable() const {
  RateTable table;
  table.pooled = PooledEer();
  table.rates = RatesAt(table.pooled.threshold, Scope::kPerGroup);
  return table;
}

DetCurve RateEvaluator::CurveOf(const std::string& name, const Scores& s) {
  std::vector<double> thresholds;
  std::merge(s.mated.begin(), s.mated.end(), s.nonmated.begin(),
             s.nonmated.end(), std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  DetCurve curve{name, {}};
  curve.points.reserve(thresholds.size() + 2);
  curve.points.push_back(
      {-kInf, Rate{s.nonmated.size(), s.nonmated.size()},
       Rate{0, s.mated.size()}});
  for (double t : thresholds) {
    curve.points.push_back({t, FmrOf(s, t), FnmrOf(s, t)});
  }
  curve.points.push_back({kInf, Rate{0, s.nonmated.size()},
                          Rate{s.mated.size(), s.mated.size()}});
  return curve;
}

std::vector<DetCurve> RateEvaluator::DetPoints(Scope scope) const {
  if (scope == Scope::kPooled) {
    return {CurveOf(std::string(kPooledLabel), pooled_)};
  }
  std::vector<DetCurve> curves;
  for (std::size_t i = 0; i < per_group_.size(); ++i) {
    curves.push_back(CurveOf(group_names_[i], per_group_[i]));
  }
  return curves;
}

GroupRates RatesAt(const TrialSet& trials, double threshold, Scope scope) {
  return RateEvaluator(trials).RatesAt(threshold, scope);
}

FmrThreshold ThresholdForFmr(const TrialSet& trials, double target) {
  return RateEvaluator(trials).ThresholdForFmr(target);
}

FmrThreshold ThresholdForFmrStrict(const TrialSet& trials, double target) {
  FmrThreshold result = ThresholdForFmr(trials, target);
  if (result.quantized_to_zero) {
    throw UnreachableTarget(target, result.closest_positive.value());
  }
  return result;
}

Eer PooledEer(const TrialSet& trials) {
  return RateEvaluator(trials).PooledEer();
}

RateTable GroupRateTable(const TrialSet& trials) {
  return RateEvaluator(trials).GroupRateTable();
}

std::vector<DetCurve> DetPoints(const TrialSet& trials, Scope scope) {
  return RateEvaluator(trials).DetPoints(scope);
}

}  // namespace fairmetrics
