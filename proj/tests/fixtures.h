#ifndef FAIRMETRICS_TESTS_FIXTURES_H_
#define FAIRMETRICS_TESTS_FIXTURES_H_

#include <string>
#include <utility>
#include <vector>

#include "fairmetrics/rates.h"
#include "fairmetrics/trial_io.h"

namespace fixtures {

using fairmetrics::GroupRate;
using fairmetrics::GroupRates;
using fairmetrics::Label;
using fairmetrics::Rate;
using fairmetrics::TrialRecord;
using fairmetrics::TrialSet;

inline GroupRates MakeRates(const std::vector<std::pair<Rate, Rate>>& rates,
                            double threshold = 0.0) {
  GroupRates out;
  out.threshold = threshold;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    out.groups.push_back(
        {"g" + std::to_string(i), rates[i].first, rates[i].second});
  }
  return out;
}

// ERes2Net columns of the per-nationality table at the pooled-EER threshold,
// in hundredths of a percent (FMR, FNMR).
inline GroupRates ERes2NetTable() {
  const std::vector<std::pair<std::string, std::pair<int, int>>> rows = {
      {"USA", {122, 104}},      {"UK", {68, 45}},       {"Germany", {59, 281}},
      {"Australia", {68, 27}},  {"Italy", {195, 258}},  {"India", {231, 9}},
      {"Ireland", {18, 204}},   {"New_Zealand", {186, 27}},
      {"Canada", {113, 131}}};
  GroupRates out;
  for (const auto& [name, r] : rows) {
    out.groups.push_back({name, Rate{static_cast<std::uint64_t>(r.first), 10000},
                          Rate{static_cast<std::uint64_t>(r.second), 10000}});
  }
  return out;
}

inline void Add(std::vector<TrialRecord>& records, const std::string& group,
                Label label, double score, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    records.push_back({group, label, score, {}, {}});
  }
}

// Two groups whose rates at the FMR = 0.1% threshold give Gini(FMR) = 0.55
// and Gini(FNMR) = 0.29: 40 of 40,000 nonmated scores sit above the
// threshold (9 in A, 31 in B); 71/1000 and 129/1000 mated scores fall below.
inline TrialSet GarbeScaleFixture() {
  std::vector<TrialRecord> r;
  for (int i = 0; i < 9; ++i) Add(r, "A", Label::kNonmated, 10.0 + i, 1);
  for (int i = 0; i < 31; ++i) Add(r, "B", Label::kNonmated, 10.5 + i, 1);
  Add(r, "A", Label::kNonmated, -5.0, 20000 - 9);
  Add(r, "B", Label::kNonmated, -5.0, 20000 - 31);
  Add(r, "A", Label::kMated, 0.0, 71);
  Add(r, "A", Label::kMated, 100.0, 1000 - 71);
  Add(r, "B", Label::kMated, 0.0, 129);
  Add(r, "B", Label::kMated, 100.0, 1000 - 129);
  return TrialSet::FromRecords(std::move(r));
}

// Three groups reproducing the qualitative regimes: FMR differences are
// small in absolute terms while FNMR differences are large, and group C has
// few, low nonmated scores so its FMR is zero at strict thresholds.
inline std::vector<fairmetrics::SyntheticGroup> MixedRegimeGroups() {
  return {
      {"A", 3.0, 1.0, 0.0, 1.0, 3000, 20000, std::nullopt},
      {"B", 1.5, 1.0, 0.4, 1.0, 3000, 20000, std::nullopt},
      {"C", 2.5, 1.0, -0.6, 1.0, 3000, 2000, std::nullopt},
  };
}

inline TrialSet MixedRegimeTrials() {
  return fairmetrics::GenerateSynthetic(MixedRegimeGroups(), 2024);
}

}  // namespace fixtures

#endif  // FAIRMETRICS_TESTS_FIXTURES_H_
