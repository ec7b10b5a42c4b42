#include <cmath>

#include "fairmetrics/error.h"
#include "fairmetrics/rng.h"
#include "fairmetrics/trial_io.h"

namespace fairmetrics {

TrialSet GenerateSynthetic(const std::vector<SyntheticGroup>& groups,
                           std::uint64_t seed) {
  if (groups.empty()) throw InvalidArgument("no synthetic groups given");
  std::vector<TrialRecord> records;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const SyntheticGroup& spec = groups[g];
    if (!(spec.mated_sigma > 0.0) || !(spec.nonmated_sigma > 0.0)) {
      throw InvalidArgument("group '" + spec.name + "': sigma must be > 0");
    }
    if (spec.mated_count == 0 || spec.nonmated_count == 0) {
      throw InvalidArgument("group '" + spec.name + "': counts must be >= 1");
    }
    if (!std::isfinite(spec.mated_mean) || !std::isfinite(spec.nonmated_mean)) {
      throw InvalidArgument("group '" + spec.name + "': means must be finite");
    }
    Rng rng = Rng::Stream(seed, spec.seed_offset.value_or(g));
    for (std::size_t i = 0; i < spec.mated_count; ++i) {
      records.push_back({spec.name, Label::kMated,
                         rng.Normal(spec.mated_mean, spec.mated_sigma), {}, {}});
    }
    for (std::size_t i = 0; i < spec.nonmated_count; ++i) {
      records.push_back({spec.name, Label::kNonmated,
                         rng.Normal(spec.nonmated_mean, spec.nonmated_sigma),
                         {}, {}});
    }
  }
  return TrialSet::FromRecords(std::move(records));
}

}  // namespace fairmetrics
