#include "fairmetrics/trial_io.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>

#include "fairmetrics/error.h"
#include "fairmetrics/rng.h"

namespace fairmetrics {

namespace {

// Floyd's algorithm: `count` distinct indices from [0, population), sorted.
std::vector<std::uint64_t> SampleWithoutReplacement(std::uint64_t population,
                                                    std::uint64_t count,
                                                    Rng& rng) {
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(count * 2);
  for (std::uint64_t j = population - count; j < population; ++j) {
    const std::uint64_t t = rng.Uniform(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

template <typename T>
std::vector<T> PickSubset(const std::vector<T>& items, std::size_t count,
                          Rng& rng) {
  if (items.size() == count) return items;
  std::vector<T> out;
  out.reserve(count);
  for (std::uint64_t i : SampleWithoutReplacement(items.size(), count, rng)) {
    out.push_back(items[i]);
  }
  return out;
}

std::string_view TrimView(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

void ProtocolSpec::Validate() const {
  if (groups.empty()) throw InvalidArgument("protocol needs at least one group");
  for (const auto& g : groups) {
    if (g.empty()) throw InvalidArgument("empty group label in protocol spec");
  }
  if (speakers_per_group < 1) {
    throw InvalidArgument("speakers_per_group must be >= 1");
  }
  if (utterances_per_speaker < 1) {
    throw InvalidArgument("utterances_per_speaker must be >= 1");
  }
  if (nonmated_per_group > cross_speaker_pairs()) {
    throw InvalidArgument(fmt::format(
        "nonmated_per_group {} exceeds the {} available cross-speaker pairs",
        nonmated_per_group, cross_speaker_pairs()));
  }
}

std::vector<ProtocolTrial> GenerateProtocol(const ProtocolSpec& spec,
                                            const Roster& roster) {
  spec.Validate();
  const std::size_t per_speaker = spec.utterances_per_speaker;
  std::vector<ProtocolTrial> trials;
  trials.reserve(spec.groups.size() *
                 (spec.mated_per_group() + spec.nonmated_per_group));

  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    const std::string& group = spec.groups[g];
    const auto group_it = roster.find(group);
    if (group_it == roster.end()) {
      throw InvalidArgument("roster has no group '" + group + "'");
    }
    const auto& speakers = group_it->second;
    if (speakers.size() < spec.speakers_per_group) {
      throw InvalidArgument(fmt::format(
          "group '{}' has {} speakers, {} required", group, speakers.size(),
          spec.speakers_per_group));
    }
    Rng rng = Rng::Stream(spec.seed, g);

    std::vector<std::string> speaker_names;
    for (const auto& [name, utterances] : speakers) speaker_names.push_back(name);
    speaker_names = PickSubset(speaker_names, spec.speakers_per_group, rng);

    // Flattened "<speaker>/<utterance>" ids, contiguous per speaker.
    std::vector<std::string> ids;
    ids.reserve(speaker_names.size() * per_speaker);
    for (const std::string& name : speaker_names) {
      const auto& utterances = speakers.at(name);
      if (utterances.size() < per_speaker) {
        throw InvalidArgument(fmt::format(
            "speaker '{}' in group '{}' has {} utterances, {} required", name,
            group, utterances.size(), per_speaker));
      }
      std::unordered_set<std::string> seen(utterances.begin(),
                                           utterances.end());
      if (seen.size() != utterances.size()) {
        throw InvalidArgument("duplicate utterance id for speaker '" + name +
                              "'");
      }
      for (const std::string& u : PickSubset(utterances, per_speaker, rng)) {
        ids.push_back(name + "/" + u);
      }
    }

    for (std::size_t s = 0; s < speaker_names.size(); ++s) {
      const std::size_t base = s * per_speaker;
      for (std::size_t i = 0; i < per_speaker; ++i) {
        for (std::size_t j = i + 1; j < per_speaker; ++j) {
          trials.push_back(
              {group, Label::kMated, ids[base + i], ids[base + j]});
        }
      }
    }

    // Cross-speaker pairs (a, b), a < b, enumerated row by row; row a pairs
    // with every utterance of a later speaker.
    const auto picks = SampleWithoutReplacement(
        spec.cross_speaker_pairs(), spec.nonmated_per_group, rng);
    auto pick = picks.begin();
    std::uint64_t row_start = 0;
    for (std::size_t a = 0; a < ids.size() && pick != picks.end(); ++a) {
      const std::size_t first_partner = (a / per_speaker + 1) * per_speaker;
      const std::uint64_t row_len = ids.size() - first_partner;
      while (pick != picks.end() && *pick < row_start + row_len) {
        trials.push_back({group, Label::kNonmated, ids[a],
                          ids[first_partner + (*pick - row_start)]});
        ++pick;
      }
      row_start += row_len;
    }
  }
  return trials;
}

Roster ParseRoster(std::istream& in) {
  Roster roster;
  std::string line;
  std::size_t line_number = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view view = TrimView(line);
    if (view.empty() || view.front() == '#') continue;
    const char d = view.find('\t') != std::string_view::npos ? '\t' : ',';
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = view.find(d, start);
      fields.push_back(TrimView(view.substr(start, pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    if (fields.size() != 3) {
      throw ParseError(line_number, fmt::format("expected 3 fields, found {}",
                                                fields.size()));
    }
    if (first && fields[0] == "group" && fields[1] == "speaker") {
      first = false;
      continue;
    }
    first = false;
    if (fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      throw ParseError(line_number, "empty roster field");
    }
    roster[std::string(fields[0])][std::string(fields[1])].emplace_back(
        fields[2]);
  }
  return roster;
}

Roster MakeSyntheticRoster(const ProtocolSpec& spec) {
  Roster roster;
  for (const std::string& group : spec.groups) {
    auto& speakers = roster[group];
    for (std::size_t s = 0; s < spec.speakers_per_group; ++s) {
      auto& utterances = speakers[fmt::format("{}_s{:03}", group, s)];
      for (std::size_t u = 0; u < spec.utterances_per_speaker; ++u) {
        utterances.push_back(fmt::format("u{:03}", u));
      }
    }
  }
  return roster;
}

void WriteProtocol(std::ostream& out, const ProtocolSpec& spec,
                   const std::vector<ProtocolTrial>& trials) {
  out << "# fairmetrics protocol " << FAIRMETRICS_VERSION << '\n'
      << "# prng: " << Rng::kAlgorithm << '\n'
      << "# seed: " << spec.seed << '\n'
      << "# speakers_per_group: " << spec.speakers_per_group << '\n'
      << "# utterances_per_speaker: " << spec.utterances_per_speaker << '\n'
      << "# nonmated_per_group: " << spec.nonmated_per_group << '\n';
  for (const ProtocolTrial& t : trials) {
    out << t.group << ',' << LabelName(t.label) << ',' << t.enrol_id << ','
        << t.test_id << '\n';
  }
}

}  // namespace fairmetrics
