#ifndef FAIRMETRICS_TRIAL_IO_H_
#define FAIRMETRICS_TRIAL_IO_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairmetrics {

enum class Label { kMated, kNonmated };

// Orientation of the raw scores in a file. Distance scores are negated on
// ingest so everything downstream sees "higher = more similar".
enum class Polarity { kSimilarity, kDistance };

std::string_view LabelName(Label label);
std::optional<Label> ParseLabel(std::string_view token);  // case-insensitive
std::string_view PolarityName(Polarity polarity);
std::optional<Polarity> ParsePolarity(std::string_view token);

struct TrialRecord {
  std::string group;
  Label label = Label::kMated;
  double score = 0.0;  // similarity orientation once inside a TrialSet
  std::string enrol_id;
  std::string test_id;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

// Validated collection of trials. Invariants, checked at construction:
// finite scores, non-empty group labels, and at least one mated and one
// nonmated trial in every group.
class TrialSet {
 public:
  // Validates the records and negates scores when `source` is kDistance.
  // Throws ParseError (line 0) on a violated invariant.
  static TrialSet FromRecords(std::vector<TrialRecord> records,
                              Polarity source = Polarity::kSimilarity);

  const std::vector<TrialRecord>& records() const { return records_; }
  // Distinct group labels in order of first appearance.
  const std::vector<std::string>& groups() const { return groups_; }
  // Polarity of the data as it was ingested; stored scores are similarities.
  Polarity source_polarity() const { return source_polarity_; }

  std::size_t size() const { return records_.size(); }
  std::size_t mated_count() const { return mated_count_; }
  std::size_t nonmated_count() const { return records_.size() - mated_count_; }

  friend bool operator==(const TrialSet& a, const TrialSet& b) {
    return a.records_ == b.records_;
  }

 private:
  TrialSet() = default;

  std::vector<TrialRecord> records_;
  std::vector<std::string> groups_;
  Polarity source_polarity_ = Polarity::kSimilarity;
  std::size_t mated_count_ = 0;
};

// Reads `group,label,score[,enrol_id,test_id]` lines. The delimiter (tab or
// comma) is sniffed from the first data line; an optional header line and
// '#' comment lines are skipped. Errors carry the 1-based line number.
TrialSet ParseScores(std::istream& in, Polarity polarity);
TrialSet ParseScores(std::string_view text, Polarity polarity);

// Writes the score file format with round-trip precision. Id columns are
// emitted only when some record carries an id.
void WriteScores(std::ostream& out, const TrialSet& trials);

// --- Balanced protocol generation -------------------------------------------

struct ProtocolSpec {
  std::vector<std::string> groups;
  std::size_t speakers_per_group = 1;
  std::size_t utterances_per_speaker = 2;
  std::size_t nonmated_per_group = 0;
  std::uint64_t seed = 0;

  // Throws InvalidArgument unless every group label is non-empty and the
  // speaker and utterance counts are >= 1.
  void Validate() const;

  std::size_t mated_per_group() const {
    return speakers_per_group * utterances_per_speaker *
           (utterances_per_speaker - 1) / 2;
  }
  // Pairs of utterances from different speakers within one group.
  std::size_t cross_speaker_pairs() const {
    const std::size_t total = speakers_per_group * utterances_per_speaker;
    return total * (total - 1) / 2 - mated_per_group();
  }
};

// group -> speaker -> utterance ids.
using Roster =
    std::map<std::string, std::map<std::string, std::vector<std::string>>>;

struct ProtocolTrial {
  std::string group;
  Label label = Label::kMated;
  std::string enrol_id;
  std::string test_id;

  friend bool operator==(const ProtocolTrial&, const ProtocolTrial&) = default;
  friend auto operator<=>(const ProtocolTrial&, const ProtocolTrial&) = default;
};

// Per group: picks speakers_per_group speakers and utterances_per_speaker
// utterances per speaker (uniformly, when the roster has more), emits every
// within-speaker pair as mated and samples nonmated_per_group cross-speaker
// pairs uniformly without replacement. Deterministic under spec.seed.
// Trial ids are "<speaker>/<utterance>".
std::vector<ProtocolTrial> GenerateProtocol(const ProtocolSpec& spec,
                                            const Roster& roster);

// Reads `group,speaker,utterance` lines (header and '#' comments skipped).
Roster ParseRoster(std::istream& in);

// Roster with synthetic ids: group g<i>, speaker g<i>s<j>, utterance u<k>.
Roster MakeSyntheticRoster(const ProtocolSpec& spec);

// `group,label,enrol_id,test_id` lines, preceded by '#' metadata lines.
void WriteProtocol(std::ostream& out, const ProtocolSpec& spec,
                   const std::vector<ProtocolTrial>& trials);

// --- Synthetic scores ------------------------------------------------------

struct SyntheticGroup {
  std::string name;
  double mated_mean = 1.0;
  double mated_sigma = 1.0;
  double nonmated_mean = -1.0;
  double nonmated_sigma = 1.0;
  std::size_t mated_count = 1;
  std::size_t nonmated_count = 1;
  // Random stream for this group; defaults to the group's index. Two groups
  // with equal parameters and equal offsets receive identical scores.
  std::optional<std::uint64_t> seed_offset;
};

// Gaussian similarity scores per group and label. Throws InvalidArgument on
// non-positive sigma or zero counts.
TrialSet GenerateSynthetic(const std::vector<SyntheticGroup>& groups,
                           std::uint64_t seed);

}  // namespace fairmetrics

#endif  // FAIRMETRICS_TRIAL_IO_H_
