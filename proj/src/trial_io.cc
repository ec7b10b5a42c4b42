#include "fairmetrics/trial_io.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "fairmetrics/error.h"

namespace fairmetrics {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> Split(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(Trim(line.substr(start)));
      break;
    }
    fields.push_back(Trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

// Full-token decimal parse; accepts nan/inf spellings so the caller can
// report them as non-finite rather than malformed.
std::optional<double> ParseReal(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() ||
      token.empty()) {
    return std::nullopt;
  }
  return value;
}

bool IsSkippable(std::string_view line) {
  line = Trim(line);
  return line.empty() || line.front() == '#';
}

}  // namespace

std::string_view LabelName(Label label) {
  return label == Label::kMated ? "mated" : "nonmated";
}

std::optional<Label> ParseLabel(std::string_view token) {
  if (EqualsIgnoreCase(token, "mated")) return Label::kMated;
  if (EqualsIgnoreCase(token, "nonmated")) return Label::kNonmated;
  return std::nullopt;
}

std::string_view PolarityName(Polarity polarity) {
  return polarity == Polarity::kSimilarity ? "similarity" : "distance";
}

std::optional<Polarity> ParsePolarity(std::string_view token) {
  if (EqualsIgnoreCase(token, "similarity")) return Polarity::kSimilarity;
  if (EqualsIgnoreCase(token, "distance")) return Polarity::kDistance;
  return std::nullopt;
}

TrialSet TrialSet::FromRecords(std::vector<TrialRecord> records,
                               Polarity source) {
  TrialSet set;
  set.source_polarity_ = source;
  struct Counts {
    std::size_t mated = 0;
    std::size_t nonmated = 0;
  };
  std::unordered_map<std::string, Counts> counts;
  for (TrialRecord& record : records) {
    if (record.group.empty()) {
      throw ParseError(0, "empty group label");
    }
    if (!std::isfinite(record.score)) {
      throw ParseError(0, "non-finite score in group '" + record.group + "'");
    }
    if (source == Polarity::kDistance) record.score = -record.score;
    auto [it, inserted] = counts.try_emplace(record.group);
    if (inserted) set.groups_.push_back(record.group);
    if (record.label == Label::kMated) {
      ++it->second.mated;
      ++set.mated_count_;
    } else {
      ++it->second.nonmated;
    }
  }
  if (records.empty()) {
    throw ParseError(0, "no trials");
  }
  for (const std::string& group : set.groups_) {
    const Counts& c = counts.at(group);
    if (c.mated == 0) {
      throw ParseError(0, "group '" + group + "' has no mated trials");
    }
    if (c.nonmated == 0) {
      throw ParseError(0, "group '" + group + "' has no nonmated trials");
    }
  }
  set.records_ = std::move(records);
  return set;
}

TrialSet ParseScores(std::istream& in, Polarity polarity) {
  std::vector<TrialRecord> records;
  std::string line;
  std::size_t line_number = 0;
  std::optional<char> delimiter;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsSkippable(line)) continue;
    const bool first_data_line = !delimiter.has_value();
    if (first_data_line) {
      delimiter = line.find('\t') != std::string::npos ? '\t' : ',';
    }
    const auto fields = Split(line, *delimiter);
    if (fields.size() != 3 && fields.size() != 5) {
      throw ParseError(line_number,
                       fmt::format("expected 3 or 5 fields, found {}",
                                   fields.size()));
    }
    const auto label = ParseLabel(fields[1]);
    const auto score = ParseReal(fields[2]);
    if (first_data_line && !label && !score) continue;  // header
    if (fields[0].empty()) {
      throw ParseError(line_number, "empty group label");
    }
    if (!label) {
      throw ParseError(line_number,
                       fmt::format("unknown label '{}'", fields[1]));
    }
    if (!score) {
      throw ParseError(line_number,
                       fmt::format("malformed score '{}'", fields[2]));
    }
    if (!std::isfinite(*score)) {
      throw ParseError(line_number,
                       fmt::format("non-finite score '{}'", fields[2]));
    }
    TrialRecord record{std::string(fields[0]), *label, *score, {}, {}};
    if (fields.size() == 5) {
      record.enrol_id = std::string(fields[3]);
      record.test_id = std::string(fields[4]);
    }
    records.push_back(std::move(record));
  }
  if (in.bad()) throw Error("read error on score stream");
  return TrialSet::FromRecords(std::move(records), polarity);
}

TrialSet ParseScores(std::string_view text, Polarity polarity) {
  std::istringstream in{std::string(text)};
  return ParseScores(in, polarity);
}

void WriteScores(std::ostream& out, const TrialSet& trials) {
  const auto& records = trials.records();
  const bool with_ids = std::any_of(
      records.begin(), records.end(), [](const TrialRecord& r) {
        return !r.enrol_id.empty() || !r.test_id.empty();
      });
  const bool needs_tab = std::any_of(
      records.begin(), records.end(), [](const TrialRecord& r) {
        return r.group.find(',') != std::string::npos ||
               r.enrol_id.find(',') != std::string::npos ||
               r.test_id.find(',') != std::string::npos;
      });
  const char d = needs_tab ? '\t' : ',';
  for (const TrialRecord& r : records) {
    out << r.group << d << LabelName(r.label) << d
        << fmt::format("{}", r.score);
    if (with_ids) out << d << r.enrol_id << d << r.test_id;
    out << '\n';
  }
}

}  // namespace fairmetrics
