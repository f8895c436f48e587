// Copyright 2026 The concept-eval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file
/// Relation-level metrics: transition distance of a property from its domain
/// to its range, and selectional-preference inventories for judges.

#ifndef CONCEPT_EVAL_RELATIONAL_HPP
#define CONCEPT_EVAL_RELATIONAL_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "concept_eval/detail/text.hpp"
#include "concept_eval/embedding.hpp"
#include "concept_eval/error.hpp"
#include "concept_eval/kg.hpp"
#include "concept_eval/random.hpp"

namespace concept_eval {

struct TransitionResult {
  std::string property;
  std::string domain;
  std::string range;
  double score = 0.0;
  bool domain_equals_range = false;
};

/// cos(V_domain + V_property, V_range).
inline TransitionResult transition_distance(const EmbeddingTable& table, std::string_view property,
                                            std::string_view domain, std::string_view range) {
  const auto vd = table.at(domain);
  const auto vp = table.at(property);
  const auto vr = table.nonzero_at(range);
  Vector moved(vd.size());
  for (std::size_t i = 0; i < moved.size(); ++i) moved[i] = vd[i] + vp[i];
  if (norm(std::span<const double>(moved)) == 0.0) {
    throw Error(ErrorKind::kZeroNorm, "domain + property vector of '" + std::string(property) + "' is zero");
  }
  TransitionResult r;
  r.property = std::string(property);
  r.domain = std::string(domain);
  r.range = std::string(range);
  r.score = cosine(std::span<const double>(moved), vr);
  r.domain_equals_range = domain == range;
  return r;
}

/// One result per declared (domain, range) combination of the property.
inline std::vector<TransitionResult> transition_distance(const EmbeddingTable& table, const KnowledgeSlice& slice,
                                                         std::string_view property) {
  const auto& schema = slice.schema(property);
  std::vector<TransitionResult> out;
  for (const auto& d : schema.domains) {
    for (const auto& r : schema.ranges) out.push_back(transition_distance(table, property, d, r));
  }
  return out;
}

struct TransitionFailure {
  std::string property;
  std::string domain;  // empty when the failure is not pair-specific
  std::string range;
  std::string message;
};

struct TransitionTable {
  std::vector<TransitionResult> rows;
  std::vector<TransitionFailure> failures;
};

/// Batch form; failures are collected per property or per pair.
inline TransitionTable transition_table(const EmbeddingTable& table, const KnowledgeSlice& slice,
                                        std::span<const std::string> properties) {
  TransitionTable out;
  for (const auto& p : properties) {
    if (!slice.has_schema(p)) {
      out.failures.push_back({p, {}, {}, Error(ErrorKind::kMissingSchema,
                                              "property '" + p + "' lacks a declared domain and range").what()});
      continue;
    }
    const auto& schema = slice.schema(p);
    for (const auto& d : schema.domains) {
      for (const auto& r : schema.ranges) {
        try {
          out.rows.push_back(transition_distance(table, p, d, r));
        } catch (const Error& e) {
          out.failures.push_back({p, d, r, e.what()});
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Selectional preference
// ---------------------------------------------------------------------------

enum class Compatibility { kCompatible, kIncompatible };

inline std::string_view to_string(Compatibility c) {
  return c == Compatibility::kCompatible ? "compatible" : "incompatible";
}

struct PreferenceRow {
  std::string concept_id;
  std::string property;
  Compatibility label = Compatibility::kCompatible;

  friend bool operator==(const PreferenceRow&, const PreferenceRow&) = default;
};

/// Per property: its declared domains and ranges as compatible rows, plus
/// `negatives_per_property` concepts sampled from outside the domains,
/// ranges and all of their ancestors and descendants. Rows are shuffled so
/// the judge file does not reveal the key by position.
inline std::vector<PreferenceRow> selectional_preference_inventory(const KnowledgeSlice& slice,
                                                                   std::span<const std::string> properties,
                                                                   std::size_t negatives_per_property,
                                                                   std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PreferenceRow> rows;
  for (const auto& p : properties) {
    const auto& schema = slice.schema(p);
    std::set<std::string, std::less<>> excluded;
    std::set<std::string, std::less<>> positives;
    for (const auto* list : {&schema.domains, &schema.ranges}) {
      for (const auto& c : *list) {
        positives.insert(c);
        for (auto& a : slice.ancestors(c)) excluded.insert(std::move(a));
        for (auto& d : slice.descendants(c)) excluded.insert(std::move(d));
      }
    }
    for (const auto& c : positives) rows.push_back({c, p, Compatibility::kCompatible});
    std::vector<std::string> candidates;
    for (const auto& c : slice.concepts()) {
      if (!excluded.count(c)) candidates.push_back(c);
    }
    if (candidates.size() < negatives_per_property) {
      throw Error(ErrorKind::kInsufficientCandidates,
                  "property '" + p + "' has " + std::to_string(candidates.size()) + " negative candidates, " +
                      std::to_string(negatives_per_property) + " requested");
    }
    for (const auto i : rng.sample_indices(candidates.size(), negatives_per_property)) {
      rows.push_back({candidates[i], p, Compatibility::kIncompatible});
    }
  }
  rng.shuffle(rows);
  return rows;
}

/// Judge sheet (`concept TAB property TAB` with the third column blank) and
/// the answer key (`concept TAB property TAB label`), in the same order.
inline void write_preference_inventory(std::span<const PreferenceRow> rows, const std::filesystem::path& judge_path,
                                       const std::filesystem::path& key_path) {
  auto judge = detail::open_output(judge_path);
  auto key = detail::open_output(key_path);
  judge << "# concept\tproperty\tjudgment (compatible|incompatible)\n";
  key << "# concept\tproperty\tlabel\n";
  for (const auto& r : rows) {
    judge << r.concept_id << '\t' << r.property << "\t\n";
    key << r.concept_id << '\t' << r.property << '\t' << to_string(r.label) << '\n';
  }
  detail::finish_output(judge, judge_path);
  detail::finish_output(key, key_path);
}

namespace detail {
inline std::optional<Compatibility> parse_compatibility(std::string_view s) {
  const auto v = to_lower(trim(s));
  if (v == "compatible" || v == "yes" || v == "1" || v == "approve") return Compatibility::kCompatible;
  if (v == "incompatible" || v == "no" || v == "0" || v == "disapprove") return Compatibility::kIncompatible;
  return std::nullopt;
}

/// Rows of `concept TAB property TAB label`; blank labels are allowed when
/// `allow_blank` (unanswered judge rows) and come back as nullopt.
inline std::vector<std::pair<PreferenceRow, bool>> read_preference_rows(const std::filesystem::path& path,
                                                                        bool allow_blank) {
  std::vector<std::pair<PreferenceRow, bool>> out;
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  while (read_line(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() < 2 || fields.size() > 3) {
      throw Error(ErrorKind::kMalformedLine, "expected 'concept TAB property TAB label'", line_no);
    }
    PreferenceRow row{std::string(trim(fields[0])), std::string(trim(fields[1])), Compatibility::kCompatible};
    const std::string_view label = fields.size() == 3 ? trim(fields[2]) : std::string_view{};
    if (label.empty()) {
      if (!allow_blank) throw Error(ErrorKind::kMalformedLine, "missing label", line_no);
      out.emplace_back(std::move(row), false);
      continue;
    }
    const auto parsed = parse_compatibility(label);
    if (!parsed) throw Error(ErrorKind::kMalformedLine, "unknown label '" + std::string(label) + "'", line_no);
    row.label = *parsed;
    out.emplace_back(std::move(row), true);
  }
  return out;
}
}  // namespace detail

struct PreferenceScore {
  std::size_t answered = 0;
  std::size_t correct = 0;
  std::size_t unanswered = 0;
  std::size_t unmatched = 0;  // responses for pairs absent from the key

  double accuracy() const { return answered == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(answered); }
};

/// Accuracy of judge responses against the answer key.
inline PreferenceScore score_preference_responses(const std::filesystem::path& key_path,
                                                  const std::filesystem::path& responses_path) {
  std::map<std::pair<std::string, std::string>, Compatibility> key;
  for (const auto& [row, labeled] : detail::read_preference_rows(key_path, false)) {
    key[{row.concept_id, row.property}] = row.label;
  }
  PreferenceScore score;
  for (const auto& [row, labeled] : detail::read_preference_rows(responses_path, true)) {
    const auto it = key.find({row.concept_id, row.property});
    if (it == key.end()) {
      ++score.unmatched;
      continue;
    }
    if (!labeled) {
      ++score.unanswered;
      continue;
    }
    ++score.answered;
    if (it->second == row.label) ++score.correct;
  }
  return score;
}

}  // namespace concept_eval

#endif  // CONCEPT_EVAL_RELATIONAL_HPP
