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
/// Hierarchy-aware metrics: ontology similarity of concept pairs, the
/// absolute error between that similarity and the embedding cosine, and
/// correlation of embedding cosines with judged relatedness scores.

#ifndef CONCEPT_EVAL_HIERARCHY_HPP
#define CONCEPT_EVAL_HIERARCHY_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "concept_eval/correlation.hpp"
#include "concept_eval/detail/text.hpp"
#include "concept_eval/embedding.hpp"
#include "concept_eval/error.hpp"
#include "concept_eval/kg.hpp"

namespace concept_eval {

enum class SimilarityMethod { kWuPalmer, kInversePath };

inline std::string_view to_string(SimilarityMethod m) {
  return m == SimilarityMethod::kWuPalmer ? "wu_palmer" : "inverse_path";
}

inline SimilarityMethod parse_similarity_method(std::string_view s) {
  if (s == "wu_palmer" || s == "wu-palmer") return SimilarityMethod::kWuPalmer;
  if (s == "inverse_path" || s == "inverse-path") return SimilarityMethod::kInversePath;
  throw Error(ErrorKind::kInvalidArgument, "unknown similarity method '" + std::string(s) + "'");
}

/// Ontology similarity in [0, 1] with s(c, c) = 1.
///
/// wu_palmer:    2 depth(lca) / (depth(a) + depth(b)), roots at depth 1.
///               Capped at 1: in a DAG the deepest common ancestor can sit
///               below a node's shallowest path.
/// inverse_path: 1 / (1 + path_distance(a, b)).
inline double semantic_similarity(const KnowledgeSlice& slice, std::string_view a, std::string_view b,
                                  SimilarityMethod method = SimilarityMethod::kWuPalmer) {
  if (method == SimilarityMethod::kInversePath) {
    return 1.0 / (1.0 + static_cast<double>(path_distance(slice, a, b)));
  }
  const auto lca = lowest_common_ancestor(slice, a, b);
  const double num = 2.0 * static_cast<double>(slice.depth(lca));
  const double den = static_cast<double>(slice.depth(a) + slice.depth(b));
  return std::min(1.0, num / den);
}

/// |s'(a, b) - cos(V_a, V_b)|. Cosine is not rescaled, so the range is [0, 2].
inline double absolute_semantic_error(const EmbeddingTable& table, const KnowledgeSlice& slice, std::string_view a,
                                      std::string_view b, SimilarityMethod method = SimilarityMethod::kWuPalmer) {
  const auto va = table.nonzero_at(a);
  const auto vb = table.nonzero_at(b);
  const double ontology = semantic_similarity(slice, a, b, method);
  return std::abs(ontology - cosine(va, vb));
}

struct PairError {
  std::string a;
  std::string b;
  std::string message;
};

/// Symmetric matrix of absolute semantic errors. Failed pairs hold NaN and
/// are listed in `errors`; summary statistics cover the valid pairs above
/// the diagonal.
struct ErrorMatrix {
  std::vector<std::string> concepts;
  std::vector<double> values;  // row-major, concepts.size()^2
  std::vector<PairError> errors;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double max = std::numeric_limits<double>::quiet_NaN();
  std::size_t valid_pairs = 0;

  double at(std::size_t i, std::size_t j) const { return values[i * concepts.size() + j]; }
};

inline ErrorMatrix pairwise_error_matrix(const EmbeddingTable& table, const KnowledgeSlice& slice,
                                         std::span<const std::string> concepts,
                                         SimilarityMethod method = SimilarityMethod::kWuPalmer) {
  ErrorMatrix m;
  m.concepts.assign(concepts.begin(), concepts.end());
  const std::size_t n = concepts.size();
  m.values.assign(n * n, std::numeric_limits<double>::quiet_NaN());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double value;
      try {
        value = absolute_semantic_error(table, slice, concepts[i], concepts[j], method);
      } catch (const Error& e) {
        m.errors.push_back({concepts[i], concepts[j], e.what()});
        continue;
      }
      m.values[i * n + j] = value;
      m.values[j * n + i] = value;
      if (i != j) {
        sum += value;
        m.max = m.valid_pairs == 0 ? value : std::max(m.max, value);
        ++m.valid_pairs;
      }
    }
  }
  if (m.valid_pairs > 0) m.mean = sum / static_cast<double>(m.valid_pairs);
  return m;
}

/// CSV with concept identifiers as the header row and first column.
inline void write_error_matrix_csv(const ErrorMatrix& m, const std::filesystem::path& path) {
  const auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
  };
  auto out = detail::open_output(path);
  out << "concept";
  for (const auto& c : m.concepts) out << ',' << quote(c);
  out << '\n';
  for (std::size_t i = 0; i < m.concepts.size(); ++i) {
    out << quote(m.concepts[i]);
    for (std::size_t j = 0; j < m.concepts.size(); ++j) {
      const double v = m.at(i, j);
      out << ',' << (std::isnan(v) ? std::string() : detail::format_double(v));
    }
    out << '\n';
  }
  detail::finish_output(out, path);
}

// ---------------------------------------------------------------------------
// Judged relatedness
// ---------------------------------------------------------------------------

struct JudgeRow {
  std::string concept_a;
  std::string concept_b;
  double score = 0.0;
};

struct JudgeInventory {
  double scale_lo = 0.0;
  double scale_hi = 1.0;
  std::vector<JudgeRow> rows;
};

/// `concept_a TAB concept_b TAB score` rows preceded by a `# scale LO HI`
/// header line. Scores outside the declared scale are rejected.
inline JudgeInventory read_judgments(const std::filesystem::path& path, const PrefixMap& prefixes = {}) {
  JudgeInventory inv;
  bool have_scale = false;
  auto in = detail::open_input(path);
  std::string line;
  std::size_t line_no = 0;
  while (detail::read_line(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      const auto fields = detail::split_ws(body.substr(1));
      if (!fields.empty() && fields[0] == "scale") {
        const auto lo = fields.size() == 3 ? detail::parse_double(fields[1]) : std::nullopt;
        const auto hi = fields.size() == 3 ? detail::parse_double(fields[2]) : std::nullopt;
        if (!lo || !hi || !(*lo < *hi)) throw Error(ErrorKind::kMalformedHeader, "expected '# scale LO HI'", line_no);
        inv.scale_lo = *lo;
        inv.scale_hi = *hi;
        have_scale = true;
      }
      continue;
    }
    if (!have_scale) throw Error(ErrorKind::kMalformedHeader, "judgment rows before '# scale LO HI' header", line_no);
    const auto fields = detail::split(body, '\t');
    const auto score = fields.size() == 3 ? detail::parse_double(detail::trim(fields[2])) : std::nullopt;
    if (!score) throw Error(ErrorKind::kMalformedLine, "expected 'concept_a TAB concept_b TAB score'", line_no);
    if (!std::isfinite(*score)) throw Error(ErrorKind::kNonFinite, "non-finite judge score", line_no);
    if (*score < inv.scale_lo || *score > inv.scale_hi) {
      throw Error(ErrorKind::kOutOfScale, "score " + detail::format_double(*score) + " outside declared scale", line_no);
    }
    inv.rows.push_back({prefixes.expand(detail::trim(fields[0])), prefixes.expand(detail::trim(fields[1])), *score});
  }
  if (!have_scale) throw Error(ErrorKind::kMalformedHeader, "missing '# scale LO HI' header");
  return inv;
}

inline void write_judgments(const JudgeInventory& inv, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  out << "# scale " << detail::format_double(inv.scale_lo) << ' ' << detail::format_double(inv.scale_hi) << '\n';
  for (const auto& r : inv.rows) out << r.concept_a << '\t' << r.concept_b << '\t' << detail::format_double(r.score) << '\n';
  detail::finish_output(out, path);
}

struct RelatednessResult {
  CorrelationKind kind = CorrelationKind::kSpearman;
  double value = 0.0;
  std::size_t used = 0;
  std::vector<PairError> dropped;
};

/// Correlation between judge scores and embedding cosines. Pairs that
/// cannot be scored (missing or zero vectors) are dropped and reported.
inline RelatednessResult relatedness_correlation(const EmbeddingTable& table, const JudgeInventory& inventory,
                                                 CorrelationKind kind) {
  RelatednessResult r;
  r.kind = kind;
  std::vector<double> judged, cosines;
  for (const auto& row : inventory.rows) {
    try {
      const double c = cosine(table.nonzero_at(row.concept_a), table.nonzero_at(row.concept_b));
      cosines.push_back(c);
      judged.push_back(row.score);
    } catch (const Error& e) {
      r.dropped.push_back({row.concept_a, row.concept_b, e.what()});
    }
  }
  r.used = judged.size();
  if (r.used < 3) {
    throw Error(ErrorKind::kInsufficientCandidates, "only " + std::to_string(r.used) + " resolvable pairs (" +
                                            std::to_string(r.dropped.size()) + " dropped); need at least 3");
  }
  r.value = correlation(kind, judged, cosines);
  return r;
}

}  // namespace concept_eval

#endif  // CONCEPT_EVAL_HIERARCHY_HPP
