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
/// Categorization and coherence of concept embeddings against the entities
/// they type.
///
/// Categorization compares a concept vector with the mean vector of its
/// instances. Coherence mixes a fixed-size sample of entities from several
/// concepts into one pool and asks what fraction of a concept's nearest
/// pooled entities carry that concept as their background concept.

#ifndef CONCEPT_EVAL_CATEGORIZATION_HPP
#define CONCEPT_EVAL_CATEGORIZATION_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "concept_eval/detail/text.hpp"
#include "concept_eval/embedding.hpp"
#include "concept_eval/error.hpp"
#include "concept_eval/kg.hpp"
#include "concept_eval/random.hpp"

namespace concept_eval {

struct AveragedVector {
  Vector mean;
  std::size_t used = 0;
  std::size_t skipped_oov = 0;
};

/// Component-wise mean over the entities present in `table`; absent ones are
/// counted, not silently dropped.
inline AveragedVector averaged_entity_vector(const EmbeddingTable& table, std::span<const std::string> entities) {
  RowAccumulator acc(table.dimension());
  AveragedVector out;
  for (const auto& e : entities) {
    const auto i = table.find(e);
    if (!i) {
      ++out.skipped_oov;
      continue;
    }
    acc.add(table.row(*i));
  }
  out.used = acc.count();
  if (out.used == 0) {
    throw Error(ErrorKind::kNoEntities, "none of " + std::to_string(entities.size()) + " entities has an embedding");
  }
  out.mean = acc.mean();
  return out;
}

struct CategorizationResult {
  std::string concept_id;
  double score = 0.0;
  std::size_t n_entities_used = 0;
  std::size_t n_entities_skipped_oov = 0;
};

/// Cosine between the concept vector and the mean of its typed entities.
inline CategorizationResult categorization(const EmbeddingTable& table, const KnowledgeSlice& slice,
                                           std::string_view concept_id, TypingMode mode = TypingMode::kDirect) {
  const auto concept_vec = table.nonzero_at(concept_id);
  const auto entities = entities_of(slice, concept_id, mode);
  if (entities.empty()) {
    throw Error(ErrorKind::kNoEntities, "concept '" + std::string(concept_id) + "' types no entities");
  }
  const auto avg = averaged_entity_vector(table, entities);
  if (norm(std::span<const double>(avg.mean)) == 0.0) {
    throw Error(ErrorKind::kZeroNorm, "mean entity vector of '" + std::string(concept_id) + "' is zero");
  }
  CategorizationResult r;
  r.concept_id = std::string(concept_id);
  r.score = cosine(std::span<const double>(avg.mean), concept_vec);
  r.n_entities_used = avg.used;
  r.n_entities_skipped_oov = avg.skipped_oov;
  return r;
}

// ---------------------------------------------------------------------------
// Entity pools
// ---------------------------------------------------------------------------

struct PoolMember {
  std::string entity;
  std::string concept_id;  // assigned background concept
};

struct PoolBatch {
  std::string concept_id;
  std::size_t available = 0;  // embeddable candidates before cross-batch exclusion
  std::size_t taken = 0;
};

/// Labeled mixed sample of entities; members are unique by entity.
struct EntityPool {
  std::vector<PoolMember> members;
  std::size_t batch_size = 20;
  std::uint64_t seed = 0;
  std::vector<PoolBatch> batches;

  std::size_t size() const { return members.size(); }
};

/// An entity is embeddable when it has a vector of nonzero norm.
inline bool embeddable(const EmbeddingTable& table, std::string_view id) {
  const auto i = table.find(id);
  return i && norm(table.row(*i)) > 0.0;
}

/// Samples up to `batch_size` embeddable entities per concept, in concept
/// order, without replacement, from one generator seeded with `seed`. An
/// entity already taken by an earlier concept is excluded from later ones.
inline EntityPool build_pool(const KnowledgeSlice& slice, const EmbeddingTable& table,
                             std::span<const std::string> concepts, std::size_t batch_size, std::uint64_t seed,
                             TypingMode mode = TypingMode::kDirect) {
  if (batch_size == 0) throw Error(ErrorKind::kInvalidArgument, "batch size must be positive");
  EntityPool pool;
  pool.batch_size = batch_size;
  pool.seed = seed;
  Rng rng(seed);
  std::set<std::string, std::less<>> taken;
  for (const auto& c : concepts) {
    std::vector<std::string> candidates;
    for (auto& e : entities_of(slice, c, mode)) {
      if (embeddable(table, e)) candidates.push_back(std::move(e));
    }
    if (candidates.empty()) {
      throw Error(ErrorKind::kNoEntities, "concept '" + c + "' has no embeddable entities");
    }
    PoolBatch batch{c, candidates.size(), 0};
    std::erase_if(candidates, [&](const std::string& e) { return taken.count(e) != 0; });
    for (const auto i : rng.sample_indices(candidates.size(), batch_size)) {
      taken.insert(candidates[i]);
      pool.members.push_back({candidates[i], c});
      ++batch.taken;
    }
    pool.batches.push_back(std::move(batch));
  }
  return pool;
}

/// TSV with `# seed=S batch_size=B` header and `entity TAB concept` rows.
inline void write_pool(const EntityPool& pool, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  out << "# seed=" << pool.seed << " batch_size=" << pool.batch_size << '\n';
  for (const auto& m : pool.members) out << m.entity << '\t' << m.concept_id << '\n';
  detail::finish_output(out, path);
}

inline EntityPool read_pool(const std::filesystem::path& path) {
  EntityPool pool;
  auto in = detail::open_input(path);
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string, std::less<>> seen;
  while (detail::read_line(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      for (const auto field : detail::split_ws(body.substr(1))) {
        const auto eq = field.find('=');
        if (eq == std::string_view::npos) continue;
        const auto key = field.substr(0, eq);
        const auto value = field.substr(eq + 1);
        if (key == "seed") {
          const auto v = detail::parse_int<std::uint64_t>(value);
          if (!v) throw Error(ErrorKind::kMalformedHeader, "bad seed in pool header", line_no);
          pool.seed = *v;
        } else if (key == "batch_size") {
          const auto v = detail::parse_int<std::size_t>(value);
          if (!v || *v == 0) throw Error(ErrorKind::kMalformedHeader, "bad batch_size in pool header", line_no);
          pool.batch_size = *v;
        }
      }
      continue;
    }
    const auto fields = detail::split(body, '\t');
    if (fields.size() != 2) throw Error(ErrorKind::kMalformedLine, "expected 'entity TAB concept'", line_no);
    std::string entity(detail::trim(fields[0]));
    if (!seen.insert(entity).second) {
      throw Error(ErrorKind::kDuplicateIdentifier, "entity '" + entity + "' appears twice in pool", line_no);
    }
    pool.members.push_back({std::move(entity), std::string(detail::trim(fields[1]))});
  }
  return pool;
}

// ---------------------------------------------------------------------------
// Nearest pooled entities and coherence
// ---------------------------------------------------------------------------

struct ScoredEntity {
  std::string entity;
  double similarity = 0.0;
};

/// The k pool members most cosine-similar to the concept, descending, ties
/// broken by ascending identifier. k larger than the pool returns the pool.
inline std::vector<ScoredEntity> top_k_entities(const EmbeddingTable& table, const EntityPool& pool,
                                                std::string_view concept_id, std::size_t k) {
  if (k == 0) throw Error(ErrorKind::kInvalidArgument, "k must be at least 1");
  const auto concept_vec = table.nonzero_at(concept_id);
  std::vector<ScoredEntity> scored;
  scored.reserve(pool.size());
  for (const auto& m : pool.members) {
    scored.push_back({m.entity, cosine(table.nonzero_at(m.entity), concept_vec)});
  }
  const auto before = [](const ScoredEntity& a, const ScoredEntity& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.entity < b.entity;
  };
  k = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(), before);
  scored.resize(k);
  return scored;
}

/// How a neighbor counts as a hit: its pool-assigned background concept
/// equals the query (strict), or its typing contains the query (any-type).
enum class CoherenceMatch { kStrictLabel, kAnyType };

inline std::string_view to_string(CoherenceMatch m) {
  return m == CoherenceMatch::kStrictLabel ? "strict_label" : "any_type";
}

inline CoherenceMatch parse_coherence_match(std::string_view s) {
  if (s == "strict" || s == "strict_label") return CoherenceMatch::kStrictLabel;
  if (s == "any" || s == "any_type") return CoherenceMatch::kAnyType;
  throw Error(ErrorKind::kInvalidArgument, "unknown coherence match mode '" + std::string(s) + "'");
}

struct CoherenceResult {
  std::string concept_id;
  double score = 0.0;
  std::size_t hits = 0;
  std::size_t radius = 0;           // requested n
  std::size_t effective_radius = 0; // min(n, pool size)
  std::vector<ScoredEntity> neighbors;

  bool clamped() const { return effective_radius < radius; }
};

inline CoherenceResult coherence(const EmbeddingTable& table, const KnowledgeSlice& slice, const EntityPool& pool,
                                 std::string_view concept_id, std::size_t n,
                                 CoherenceMatch match = CoherenceMatch::kStrictLabel,
                                 TypingMode typing = TypingMode::kDirect) {
  if (pool.members.empty()) throw Error(ErrorKind::kNoEntities, "empty entity pool");
  CoherenceResult r;
  r.concept_id = std::string(concept_id);
  r.radius = n;
  r.neighbors = top_k_entities(table, pool, concept_id, n);
  r.effective_radius = r.neighbors.size();

  std::set<std::string, std::less<>> typed;
  std::map<std::string, std::string, std::less<>> label;
  if (match == CoherenceMatch::kAnyType) {
    const auto members = entities_of(slice, concept_id, typing);
    typed.insert(members.begin(), members.end());
  } else {
    for (const auto& m : pool.members) label.emplace(m.entity, m.concept_id);
  }
  for (const auto& nb : r.neighbors) {
    const bool hit = match == CoherenceMatch::kAnyType ? typed.count(nb.entity) != 0
                                                       : label.at(nb.entity) == concept_id;
    if (hit) ++r.hits;
  }
  r.score = static_cast<double>(r.hits) / static_cast<double>(r.effective_radius);
  return r;
}

}  // namespace concept_eval

#endif  // CONCEPT_EVAL_CATEGORIZATION_HPP
