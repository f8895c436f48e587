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
/// Seeded synthetic knowledge graphs with planted embedding structure.
///
/// Concept vectors are uniform on the unit sphere; each entity is its
/// concept's vector plus isotropic Gaussian noise and is left unnormalized.
/// Translational properties get a random vector and a dedicated range
/// concept whose vector is exactly domain + property.

#ifndef CONCEPT_EVAL_FIXTURES_HPP
#define CONCEPT_EVAL_FIXTURES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "concept_eval/detail/text.hpp"
#include "concept_eval/embedding.hpp"
#include "concept_eval/error.hpp"
#include "concept_eval/hierarchy.hpp"
#include "concept_eval/kg.hpp"
#include "concept_eval/random.hpp"
#include "concept_eval/relational.hpp"

namespace concept_eval {

struct HierarchyShape {
  enum class Kind { kChain, kBalancedTree };
  Kind kind = Kind::kChain;
  std::size_t branching = 2;  // balanced tree only
  std::size_t depth = 3;      // balanced tree levels, root level counted

  static HierarchyShape chain() { return {}; }
  static HierarchyShape balanced_tree(std::size_t branching, std::size_t depth) {
    return {Kind::kBalancedTree, branching, depth};
  }

  /// Number of concepts the shape holds; chains take it from the spec.
  std::size_t tree_size() const {
    std::size_t total = 0, level = 1;
    for (std::size_t d = 0; d < depth; ++d) {
      total += level;
      level *= branching;
    }
    return total;
  }
};

struct FixtureSpec {
  std::size_t n_concepts = 10;  // 0 with a balanced tree: use the tree size
  std::size_t entities_per_concept = 20;
  std::size_t dimension = 16;
  double noise_sigma = 0.01;
  HierarchyShape hierarchy;
  std::size_t translational_properties = 0;
  std::uint64_t seed = 1;
};

/// Everything planted in a fixture, for oracle comparisons.
struct AnswerKey {
  std::vector<std::string> concepts;  // clustered concepts, generation order
  std::vector<std::string> properties;
  std::map<std::string, std::string> entity_concept;
  std::map<std::string, double> categorization;               // cos(mean of members, concept)
  std::map<std::string, std::vector<std::string>> nearest;    // planted members, sorted
  std::vector<TransitionResult> transitions;                  // planted Tr = 1 rows
};

struct Fixture {
  FixtureSpec spec;
  EmbeddingTable table{1};
  KnowledgeSlice slice;
  AnswerKey key;
  std::vector<std::pair<std::string, std::string>> typing;    // entity, concept
  std::vector<std::pair<std::string, std::string>> subclass;  // child, parent
  std::vector<std::array<std::string, 3>> schema;             // property, domain, range
};

namespace detail {
inline std::string padded(std::string_view stem, std::size_t i, std::size_t count) {
  std::size_t width = 1;
  for (std::size_t n = count > 0 ? count - 1 : 0; n >= 10; n /= 10) ++width;
  std::string digits = std::to_string(i);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return std::string(stem) + digits;
}

inline Vector random_unit(Rng& rng, std::size_t dim) {
  Vector v(dim);
  double len = 0.0;
  while (len == 0.0) {
    for (auto& x : v) x = rng.normal();
    len = norm(std::span<const double>(v));
  }
  for (auto& x : v) x /= len;
  return v;
}
}  // namespace detail

inline void validate(const FixtureSpec& spec) {
  const auto fail = [](const std::string& m) { throw Error(ErrorKind::kInvalidArgument, "fixture spec: " + m); };
  if (spec.dimension == 0) fail("dimension must be positive");
  if (spec.entities_per_concept == 0) fail("entities_per_concept must be positive");
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) fail("noise_sigma must be finite and >= 0");
  if (spec.hierarchy.kind == HierarchyShape::Kind::kChain) {
    if (spec.n_concepts == 0) fail("a chain needs n_concepts >= 1");
  } else {
    if (spec.hierarchy.depth == 0) fail("balanced tree depth must be >= 1");
    if (spec.hierarchy.branching == 0) fail("balanced tree branching must be >= 1");
    if (spec.hierarchy.tree_size() > 100000) fail("balanced tree is too large");
    if (spec.n_concepts != 0 && spec.n_concepts != spec.hierarchy.tree_size()) {
      fail("n_concepts " + std::to_string(spec.n_concepts) + " does not match the balanced tree size " +
           std::to_string(spec.hierarchy.tree_size()));
    }
  }
}

inline Fixture generate(const FixtureSpec& spec) {
  validate(spec);
  Fixture fx;
  fx.spec = spec;
  const bool tree = spec.hierarchy.kind == HierarchyShape::Kind::kBalancedTree;
  const std::size_t n = tree ? spec.hierarchy.tree_size() : spec.n_concepts;
  fx.spec.n_concepts = n;
  Rng rng(spec.seed);
  EmbeddingTable table(spec.dimension);
  KnowledgeSliceBuilder builder;

  std::vector<Vector> concept_vecs;
  for (std::size_t c = 0; c < n; ++c) {
    fx.key.concepts.push_back(detail::padded("fx:C", c, n));
    concept_vecs.push_back(detail::random_unit(rng, spec.dimension));
  }
  for (std::size_t c = 0; c < n; ++c) {
    const auto& id = fx.key.concepts[c];
    builder.add_concept(id);
    table.add(id, concept_vecs[c]);
    if (c > 0) {
      const std::size_t parent = tree ? (c - 1) / spec.hierarchy.branching : c - 1;
      fx.subclass.emplace_back(id, fx.key.concepts[parent]);
    }
  }

  for (std::size_t c = 0; c < n; ++c) {
    const auto& cid = fx.key.concepts[c];
    RowAccumulator acc(spec.dimension);
    auto& members = fx.key.nearest[cid];
    for (std::size_t e = 0; e < spec.entities_per_concept; ++e) {
      const std::string eid = cid + detail::padded("_e", e, spec.entities_per_concept);
      Vector v = concept_vecs[c];
      for (auto& x : v) x += spec.noise_sigma * rng.normal();
      table.add(eid, v);
      acc.add(v);
      fx.typing.emplace_back(eid, cid);
      fx.key.entity_concept[eid] = cid;
      members.push_back(eid);
    }
    std::sort(members.begin(), members.end());
    const Vector mean = acc.mean();
    fx.key.categorization[cid] = cosine(mean, concept_vecs[c]);
  }

  for (std::size_t k = 0; k < spec.translational_properties; ++k) {
    const std::size_t domain = static_cast<std::size_t>(rng.uniform_index(n));
    const std::string pid = detail::padded("fx:p", k, spec.translational_properties);
    const std::string rid = detail::padded("fx:R", k, spec.translational_properties);
    Vector pv(spec.dimension);
    for (auto& x : pv) x = rng.normal();
    Vector rv(spec.dimension);
    for (std::size_t i = 0; i < rv.size(); ++i) rv[i] = concept_vecs[domain][i] + pv[i];
    table.add(pid, pv);
    table.add(rid, rv);
    fx.subclass.emplace_back(rid, fx.key.concepts[0]);
    fx.schema.push_back({pid, fx.key.concepts[domain], rid});
    fx.key.properties.push_back(pid);
    fx.key.transitions.push_back({pid, fx.key.concepts[domain], rid, 1.0, false});
  }

  for (const auto& [e, c] : fx.typing) builder.add_typing(e, c);
  for (const auto& [child, parent] : fx.subclass) builder.add_subclass(child, parent);
  for (const auto& [p, d, r] : fx.schema) {
    builder.add_domain(p, d);
    builder.add_range(p, r);
  }
  table.meta().format = "fixture";
  fx.table = std::move(table);
  fx.slice = builder.finalize();
  return fx;
}

// ---------------------------------------------------------------------------
// JSON and on-disk layout
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const FixtureSpec& spec) {
  nlohmann::json h;
  if (spec.hierarchy.kind == HierarchyShape::Kind::kChain) {
    h = {{"shape", "chain"}};
  } else {
    h = {{"shape", "balanced_tree"}, {"branching", spec.hierarchy.branching}, {"depth", spec.hierarchy.depth}};
  }
  return {{"n_concepts", spec.n_concepts},
          {"entities_per_concept", spec.entities_per_concept},
          {"dimension", spec.dimension},
          {"noise_sigma", spec.noise_sigma},
          {"hierarchy", h},
          {"translational_properties", spec.translational_properties},
          {"seed", spec.seed}};
}

inline FixtureSpec fixture_spec_from_json(const nlohmann::json& j) {
  FixtureSpec spec;
  try {
    spec.n_concepts = j.value("n_concepts", spec.n_concepts);
    spec.entities_per_concept = j.value("entities_per_concept", spec.entities_per_concept);
    spec.dimension = j.value("dimension", spec.dimension);
    spec.noise_sigma = j.value("noise_sigma", spec.noise_sigma);
    spec.translational_properties = j.value("translational_properties", spec.translational_properties);
    spec.seed = j.value("seed", spec.seed);
    if (j.contains("hierarchy")) {
      const auto& h = j.at("hierarchy");
      const std::string shape = h.is_string() ? h.get<std::string>() : h.value("shape", std::string("chain"));
      if (shape == "chain") {
        spec.hierarchy = HierarchyShape::chain();
      } else if (shape == "balanced_tree") {
        spec.hierarchy = HierarchyShape::balanced_tree(h.value("branching", std::size_t{2}), h.value("depth", std::size_t{3}));
      } else {
        throw Error(ErrorKind::kInvalidArgument, "unknown hierarchy shape '" + shape + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, std::string("fixture spec: ") + e.what());
  }
  validate(spec);
  return spec;
}

inline FixtureSpec read_fixture_spec(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(detail::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kMalformedLine, "fixture spec '" + path.string() + "': " + e.what());
  }
  return fixture_spec_from_json(j);
}

inline nlohmann::json to_json(const AnswerKey& key) {
  nlohmann::json transitions = nlohmann::json::array();
  for (const auto& t : key.transitions) {
    transitions.push_back({{"property", t.property}, {"domain", t.domain}, {"range", t.range}, {"score", t.score}});
  }
  return {{"concepts", key.concepts},
          {"properties", key.properties},
          {"entity_concept", key.entity_concept},
          {"categorization", key.categorization},
          {"nearest", key.nearest},
          {"transitions", transitions}};
}

/// File names written by write_fixture().
struct FixtureLayout {
  static constexpr const char* kEmbeddingsText = "embeddings.txt";
  static constexpr const char* kEmbeddingsBinary = "embeddings.bin";
  static constexpr const char* kTyping = "typing.tsv";
  static constexpr const char* kSchema = "schema.tsv";
  static constexpr const char* kSubclass = "subclass.nt";
  static constexpr const char* kConcepts = "concepts.txt";
  static constexpr const char* kProperties = "properties.txt";
  static constexpr const char* kJudgments = "judgments.tsv";
  static constexpr const char* kAnswerKey = "answer_key.json";
  static constexpr const char* kSpec = "spec.json";
};

/// Writes every loader-readable artifact of the fixture into `dir`. The
/// judgment file scores each pair of clustered concepts with its exact
/// embedding cosine on a [-1, 1] scale.
inline void write_fixture(const Fixture& fx, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_word2vec_text(fx.table, dir / FixtureLayout::kEmbeddingsText);
  write_word2vec_binary(fx.table, dir / FixtureLayout::kEmbeddingsBinary);

  const auto write_lines = [&](const char* name, auto&& body) {
    const auto path = dir / name;
    auto out = detail::open_output(path);
    body(out);
    detail::finish_output(out, path);
  };
  write_lines(FixtureLayout::kTyping, [&](std::ostream& out) {
    for (const auto& [e, c] : fx.typing) out << e << '\t' << c << '\n';
  });
  write_lines(FixtureLayout::kSchema, [&](std::ostream& out) {
    for (const auto& [p, d, r] : fx.schema) out << p << '\t' << d << '\t' << r << '\n';
  });
  write_lines(FixtureLayout::kSubclass, [&](std::ostream& out) {
    for (const auto& [child, parent] : fx.subclass) {
      out << '<' << child << "> <" << vocab::kRdfs << "subClassOf> <" << parent << "> .\n";
    }
  });
  write_lines(FixtureLayout::kConcepts, [&](std::ostream& out) {
    for (const auto& c : fx.key.concepts) out << c << '\n';
  });
  write_lines(FixtureLayout::kProperties, [&](std::ostream& out) {
    for (const auto& p : fx.key.properties) out << p << '\n';
  });

  JudgeInventory judgments{-1.0, 1.0, {}};
  for (std::size_t i = 0; i < fx.key.concepts.size(); ++i) {
    for (std::size_t j = i + 1; j < fx.key.concepts.size(); ++j) {
      const auto& a = fx.key.concepts[i];
      const auto& b = fx.key.concepts[j];
      judgments.rows.push_back({a, b, cosine(fx.table.at(a), fx.table.at(b))});
    }
  }
  write_judgments(judgments, dir / FixtureLayout::kJudgments);

  write_lines(FixtureLayout::kAnswerKey, [&](std::ostream& out) { out << to_json(fx.key).dump(2) << '\n'; });
  write_lines(FixtureLayout::kSpec, [&](std::ostream& out) { out << to_json(fx.spec).dump(2) << '\n'; });
}

}  // namespace concept_eval

#endif  // CONCEPT_EVAL_FIXTURES_HPP
