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


#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "concept_eval/categorization.hpp"
#include "concept_eval/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

namespace ce = concept_eval;
using Names = std::vector<std::string>;

namespace {

ce::EntityPool pool_of(const std::vector<std::pair<std::string, std::string>>& members) {
  ce::EntityPool pool;
  for (const auto& [e, c] : members) pool.members.push_back({e, c});
  return pool;
}

Names entity_names(const std::vector<ce::ScoredEntity>& xs) {
  Names out;
  for (const auto& x : xs) out.push_back(x.entity);
  return out;
}

}  // namespace

TEST(AveragedVector, Examples) {
  ce::EmbeddingTable t(2);
  t.add("x", ce::Vector{1, 0});
  t.add("y", ce::Vector{0, 1});
  t.add("z", ce::Vector{3, 4});
  const Names xy{"x", "y", "oov"};
  const auto avg = ce::averaged_entity_vector(t, xy);
  EXPECT_EQ(avg.mean, (ce::Vector{0.5, 0.5}));
  EXPECT_EQ(avg.used, 2u);
  EXPECT_EQ(avg.skipped_oov, 1u);
  const Names z{"z"};
  EXPECT_EQ(ce::averaged_entity_vector(t, z).mean, (ce::Vector{3, 4}));
  const Names none{"oov"};
  EXPECT_THROW(ce::averaged_entity_vector(t, none), ce::Error);
}

TEST(AveragedVector, MatchesTwoPassMeanOnTenThousandRows) {
  ce::Rng rng(17);
  ce::EmbeddingTable t(16);
  Names ids;
  std::vector<oracle::Vec> rows;
  for (int i = 0; i < 10000; ++i) {
    ce::Vector v(16);
    for (auto& x : v) x = 5.0 + rng.normal();
    ids.push_back("e" + std::to_string(i));
    t.add(ids.back(), v);
    rows.push_back(v);
  }
  const auto got = ce::averaged_entity_vector(t, ids).mean;
  const auto want = oracle::mean(rows);
  for (std::size_t j = 0; j < 16; ++j) EXPECT_NEAR(got[j], want[j], 1e-12);
}

TEST(Categorization, Examples) {
  ce::EmbeddingTable t(2);
  t.add("C", ce::Vector{1, 0});
  t.add("D", ce::Vector{1, 0});
  t.add("a", ce::Vector{1, 0});
  t.add("b", ce::Vector{1, 0});
  t.add("c", ce::Vector{0, 1});
  ce::KnowledgeSliceBuilder bld;
  bld.add_typing("a", "C");
  bld.add_typing("b", "C");
  bld.add_typing("a", "D");
  bld.add_typing("c", "D");
  bld.add_typing("oov", "D");
  const auto s = bld.finalize();
  EXPECT_EQ(ce::categorization(t, s, "C").score, 1.0);
  const auto r = ce::categorization(t, s, "D");
  EXPECT_NEAR(r.score, std::sqrt(2.0) / 2.0, 1e-15);
  EXPECT_EQ(r.n_entities_used + r.n_entities_skipped_oov, 3u);
  EXPECT_EQ(r.n_entities_skipped_oov, 1u);
}

TEST(Categorization, Errors) {
  ce::EmbeddingTable t(2);
  t.add("Z", ce::Vector{0, 0});
  t.add("C", ce::Vector{1, 0});
  ce::KnowledgeSliceBuilder bld;
  bld.add_typing("e", "Z");
  bld.add_concept("C");
  const auto s = bld.finalize();
  const auto kind = [&](const char* c) {
    try {
      ce::categorization(t, s, c);
    } catch (const ce::Error& e) {
      return e.kind();
    }
    return ce::ErrorKind::kIo;
  };
  EXPECT_EQ(kind("Z"), ce::ErrorKind::kZeroNorm);
  EXPECT_EQ(kind("C"), ce::ErrorKind::kNoEntities);
  EXPECT_EQ(kind("Q"), ce::ErrorKind::kUnknownIdentifier);
}

TEST(Categorization, PermutationAndScaleInvariant) {
  ce::FixtureSpec spec;
  spec.noise_sigma = 0.3;
  const auto fx = ce::generate(spec);
  const auto scaled = fx.table.transform([](auto in, auto out) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = 3.5 * in[i];
  });
  for (const auto& c : fx.key.concepts) {
    auto members = ce::entities_of(fx.slice, c, ce::TypingMode::kDirect);
    const auto base = ce::categorization(fx.table, fx.slice, c).score;
    std::reverse(members.begin(), members.end());
    const auto avg = ce::averaged_entity_vector(fx.table, members);
    EXPECT_NEAR(ce::cosine(std::span<const double>(avg.mean), fx.table.at(c)), base, 1e-12);
    EXPECT_NEAR(ce::categorization(scaled, fx.slice, c).score, base, 1e-9);
    EXPECT_NEAR(fx.key.categorization.at(c), base, 1e-12);
  }
}

TEST(Pool, TwelveConceptsGiveTwoHundredForty) {
  ce::FixtureSpec spec;
  spec.n_concepts = 12;
  spec.entities_per_concept = 25;
  const auto fx = ce::generate(spec);
  const auto pool = ce::build_pool(fx.slice, fx.table, fx.key.concepts, 20, 7);
  EXPECT_EQ(pool.size(), 240u);
  std::set<std::string> unique;
  std::map<std::string, int> per_concept;
  for (const auto& m : pool.members) {
    unique.insert(m.entity);
    ++per_concept[m.concept_id];
  }
  EXPECT_EQ(unique.size(), 240u);
  for (const auto& [c, n] : per_concept) EXPECT_LE(n, 20);
  const auto again = ce::build_pool(fx.slice, fx.table, fx.key.concepts, 20, 7);
  ASSERT_EQ(again.size(), pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) EXPECT_EQ(again.members[i].entity, pool.members[i].entity);
}

TEST(Pool, SmallAvailabilityTakesAll) {
  ce::FixtureSpec spec;
  spec.n_concepts = 3;
  spec.entities_per_concept = 5;
  const auto fx = ce::generate(spec);
  const auto pool = ce::build_pool(fx.slice, fx.table, fx.key.concepts, 20, 1);
  EXPECT_EQ(pool.size(), 15u);
  for (const auto& b : pool.batches) {
    EXPECT_EQ(b.taken, 5u);
    EXPECT_EQ(b.available, 5u);
  }
}

TEST(Pool, MultiTypedEntityGoesToFirstConcept) {
  ce::EmbeddingTable t(1);
  t.add("e", ce::Vector{1});
  t.add("f", ce::Vector{1});
  ce::KnowledgeSliceBuilder b;
  b.add_typing("e", "A");
  b.add_typing("e", "B");
  b.add_typing("f", "B");
  const auto s = b.finalize();
  const Names cs{"A", "B"};
  const auto pool = ce::build_pool(s, t, cs, 5, 3);
  ASSERT_EQ(pool.size(), 2u);
  EXPECT_EQ(pool.members[0].entity, "e");
  EXPECT_EQ(pool.members[0].concept_id, "A");
  EXPECT_EQ(pool.members[1].entity, "f");
  EXPECT_EQ(pool.batches[1].available, 2u);
  EXPECT_EQ(pool.batches[1].taken, 1u);
}

TEST(Pool, ConceptWithoutEmbeddableEntitiesFails) {
  ce::EmbeddingTable t(1);
  t.add("z", ce::Vector{0});
  ce::KnowledgeSliceBuilder b;
  b.add_typing("z", "A");
  b.add_typing("oov", "A");
  const auto s = b.finalize();
  const Names cs{"A"};
  EXPECT_THROW(ce::build_pool(s, t, cs, 5, 3), ce::Error);
}

TEST(Pool, FileRoundTrip) {
  ce::FixtureSpec spec;
  spec.n_concepts = 4;
  const auto fx = ce::generate(spec);
  const auto pool = ce::build_pool(fx.slice, fx.table, fx.key.concepts, 6, 99);
  testing_support::TempDir dir;
  ce::write_pool(pool, dir.path() / "pool.tsv");
  const auto back = ce::read_pool(dir.path() / "pool.tsv");
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(back.batch_size, 6u);
  ASSERT_EQ(back.size(), pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    EXPECT_EQ(back.members[i].entity, pool.members[i].entity);
    EXPECT_EQ(back.members[i].concept_id, pool.members[i].concept_id);
  }
}

TEST(TopK, Examples) {
  ce::EmbeddingTable t(2);
  t.add("C", ce::Vector{1, 0});
  t.add("a", ce::Vector{1, 0});
  t.add("b", ce::Vector{0, 1});
  t.add("c", ce::Vector{0.9, 0.1});
  t.add("d", ce::Vector{0.9, 0.1});
  const auto pool = pool_of({{"a", "X"}, {"b", "X"}, {"c", "X"}});
  EXPECT_EQ(entity_names(ce::top_k_entities(t, pool, "C", 2)), (Names{"a", "c"}));
  auto all = entity_names(ce::top_k_entities(t, pool, "C", 3));
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, (Names{"a", "b", "c"}));
  EXPECT_EQ(ce::top_k_entities(t, pool, "C", 10).size(), 3u);
  const auto tie = pool_of({{"d", "X"}, {"c", "X"}});
  EXPECT_EQ(entity_names(ce::top_k_entities(t, tie, "C", 1)), Names{"c"});
  EXPECT_THROW(ce::top_k_entities(t, pool, "C", 0), ce::Error);
}

TEST(TopK, MatchesFullSortOracle) {
  ce::Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    ce::EmbeddingTable t(8);
    ce::EntityPool pool;
    std::map<std::string, oracle::Vec> by_name;
    const std::size_t n = 200 + rng.uniform_index(2000);
    for (std::size_t i = 0; i < n; ++i) {
      ce::Vector v(8);
      for (auto& x : v) x = std::round(rng.normal() * 4) / 4;  // coarse grid forces ties
      if (ce::norm(std::span<const double>(v)) == 0) v[0] = 1;
      const auto id = "e" + std::to_string(rng.next_u64() % 100000) + "_" + std::to_string(i);
      t.add(id, v);
      pool.members.push_back({id, "X"});
      by_name[id] = v;
    }
    ce::Vector q(8);
    for (auto& x : q) x = rng.normal();
    t.add("Q", q);
    const std::size_t k = 1 + rng.uniform_index(n);
    EXPECT_EQ(entity_names(ce::top_k_entities(t, pool, "Q", k)), oracle::nearest(by_name, q, k));
  }
}

TEST(Coherence, SevenOfTen) {
  ce::EmbeddingTable t(2);
  t.add("Actor", ce::Vector{1, 0});
  ce::EntityPool pool;
  for (int i = 0; i < 10; ++i) {
    const auto id = "n" + std::to_string(i);
    t.add(id, ce::Vector{1.0, 0.01 * i});
    pool.members.push_back({id, i < 7 ? "Actor" : "Film"});
  }
  for (int i = 0; i < 5; ++i) {
    const auto id = "far" + std::to_string(i);
    t.add(id, ce::Vector{0.0, 1.0});
    pool.members.push_back({id, "Actor"});
  }
  ce::KnowledgeSliceBuilder b;
  for (const auto& m : pool.members) b.add_typing(m.entity, m.concept_id);
  const auto s = b.finalize();
  const auto r = ce::coherence(t, s, pool, "Actor", 10);
  EXPECT_EQ(r.score, 0.7);
  EXPECT_EQ(r.hits, 7u);
}

TEST(Coherence, ClampsToPoolAndTakesFractionSteps) {
  ce::FixtureSpec spec;
  spec.n_concepts = 3;
  spec.entities_per_concept = 4;
  spec.noise_sigma = 0.5;
  const auto fx = ce::generate(spec);
  const auto pool = ce::build_pool(fx.slice, fx.table, fx.key.concepts, 4, 2);
  for (const auto& c : fx.key.concepts) {
    const auto big = ce::coherence(fx.table, fx.slice, pool, c, 50);
    EXPECT_TRUE(big.clamped());
    EXPECT_EQ(big.effective_radius, 12u);
    EXPECT_DOUBLE_EQ(big.score, 4.0 / 12.0);
    for (std::size_t n = 1; n <= 12; ++n) {
      const auto r = ce::coherence(fx.table, fx.slice, pool, c, n);
      EXPECT_EQ(r.score, static_cast<double>(r.hits) / static_cast<double>(n));
    }
  }
}

TEST(Coherence, PlantedClustersScoreOne) {
  ce::FixtureSpec spec;  // 10 x 20, dim 16, sigma 0.01
  const auto fx = ce::generate(spec);
  const auto pool = ce::build_pool(fx.slice, fx.table, fx.key.concepts, 20, 1);
  for (const auto& c : fx.key.concepts) EXPECT_EQ(ce::coherence(fx.table, fx.slice, pool, c, 10).score, 1.0);
}

TEST(Coherence, AnyTypeModeUsesTyping) {
  ce::EmbeddingTable t(1);
  t.add("A", ce::Vector{1});
  t.add("e", ce::Vector{1});
  t.add("f", ce::Vector{1});
  ce::KnowledgeSliceBuilder b;
  b.add_typing("e", "A");
  b.add_typing("e", "B");
  b.add_typing("f", "B");
  b.add_concept("A");
  const auto s = b.finalize();
  const auto pool = pool_of({{"e", "B"}, {"f", "B"}});
  EXPECT_EQ(ce::coherence(t, s, pool, "A", 2, ce::CoherenceMatch::kStrictLabel).score, 0.0);
  EXPECT_EQ(ce::coherence(t, s, pool, "A", 2, ce::CoherenceMatch::kAnyType).score, 0.5);
}

TEST(Metrics, InvariantUnderOrthogonalTransform) {
  ce::FixtureSpec spec;
  spec.noise_sigma = 0.2;
  const auto fx = ce::generate(spec);
  const auto q = oracle::random_orthogonal(spec.dimension, 8);
  const auto rotated = fx.table.transform([&](auto in, auto out) {
    const auto v = oracle::apply(q, oracle::Vec(in.begin(), in.end()));
    std::copy(v.begin(), v.end(), out.begin());
  });
  const auto pool = ce::build_pool(fx.slice, fx.table, fx.key.concepts, 20, 4);
  for (const auto& c : fx.key.concepts) {
    EXPECT_NEAR(ce::categorization(fx.table, fx.slice, c).score, ce::categorization(rotated, fx.slice, c).score, 1e-9);
    EXPECT_NEAR(ce::coherence(fx.table, fx.slice, pool, c, 10).score,
                ce::coherence(rotated, fx.slice, pool, c, 10).score, 1e-9);
  }
}
