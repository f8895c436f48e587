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


// Generates a small planted fixture in memory and prints each metric for it.

#include <cstdio>
#include <string>
#include <vector>

#include "concept_eval/concept_eval.hpp"

namespace ce = concept_eval;

int main() {
  ce::FixtureSpec spec;
  spec.n_concepts = 5;
  spec.translational_properties = 3;
  spec.seed = 7;
  const auto fx = ce::generate(spec);

  std::printf("categorization\n");
  for (const auto& c : fx.key.concepts) {
    const auto r = ce::categorization(fx.table, fx.slice, c);
    std::printf("  %-8s %.4f (%zu entities)\n", c.c_str(), r.score, r.n_entities_used);
  }

  const auto pool = ce::build_pool(fx.slice, fx.table, fx.key.concepts, 20, spec.seed);
  std::printf("coherence at n=10, pool of %zu\n", pool.size());
  for (const auto& c : fx.key.concepts) {
    std::printf("  %-8s %.4f\n", c.c_str(), ce::coherence(fx.table, fx.slice, pool, c, 10).score);
  }

  const auto m = ce::pairwise_error_matrix(fx.table, fx.slice, fx.key.concepts);
  std::printf("semantic error: mean %.4f, max %.4f over %zu pairs\n", m.mean, m.max, m.valid_pairs);

  std::printf("transition\n");
  for (const auto& p : fx.key.properties) {
    for (const auto& t : ce::transition_distance(fx.table, fx.slice, p)) {
      std::printf("  %-6s %s -> %s  %.4f\n", p.c_str(), t.domain.c_str(), t.range.c_str(), t.score);
    }
  }
  return 0;
}
