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

#ifndef CONCEPT_EVAL_CONCEPT_EVAL_HPP
#define CONCEPT_EVAL_CONCEPT_EVAL_HPP

#include "concept_eval/categorization.hpp"
#include "concept_eval/correlation.hpp"
#include "concept_eval/embedding.hpp"
#include "concept_eval/error.hpp"
#include "concept_eval/fixtures.hpp"
#include "concept_eval/hierarchy.hpp"
#include "concept_eval/kg.hpp"
#include "concept_eval/parallel.hpp"
#include "concept_eval/projection.hpp"
#include "concept_eval/random.hpp"
#include "concept_eval/relational.hpp"
#include "concept_eval/report.hpp"

#endif  // CONCEPT_EVAL_CONCEPT_EVAL_HPP
