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

#ifndef CONCEPT_EVAL_CORRELATION_HPP
#define CONCEPT_EVAL_CORRELATION_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "concept_eval/error.hpp"

namespace concept_eval {

enum class CorrelationKind { kSpearman, kPearson };

inline std::string_view to_string(CorrelationKind k) { return k == CorrelationKind::kSpearman ? "spearman" : "pearson"; }

inline CorrelationKind parse_correlation_kind(std::string_view s) {
  if (s == "spearman") return CorrelationKind::kSpearman;
  if (s == "pearson") return CorrelationKind::kPearson;
  throw Error(ErrorKind::kInvalidArgument, "unknown correlation '" + std::string(s) + "'");
}

namespace detail {
inline void check_pair(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "correlation inputs have lengths " + std::to_string(xs.size()) +
                                                   " and " + std::to_string(ys.size()));
  }
  if (xs.size() < 3) throw Error(ErrorKind::kInvalidArgument, "correlation needs at least 3 pairs");
}
}  // namespace detail

/// 1-based fractional ranks; tied values share the average of their ranks.
inline std::vector<double> fractional_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && xs[order[j]] == xs[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

/// Sample covariance over the product of standard deviations (two-pass).
inline double pearson(std::span<const double> xs, std::span<const double> ys) {
  detail::check_pair(xs, ys);
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorKind::kConstantSequence, "correlation of a constant sequence");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

inline double spearman(std::span<const double> xs, std::span<const double> ys) {
  detail::check_pair(xs, ys);
  const auto rx = fractional_ranks(xs);
  const auto ry = fractional_ranks(ys);
  return pearson(rx, ry);
}

inline double correlation(CorrelationKind kind, std::span<const double> xs, std::span<const double> ys) {
  return kind == CorrelationKind::kSpearman ? spearman(xs, ys) : pearson(xs, ys);
}

}  // namespace concept_eval

#endif  // CONCEPT_EVAL_CORRELATION_HPP
