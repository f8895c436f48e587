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
/// Deterministic 2-D projections of embedding rows (PCA and exact t-SNE)
/// and their export as TSV and SVG scatter plots.

#ifndef CONCEPT_EVAL_PROJECTION_HPP
#define CONCEPT_EVAL_PROJECTION_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "concept_eval/detail/text.hpp"
#include "concept_eval/embedding.hpp"
#include "concept_eval/error.hpp"
#include "concept_eval/random.hpp"

namespace concept_eval {

/// Identifiers with one row each of a dense matrix.
struct PointSet {
  std::vector<std::string> ids;
  Eigen::MatrixXd points;  // ids.size() x dimension
};

inline PointSet gather(const EmbeddingTable& table, std::span<const std::string> ids) {
  PointSet ps;
  ps.ids.assign(ids.begin(), ids.end());
  ps.points.resize(static_cast<Eigen::Index>(ids.size()), static_cast<Eigen::Index>(table.dimension()));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto row = table.at(ids[i]);
    for (std::size_t j = 0; j < row.size(); ++j) {
      ps.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
    }
  }
  return ps;
}

enum class ProjectionMethod { kPca, kTsne };

inline std::string_view to_string(ProjectionMethod m) { return m == ProjectionMethod::kPca ? "pca" : "tsne"; }

inline ProjectionMethod parse_projection_method(std::string_view s) {
  if (s == "pca") return ProjectionMethod::kPca;
  if (s == "tsne" || s == "t-sne") return ProjectionMethod::kTsne;
  throw Error(ErrorKind::kInvalidArgument, "unknown projection method '" + std::string(s) + "'");
}

/// Exact t-SNE hyperparameters. Defaults follow the reference optimizer.
struct TsneParams {
  double perplexity = 0.0;  // <= 0 selects min(30, (n - 1) / 3)
  int iterations = 1000;
  std::uint64_t seed = 42;
  double learning_rate = 200.0;
  double early_exaggeration = 12.0;
  int exaggeration_iterations = 250;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch_iteration = 250;
  double bisection_tolerance = 1e-5;
  int max_bisection_steps = 50;
  double init_stddev = 1e-4;
  double affinity_floor = 1e-12;
  int checkpoint_every = 50;
};

struct KlCheckpoint {
  int iteration = 0;
  double kl = 0.0;
};

struct Projection2D {
  std::vector<std::string> ids;
  std::vector<std::array<double, 2>> coords;
  ProjectionMethod method = ProjectionMethod::kPca;
  TsneParams params;                    // meaningful for t-SNE only
  std::vector<KlCheckpoint> kl_history; // t-SNE only

  std::size_t size() const { return ids.size(); }

  /// `key=value` pairs describing how the projection was produced.
  std::vector<std::pair<std::string, std::string>> metadata() const {
    std::vector<std::pair<std::string, std::string>> out{{"method", std::string(to_string(method))}};
    if (method == ProjectionMethod::kTsne) {
      out.emplace_back("perplexity", detail::format_double(params.perplexity));
      out.emplace_back("iterations", std::to_string(params.iterations));
      out.emplace_back("seed", std::to_string(params.seed));
      out.emplace_back("learning_rate", detail::format_double(params.learning_rate));
      out.emplace_back("early_exaggeration", detail::format_double(params.early_exaggeration));
      out.emplace_back("exaggeration_iterations", std::to_string(params.exaggeration_iterations));
      out.emplace_back("momentum", detail::format_double(params.initial_momentum) + "->" +
                                       detail::format_double(params.final_momentum) + "@" +
                                       std::to_string(params.momentum_switch_iteration));
      out.emplace_back("init", "pca*" + detail::format_double(params.init_stddev));
      if (!kl_history.empty()) out.emplace_back("final_kl", detail::format_double(kl_history.back().kl));
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// PCA
// ---------------------------------------------------------------------------

namespace detail {

/// Top-`k` principal axes (columns, unit length) of centered data. Each
/// axis is signed so that its largest-magnitude loading is positive.
inline Eigen::MatrixXd principal_axes(const Eigen::MatrixXd& centered, Eigen::Index k) {
  const Eigen::Index n = centered.rows();
  const Eigen::Index d = centered.cols();
  Eigen::MatrixXd axes = Eigen::MatrixXd::Zero(d, k);
  if (d <= n) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(centered.transpose() * centered);
    for (Eigen::Index c = 0; c < k && c < d; ++c) axes.col(c) = solver.eigenvectors().col(d - 1 - c);
  } else {
    // Fewer points than dimensions: diagonalize the Gram matrix instead.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(centered * centered.transpose());
    for (Eigen::Index c = 0; c < k && c < n; ++c) {
      Eigen::VectorXd axis = centered.transpose() * solver.eigenvectors().col(n - 1 - c);
      const double len = axis.norm();
      if (len > 0.0) axes.col(c) = axis / len;
    }
  }
  for (Eigen::Index c = 0; c < k; ++c) {
    Eigen::Index arg = 0;
    for (Eigen::Index j = 1; j < d; ++j) {
      if (std::abs(axes(j, c)) > std::abs(axes(arg, c))) arg = j;
    }
    if (axes(arg, c) < 0.0) axes.col(c) *= -1.0;
  }
  return axes;
}

inline void check_points(const PointSet& ps, std::size_t min_points) {
  if (ps.ids.size() != static_cast<std::size_t>(ps.points.rows())) {
    throw Error(ErrorKind::kDimensionMismatch, "identifier count does not match point rows");
  }
  if (ps.ids.size() < min_points) {
    throw Error(ErrorKind::kInvalidArgument, "projection needs at least " + std::to_string(min_points) + " points, got " +
                                                 std::to_string(ps.ids.size()));
  }
  if (ps.points.cols() == 0) throw Error(ErrorKind::kInvalidArgument, "points have zero dimension");
  if (!ps.points.allFinite()) throw Error(ErrorKind::kNonFinite, "non-finite coordinate in projection input");
}

}  // namespace detail

/// Projection onto the top two principal components of the centered data.
inline Projection2D pca_2d(const PointSet& ps) {
  detail::check_points(ps, 2);
  const Eigen::MatrixXd centered = ps.points.rowwise() - ps.points.colwise().mean();
  if (centered.squaredNorm() == 0.0) throw Error(ErrorKind::kDegenerate, "all points coincide (zero variance)");
  const Eigen::MatrixXd scores = centered * detail::principal_axes(centered, 2);
  Projection2D out;
  out.method = ProjectionMethod::kPca;
  out.ids = ps.ids;
  out.coords.resize(ps.ids.size());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) out.coords[static_cast<std::size_t>(i)] = {scores(i, 0), scores(i, 1)};
  return out;
}

// ---------------------------------------------------------------------------
// Exact t-SNE
// ---------------------------------------------------------------------------

namespace detail {

inline Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = (x.row(i) - x.row(j)).squaredNorm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

/// Row-conditional Gaussian affinities; each row's precision is bisected so
/// the row entropy matches log(perplexity).
inline Eigen::MatrixXd conditional_affinities(const Eigen::MatrixXd& dist, double perplexity, double tolerance,
                                              int max_steps) {
  const Eigen::Index n = dist.rows();
  const double target = std::log(perplexity);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // Shift by the nearest distance so exp() never underflows to all zeros.
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) nearest = std::min(nearest, dist(i, j));
    }
    double beta = 1.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int step = 0; step < max_steps; ++step) {
      double sum = 0.0, weighted = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        const double shifted = dist(i, j) - nearest;
        const double w = std::exp(-beta * shifted);
        p(i, j) = w;
        sum += w;
        weighted += shifted * w;
      }
      const double entropy = std::log(sum) + beta * weighted / sum;
      const double diff = entropy - target;
      if (std::abs(diff) < tolerance) break;
      if (diff > 0.0) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : (beta + hi) / 2.0;
      } else {
        hi = beta;
        beta = std::isinf(lo) ? beta / 2.0 : (beta + lo) / 2.0;
      }
    }
    // Final row at the last beta tried.
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      p(i, j) = std::exp(-beta * (dist(i, j) - nearest));
      sum += p(i, j);
    }
    p.row(i) /= sum;
  }
  return p;
}

/// KL(P || Q) for the current layout; `p` must be the un-exaggerated joint.
inline double kl_divergence(const Eigen::MatrixXd& p, const Eigen::MatrixXd& y) {
  const Eigen::Index n = p.rows();
  Eigen::MatrixXd num(n, n);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    num(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
      num(i, j) = v;
      num(j, i) = v;
      total += 2.0 * v;
    }
  }
  double kl = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double q = std::max(num(i, j) / total, std::numeric_limits<double>::min());
      kl += p(i, j) * std::log(p(i, j) / q);
    }
  }
  return kl;
}

}  // namespace detail

inline double default_perplexity(std::size_t n) {
  return std::min(30.0, static_cast<double>(n - 1) / 3.0);
}

/// Exact (O(n^2) per iteration) t-SNE. Single-threaded and therefore
/// bit-for-bit reproducible for fixed inputs and parameters.
inline Projection2D tsne_2d(const PointSet& ps, TsneParams params = {}) {
  detail::check_points(ps, 4);
  const auto n = static_cast<Eigen::Index>(ps.ids.size());
  if (params.perplexity <= 0.0) params.perplexity = default_perplexity(ps.ids.size());
  if (params.perplexity * 3.0 > static_cast<double>(n - 1) + 1e-12) {
    throw Error(ErrorKind::kInvalidArgument, "perplexity " + detail::format_double(params.perplexity) +
                                                 " exceeds (n - 1) / 3 for n = " + std::to_string(n));
  }
  if (params.iterations < 1) throw Error(ErrorKind::kInvalidArgument, "iterations must be positive");

  const Eigen::MatrixXd dist = detail::squared_distances(ps.points);
  Eigen::MatrixXd p = detail::conditional_affinities(dist, params.perplexity, params.bisection_tolerance,
                                                     params.max_bisection_steps);
  p = p + p.transpose().eval();
  p /= p.sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) p(i, j) = std::max(p(i, j), params.affinity_floor);
    }
  }

  // PCA initialization scaled to a small spread; random if PCA is undefined.
  Eigen::MatrixXd y(n, 2);
  try {
    const auto init = pca_2d(ps);
    for (Eigen::Index i = 0; i < n; ++i) {
      y(i, 0) = init.coords[static_cast<std::size_t>(i)][0];
      y(i, 1) = init.coords[static_cast<std::size_t>(i)][1];
    }
    const Eigen::VectorXd first = y.col(0).array() - y.col(0).mean();
    const double sd = std::sqrt(first.squaredNorm() / static_cast<double>(n));
    y *= params.init_stddev / sd;
  } catch (const Error&) {
    Rng rng(params.seed);
    for (Eigen::Index i = 0; i < n; ++i) {
      y(i, 0) = params.init_stddev * rng.normal();
      y(i, 1) = params.init_stddev * rng.normal();
    }
  }

  Eigen::MatrixXd update = Eigen::MatrixXd::Zero(n, 2);
  Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(n, 2);
  Eigen::MatrixXd grad(n, 2);
  Eigen::MatrixXd num(n, n);
  Projection2D out;
  out.method = ProjectionMethod::kTsne;

  for (int iter = 0; iter < params.iterations; ++iter) {
    const double exaggeration = iter < params.exaggeration_iterations ? params.early_exaggeration : 1.0;
    const double momentum = iter < params.momentum_switch_iteration ? params.initial_momentum : params.final_momentum;

    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      num(i, i) = 0.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double v = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
        num(i, j) = v;
        num(j, i) = v;
        total += 2.0 * v;
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      double gx = 0.0, gy = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        const double mult = (exaggeration * p(i, j) - num(i, j) / total) * num(i, j);
        gx += mult * (y(i, 0) - y(j, 0));
        gy += mult * (y(i, 1) - y(j, 1));
      }
      grad(i, 0) = 4.0 * gx;
      grad(i, 1) = 4.0 * gy;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index c = 0; c < 2; ++c) {
        const bool same_sign = (grad(i, c) > 0.0) == (update(i, c) > 0.0);
        gains(i, c) = same_sign ? gains(i, c) * 0.8 : gains(i, c) + 0.2;
        gains(i, c) = std::max(gains(i, c), 0.01);
        update(i, c) = momentum * update(i, c) - params.learning_rate * gains(i, c) * grad(i, c);
        y(i, c) += update(i, c);
      }
    }
    y.rowwise() -= y.colwise().mean();

    const int done = iter + 1;
    if ((params.checkpoint_every > 0 && done % params.checkpoint_every == 0) || done == params.iterations) {
      out.kl_history.push_back({done, detail::kl_divergence(p, y)});
    }
  }

  out.ids = ps.ids;
  out.params = params;
  out.coords.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.coords[static_cast<std::size_t>(i)] = {y(i, 0), y(i, 1)};
  return out;
}

/// KL recorded at `iteration`, if that iteration was a checkpoint.
inline std::optional<double> kl_at(const Projection2D& proj, int iteration) {
  for (const auto& c : proj.kl_history) {
    if (c.iteration == iteration) return c.kl;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

struct ScatterRow {
  std::string id;
  std::string group;
  double x = 0.0;
  double y = 0.0;
};

struct ScatterFiles {
  std::filesystem::path tsv;
  std::filesystem::path svg;
};

inline constexpr std::string_view kUngrouped = "(none)";

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace detail

/// Writes `<prefix>.tsv` (`id TAB group TAB x TAB y`, metadata in `#`
/// comments) and `<prefix>.svg` with one color per group and a legend.
/// The SVG rescales each projection to its own canvas independently.
inline ScatterFiles export_scatter(const Projection2D& proj, const std::map<std::string, std::string>& labels,
                                   const std::filesystem::path& prefix) {
  ScatterFiles files{prefix, prefix};
  files.tsv += ".tsv";
  files.svg += ".svg";

  std::vector<std::string> groups;
  std::vector<std::string> group_of(proj.size());
  for (std::size_t i = 0; i < proj.size(); ++i) {
    const auto it = labels.find(proj.ids[i]);
    group_of[i] = it == labels.end() ? std::string(kUngrouped) : it->second;
    if (std::find(groups.begin(), groups.end(), group_of[i]) == groups.end()) groups.push_back(group_of[i]);
  }
  std::sort(groups.begin(), groups.end());

  {
    auto out = detail::open_output(files.tsv);
    out << '#';
    for (const auto& [k, v] : proj.metadata()) out << ' ' << k << '=' << v;
    out << "\n# coordinates are raw projection units; the SVG normalizes this projection on its own\n";
    out << "# id\tgroup\tx\ty\n";
    for (std::size_t i = 0; i < proj.size(); ++i) {
      out << proj.ids[i] << '\t' << group_of[i] << '\t' << detail::format_double(proj.coords[i][0]) << '\t'
          << detail::format_double(proj.coords[i][1]) << '\n';
    }
    detail::finish_output(out, files.tsv);
  }

  static constexpr std::array<std::string_view, 10> kPalette = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  constexpr double kWidth = 640, kHeight = 480, kMargin = 40, kLegendWidth = 160;
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
  double min_y = min_x, max_y = -min_x;
  for (const auto& c : proj.coords) {
    min_x = std::min(min_x, c[0]);
    max_x = std::max(max_x, c[0]);
    min_y = std::min(min_y, c[1]);
    max_y = std::max(max_y, c[1]);
  }
  const double plot_w = kWidth - 2 * kMargin - kLegendWidth;
  const double plot_h = kHeight - 2 * kMargin;
  const double span = std::max({max_x - min_x, max_y - min_y, 1e-300});
  const double scale = std::min(plot_w, plot_h) / span;
  const auto color_of = [&](const std::string& g) {
    const auto idx = static_cast<std::size_t>(std::find(groups.begin(), groups.end(), g) - groups.begin());
    return kPalette[idx % kPalette.size()];
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<title>" << detail::xml_escape(std::string(to_string(proj.method))) << " projection</title>\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < proj.size(); ++i) {
    const double cx = kMargin + (proj.coords[i][0] - min_x) * scale;
    const double cy = kHeight - kMargin - (proj.coords[i][1] - min_y) * scale;
    svg << "<circle class=\"point\" cx=\"" << detail::fixed(cx) << "\" cy=\"" << detail::fixed(cy)
        << "\" r=\"4\" fill=\"" << color_of(group_of[i]) << "\"><title>" << detail::xml_escape(proj.ids[i])
        << "</title></circle>\n";
  }
  const double lx = kWidth - kLegendWidth;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double ly = kMargin + 18.0 * static_cast<double>(g);
    svg << "<g class=\"legend-entry\"><rect x=\"" << detail::fixed(lx) << "\" y=\"" << detail::fixed(ly - 9)
        << "\" width=\"10\" height=\"10\" fill=\"" << color_of(groups[g]) << "\"/><text x=\"" << detail::fixed(lx + 16)
        << "\" y=\"" << detail::fixed(ly) << "\" font-size=\"12\" font-family=\"sans-serif\">"
        << detail::xml_escape(groups[g]) << "</text></g>\n";
  }
  svg << "</svg>\n";
  auto out = detail::open_output(files.svg);
  out << svg.str();
  detail::finish_output(out, files.svg);
  return files;
}

inline std::vector<ScatterRow> read_scatter_tsv(const std::filesystem::path& path) {
  std::vector<ScatterRow> rows;
  auto in = detail::open_input(path);
  std::string line;
  std::size_t line_no = 0;
  while (detail::read_line(in, line)) {
    ++line_no;
    if (detail::trim(line).empty() || line.front() == '#') continue;
    const auto fields = detail::split(line, '\t');
    const auto x = fields.size() == 4 ? detail::parse_double(fields[2]) : std::nullopt;
    const auto y = fields.size() == 4 ? detail::parse_double(fields[3]) : std::nullopt;
    if (!x || !y) throw Error(ErrorKind::kMalformedLine, "expected 'id TAB group TAB x TAB y'", line_no);
    rows.push_back({std::string(fields[0]), std::string(fields[1]), *x, *y});
  }
  return rows;
}

}  // namespace concept_eval

#endif  // CONCEPT_EVAL_PROJECTION_HPP
