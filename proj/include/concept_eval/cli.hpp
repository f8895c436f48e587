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
/// The `concept-eval` command line. `run` is callable in-process so tests
/// can drive the same code path as the binary.

#ifndef CONCEPT_EVAL_CLI_HPP
#define CONCEPT_EVAL_CLI_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "concept_eval/categorization.hpp"
#include "concept_eval/embedding.hpp"
#include "concept_eval/error.hpp"
#include "concept_eval/fixtures.hpp"
#include "concept_eval/hierarchy.hpp"
#include "concept_eval/kg.hpp"
#include "concept_eval/parallel.hpp"
#include "concept_eval/projection.hpp"
#include "concept_eval/relational.hpp"
#include "concept_eval/report.hpp"

namespace concept_eval::cli {

/// Exit codes of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitStructural = 1;

namespace detail {

namespace fs = std::filesystem;
using concept_eval::detail::format_double;
using concept_eval::detail::parse_list_argument;

struct ModelSource {
  std::string label;
  fs::path path;
};

/// `label=path` or a bare path labelled by its stem.
inline ModelSource parse_model_source(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq != std::string::npos && eq > 0 && !fs::exists(arg)) return {arg.substr(0, eq), arg.substr(eq + 1)};
  return {fs::path(arg).stem().string(), arg};
}

struct InputOptions {
  std::vector<std::string> embeddings;
  std::string embedding_format = "auto";
  std::vector<std::string> kg;
  std::string prefixes;
  std::string labels;
  std::string compose = "avg";
  bool lowercase = false;
  std::string dataset;
  std::string out;
};

struct Model {
  std::string label;
  EmbeddingTable table{1};
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string join(const std::vector<std::string>& items, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

class Session {
 public:
  explicit Session(const InputOptions& in) : in_(in) {
    if (!in.prefixes.empty()) options_.prefixes = PrefixMap::load(in.prefixes);
    options_.lowercase = in.lowercase;
  }

  const LoadOptions& options() const { return options_; }

  std::vector<Model> load_models() const {
    if (in_.embeddings.empty()) throw Error(ErrorKind::kInvalidArgument, "--embeddings is required");
    const auto format = parse_embedding_format(in_.embedding_format);
    const auto mode = parse_composition_mode(in_.compose);
    std::optional<std::vector<LabelEntry>> labels;
    if (!in_.labels.empty()) labels = load_labels(in_.labels, options_);
    std::vector<Model> models;
    for (const auto& arg : in_.embeddings) {
      const auto src = parse_model_source(arg);
      for (const auto& m : models) {
        if (m.label == src.label) throw Error(ErrorKind::kDuplicateIdentifier, "model label '" + src.label + "' repeats");
      }
      auto table = load_embeddings(src.path, format, options_);
      if (labels) {
        auto composed = compose_labels(table, *labels, mode);
        // Identifiers with their own vectors keep them; labels fill the gaps.
        for (std::size_t i = 0; i < composed.table.size(); ++i) {
          if (!table.contains(composed.table.id(i))) table.add(composed.table.id(i), composed.table.row(i));
        }
        table.meta().composition = std::string(to_string(mode));
      }
      models.push_back({src.label, std::move(table)});
    }
    return models;
  }

  KnowledgeSlice load_slice() const {
    if (in_.kg.empty()) throw Error(ErrorKind::kInvalidArgument, "--kg is required");
    KnowledgeSliceBuilder builder;
    for (const auto& path : in_.kg) read_kg_file(builder, path, options_.prefixes);
    return builder.finalize();
  }

  std::vector<std::string> list(const std::string& arg) const {
    auto items = parse_list_argument(arg);
    if (!options_.prefixes.empty()) {
      for (auto& item : items) item = options_.prefixes.expand(item);
    }
    return items;
  }

  std::string dataset() const {
    if (!in_.dataset.empty()) return in_.dataset;
    if (!in_.kg.empty()) return fs::path(in_.kg.front()).stem().string();
    return {};
  }

  MetricReport start(Task task, const std::vector<Model>& models) const {
    MetricReport r;
    r.task = task;
    r.timestamp = utc_timestamp();
    r.run_meta["tool_version"] = kToolVersion;
    r.run_meta["task"] = std::string(to_string(task));
    std::vector<std::string> sources;
    for (const auto& m : models) {
      r.models.push_back(m.label);
      sources.push_back(m.label + "=" + m.table.meta().path);
      r.run_meta["embedding." + m.label + ".format"] = m.table.meta().format;
    }
    r.run_meta["embeddings"] = join(sources, ";");
    r.run_meta["composition"] = in_.labels.empty() ? "none" : in_.compose;
    if (!in_.labels.empty()) r.run_meta["labels"] = in_.labels;
    r.run_meta["lowercase"] = in_.lowercase ? "true" : "false";
    if (!in_.prefixes.empty()) r.run_meta["prefixes"] = in_.prefixes;
    if (!in_.kg.empty()) r.run_meta["kg"] = join(in_.kg, ";");
    return r;
  }

  /// Writes the report to --out (format by extension) or JSON to `out`.
  void finish(const MetricReport& r, std::ostream& out) const {
    if (in_.out.empty()) {
      out << render_report(r, ReportFormat::kJson);
    } else {
      emit_report(r, in_.out);
    }
  }

  /// Companion file path: `base` as given for a single model, otherwise with
  /// the model label spliced in before the extension.
  static fs::path per_model(const fs::path& base, const std::string& label, std::size_t n_models) {
    if (n_models <= 1) return base;
    fs::path p = base;
    p.replace_filename(base.stem().string() + "." + label + base.extension().string());
    return p;
  }

  const InputOptions& inputs() const { return in_; }

 private:
  InputOptions in_;
  LoadOptions options_;
};

inline ReportRow error_row(const std::string& model, const std::string& dataset, const std::string& key,
                           const std::string& message) {
  ReportRow row;
  row.model = model;
  row.dataset = dataset;
  row.key = key;
  row.error = message;
  return row;
}

inline void add_mean_summary(MetricReport& r) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& row : r.rows) {
    if (!row.value) continue;
    auto& [sum, n] = acc[row.model];
    sum += *row.value;
    ++n;
  }
  for (const auto& [model, sn] : acc) r.summary["mean." + model] = sn.first / static_cast<double>(sn.second);
}

inline void add_input_options(CLI::App& cmd, InputOptions& in, bool needs_kg) {
  cmd.add_option("--embeddings", in.embeddings, "Embedding file, optionally labelled as label=path (repeatable)")
      ->required();
  cmd.add_option("--format", in.embedding_format, "Embedding format: auto|word2vec-text|word2vec-binary|glove|tsv");
  auto* kg = cmd.add_option("--kg", in.kg, "Knowledge-graph file: .nt, typing .tsv or schema .tsv (repeatable)");
  if (needs_kg) kg->required();
  cmd.add_option("--prefixes", in.prefixes, "File of 'prefix TAB expansion' lines");
  cmd.add_option("--labels", in.labels, "File of 'identifier TAB tokens' used to compose missing vectors");
  cmd.add_option("--compose", in.compose, "Token composition for --labels: avg|sum");
  cmd.add_flag("--lowercase", in.lowercase, "Lowercase identifiers and tokens on load");
  cmd.add_option("--dataset", in.dataset, "Data-set label for report rows");
  cmd.add_option("--out", in.out, "Report path; .json, .csv or .md selects the format");
}

// ---------------------------------------------------------------------------
// eval subcommands
// ---------------------------------------------------------------------------

struct CategorizationArgs {
  std::string concepts;
  std::string typing = "direct";
};

inline MetricReport eval_categorization(const Session& s, const CategorizationArgs& a) {
  const auto typing = parse_typing_mode(a.typing);
  const auto models = s.load_models();
  const auto slice = s.load_slice();
  const auto concepts = s.list(a.concepts);
  auto r = s.start(Task::kCategorization, models);
  r.run_meta["typing"] = std::string(to_string(typing));
  r.run_meta["concepts"] = join(concepts);
  r.columns = concepts;
  const auto dataset = s.dataset();
  for (const auto& m : models) {
    auto rows = parallel_map(concepts.size(), [&](std::size_t i) {
      try {
        const auto res = categorization(m.table, slice, concepts[i], typing);
        ReportRow row;
        row.model = m.label;
        row.dataset = dataset;
        row.key = concepts[i];
        row.value = res.score;
        row.counts["used"] = static_cast<std::int64_t>(res.n_entities_used);
        row.counts["skipped_oov"] = static_cast<std::int64_t>(res.n_entities_skipped_oov);
        return row;
      } catch (const Error& e) {
        return error_row(m.label, dataset, concepts[i], e.what());
      }
    });
    for (auto& row : rows) r.rows.push_back(std::move(row));
  }
  add_mean_summary(r);
  return r;
}

struct CoherenceArgs {
  std::string concepts;
  std::string typing = "direct";
  std::size_t batch_size = 20;
  std::size_t radius = 10;
  std::uint64_t seed = 0;
  std::string match = "strict";
  std::string pool_out;
};

inline MetricReport eval_coherence(const Session& s, const CoherenceArgs& a) {
  const auto typing = parse_typing_mode(a.typing);
  const auto match = parse_coherence_match(a.match);
  if (a.radius == 0) throw Error(ErrorKind::kInvalidArgument, "--radius must be at least 1");
  const auto models = s.load_models();
  const auto slice = s.load_slice();
  const auto concepts = s.list(a.concepts);
  auto r = s.start(Task::kCoherence, models);
  r.run_meta["typing"] = std::string(to_string(typing));
  r.run_meta["concepts"] = join(concepts);
  r.run_meta["batch_size"] = std::to_string(a.batch_size);
  r.run_meta["radius"] = std::to_string(a.radius);
  r.run_meta["seed"] = std::to_string(a.seed);
  r.run_meta["match"] = std::string(to_string(match));
  r.columns = concepts;
  const auto dataset = s.dataset();

  fs::path pool_base = a.pool_out;
  if (pool_base.empty() && !s.inputs().out.empty()) {
    pool_base = fs::path(s.inputs().out);
    pool_base.replace_extension(".pool.tsv");
  }

  for (const auto& m : models) {
    // Concepts that cannot contribute a batch become row errors; the pool
    // is drawn over the rest in input order.
    std::vector<std::string> pooled;
    std::map<std::string, std::string> failed;
    for (const auto& c : concepts) {
      try {
        if (!slice.has_concept(c)) throw Error(ErrorKind::kUnknownIdentifier, "concept '" + c + "' is not in the KG");
        const auto members = entities_of(slice, c, typing);
        const bool any = std::any_of(members.begin(), members.end(),
                                     [&](const std::string& e) { return embeddable(m.table, e); });
        if (!any) throw Error(ErrorKind::kNoEntities, "concept '" + c + "' has no embeddable entities");
        pooled.push_back(c);
      } catch (const Error& e) {
        failed.emplace(c, e.what());
      }
    }
    EntityPool pool;
    pool.batch_size = a.batch_size;
    pool.seed = a.seed;
    if (!pooled.empty()) pool = build_pool(slice, m.table, pooled, a.batch_size, a.seed, typing);
    if (!pool_base.empty()) {
      const auto path = Session::per_model(pool_base, m.label, models.size());
      write_pool(pool, path);
      r.run_meta["pool." + m.label] = path.string();
    }
    std::map<std::string, PoolBatch> batch_of;
    for (const auto& b : pool.batches) batch_of.emplace(b.concept_id, b);

    auto rows = parallel_map(concepts.size(), [&](std::size_t i) {
      const auto& c = concepts[i];
      if (const auto it = failed.find(c); it != failed.end()) return error_row(m.label, dataset, c, it->second);
      try {
        const auto res = coherence(m.table, slice, pool, c, a.radius, match, typing);
        ReportRow row;
        row.model = m.label;
        row.dataset = dataset;
        row.key = c;
        row.value = res.score;
        row.counts["hits"] = static_cast<std::int64_t>(res.hits);
        row.counts["radius"] = static_cast<std::int64_t>(res.radius);
        row.counts["effective_radius"] = static_cast<std::int64_t>(res.effective_radius);
        row.counts["pool_size"] = static_cast<std::int64_t>(pool.size());
        const auto& b = batch_of.at(c);
        row.counts["used"] = static_cast<std::int64_t>(b.taken);
        row.counts["available"] = static_cast<std::int64_t>(b.available);
        return row;
      } catch (const Error& e) {
        return error_row(m.label, dataset, c, e.what());
      }
    });
    if (!pool.members.empty() && a.radius > pool.size()) {
      r.warnings.push_back("model " + m.label + ": radius " + std::to_string(a.radius) + " exceeds pool size " +
                           std::to_string(pool.size()) + "; scores use the whole pool");
    }
    for (auto& row : rows) r.rows.push_back(std::move(row));
  }
  add_mean_summary(r);
  return r;
}

struct SemanticErrorArgs {
  std::string concepts;
  std::string method = "wu_palmer";
  std::string matrix_out;
};

inline MetricReport eval_semantic_error(const Session& s, const SemanticErrorArgs& a) {
  const auto method = parse_similarity_method(a.method);
  const auto models = s.load_models();
  const auto slice = s.load_slice();
  const auto concepts = s.list(a.concepts);
  auto r = s.start(Task::kSemanticError, models);
  r.run_meta["method"] = std::string(to_string(method));
  r.run_meta["concepts"] = join(concepts);
  const auto dataset = s.dataset();
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    for (std::size_t j = i + 1; j < concepts.size(); ++j) r.columns.push_back(concepts[i] + " ~ " + concepts[j]);
  }
  for (const auto& m : models) {
    const auto matrix = pairwise_error_matrix(m.table, slice, concepts, method);
    if (!a.matrix_out.empty()) {
      const auto path = Session::per_model(a.matrix_out, m.label, models.size());
      write_error_matrix_csv(matrix, path);
      r.run_meta["matrix." + m.label] = path.string();
    }
    std::map<std::pair<std::string, std::string>, std::string> errors;
    for (const auto& e : matrix.errors) errors.emplace(std::pair{e.a, e.b}, e.message);
    for (std::size_t i = 0; i < concepts.size(); ++i) {
      for (std::size_t j = i + 1; j < concepts.size(); ++j) {
        const auto key = concepts[i] + " ~ " + concepts[j];
        ReportRow row;
        row.model = m.label;
        row.dataset = dataset;
        row.key = key;
        row.attributes["a"] = concepts[i];
        row.attributes["b"] = concepts[j];
        const double v = matrix.at(i, j);
        if (std::isnan(v)) {
          const auto it = errors.find({concepts[i], concepts[j]});
          row.error = it != errors.end() ? it->second : "pair could not be scored";
        } else {
          row.value = v;
        }
        r.rows.push_back(std::move(row));
      }
    }
    if (matrix.valid_pairs > 0) {
      r.summary["mean." + m.label] = matrix.mean;
      r.summary["max." + m.label] = matrix.max;
    }
    r.summary["valid_pairs." + m.label] = static_cast<double>(matrix.valid_pairs);
  }
  return r;
}

struct RelatednessArgs {
  std::string judgments;
  std::string corr = "spearman";
};

inline MetricReport eval_relatedness(const Session& s, const RelatednessArgs& a) {
  const auto kind = parse_correlation_kind(a.corr);
  const auto models = s.load_models();
  const auto inventory = read_judgments(a.judgments, s.options().prefixes);
  auto r = s.start(Task::kRelatedness, models);
  r.run_meta["corr"] = std::string(to_string(kind));
  r.run_meta["judgments"] = a.judgments;
  r.columns = {std::string(to_string(kind))};
  const auto dataset = s.inputs().dataset.empty() ? fs::path(a.judgments).stem().string() : s.inputs().dataset;
  for (const auto& m : models) {
    ReportRow row;
    row.model = m.label;
    row.dataset = dataset;
    row.key = std::string(to_string(kind));
    try {
      const auto res = relatedness_correlation(m.table, inventory, kind);
      row.value = res.value;
      row.counts["used"] = static_cast<std::int64_t>(res.used);
      row.counts["dropped"] = static_cast<std::int64_t>(res.dropped.size());
      for (const auto& d : res.dropped) r.warnings.push_back("model " + m.label + ": dropped " + d.a + " / " + d.b);
    } catch (const Error& e) {
      row.error = e.what();
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

struct TransitionArgs {
  std::string properties;
};

inline MetricReport eval_transition(const Session& s, const TransitionArgs& a) {
  const auto models = s.load_models();
  const auto slice = s.load_slice();
  const auto properties = s.list(a.properties);
  auto r = s.start(Task::kTransition, models);
  r.run_meta["properties"] = join(properties);
  r.columns = properties;
  const auto dataset = s.dataset();
  for (const auto& m : models) {
    auto tables = parallel_map(properties.size(), [&](std::size_t i) {
      return transition_table(m.table, slice, std::span<const std::string>(&properties[i], 1));
    });
    for (const auto& t : tables) {
      for (const auto& res : t.rows) {
        ReportRow row;
        row.model = m.label;
        row.dataset = dataset;
        row.key = res.property;
        row.attributes["domain"] = res.domain;
        row.attributes["range"] = res.range;
        row.attributes["domain_equals_range"] = res.domain_equals_range ? "true" : "false";
        row.value = res.score;
        r.rows.push_back(std::move(row));
      }
      for (const auto& f : t.failures) {
        auto row = error_row(m.label, dataset, f.property, f.message);
        if (!f.domain.empty()) row.attributes["domain"] = f.domain;
        if (!f.range.empty()) row.attributes["range"] = f.range;
        r.rows.push_back(std::move(row));
      }
    }
  }
  add_mean_summary(r);
  return r;
}

// ---------------------------------------------------------------------------
// project, fixture, inventory
// ---------------------------------------------------------------------------

struct ProjectArgs {
  std::string ids;
  std::string method = "pca";
  std::uint64_t seed = 42;
  double perplexity = 0.0;
  int iterations = 1000;
  std::string groups;
  std::string typing = "direct";
};

inline int run_project(const Session& s, const ProjectArgs& a, std::ostream& out) {
  const auto method = parse_projection_method(a.method);
  if (s.inputs().out.empty()) throw Error(ErrorKind::kInvalidArgument, "--out prefix is required for project");
  const auto models = s.load_models();
  if (models.size() != 1) throw Error(ErrorKind::kInvalidArgument, "project takes exactly one --embeddings source");
  const auto ids = s.list(a.ids);
  const auto points = gather(models.front().table, ids);

  std::map<std::string, std::string> labels;
  if (!a.groups.empty()) {
    auto in = concept_eval::detail::open_input(a.groups);
    std::string line;
    std::size_t line_no = 0;
    while (concept_eval::detail::read_line(in, line)) {
      ++line_no;
      const auto body = concept_eval::detail::trim(line);
      if (body.empty() || body.front() == '#') continue;
      const auto fields = concept_eval::detail::split(body, '\t');
      if (fields.size() != 2) throw Error(ErrorKind::kMalformedLine, "expected 'id TAB group'", line_no);
      auto id = std::string(concept_eval::detail::trim(fields[0]));
      if (!s.options().prefixes.empty()) id = s.options().prefixes.expand(id);
      labels[id] = std::string(concept_eval::detail::trim(fields[1]));
    }
  } else if (!s.inputs().kg.empty()) {
    const auto slice = s.load_slice();
    for (const auto& id : ids) {
      if (slice.has_entity(id) && !slice.types_of(id).empty()) labels[id] = *slice.types_of(id).begin();
    }
  }

  Projection2D proj;
  if (method == ProjectionMethod::kPca) {
    proj = pca_2d(points);
  } else {
    TsneParams params;
    params.perplexity = a.perplexity;
    params.iterations = a.iterations;
    params.seed = a.seed;
    proj = tsne_2d(points, params);
  }
  const auto files = export_scatter(proj, labels, s.inputs().out);
  out << files.tsv.string() << '\n' << files.svg.string() << '\n';
  return kExitOk;
}

inline int run_fixture_generate(const std::string& spec_path, const std::string& dir, std::ostream& out) {
  const auto spec = spec_path.empty() ? FixtureSpec{} : read_fixture_spec(spec_path);
  const auto fx = generate(spec);
  write_fixture(fx, dir);
  out << "wrote fixture with " << fx.key.concepts.size() << " concepts, " << fx.table.size() << " vectors to " << dir
      << '\n';
  return kExitOk;
}

struct InventoryArgs {
  std::vector<std::string> kg;
  std::string prefixes;
  std::string properties;
  std::size_t negatives = 3;
  std::uint64_t seed = 0;
  std::string judge_out;
  std::string key_out;
};

inline int run_inventory_selectional(const InventoryArgs& a, std::ostream& out) {
  InputOptions in;
  in.kg = a.kg;
  in.prefixes = a.prefixes;
  const Session s(in);
  const auto slice = s.load_slice();
  const auto properties = s.list(a.properties);
  const auto rows = selectional_preference_inventory(slice, properties, a.negatives, a.seed);
  write_preference_inventory(rows, a.judge_out, a.key_out);
  out << "wrote " << rows.size() << " rows to " << a.judge_out << " and " << a.key_out << '\n';
  return kExitOk;
}

inline int run_inventory_score(const std::string& key, const std::string& responses, std::ostream& out) {
  const auto score = score_preference_responses(key, responses);
  const nlohmann::json j = {{"answered", score.answered},     {"correct", score.correct},
                            {"unanswered", score.unanswered}, {"unmatched", score.unmatched},
                            {"accuracy", score.accuracy()}};
  out << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace detail

/// Parses `argv` and runs one command. Returns 0 on success, 1 on a
/// structural error (unreadable or malformed input, bad arguments) and the
/// CLI11 code on usage errors. Row-level failures are recorded in the report
/// and do not change the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using namespace detail;
  CLI::App app{"Evaluate concept embeddings against a knowledge graph", "concept-eval"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  auto* eval = app.add_subcommand("eval", "Compute a metric report");
  eval->require_subcommand(1);

  InputOptions in;
  CategorizationArgs cat;
  CoherenceArgs coh;
  SemanticErrorArgs sem;
  RelatednessArgs rel;
  TransitionArgs tr;
  ProjectArgs proj;

  auto* c_cat = eval->add_subcommand("categorization", "Cosine of each concept to the mean of its entities");
  add_input_options(*c_cat, in, true);
  c_cat->add_option("--concepts", cat.concepts, "Comma list or file of concepts")->required();
  c_cat->add_option("--typing", cat.typing, "direct|transitive");

  auto* c_coh = eval->add_subcommand("coherence", "Share of a concept's nearest pool entities that belong to it");
  add_input_options(*c_coh, in, true);
  c_coh->add_option("--concepts", coh.concepts, "Comma list or file of concepts")->required();
  c_coh->add_option("--typing", coh.typing, "direct|transitive");
  c_coh->add_option("--batch-size", coh.batch_size, "Entities sampled per concept");
  c_coh->add_option("--radius", coh.radius, "Number of nearest neighbors n");
  c_coh->add_option("--seed", coh.seed, "Pool sampling seed");
  c_coh->add_option("--match", coh.match, "strict|any");
  c_coh->add_option("--pool-out", coh.pool_out, "Where to write the sampled pool");

  auto* c_sem = eval->add_subcommand("semantic-error", "Absolute error between ontology similarity and cosine");
  add_input_options(*c_sem, in, true);
  c_sem->add_option("--concepts", sem.concepts, "Comma list or file of concepts")->required();
  c_sem->add_option("--method", sem.method, "wu_palmer|inverse_path");
  c_sem->add_option("--matrix-out", sem.matrix_out, "CSV path for the pairwise error matrix");

  auto* c_rel = eval->add_subcommand("relatedness", "Correlation of judged relatedness with cosine");
  add_input_options(*c_rel, in, false);
  c_rel->add_option("--judgments", rel.judgments, "Judgment file")->required();
  c_rel->add_option("--corr", rel.corr, "spearman|pearson");

  auto* c_tr = eval->add_subcommand("transition", "Transition distance of properties from domain to range");
  add_input_options(*c_tr, in, true);
  c_tr->add_option("--properties", tr.properties, "Comma list or file of properties")->required();

  auto* c_proj = app.add_subcommand("project", "Two-dimensional projection with TSV and SVG output");
  add_input_options(*c_proj, in, false);
  c_proj->add_option("--ids", proj.ids, "Comma list or file of identifiers")->required();
  c_proj->add_option("--method", proj.method, "pca|tsne");
  c_proj->add_option("--seed", proj.seed, "Seed for the random initialization fallback");
  c_proj->add_option("--perplexity", proj.perplexity, "t-SNE perplexity; 0 selects min(30, (n-1)/3)");
  c_proj->add_option("--iterations", proj.iterations, "t-SNE iterations");
  c_proj->add_option("--groups", proj.groups, "File of 'id TAB group' lines for coloring");

  auto* fixture = app.add_subcommand("fixture", "Synthetic fixtures");
  fixture->require_subcommand(1);
  std::string spec_path, fixture_dir;
  auto* c_gen = fixture->add_subcommand("generate", "Write a seeded synthetic fixture");
  c_gen->add_option("--spec", spec_path, "Fixture spec JSON; defaults apply when omitted");
  c_gen->add_option("--out", fixture_dir, "Output directory")->required();

  auto* inventory = app.add_subcommand("inventory", "Selectional-preference inventories");
  inventory->require_subcommand(1);
  InventoryArgs inv;
  auto* c_sel = inventory->add_subcommand("selectional", "Write a judge sheet and its answer key");
  c_sel->add_option("--kg", inv.kg, "Knowledge-graph file (repeatable)")->required();
  c_sel->add_option("--prefixes", inv.prefixes, "File of 'prefix TAB expansion' lines");
  c_sel->add_option("--properties", inv.properties, "Comma list or file of properties")->required();
  c_sel->add_option("--negatives", inv.negatives, "Incompatible concepts per property");
  c_sel->add_option("--seed", inv.seed, "Sampling seed");
  c_sel->add_option("--judge-out", inv.judge_out, "Judge sheet path")->required();
  c_sel->add_option("--key-out", inv.key_out, "Answer key path")->required();
  std::string key_path, responses_path;
  auto* c_score = inventory->add_subcommand("score", "Score judge responses against the key");
  c_score->add_option("--key", key_path, "Answer key")->required();
  c_score->add_option("--responses", responses_path, "Completed judge sheet")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    const auto report = [&](auto&& fn) {
      const Session s(in);
      s.finish(fn(s), out);
      return kExitOk;
    };
    if (c_cat->parsed()) return report([&](const Session& s) { return eval_categorization(s, cat); });
    if (c_coh->parsed()) return report([&](const Session& s) { return eval_coherence(s, coh); });
    if (c_sem->parsed()) return report([&](const Session& s) { return eval_semantic_error(s, sem); });
    if (c_rel->parsed()) return report([&](const Session& s) { return eval_relatedness(s, rel); });
    if (c_tr->parsed()) return report([&](const Session& s) { return eval_transition(s, tr); });
    if (c_proj->parsed()) return run_project(Session(in), proj, out);
    if (c_gen->parsed()) return run_fixture_generate(spec_path, fixture_dir, out);
    if (c_sel->parsed()) return run_inventory_selectional(inv, out);
    if (c_score->parsed()) return run_inventory_score(key_path, responses_path, out);
  } catch (const Error& e) {
    err << "concept-eval: " << e.what() << '\n';
    return kExitStructural;
  } catch (const std::exception& e) {
    err << "concept-eval: " << e.what() << '\n';
    return kExitStructural;
  }
  return kExitStructural;
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<const char*> argv{"concept-eval"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace concept_eval::cli

#endif  // CONCEPT_EVAL_CLI_HPP
