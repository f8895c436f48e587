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
/// Metric reports and their JSON (canonical), CSV and Markdown renderings.

#ifndef CONCEPT_EVAL_REPORT_HPP
#define CONCEPT_EVAL_REPORT_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "concept_eval/detail/text.hpp"
#include "concept_eval/error.hpp"

namespace concept_eval {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

enum class Task { kCategorization, kCoherence, kSemanticError, kRelatedness, kTransition };

inline std::string_view to_string(Task t) {
  switch (t) {
    case Task::kCategorization: return "categorization";
    case Task::kCoherence: return "coherence";
    case Task::kSemanticError: return "semantic_error";
    case Task::kRelatedness: return "relatedness";
    case Task::kTransition: return "transition";
  }
  return "unknown";
}

inline Task parse_task(std::string_view s) {
  for (const auto t : {Task::kCategorization, Task::kCoherence, Task::kSemanticError, Task::kRelatedness,
                       Task::kTransition}) {
    if (to_string(t) == s) return t;
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown task '" + std::string(s) + "'");
}

/// One metric value keyed by (model label, concept-or-property). Rows that
/// failed carry `error` instead of `value`.
struct ReportRow {
  std::string model;
  std::string dataset;
  std::string key;
  std::map<std::string, std::string> attributes;
  std::optional<double> value;
  std::map<std::string, std::int64_t> counts;
  std::optional<std::string> error;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct MetricReport {
  Task task = Task::kCategorization;
  int schema_version = kReportSchemaVersion;
  std::map<std::string, std::string> run_meta;
  std::string timestamp;  // not part of run reproducibility
  std::vector<std::string> columns;  // keys in input order
  std::vector<std::string> models;   // model labels in input order
  std::vector<std::string> warnings;
  std::map<std::string, double> summary;
  std::vector<ReportRow> rows;

  /// Equality ignoring the timestamp.
  bool same_results(const MetricReport& o) const {
    return task == o.task && schema_version == o.schema_version && run_meta == o.run_meta && columns == o.columns &&
           models == o.models && warnings == o.warnings && summary == o.summary && rows == o.rows;
  }
};

enum class ReportFormat { kJson, kCsv, kMarkdown };

inline ReportFormat report_format_for(const std::filesystem::path& path) {
  const auto ext = detail::to_lower(path.extension().string());
  if (ext == ".csv") return ReportFormat::kCsv;
  if (ext == ".md" || ext == ".markdown") return ReportFormat::kMarkdown;
  return ReportFormat::kJson;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const MetricReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json j = {{"model", row.model}, {"dataset", row.dataset}, {"key", row.key}};
    if (!row.attributes.empty()) j["attributes"] = row.attributes;
    j["value"] = row.value ? nlohmann::json(*row.value) : nlohmann::json(nullptr);
    if (!row.counts.empty()) j["counts"] = row.counts;
    if (row.error) j["error"] = *row.error;
    rows.push_back(std::move(j));
  }
  return {{"schema_version", r.schema_version},
          {"task", std::string(to_string(r.task))},
          {"run_meta", r.run_meta},
          {"meta", {{"timestamp", r.timestamp}}},
          {"columns", r.columns},
          {"models", r.models},
          {"warnings", r.warnings},
          {"summary", r.summary},
          {"rows", rows}};
}

inline MetricReport report_from_json(const nlohmann::json& j) {
  MetricReport r;
  try {
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw Error(ErrorKind::kInvalidArgument, "unsupported report schema_version " + std::to_string(r.schema_version));
    }
    r.task = parse_task(j.at("task").get<std::string>());
    r.run_meta = j.value("run_meta", std::map<std::string, std::string>{});
    if (j.contains("meta")) r.timestamp = j.at("meta").value("timestamp", std::string());
    r.columns = j.value("columns", std::vector<std::string>{});
    r.models = j.value("models", std::vector<std::string>{});
    r.warnings = j.value("warnings", std::vector<std::string>{});
    r.summary = j.value("summary", std::map<std::string, double>{});
    for (const auto& jr : j.at("rows")) {
      ReportRow row;
      row.model = jr.at("model").get<std::string>();
      row.dataset = jr.value("dataset", std::string());
      row.key = jr.at("key").get<std::string>();
      row.attributes = jr.value("attributes", std::map<std::string, std::string>{});
      if (jr.contains("value") && !jr.at("value").is_null()) row.value = jr.at("value").get<double>();
      row.counts = jr.value("counts", std::map<std::string, std::int64_t>{});
      if (jr.contains("error")) row.error = jr.at("error").get<std::string>();
      r.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kMalformedLine, std::string("report JSON: ") + e.what());
  }
  return r;
}

inline MetricReport parse_report_json(const std::string& text) {
  try {
    return report_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kMalformedLine, std::string("report JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// CSV and Markdown
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string md_cell(std::string s) {
  std::string out;
  for (const char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

inline std::string three_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

inline std::string cell_of(const ReportRow* row) {
  if (row == nullptr) return "n/a";
  if (row->error) return "error";
  return row->value ? three_decimals(*row->value) : "n/a";
}

}  // namespace detail

/// One line per row plus a header. Attribute and count columns are the
/// sorted union over all rows.
inline std::string render_csv(const MetricReport& r) {
  std::set<std::string> attr_keys, count_keys;
  for (const auto& row : r.rows) {
    for (const auto& [k, v] : row.attributes) attr_keys.insert(k);
    for (const auto& [k, v] : row.counts) count_keys.insert(k);
  }
  std::ostringstream out;
  out << "model,dataset,key";
  for (const auto& k : attr_keys) out << ',' << detail::csv_field(k);
  out << ",value";
  for (const auto& k : count_keys) out << ',' << detail::csv_field(k);
  out << ",error\n";
  for (const auto& row : r.rows) {
    out << detail::csv_field(row.model) << ',' << detail::csv_field(row.dataset) << ',' << detail::csv_field(row.key);
    for (const auto& k : attr_keys) {
      const auto it = row.attributes.find(k);
      out << ',' << (it == row.attributes.end() ? std::string() : detail::csv_field(it->second));
    }
    out << ',' << (row.value ? detail::format_double(*row.value) : std::string());
    for (const auto& k : count_keys) {
      const auto it = row.counts.find(k);
      out << ',' << (it == row.counts.end() ? std::string() : std::to_string(it->second));
    }
    out << ',' << (row.error ? detail::csv_field(*row.error) : std::string()) << '\n';
  }
  return out.str();
}

/// Table layout: for transition reports one row per (relation, domain,
/// range) with a score column per model; otherwise one row per model with
/// the keys as columns, preceded by data-set and model columns.
inline std::string render_markdown(const MetricReport& r) {
  std::ostringstream out;
  const auto line = [&](const std::vector<std::string>& cells) {
    out << '|';
    for (const auto& c : cells) out << ' ' << detail::md_cell(c) << " |";
    out << '\n';
  };
  const auto rule = [&](std::size_t n) {
    out << '|';
    for (std::size_t i = 0; i < n; ++i) out << " --- |";
    out << '\n';
  };

  if (r.task == Task::kTransition) {
    std::vector<std::string> header{"Relation", "Domain", "Range"};
    header.insert(header.end(), r.models.begin(), r.models.end());
    line(header);
    rule(header.size());
    std::vector<std::array<std::string, 3>> triples;
    for (const auto& row : r.rows) {
      const auto get = [&](const char* k) {
        const auto it = row.attributes.find(k);
        return it == row.attributes.end() ? std::string() : it->second;
      };
      const std::array<std::string, 3> t{row.key, get("domain"), get("range")};
      if (std::find(triples.begin(), triples.end(), t) == triples.end()) triples.push_back(t);
    }
    for (const auto& t : triples) {
      std::vector<std::string> cells{t[0], t[1], t[2]};
      for (const auto& m : r.models) {
        const ReportRow* hit = nullptr;
        for (const auto& row : r.rows) {
          if (row.model != m || row.key != t[0]) continue;
          const auto d = row.attributes.find("domain");
          const auto g = row.attributes.find("range");
          const std::string dv = d == row.attributes.end() ? std::string() : d->second;
          const std::string gv = g == row.attributes.end() ? std::string() : g->second;
          if (dv == t[1] && gv == t[2]) hit = &row;
        }
        cells.push_back(detail::cell_of(hit));
      }
      line(cells);
    }
    return out.str();
  }

  std::vector<std::string> header{"Data Set", "Embedding Model"};
  header.insert(header.end(), r.columns.begin(), r.columns.end());
  line(header);
  rule(header.size());
  std::vector<std::pair<std::string, std::string>> model_rows;
  for (const auto& row : r.rows) {
    const std::pair<std::string, std::string> key{row.dataset, row.model};
    if (std::find(model_rows.begin(), model_rows.end(), key) == model_rows.end()) model_rows.push_back(key);
  }
  for (const auto& [dataset, model] : model_rows) {
    std::vector<std::string> cells{dataset, model};
    for (const auto& col : r.columns) {
      const ReportRow* hit = nullptr;
      for (const auto& row : r.rows) {
        if (row.dataset == dataset && row.model == model && row.key == col) hit = &row;
      }
      cells.push_back(detail::cell_of(hit));
    }
    line(cells);
  }
  return out.str();
}

inline std::string render_report(const MetricReport& r, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson: return to_json(r).dump(2) + "\n";
    case ReportFormat::kCsv: return render_csv(r);
    case ReportFormat::kMarkdown: return render_markdown(r);
  }
  return {};
}

inline void emit_report(const MetricReport& r, ReportFormat format, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  out << render_report(r, format);
  detail::finish_output(out, path);
}

inline void emit_report(const MetricReport& r, const std::filesystem::path& path) {
  emit_report(r, report_format_for(path), path);
}

}  // namespace concept_eval

#endif  // CONCEPT_EVAL_REPORT_HPP
