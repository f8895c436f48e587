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
#include <atomic>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "concept_eval/parallel.hpp"
#include "concept_eval/report.hpp"
#include "support/temp_dir.hpp"

namespace ce = concept_eval;

namespace {

ce::MetricReport sample() {
  ce::MetricReport r;
  r.task = ce::Task::kCategorization;
  r.timestamp = "2026-01-01T00:00:00Z";
  r.run_meta = {{"tool_version", ce::kToolVersion}, {"typing", "direct"}};
  r.columns = {"dbo:City", "dbo:Person", "dbo:Film"};
  r.models = {"sg", "cbow"};
  for (const auto& m : r.models) {
    for (const auto& c : r.columns) {
      ce::ReportRow row;
      row.model = m;
      row.dataset = "dbpedia";
      row.key = c;
      if (c == "dbo:Film" && m == "cbow") {
        row.error = "unknown_identifier: identifier 'dbo:Film' has no embedding";
      } else {
        row.value = 0.1 + 0.123456789 * static_cast<double>(row.key.size() + m.size());
        row.counts = {{"used", 20}, {"skipped_oov", 1}};
      }
      r.rows.push_back(row);
    }
  }
  r.summary["mean.sg"] = 0.5;
  r.warnings.push_back("a, \"quoted\" warning");
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Report, JsonParseEmitIsIdempotent) {
  const auto r = sample();
  const auto first = ce::render_report(r, ce::ReportFormat::kJson);
  const auto parsed = ce::parse_report_json(first);
  EXPECT_TRUE(parsed.same_results(r));
  EXPECT_EQ(parsed.timestamp, r.timestamp);
  EXPECT_EQ(ce::render_report(parsed, ce::ReportFormat::kJson), first);
  const auto j = nlohmann::json::parse(first);
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_EQ(j.at("meta").at("timestamp"), r.timestamp);
}

TEST(Report, CsvHasOneLinePerRowPlusHeader) {
  const auto r = sample();
  const auto csv = lines(ce::render_csv(r));
  EXPECT_EQ(csv.size(), r.rows.size() + 1);
  EXPECT_EQ(csv[0], "model,dataset,key,value,skipped_oov,used,error");
}

TEST(Report, MarkdownPivotsConceptsToColumns) {
  const auto r = sample();
  const auto md = lines(ce::render_markdown(r));
  ASSERT_EQ(md.size(), 2 + r.models.size());
  const auto pipes = [](const std::string& l) { return std::count(l.begin(), l.end(), '|') - 1; };
  EXPECT_EQ(pipes(md[0]), static_cast<long>(r.columns.size() + 2));
  EXPECT_EQ(md[0], "| Data Set | Embedding Model | dbo:City | dbo:Person | dbo:Film |");
  EXPECT_NE(md[3].find("| error |"), std::string::npos);
}

TEST(Report, TransitionMarkdownLayout) {
  ce::MetricReport r;
  r.task = ce::Task::kTransition;
  r.models = {"m1", "m2"};
  for (const auto& m : r.models) {
    ce::ReportRow row;
    row.model = m;
    row.key = "spouse";
    row.attributes = {{"domain", "Person"}, {"range", "Person"}};
    row.value = m == "m1" ? 0.8634 : 0.5;
    r.rows.push_back(row);
  }
  const auto md = lines(ce::render_markdown(r));
  ASSERT_EQ(md.size(), 3u);
  EXPECT_EQ(md[0], "| Relation | Domain | Range | m1 | m2 |");
  EXPECT_EQ(md[2], "| spouse | Person | Person | 0.863 | 0.500 |");
}

TEST(Report, FormatFromExtensionAndFileOutput) {
  EXPECT_EQ(ce::report_format_for("a/b.CSV"), ce::ReportFormat::kCsv);
  EXPECT_EQ(ce::report_format_for("r.md"), ce::ReportFormat::kMarkdown);
  EXPECT_EQ(ce::report_format_for("r.json"), ce::ReportFormat::kJson);
  testing_support::TempDir dir;
  ce::emit_report(sample(), dir.path() / "nested" / "r.json");
  EXPECT_TRUE(ce::parse_report_json(testing_support::slurp(dir.path() / "nested" / "r.json")).same_results(sample()));
}

TEST(Report, RejectsUnknownSchemaVersion) {
  auto j = ce::to_json(sample());
  j["schema_version"] = 99;
  EXPECT_THROW(ce::report_from_json(j), ce::Error);
  EXPECT_THROW(ce::parse_report_json("{not json"), ce::Error);
}

TEST(Parallel, ResultsFollowIndexOrder) {
  ::setenv("CONCEPT_EVAL_THREADS", "4", 1);
  EXPECT_EQ(ce::worker_count(), 4u);
  const auto out = ce::parallel_map(1000, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < out.size(); ++i) ASSERT_EQ(out[i], i * i);
  EXPECT_THROW(ce::parallel_map(10, [](std::size_t i) -> int {
                 if (i == 7) throw ce::Error(ce::ErrorKind::kInvalidArgument, "boom");
                 return 0;
               }),
               ce::Error);
  ::setenv("CONCEPT_EVAL_THREADS", "1", 1);
  EXPECT_EQ(ce::worker_count(), 1u);
  ::unsetenv("CONCEPT_EVAL_THREADS");
}
