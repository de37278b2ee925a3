/*
 * Copyright 2026 The respscore Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <regex>

#include "json.hpp"
#include "respscore/pipeline.hpp"

using namespace respscore;

namespace {

// Small but complete: every stage runs, on a budget that keeps the test fast.
const char* kSmokeConfig = R"({
  "datasets": [{"name": "synthetic", "synthetic": {"n_rows": 400, "bias_strength": 0.2, "seed": 3}}],
  "models": [{"architecture": "mlp"}, {"architecture": "tab_resnet"}],
  "seeds": [0, 1],
  "train": {"max_epochs": 30, "patience": 5},
  "attack": {"n_batches": 5, "batch_size": 10, "clever_samples": 5},
  "shap": {"background_size": 10, "n_explain": 10},
  "explainability": {"lipschitz_samples": 3, "lipschitz_perturbations": 2, "faithfulness_subsets": 20}
})";

std::string StripTimestamp(const std::string& s) {
  return std::regex_replace(s, std::regex("\"timestamp\": \"[^\"]*\""), "\"timestamp\": \"\"");
}

}  // namespace

TEST_CASE("smoke run produces two scored cells with values in the unit interval") {
  const RunConfig cfg = ParseRunConfig(kSmokeConfig);
  const RunReport report = Run(cfg);
  REQUIRE(report.cells.size() == 2);
  CHECK(report.FailedCells() == 0);
  for (const auto& cell : report.cells) {
    INFO(cell.model);
    REQUIRE(cell.ok);
    CHECK(cell.seeds.size() == 2);
    CHECK(cell.profile.repeats == 2);
    CHECK(cell.profile.per_metric.size() == 21);
    for (const auto& m : cell.profile.per_metric) {
      INFO(m.name);
      CHECK(m.normalized >= 0.0);
      CHECK(m.normalized <= 1.0);
    }
    for (double ds : cell.profile.dimension_scores) {
      CHECK(ds >= 0.0);
      CHECK(ds <= 1.0);
    }
    CHECK(cell.profile.responsibility_score >= 0.0);
    CHECK(cell.profile.responsibility_score <= 1.0);
  }
  // The larger model carries the pool maximum of every cost metric.
  const auto& resnet = report.cells[1].profile.per_metric;
  for (const auto& m : resnet) {
    if (m.name == metric::kParameterCount) CHECK(m.normalized == 0.0);
  }

  // Audit chain: the JSON carries raw values and per-seed raws for every metric.
  const auto doc = nlohmann::json::parse(RunReportToJson(report));
  CHECK(doc.at("kind") == "respscore.run_report");
  CHECK(doc.at("metadata").at("engine_version") == EngineVersion());
  for (const auto& cell : doc.at("cells")) {
    CHECK(cell.at("metrics").size() == 21);
    for (const auto& seed : cell.at("seeds")) CHECK(seed.at("raw_metrics").size() == 21);
  }
}

TEST_CASE("reports are byte-identical apart from the timestamp, regardless of workers") {
  RunConfig a = ParseRunConfig(kSmokeConfig);
  RunConfig b = a;
  b.workers = 3;
  const std::string ja = StripTimestamp(RunReportToJson(Run(a)));
  const std::string jb = StripTimestamp(RunReportToJson(Run(b)));
  CHECK(ja == jb);
  CHECK(ConfigHash(a) == ConfigHash(b));
}

TEST_CASE("config validation happens before any work") {
  auto kind_of = [](const std::string& text) {
    try {
      ParseRunConfig(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kIo;
  };
  CHECK(kind_of(R"({"datasets": [{"synthetic": {}}], "models": []})") == ErrorKind::kConfig);
  CHECK(kind_of(R"({"datasets": [], "models": [{"architecture": "mlp"}]})") == ErrorKind::kConfig);
  CHECK(kind_of(R"({"datasets": [{"synthetic": {}}], "models": [{"architecture": "mlp"}], "seeds": []})") ==
        ErrorKind::kConfig);
  CHECK(kind_of(R"({"datasets": [{"synthetic": {}}], "models": [{"architecture": "mlp"}],
                    "split": {"test_fraction": 1.0}})") == ErrorKind::kConfig);
  CHECK(kind_of(R"({"datasets": [{"synthetic": {}}], "models": [{"architecture": "mlp"}], "bogus": 1})") ==
        ErrorKind::kConfig);
  CHECK(kind_of(R"({"datasets": [{"synthetic": {}}], "models": [{"architecture": "mlp"}],
                    "weights": [0.5, 0.5, 0.5, 0.5]})") == ErrorKind::kConfig);
  CHECK(kind_of(R"({"datasets": [{"synthetic": {}}], "models": [{"architecture": "mlp"},
                    {"architecture": "mlp"}]})") == ErrorKind::kConfig);
  CHECK(kind_of(R"({"datasets": [{"synthetic": {}}], "models": [{"architecture": "mlp"}],
                    "formats": ["pdf"]})") == ErrorKind::kConfig);
  CHECK(kind_of("{not json") == ErrorKind::kConfig);
}

TEST_CASE("config defaults and environment overrides") {
  RunConfig cfg = ParseRunConfig(R"({"datasets": [{"synthetic": {}}], "models": [{"architecture": "mlp"}]})");
  CHECK(cfg.seeds.size() == 5);
  CHECK(cfg.test_fraction == doctest::Approx(0.2));
  CHECK(cfg.datasets[0].name == "synthetic");
  CHECK(cfg.models[0].name == "mlp");
  const std::string hash = ConfigHash(cfg);
  setenv("RESPSCORE_OUTPUT_DIR", "/tmp/respscore_env_out", 1);
  setenv("RESPSCORE_WORKERS", "4", 1);
  ApplyEnvironmentOverrides(cfg);
  CHECK(cfg.output_dir == "/tmp/respscore_env_out");
  CHECK(cfg.workers == 4);
  CHECK(ConfigHash(cfg) == hash);
  setenv("RESPSCORE_WORKERS", "zero", 1);
  CHECK_THROWS_AS(ApplyEnvironmentOverrides(cfg), Error);
  unsetenv("RESPSCORE_OUTPUT_DIR");
  unsetenv("RESPSCORE_WORKERS");
}

TEST_CASE("a failing cell is isolated and marked") {
  RunConfig cfg = ParseRunConfig(kSmokeConfig);
  cfg.seeds = {0};
  DatasetSource missing;
  missing.name = "missing";
  missing.schema_path = "/nonexistent/schema.json";
  missing.csv_path = "/nonexistent/data.csv";
  cfg.datasets.push_back(missing);
  const RunReport report = Run(cfg);
  REQUIRE(report.cells.size() == 4);
  CHECK(report.FailedCells() == 2);
  CHECK(report.cells[0].ok);
  CHECK(report.cells[1].ok);
  CHECK_FALSE(report.cells[2].ok);
  CHECK_FALSE(report.cells[2].errors.empty());
}
