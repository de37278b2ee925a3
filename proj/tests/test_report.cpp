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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "respscore/report.hpp"

using namespace respscore;
namespace fs = std::filesystem;

namespace {

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string FixtureText() { return ReadText(std::string(RESPSCORE_FIXTURE_DIR) + "/table1_cells.json"); }

ScoredCell CellWithScores(const std::string& dataset, const std::string& model, DimensionScores ds) {
  ScoredCell c;
  c.dataset = dataset;
  c.model = model;
  c.profile.dimension_scores = ds;
  return c;
}

// Vertex coordinates of the first profile polygon in an SVG document.
std::vector<std::pair<double, double>> ProfileVertices(const std::string& svg) {
  const std::regex path_re("class=\"profile\"[^>]* d=\"([^\"]*)\"");
  std::smatch m;
  REQUIRE(std::regex_search(svg, m, path_re));
  std::istringstream in(m[1].str());
  std::vector<std::pair<double, double>> out;
  std::string tok;
  while (in >> tok) {
    if (tok == "M" || tok == "L") {
      double x, y;
      in >> x >> y;
      out.emplace_back(x, y);
    }
  }
  return out;
}

// Markdown table rows keyed by their label (bold markers removed).
std::map<std::string, std::vector<std::string>> MarkdownGrid(const std::string& md) {
  std::map<std::string, std::vector<std::string>> grid;
  std::istringstream in(md);
  std::string line;
  while (std::getline(in, line)) {
    if (line.size() < 2 || line[0] != '|') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row(line.substr(1));
    while (std::getline(row, cell, '|')) {
      cell = std::regex_replace(cell, std::regex("^\\s+|\\s+$|\\*\\*"), "");
      cells.push_back(cell);
    }
    if (!cells.empty() && cells.back().empty()) cells.pop_back();
    if (cells.empty()) continue;
    const std::string label = cells.front();
    cells.erase(cells.begin());
    grid[label] = cells;
  }
  return grid;
}

}  // namespace

TEST_CASE("replay of the reference grid reproduces every printed score") {
  const auto fixture = nlohmann::json::parse(FixtureText());
  const double tol = fixture.at("tolerance").get<double>();
  const auto cells = LoadScoredCells(FixtureText());
  REQUIRE(cells.size() == 9);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& expected = fixture.at("cells")[i].at("expected");
    INFO(cells[i].dataset << "/" << cells[i].model);
    for (Dimension d : kDimensions) {
      CHECK(std::abs(cells[i].profile.dimension_scores[static_cast<std::size_t>(d)] -
                     expected.at(DimensionName(d)).get<double>()) <= tol);
    }
    CHECK(std::abs(cells[i].profile.responsibility_score - expected.at("responsibility_score").get<double>()) <=
          tol);
  }
  CHECK(Format4(cells[4].profile.responsibility_score) == "0.8676");
}

TEST_CASE("markdown grid mirrors the reference grid") {
  const auto fixture = nlohmann::json::parse(FixtureText());
  const double tol = fixture.at("tolerance").get<double>();
  const auto grid = MarkdownGrid(RenderMarkdown(LoadScoredCells(FixtureText())));
  const std::map<std::string, std::string> leaf_rows{
      {"Complexity", "complexity"},         {"Faithfulness", "faithfulness"},
      {"Robustness", "robustness"},         {"Randomisation", "randomization"},
      {"Accuracy Diff*", "accuracy_diff"},  {"Precision Diff*", "precision_diff"},
      {"TPR Diff*", "tpr_diff"},            {"FPR Diff*", "fpr_diff"},
      {"DemP Diff*", "demographic_parity_diff"}, {"EOd Diff*", "equalized_odds_diff"},
      {"Parameters Count*", "parameter_count"},  {"FLOPs*", "flops"},
      {"MACs*", "macs"},                    {"Normalized kgCO2e*", "kg_co2e"},
      {"Accuracy Gap*", "fgsm_accuracy_gap"}, {"CLEVER-u", "clever_u"},
      {"Loss Sensitivity*", "loss_sensitivity"}};
  for (const auto& [label, name] : leaf_rows) {
    REQUIRE(grid.count(label));
    REQUIRE(grid.at(label).size() == 9);
    for (std::size_t i = 0; i < 9; ++i) {
      for (const auto& m : fixture.at("cells")[i].at("metrics")) {
        if (m.at("name") == name) CHECK(grid.at(label)[i] == Format4(m.at("normalized").get<double>()));
      }
    }
  }
  const std::map<std::string, std::string> score_rows{
      {"Responsibility Score", "responsibility_score"}, {"Explainability Score", "explainability"},
      {"Fairness Score", "fairness"}, {"Sustainability Score", "sustainability"},
      {"Robustness Score", "robustness"}};
  for (const auto& [label, key] : score_rows) {
    REQUIRE(grid.count(label));
    for (std::size_t i = 0; i < 9; ++i) {
      const double printed = fixture.at("cells")[i].at("expected").at(key).get<double>();
      CHECK(std::abs(std::stod(grid.at(label)[i]) - printed) <= tol);
    }
  }
  REQUIRE(grid.count("F1-Score"));
  CHECK(grid.at("F1-Score")[0] == "0.7683");
}

TEST_CASE("radar vertices at half radius for a flat half profile") {
  const auto svg = RenderRadarSvg("d", {CellWithScores("d", "m", {0.5, 0.5, 0.5, 0.5})});
  const auto v = ProfileVertices(svg);
  REQUIRE(v.size() == 4);
  for (const auto& [x, y] : v) {
    CHECK(std::hypot(x - kRadarCenter, y - kRadarCenter) == doctest::Approx(kRadarRadius / 2).epsilon(1e-6));
  }
  CHECK(v[0].second < kRadarCenter);  // explainability up
  CHECK(v[1].first > kRadarCenter);   // fairness right
  CHECK(v[2].second > kRadarCenter);  // sustainability down
  CHECK(v[3].first < kRadarCenter);   // robustness left
}

TEST_CASE("a near-zero sustainability score sits next to the radar center") {
  const auto svg = RenderRadarSvg("d", {CellWithScores("d", "m", {0.5666, 0.9231, 0.0071, 0.9921})});
  const auto v = ProfileVertices(svg);
  REQUIRE(v.size() == 4);
  CHECK(v[2].first == doctest::Approx(kRadarCenter));
  CHECK((v[2].second - kRadarCenter) / kRadarRadius < 0.01);
}

TEST_CASE("radar svg is self-contained and escapes labels") {
  const auto svg = RenderRadarSvg("a&b", {CellWithScores("a&b", "<net>", {0.2, 0.4, 0.6, 0.8})});
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("&lt;net&gt;") != std::string::npos);
  CHECK(svg.find("a&amp;b") != std::string::npos);
  CHECK(svg.find("<net>") == std::string::npos);
  CHECK(svg.find("href") == std::string::npos);
  for (const char* axis : {"Explainability", "Fairness", "Sustainability", "Robustness"}) {
    CHECK(svg.find(std::string(">") + axis + "<") != std::string::npos);
  }
  // Four grid diamonds at quarter steps.
  const std::regex grid_path("<path d=");
  CHECK(std::distance(std::sregex_iterator(svg.begin(), svg.end(), grid_path), std::sregex_iterator()) == 4);
}

TEST_CASE("replay edge cases") {
  CHECK(LoadScoredCells(R"({"cells": []})").empty());
  CHECK(RenderScoreTable({}).find('\n') == RenderScoreTable({}).size() - 1);

  const auto single = LoadScoredCells(
      R"({"weights": [1, 0, 0, 0], "cells": [{"dataset": "d", "model": "m",
          "metrics": [{"name": "sparseness", "dimension": "explainability", "category": "complexity",
                       "normalized": 0.37}]}]})");
  REQUIRE(single.size() == 1);
  CHECK(single[0].profile.responsibility_score == doctest::Approx(0.37).epsilon(1e-12));

  // A dimension without metrics may not carry weight.
  CHECK_THROWS_AS(LoadScoredCells(R"({"cells": [{"dataset": "d", "model": "m",
      "metrics": [{"name": "x", "dimension": "fairness", "normalized": 0.5}]}]})"), Error);
}

TEST_CASE("replay schema violations name the JSON pointer") {
  auto message = [](const std::string& text) {
    try {
      LoadScoredCells(text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kInput);
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(R"({"cells": [{"dataset": "d"}]})").find("/cells/0/model") != std::string::npos);
  CHECK(message(R"({"cells": [{"dataset": "d", "model": "m", "metrics": [{"name": "a",
      "dimension": "fairness", "normalized": 1.5}]}]})").find("/cells/0/metrics/0/normalized") != std::string::npos);
  CHECK(message(R"({"cells": [{"dataset": "d", "model": "m", "metrics": [{"name": "a",
      "dimension": "ethics", "normalized": 0.5}]}]})").find("/cells/0/metrics/0/dimension") != std::string::npos);
  CHECK(message(R"({"cells": 3})").find("/cells") != std::string::npos);
}

TEST_CASE("run reports round-trip through the loader and emit every format") {
  const RunConfig cfg = ParseRunConfig(R"({
    "datasets": [{"name": "syn thetic", "synthetic": {"n_rows": 300, "seed": 5}}],
    "models": [{"architecture": "mlp"}, {"name": "res", "architecture": "tab_resnet"}],
    "seeds": [7],
    "train": {"max_epochs": 15, "patience": 3},
    "attack": {"n_batches": 5, "batch_size": 10, "clever_samples": 5},
    "shap": {"background_size": 8, "n_explain": 6},
    "explainability": {"lipschitz_samples": 2, "lipschitz_perturbations": 2, "faithfulness_subsets": 10}
  })");
  const RunReport report = Run(cfg);
  const std::string json = RunReportToJson(report);
  const auto direct = ScoredCellsFromRun(report);
  const auto loaded = LoadScoredCells(json);
  REQUIRE(direct.size() == 2);
  REQUIRE(loaded.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(loaded[i].profile.responsibility_score ==
          doctest::Approx(direct[i].profile.responsibility_score).epsilon(1e-12));
    REQUIRE(loaded[i].attributions.has_value());
    CHECK(loaded[i].attributions->values == direct[i].attributions->values);
  }

  const fs::path dir = fs::temp_directory_path() / "respscore_test_report";
  fs::remove_all(dir);
  const auto written = EmitReports(direct, {"json", "markdown", "radar_svg", "attribution_csv"}, dir.string(), json);
  CHECK(written.size() == 5);
  CHECK(ReadText((dir / "report.json").string()) == json);
  CHECK(fs::exists(dir / "report.md"));
  CHECK(fs::exists(dir / "radar_syn_thetic.svg"));
  const std::string csv = ReadText((dir / "attributions_syn_thetic_res.csv").string());
  const std::string header = csv.substr(0, csv.find('\n'));
  std::string expected_header;
  for (std::size_t k = 0; k < direct[1].attributions->feature_names.size(); ++k) {
    expected_header += (k ? "," : "") + direct[1].attributions->feature_names[k];
  }
  CHECK(header == expected_header);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  fs::remove_all(dir);

  // A regular file where the directory should be.
  const fs::path blocker = fs::temp_directory_path() / "respscore_test_blocker";
  std::ofstream(blocker) << "x";
  try {
    EmitReports(direct, {"markdown"}, (blocker / "out").string());
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
  }
  fs::remove(blocker);
}
