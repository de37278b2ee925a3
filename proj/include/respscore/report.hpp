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

// Report emitters: score tables, a markdown results grid, radar SVGs and
// attribution CSVs. All of them work from ScoredCell, which is built either
// from an in-memory run or from a JSON document (run report or replay file).

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "respscore/pipeline.hpp"
#include "respscore/scoring.hpp"

namespace respscore {

struct AttributionTable {
  std::uint64_t seed = 0;
  std::vector<std::string> feature_names;
  std::vector<std::size_t> rows;            // indices into the test split
  std::vector<std::vector<double>> values;  // one row per explained sample
};

struct ScoredCell {
  std::string dataset;
  std::string model;
  bool ok = true;
  std::vector<std::string> errors;
  std::optional<double> f1;
  ResponsibilityProfile profile;  // dimension scores are NaN for absent dimensions
  std::array<double, 4> categories{};
  std::optional<AttributionTable> attributions;
};

// Accepts a run report or a replay document
// {weights?, cells: [{dataset, model, f1?, metrics: [{name, dimension,
// category?, normalized, in_dimension_mean?}]}]}. Scores are recomputed from
// the normalized records. `weights` overrides any weights in the document.
// Schema violations throw Error(kInput) naming the JSON pointer.
std::vector<ScoredCell> LoadScoredCells(const std::string& json_text,
                                        const std::optional<Weights>& weights = {});

std::vector<ScoredCell> ScoredCellsFromRun(const RunReport& report);

// Dimension scores and RS from normalized records. A dimension without
// records scores NaN and is only allowed when its weight is 0.
void ScoreReplayProfile(ResponsibilityProfile& profile, const std::optional<Weights>& weights);

// Fixed 4-decimal rendering; NaN renders as "n/a".
std::string Format4(double value);

// Plain-text DS/RS table, one line per cell.
std::string RenderScoreTable(const std::vector<ScoredCell>& cells);
std::string ScoredCellsToJson(const std::vector<ScoredCell>& cells);

// Grid with one column per (dataset, model); dimension scores in bold, leaf
// metrics beneath, inverted metrics marked with an asterisk.
std::string RenderMarkdown(const std::vector<ScoredCell>& cells);

inline constexpr double kRadarCenter = 210.0;
inline constexpr double kRadarRadius = 160.0;

// Vertices for (explainability, fairness, sustainability, robustness) on the
// up, right, down and left axes.
std::array<std::pair<double, double>, 4> RadarVertices(const DimensionScores& ds);

// One polygon per successful cell of `dataset`.
std::string RenderRadarSvg(const std::string& dataset, const std::vector<ScoredCell>& cells);

std::string RenderAttributionCsv(const AttributionTable& table);

// Filename-safe form of a dataset or model name.
std::string SanitizeFileComponent(const std::string& name);

// Writes the requested formats into output_dir and returns the paths written.
// `report_json` is written verbatim as report.json when "json" is requested;
// when empty, the scored cells are serialized instead. Throws Error(kIo).
std::vector<std::string> EmitReports(const std::vector<ScoredCell>& cells,
                                     const std::vector<std::string>& formats,
                                     const std::string& output_dir,
                                     const std::string& report_json = "");

}  // namespace respscore
