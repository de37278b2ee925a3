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

// End-to-end evaluation: for every (dataset, model, seed) cell split, encode,
// train and measure all 21 metrics; then average repeats, pool, normalize and
// score. Cells run on a worker pool; pooling and scoring happen afterwards on
// the calling thread, so the worker count never changes a result.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "respscore/data.hpp"
#include "respscore/errors.hpp"
#include "respscore/explainability.hpp"
#include "respscore/fairness.hpp"
#include "respscore/model.hpp"
#include "respscore/robustness.hpp"
#include "respscore/scoring.hpp"
#include "respscore/sustainability.hpp"

namespace respscore {

const char* EngineVersion();

struct DatasetSource {
  std::string name;
  std::string schema_path;  // resolved against the config file's directory
  std::string csv_path;
  std::optional<SyntheticSpec> synthetic;
};

struct ModelEntry {
  std::string name;
  ModelSpec spec;  // input_dim and n_classes are set per dataset
};

enum class PoolScope { kGlobal, kPerDataset };

struct RunConfig {
  std::vector<DatasetSource> datasets;
  std::vector<ModelEntry> models;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  double test_fraction = 0.2;
  TrainConfig train;
  AttackConfig attack;
  EmissionContext emission;
  ExplainabilityConfig explainability;
  std::optional<Weights> weights;
  bool fairness_include_supplements = false;
  PoolScope pool_scope = PoolScope::kGlobal;
  std::string output_dir = "respscore_out";
  int workers = 1;
  std::vector<std::string> formats{"json", "markdown", "radar_svg"};

  void Validate() const;
};

// Parses a run-config document; relative paths resolve against base_dir.
// Violations throw Error(kConfig) naming the JSON pointer.
RunConfig ParseRunConfig(const std::string& json_text, const std::string& base_dir = ".");
// Reads the file, then applies RESPSCORE_OUTPUT_DIR and RESPSCORE_WORKERS.
RunConfig LoadRunConfig(const std::string& path);
void ApplyEnvironmentOverrides(RunConfig& config);

// Canonical JSON of everything that influences results (no output_dir, no
// worker count) and its FNV-1a hash.
std::string CanonicalConfigJson(const RunConfig& config);
std::string ConfigHash(const RunConfig& config);

struct SeedResult {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double f1 = 0.0;
  TrainingStats training;
  double training_seconds = 0.0;
  CostProfile cost;
  double kg_co2e = 0.0;
  FairnessReport fairness;
  RobustnessReport robustness;
  ExplainabilityReport explainability;
  std::vector<std::string> feature_names;
  std::vector<std::string> warnings;
  ResponsibilityProfile raw_profile;  // the 21 raw metric records
};

struct CellResult {
  std::string dataset;
  std::string model;
  bool ok = false;
  std::vector<std::string> errors;
  std::vector<SeedResult> seeds;
  ResponsibilityProfile profile;  // averaged, normalized and scored
  std::array<double, 4> explainability_categories{};
};

struct RunReport {
  RunConfig config;
  std::vector<CellResult> cells;  // dataset-major, model-minor
  std::string timestamp;
  std::string config_hash;

  int FailedCells() const;
};

// Measures one (dataset, model, seed) cell. Throws on any stage error.
SeedResult RunSeed(const TabularDataset& dataset, const ModelEntry& model, std::uint64_t seed,
                   const RunConfig& config);

RunReport Run(const RunConfig& config);

std::string RunReportToJson(const RunReport& report);

}  // namespace respscore
