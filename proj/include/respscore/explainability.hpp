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

// Kernel SHAP attributions and the eight attribution-quality metrics.
//
// Attributions explain one scalar output per row: the logit (default) or the
// probability of that row's target class. Masked features are filled from a
// background sample and the output is averaged over it, so the base value is
// the mean output over the background.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "respscore/model.hpp"

namespace respscore {

enum class ExplainedOutput { kLogit, kProbability };

const char* ExplainedOutputName(ExplainedOutput o);
ExplainedOutput ParseExplainedOutput(const std::string& name);

struct ShapConfig {
  int n_coalitions = 0;  // 0 selects 2d + 512
  ExplainedOutput output = ExplainedOutput::kLogit;
  std::uint64_t seed = 0;  // drives the coalition design
};

struct AttributionMatrix {
  Matrix values;                    // n_samples x n_features
  std::vector<double> base_values;  // per row; equal for rows sharing a target class
  std::vector<int> target_classes;
  std::string background_ref;  // fingerprint of the background rows
  int n_coalitions = 0;        // coalitions actually evaluated
  bool exact = false;          // every coalition enumerated
  bool least_norm = false;     // rank-deficient design, least-norm solution used
  double max_local_accuracy_error = 0.0;
};

// Shapley-kernel weighted least squares with both sum constraints enforced.
// `target_classes` has one entry per row of X, or a single entry for all.
// Requires n_coalitions >= 2d + 2 and a nonempty background.
AttributionMatrix KernelShap(const TrainedModel& model, const Matrix& X, const Matrix& background,
                             std::span<const int> target_classes, const ShapConfig& config);

// f(x) for the explained output of each row's target class.
std::vector<double> ExplainedValues(const TrainedModel& model, const Matrix& X,
                                    std::span<const int> target_classes, ExplainedOutput output);

std::string BackgroundFingerprint(const Matrix& background);

// Correlations; a zero-variance input yields 0 and sets *degenerate.
double PearsonCorrelation(std::span<const double> a, std::span<const double> b,
                          bool* degenerate = nullptr);
double SpearmanCorrelation(std::span<const double> a, std::span<const double> b,
                           bool* degenerate = nullptr);

struct StabilityResult {
  double lipschitz = 0.0;
  double consistency = 1.0;
  bool no_matching_pairs = false;
};

// Lipschitz: mean over rows of the max over perturbations of
// ||e(x) - e(x')|| / ||x - x'||, x' uniform in the l-inf ball, each x'
// re-explained for the row's target class. Consistency over all rows.
StabilityResult LipschitzAndConsistency(const TrainedModel& model, const Matrix& X,
                                        const AttributionMatrix& attributions,
                                        const Matrix& background, const ShapConfig& shap,
                                        double perturb_radius, int n_perturbations,
                                        std::uint64_t seed);

// Share of signature-matched pairs that receive the same label.
double Consistency(const Matrix& attributions, std::span<const int> labels,
                   bool* no_matching_pairs = nullptr);

struct FaithfulnessResult {
  double correlation = 0.0;
  double estimate = 0.0;
  int degenerate_samples = 0;
};

FaithfulnessResult FaithfulnessMetrics(const TrainedModel& model, const Matrix& X,
                                       const AttributionMatrix& attributions, int subset_size,
                                       int n_subsets, const RowVector& baseline,
                                       ExplainedOutput output, std::uint64_t seed);

struct RandomizationResult {
  double mprt_score = 0.0;
  double random_logit_score = 0.0;
  std::vector<double> mprt_step_correlations;  // |Spearman| per cascade step
  int degenerate_correlations = 0;
};

RandomizationResult RandomizationMetrics(const TrainedModel& model, const Matrix& X,
                                         const AttributionMatrix& attributions,
                                         const Matrix& background, const ShapConfig& shap,
                                         std::uint64_t seed);

struct ComplexityResult {
  double sparseness = 0.0;
  double entropy = 0.0;
  int zero_rows = 0;
};

ComplexityResult ComplexityMetrics(const Matrix& attributions);

struct ExplainabilityConfig {
  int n_explain = 50;
  int background_size = 50;
  ShapConfig shap;
  int lipschitz_samples = 10;
  int lipschitz_perturbations = 5;
  double lipschitz_radius = 0.1;
  int faithfulness_subset_size = 0;  // 0 selects max(1, floor(d / 4))
  int faithfulness_subsets = 100;

  void Validate() const;
};

struct ExplainabilityReport {
  double lipschitz = 0.0;
  double consistency = 0.0;
  double faithfulness_correlation = 0.0;
  double faithfulness_estimate = 0.0;
  double mprt_score = 0.0;
  double random_logit_score = 0.0;
  double sparseness = 0.0;
  double complexity_entropy = 0.0;
  double log_n_features = 0.0;  // ln d, the entropy ceiling
  std::vector<std::string> flags;
  AttributionMatrix attributions;
  std::vector<std::size_t> explained_rows;  // indices into the evaluation matrix
};

// Explains rows drawn from X_eval (predicted class as target) against a
// background drawn from X_background, then computes all eight metrics.
ExplainabilityReport EvaluateExplainability(const TrainedModel& model, const Matrix& X_eval,
                                            const Matrix& X_background,
                                            const ExplainabilityConfig& config,
                                            std::uint64_t seed);

}  // namespace respscore
