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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "respscore/model.hpp"

namespace respscore {

struct AttackConfig {
  double epsilon = 0.1;  // l-inf budget, standardized units
  double clever_radius = 2.0;
  std::string clever_norm = "l2";
  int n_batches = 50;
  int batch_size = 20;
  int clever_samples = 20;  // evaluation rows scored by CLEVER
  std::uint64_t seed = 0;

  void Validate() const;
};

// X + epsilon * sign(grad_x CE); sign(0) = 0.
Matrix FgsmPerturb(const TrainedModel& model, const Matrix& X, std::span<const int> y,
                   double epsilon);

struct FgsmResult {
  double clean_accuracy = 0.0;
  double adversarial_accuracy = 0.0;
  double accuracy_gap = 0.0;  // clean - adversarial, may be negative
};

FgsmResult FgsmAccuracyGap(const TrainedModel& model, const Matrix& X, std::span<const int> y,
                           double epsilon);

// Reverse-Weibull location fitted by profile maximum likelihood.
struct WeibullFit {
  double location = 0.0;
  double shape = 0.0;
  double scale = 0.0;
  bool converged = false;
};

WeibullFit FitReverseWeibull(std::span<const double> maxima);

struct CleverResult {
  double score = 0.0;
  int predicted_class = 0;
  bool used_fallback = false;   // max of batch maxima replaced the fit
  bool zero_gradients = false;  // no descent direction for some class
};

CleverResult CleverU(const TrainedModel& model, const RowVector& x, const AttackConfig& cfg,
                     std::uint64_t sample_index = 0);

// Mean over rows of ||grad_x CE||_2.
double LossSensitivity(const TrainedModel& model, const Matrix& X, std::span<const int> y);

struct RobustnessReport {
  double clean_accuracy = 0.0;
  double adversarial_accuracy = 0.0;
  double accuracy_gap = 0.0;
  double clever_u_mean = 0.0;
  double loss_sensitivity = 0.0;
  std::vector<double> clever_scores;
  std::vector<std::size_t> clever_rows;
  int clever_fallbacks = 0;
  std::vector<std::string> flags;
};

RobustnessReport EvaluateRobustness(const TrainedModel& model, const Matrix& X,
                                    std::span<const int> y, const AttackConfig& cfg);

}  // namespace respscore
