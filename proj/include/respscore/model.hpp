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

// Reference differentiable classifiers: a plain MLP and a tabular residual
// network, both built from dense layers with ReLU and a softmax head.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "respscore/errors.hpp"

namespace respscore {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

enum class Architecture { kMlp, kTabResNet };

const char* ArchitectureName(Architecture a);
Architecture ParseArchitecture(const std::string& name);

struct ModelSpec {
  Architecture architecture = Architecture::kMlp;
  int input_dim = 0;
  // mlp: hidden widths, one per hidden layer.
  // tab_resnet: {n_blocks, block_dim} or {n_blocks, block_dim, block_hidden};
  // block_hidden defaults to block_dim.
  std::vector<int> hidden_dims;
  int n_classes = 2;
  // mlp: one rate per hidden layer (missing entries mean 0).
  // tab_resnet: {hidden, residual}.
  std::vector<double> dropout_rates;

  // Throws Error(kConfig) when an invariant is violated.
  void Validate() const;

  // 1 hidden layer x 50 units, ReLU, no dropout.
  static ModelSpec DefaultMlp(int input_dim, int n_classes = 2);
  // 2 residual blocks of width 16, dropout 0.2 hidden / 0.05 residual.
  static ModelSpec DefaultTabResNet(int input_dim, int n_classes = 2);

  bool operator==(const ModelSpec&) const = default;
};

// Weight is (in x out) so that a batch forward pass is X * W + b.
struct DenseLayer {
  Matrix weight;
  RowVector bias;

  int in_dim() const { return static_cast<int>(weight.rows()); }
  int out_dim() const { return static_cast<int>(weight.cols()); }
};

struct TrainingStats {
  int epochs_run = 0;
  double wall_clock_seconds = 0.0;
  double final_f1 = 0.0;
  std::uint64_t seed = 0;
  // Rows pushed through forward+backward during training; the deterministic
  // basis for modeled training energy.
  std::uint64_t samples_processed = 0;
};

struct CostProfile {
  std::uint64_t parameter_count = 0;
  std::uint64_t flops_per_forward = 0;
  std::uint64_t macs_per_forward = 0;

  bool operator==(const CostProfile&) const = default;
};

// What an input gradient is taken of, per row.
struct GradientTarget {
  enum class Kind {
    kLoss,         // cross-entropy against `labels`
    kLogit,        // logit of `class_index`
    kProbability,  // softmax probability of `class_index`
    kLogitMargin,  // logit[class_index] - logit[other_class]
  };
  Kind kind = Kind::kLoss;
  std::vector<int> labels;
  int class_index = 0;
  int other_class = 0;

  static GradientTarget Loss(std::vector<int> labels) {
    return {Kind::kLoss, std::move(labels), 0, 0};
  }
  static GradientTarget Logit(int c) { return {Kind::kLogit, {}, c, 0}; }
  static GradientTarget Probability(int c) { return {Kind::kProbability, {}, c, 0}; }
  static GradientTarget Margin(int c, int j) { return {Kind::kLogitMargin, {}, c, j}; }
};

enum class RandomizeMode { kAllLayers, kTopDownCascade };

class TrainedModel {
 public:
  TrainedModel() = default;
  // Builds a model from explicit layers; checks shapes against the spec.
  TrainedModel(ModelSpec spec, std::vector<DenseLayer> layers, TrainingStats stats = {});

  // Freshly initialized (untrained) model.
  static TrainedModel Initialize(const ModelSpec& spec, std::uint64_t seed);

  const ModelSpec& spec() const { return spec_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  const TrainingStats& training_stats() const { return stats_; }
  int input_dim() const { return spec_.input_dim; }
  int n_classes() const { return spec_.n_classes; }

  // Inference-mode logits (dropout disabled). Rows of X are samples.
  Matrix Logits(const Matrix& X) const;
  Matrix PredictProba(const Matrix& X) const;
  std::vector<int> Predict(const Matrix& X) const;

  Matrix InputGradient(const Matrix& X, const GradientTarget& target) const;

  // Mutable access for the trainer and hand-built test fixtures.
  std::vector<DenseLayer>& mutable_layers() { return layers_; }
  TrainingStats& mutable_training_stats() { return stats_; }

 private:
  ModelSpec spec_;
  std::vector<DenseLayer> layers_;
  TrainingStats stats_;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  int max_epochs = 400;
  int patience = 20;
  int batch_size = 128;
  double validation_fraction = 0.2;
  // Stop as soon as validation F1 reaches this value; <= 0 disables.
  double target_f1 = 0.0;
};

TrainedModel Train(const ModelSpec& spec, const Matrix& X, std::span<const int> y,
                   const TrainConfig& config, std::uint64_t seed);

CostProfile ComputeCostProfile(const ModelSpec& spec);

// `cascade_steps` is only used for kTopDownCascade: the last `cascade_steps`
// layers are re-initialized, the rest are copied bit-for-bit.
TrainedModel RandomizeParameters(const TrainedModel& model, RandomizeMode mode,
                                 std::uint64_t seed, int cascade_steps = 1);

// Binary F1 of class 1 for two classes, macro F1 otherwise. When neither truth
// nor prediction contains the positive class the score is 1 (full agreement).
double F1Score(std::span<const int> y_true, std::span<const int> y_pred, int n_classes);

// Model JSON document (format_version 1); parameters are decimal arrays.
std::string ModelToJson(const TrainedModel& model);
TrainedModel ModelFromJson(const std::string& json);

// Layer shapes implied by a spec, in forward order.
std::vector<std::pair<int, int>> LayerShapes(const ModelSpec& spec);

}  // namespace respscore
