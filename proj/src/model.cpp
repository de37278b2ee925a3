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

#include "respscore/model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "json_io.hpp"
#include "respscore/rng.hpp"

namespace respscore {

const char* ArchitectureName(Architecture a) {
  return a == Architecture::kMlp ? "mlp" : "tab_resnet";
}

Architecture ParseArchitecture(const std::string& name) {
  if (name == "mlp") return Architecture::kMlp;
  if (name == "tab_resnet") return Architecture::kTabResNet;
  throw Error(ErrorKind::kConfig, "unknown architecture '" + name + "'");
}

void ModelSpec::Validate() const {
  if (input_dim < 1) throw Error(ErrorKind::kConfig, "input_dim must be >= 1");
  if (n_classes < 2) throw Error(ErrorKind::kConfig, "n_classes must be >= 2");
  for (int h : hidden_dims) {
    if (h < 1) throw Error(ErrorKind::kConfig, "every hidden dimension must be >= 1");
  }
  for (double p : dropout_rates) {
    if (!(p >= 0.0 && p < 1.0)) {
      throw Error(ErrorKind::kConfig, "dropout rates must lie in [0, 1)");
    }
  }
  if (architecture == Architecture::kTabResNet &&
      (hidden_dims.size() < 2 || hidden_dims.size() > 3)) {
    throw Error(ErrorKind::kConfig,
                "tab_resnet hidden_dims must be {n_blocks, block_dim[, block_hidden]}");
  }
}

ModelSpec ModelSpec::DefaultMlp(int input_dim, int n_classes) {
  return {Architecture::kMlp, input_dim, {50}, n_classes, {}};
}

ModelSpec ModelSpec::DefaultTabResNet(int input_dim, int n_classes) {
  return {Architecture::kTabResNet, input_dim, {2, 16}, n_classes, {0.2, 0.05}};
}

std::vector<std::pair<int, int>> LayerShapes(const ModelSpec& spec) {
  spec.Validate();
  std::vector<std::pair<int, int>> shapes;
  if (spec.architecture == Architecture::kMlp) {
    int in = spec.input_dim;
    for (int h : spec.hidden_dims) {
      shapes.emplace_back(in, h);
      in = h;
    }
    shapes.emplace_back(in, spec.n_classes);
  } else {
    const int blocks = spec.hidden_dims[0];
    const int width = spec.hidden_dims[1];
    const int inner = spec.hidden_dims.size() > 2 ? spec.hidden_dims[2] : width;
    shapes.emplace_back(spec.input_dim, width);
    for (int b = 0; b < blocks; ++b) {
      shapes.emplace_back(width, inner);
      shapes.emplace_back(inner, width);
    }
    shapes.emplace_back(width, spec.n_classes);
  }
  return shapes;
}

CostProfile ComputeCostProfile(const ModelSpec& spec) {
  CostProfile cost;
  std::uint64_t bias_adds = 0;
  for (auto [in, out] : LayerShapes(spec)) {
    const auto macs = static_cast<std::uint64_t>(in) * static_cast<std::uint64_t>(out);
    cost.macs_per_forward += macs;
    cost.parameter_count += macs + static_cast<std::uint64_t>(out);
    bias_adds += static_cast<std::uint64_t>(out);
  }
  cost.flops_per_forward = 2 * cost.macs_per_forward + bias_adds;
  return cost;
}

namespace {

DenseLayer InitLayer(int in, int out, std::uint64_t seed) {
  // Kaiming-uniform for ReLU on weights, fan-in uniform on biases.
  Rng rng(seed);
  const double w_bound = std::sqrt(6.0 / in);
  const double b_bound = 1.0 / std::sqrt(static_cast<double>(in));
  DenseLayer layer{Matrix(in, out), RowVector(out)};
  for (Eigen::Index i = 0; i < layer.weight.size(); ++i) {
    layer.weight.data()[i] = rng.Uniform(-w_bound, w_bound);
  }
  for (Eigen::Index j = 0; j < out; ++j) layer.bias[j] = rng.Uniform(-b_bound, b_bound);
  return layer;
}

double DropoutRate(const ModelSpec& spec, std::size_t slot) {
  return slot < spec.dropout_rates.size() ? spec.dropout_rates[slot] : 0.0;
}

struct Tape {
  std::vector<Matrix> inputs;  // input to layer i
  std::vector<Matrix> pre;     // pre-activation where a ReLU follows
  std::vector<Matrix> masks;   // scaled dropout masks, empty when unused
};

struct Gradients {
  std::vector<Matrix> weight;
  std::vector<RowVector> bias;
  Matrix input;
};

Matrix Affine(const Matrix& x, const DenseLayer& layer) {
  Matrix z = x * layer.weight;
  z.rowwise() += layer.bias;
  return z;
}

Matrix DropoutMask(Eigen::Index rows, Eigen::Index cols, double rate, Rng& rng) {
  Matrix mask(rows, cols);
  const double keep = 1.0 - rate;
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    mask.data()[i] = rng.Uniform() < keep ? 1.0 / keep : 0.0;
  }
  return mask;
}

// Dropout is active iff `rng` is non-null.
Matrix Forward(const ModelSpec& spec, const std::vector<DenseLayer>& layers,
               const Matrix& X, Tape* tape, Rng* rng) {
  const std::size_t n_layers = layers.size();
  if (tape) {
    tape->inputs.assign(n_layers, Matrix());
    tape->pre.assign(n_layers, Matrix());
    tape->masks.assign(n_layers, Matrix());
  }
  if (spec.architecture == Architecture::kMlp) {
    Matrix a = X;
    for (std::size_t i = 0; i + 1 < n_layers; ++i) {
      Matrix z = Affine(a, layers[i]);
      Matrix r = z.cwiseMax(0.0);
      const double rate = DropoutRate(spec, i);
      Matrix mask;
      if (rng && rate > 0.0) {
        mask = DropoutMask(r.rows(), r.cols(), rate, *rng);
        r = r.cwiseProduct(mask);
      }
      if (tape) {
        tape->inputs[i] = std::move(a);
        tape->pre[i] = std::move(z);
        tape->masks[i] = std::move(mask);
      }
      a = std::move(r);
    }
    Matrix logits = Affine(a, layers.back());
    if (tape) tape->inputs.back() = std::move(a);
    return logits;
  }

  const std::size_t blocks = (n_layers - 2) / 2;
  const double hidden_rate = DropoutRate(spec, 0);
  const double residual_rate = DropoutRate(spec, 1);
  Matrix h = Affine(X, layers[0]);
  if (tape) tape->inputs[0] = X;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t l1 = 1 + 2 * b;
    const std::size_t l2 = l1 + 1;
    Matrix u = Affine(h, layers[l1]);
    Matrix r = u.cwiseMax(0.0);
    Matrix m1, m2;
    if (rng && hidden_rate > 0.0) {
      m1 = DropoutMask(r.rows(), r.cols(), hidden_rate, *rng);
      r = r.cwiseProduct(m1);
    }
    Matrix v = Affine(r, layers[l2]);
    if (rng && residual_rate > 0.0) {
      m2 = DropoutMask(v.rows(), v.cols(), residual_rate, *rng);
      v = v.cwiseProduct(m2);
    }
    if (tape) {
      tape->inputs[l1] = h;
      tape->pre[l1] = std::move(u);
      tape->masks[l1] = std::move(m1);
      tape->inputs[l2] = std::move(r);
      tape->masks[l2] = std::move(m2);
    }
    h += v;
  }
  Matrix q = h.cwiseMax(0.0);
  Matrix logits = Affine(q, layers.back());
  if (tape) {
    tape->pre.back() = std::move(h);
    tape->inputs.back() = std::move(q);
  }
  return logits;
}

Matrix ReluGate(const Matrix& grad, const Matrix& pre) {
  return grad.cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
}

Gradients Backward(const ModelSpec& spec, const std::vector<DenseLayer>& layers,
                   const Tape& tape, const Matrix& d_logits, bool param_grads) {
  const std::size_t n_layers = layers.size();
  Gradients g;
  if (param_grads) {
    g.weight.resize(n_layers);
    g.bias.resize(n_layers);
  }
  auto accumulate = [&](std::size_t i, const Matrix& d_out) {
    if (!param_grads) return;
    g.weight[i] = tape.inputs[i].transpose() * d_out;
    g.bias[i] = d_out.colwise().sum();
  };

  if (spec.architecture == Architecture::kMlp) {
    accumulate(n_layers - 1, d_logits);
    Matrix d_a = d_logits * layers.back().weight.transpose();
    for (std::size_t k = n_layers - 1; k-- > 0;) {
      if (tape.masks[k].size() > 0) d_a = d_a.cwiseProduct(tape.masks[k]);
      Matrix d_z = ReluGate(d_a, tape.pre[k]);
      accumulate(k, d_z);
      d_a = d_z * layers[k].weight.transpose();
    }
    g.input = std::move(d_a);
    return g;
  }

  const std::size_t blocks = (n_layers - 2) / 2;
  accumulate(n_layers - 1, d_logits);
  Matrix d_h = ReluGate(d_logits * layers.back().weight.transpose(), tape.pre.back());
  for (std::size_t b = blocks; b-- > 0;) {
    const std::size_t l1 = 1 + 2 * b;
    const std::size_t l2 = l1 + 1;
    Matrix d_v = d_h;
    if (tape.masks[l2].size() > 0) d_v = d_v.cwiseProduct(tape.masks[l2]);
    accumulate(l2, d_v);
    Matrix d_r = d_v * layers[l2].weight.transpose();
    if (tape.masks[l1].size() > 0) d_r = d_r.cwiseProduct(tape.masks[l1]);
    Matrix d_u = ReluGate(d_r, tape.pre[l1]);
    accumulate(l1, d_u);
    d_h += d_u * layers[l1].weight.transpose();
  }
  accumulate(0, d_h);
  g.input = d_h * layers[0].weight.transpose();
  return g;
}

Matrix Softmax(const Matrix& logits) {
  Matrix p(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    RowVector e = (logits.row(i).array() - m).exp().matrix();
    p.row(i) = e / e.sum();
  }
  return p;
}

void CheckInput(const Matrix& X, int input_dim) {
  if (X.cols() != input_dim) {
    throw Error(ErrorKind::kConfig, "feature matrix has " + std::to_string(X.cols()) +
                                        " columns, model expects " + std::to_string(input_dim));
  }
  if (!X.allFinite()) throw Error(ErrorKind::kInput, "feature matrix contains non-finite values");
}

}  // namespace

TrainedModel::TrainedModel(ModelSpec spec, std::vector<DenseLayer> layers, TrainingStats stats)
    : spec_(std::move(spec)), layers_(std::move(layers)), stats_(stats) {
  const auto shapes = LayerShapes(spec_);
  if (shapes.size() != layers_.size()) {
    throw Error(ErrorKind::kConfig, "layer count does not match the model spec");
  }
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (layers_[i].in_dim() != shapes[i].first || layers_[i].out_dim() != shapes[i].second ||
        layers_[i].bias.size() != shapes[i].second) {
      throw Error(ErrorKind::kConfig, "layer " + std::to_string(i) + " has the wrong shape");
    }
    if (!layers_[i].weight.allFinite() || !layers_[i].bias.allFinite()) {
      throw Error(ErrorKind::kConfig, "layer " + std::to_string(i) + " has non-finite values");
    }
  }
}

TrainedModel TrainedModel::Initialize(const ModelSpec& spec, std::uint64_t seed) {
  std::vector<DenseLayer> layers;
  const auto shapes = LayerShapes(spec);
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    layers.push_back(InitLayer(shapes[i].first, shapes[i].second, DeriveSeed(seed, "layer", i)));
  }
  TrainingStats stats;
  stats.seed = seed;
  return TrainedModel(spec, std::move(layers), stats);
}

Matrix TrainedModel::Logits(const Matrix& X) const {
  CheckInput(X, spec_.input_dim);
  return Forward(spec_, layers_, X, nullptr, nullptr);
}

Matrix TrainedModel::PredictProba(const Matrix& X) const {
  Matrix p = Softmax(Logits(X));
  // Keep every entry strictly inside (0, 1).
  return p.cwiseMax(1e-300).cwiseMin(1.0 - 1e-16);
}

std::vector<int> TrainedModel::Predict(const Matrix& X) const {
  const Matrix logits = Logits(X);
  std::vector<int> out(static_cast<std::size_t>(logits.rows()));
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    Eigen::Index c;
    logits.row(i).maxCoeff(&c);
    out[static_cast<std::size_t>(i)] = static_cast<int>(c);
  }
  return out;
}

Matrix TrainedModel::InputGradient(const Matrix& X, const GradientTarget& target) const {
  CheckInput(X, spec_.input_dim);
  const int k = spec_.n_classes;
  auto check_class = [k](int c) {
    if (c < 0 || c >= k) throw Error(ErrorKind::kConfig, "gradient target class out of range");
  };
  Tape tape;
  const Matrix logits = Forward(spec_, layers_, X, &tape, nullptr);
  Matrix d_logits = Matrix::Zero(logits.rows(), logits.cols());
  switch (target.kind) {
    case GradientTarget::Kind::kLoss: {
      if (static_cast<Eigen::Index>(target.labels.size()) != X.rows()) {
        throw Error(ErrorKind::kConfig, "label count does not match sample count");
      }
      d_logits = Softmax(logits);
      for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const int y = target.labels[static_cast<std::size_t>(i)];
        check_class(y);
        d_logits(i, y) -= 1.0;
      }
      break;
    }
    case GradientTarget::Kind::kLogit:
      check_class(target.class_index);
      d_logits.col(target.class_index).setOnes();
      break;
    case GradientTarget::Kind::kProbability: {
      check_class(target.class_index);
      const Matrix p = Softmax(logits);
      for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const double pc = p(i, target.class_index);
        d_logits.row(i) = -pc * p.row(i);
        d_logits(i, target.class_index) += pc;
      }
      break;
    }
    case GradientTarget::Kind::kLogitMargin:
      check_class(target.class_index);
      check_class(target.other_class);
      d_logits.col(target.class_index).array() += 1.0;
      d_logits.col(target.other_class).array() -= 1.0;
      break;
  }
  Matrix grad = Backward(spec_, layers_, tape, d_logits, false).input;
  for (Eigen::Index i = 0; i < grad.rows(); ++i) {
    if (!grad.row(i).allFinite()) {
      throw Error(ErrorKind::kNumerical,
                  "non-finite input gradient at sample " + std::to_string(i));
    }
  }
  return grad;
}

double F1Score(std::span<const int> y_true, std::span<const int> y_pred, int n_classes) {
  auto class_f1 = [&](int c, bool* defined) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      const bool t = y_true[i] == c;
      const bool p = y_pred[i] == c;
      tp += t && p;
      fp += !t && p;
      fn += t && !p;
    }
    *defined = tp + fp + fn > 0;
    return *defined ? 2.0 * tp / static_cast<double>(2 * tp + fp + fn) : 1.0;
  };
  bool defined = false;
  if (n_classes == 2) return class_f1(1, &defined);
  double sum = 0.0;
  int count = 0;
  for (int c = 0; c < n_classes; ++c) {
    const double f = class_f1(c, &defined);
    if (defined) {
      sum += f;
      ++count;
    }
  }
  return count == 0 ? 1.0 : sum / count;
}

namespace {

struct AdamState {
  std::vector<Matrix> m_w, v_w;
  std::vector<RowVector> m_b, v_b;
};

}  // namespace

TrainedModel Train(const ModelSpec& spec, const Matrix& X, std::span<const int> y,
                   const TrainConfig& config, std::uint64_t seed) {
  spec.Validate();
  if (X.cols() != spec.input_dim) {
    throw Error(ErrorKind::kConfig, "training data has " + std::to_string(X.cols()) +
                                        " features, spec.input_dim is " +
                                        std::to_string(spec.input_dim));
  }
  if (static_cast<Eigen::Index>(y.size()) != X.rows()) {
    throw Error(ErrorKind::kConfig, "label count does not match row count");
  }
  if (X.rows() == 0) throw Error(ErrorKind::kConfig, "training data is empty");
  for (int label : y) {
    if (label < 0 || label >= spec.n_classes) {
      throw Error(ErrorKind::kConfig, "label out of range [0, n_classes)");
    }
  }
  if (!X.allFinite()) throw Error(ErrorKind::kInput, "training data contains non-finite values");
  if (config.batch_size < 1 || config.max_epochs < 1 || !(config.learning_rate > 0.0)) {
    throw Error(ErrorKind::kConfig, "invalid training configuration");
  }

  const auto start = std::chrono::steady_clock::now();
  TrainedModel model = TrainedModel::Initialize(spec, DeriveSeed(seed, "init"));

  const std::size_t n = y.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng split_rng(DeriveSeed(seed, "validation"));
  split_rng.Shuffle(order);
  std::size_t n_val = 0;
  if (n >= 5 && config.validation_fraction > 0.0) {
    n_val = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(config.validation_fraction * n)), 1, n - 1);
  }
  std::vector<std::size_t> val_idx(order.begin(), order.begin() + n_val);
  std::vector<std::size_t> fit_idx(order.begin() + n_val, order.end());
  if (val_idx.empty()) val_idx = fit_idx;

  Matrix X_val(val_idx.size(), X.cols());
  std::vector<int> y_val(val_idx.size());
  for (std::size_t i = 0; i < val_idx.size(); ++i) {
    X_val.row(i) = X.row(val_idx[i]);
    y_val[i] = y[val_idx[i]];
  }

  auto& layers = model.mutable_layers();
  AdamState adam;
  for (const auto& layer : layers) {
    adam.m_w.push_back(Matrix::Zero(layer.weight.rows(), layer.weight.cols()));
    adam.v_w.push_back(Matrix::Zero(layer.weight.rows(), layer.weight.cols()));
    adam.m_b.push_back(RowVector::Zero(layer.bias.size()));
    adam.v_b.push_back(RowVector::Zero(layer.bias.size()));
  }
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  long step = 0;

  std::vector<DenseLayer> best_layers = layers;
  double best_f1 = -1.0;
  double best_loss = std::numeric_limits<double>::infinity();
  int since_best = 0;
  int epochs = 0;
  std::uint64_t samples = 0;
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    Rng shuffle_rng(DeriveSeed(seed, "epoch", static_cast<std::uint64_t>(epoch)));
    Rng dropout_rng(DeriveSeed(seed, "dropout", static_cast<std::uint64_t>(epoch)));
    shuffle_rng.Shuffle(fit_idx);
    for (std::size_t startb = 0; startb < fit_idx.size(); startb += batch) {
      const std::size_t nb = std::min(batch, fit_idx.size() - startb);
      Matrix xb(nb, X.cols());
      std::vector<int> yb(nb);
      for (std::size_t i = 0; i < nb; ++i) {
        xb.row(i) = X.row(fit_idx[startb + i]);
        yb[i] = y[fit_idx[startb + i]];
      }
      Tape tape;
      const Matrix logits = Forward(spec, layers, xb, &tape, &dropout_rng);
      Matrix d_logits = Softmax(logits);
      double loss = 0.0;
      for (std::size_t i = 0; i < nb; ++i) {
        loss -= std::log(std::max(d_logits(i, yb[i]), 1e-300));
        d_logits(i, yb[i]) -= 1.0;
      }
      loss /= static_cast<double>(nb);
      if (!std::isfinite(loss) || !logits.allFinite()) {
        throw Error(ErrorKind::kTraining,
                    "training diverged (non-finite loss) at epoch " + std::to_string(epoch + 1));
      }
      d_logits /= static_cast<double>(nb);
      Gradients g = Backward(spec, layers, tape, d_logits, true);
      ++step;
      const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      for (std::size_t l = 0; l < layers.size(); ++l) {
        adam.m_w[l] = kBeta1 * adam.m_w[l] + (1.0 - kBeta1) * g.weight[l];
        adam.v_w[l] = kBeta2 * adam.v_w[l] + (1.0 - kBeta2) * g.weight[l].cwiseAbs2();
        adam.m_b[l] = kBeta1 * adam.m_b[l] + (1.0 - kBeta1) * g.bias[l];
        adam.v_b[l] = kBeta2 * adam.v_b[l] + (1.0 - kBeta2) * g.bias[l].cwiseAbs2();
        layers[l].weight.array() -= config.learning_rate * (adam.m_w[l].array() / c1) /
                                    ((adam.v_w[l].array() / c2).sqrt() + kEps);
        layers[l].bias.array() -= config.learning_rate * (adam.m_b[l].array() / c1) /
                                  ((adam.v_b[l].array() / c2).sqrt() + kEps);
      }
      samples += nb;
    }
    epochs = epoch + 1;

    const Matrix val_logits = Forward(spec, layers, X_val, nullptr, nullptr);
    const Matrix val_p = Softmax(val_logits);
    std::vector<int> val_pred(y_val.size());
    double val_loss = 0.0;
    for (std::size_t i = 0; i < y_val.size(); ++i) {
      Eigen::Index c;
      val_logits.row(static_cast<Eigen::Index>(i)).maxCoeff(&c);
      val_pred[i] = static_cast<int>(c);
      val_loss -= std::log(std::max(val_p(static_cast<Eigen::Index>(i), y_val[i]), 1e-300));
    }
    const double f1 = F1Score(y_val, val_pred, spec.n_classes);
    // Validation F1 drives early stopping; ties go to the lower validation loss.
    if (f1 > best_f1 || (f1 == best_f1 && val_loss < best_loss)) {
      best_f1 = f1;
      best_loss = val_loss;
      best_layers = layers;
      since_best = 0;
    } else {
      ++since_best;
    }
    if (config.target_f1 > 0.0 && best_f1 >= config.target_f1) break;
    if (since_best >= config.patience) break;
  }

  layers = std::move(best_layers);
  TrainingStats& stats = model.mutable_training_stats();
  stats.epochs_run = epochs;
  stats.final_f1 = std::clamp(best_f1, 0.0, 1.0);
  stats.seed = seed;
  stats.samples_processed = samples;
  stats.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return model;
}

TrainedModel RandomizeParameters(const TrainedModel& model, RandomizeMode mode,
                                 std::uint64_t seed, int cascade_steps) {
  std::vector<DenseLayer> layers = model.layers();
  const std::size_t n_layers = layers.size();
  std::size_t first = 0;
  if (mode == RandomizeMode::kTopDownCascade) {
    const std::size_t steps =
        static_cast<std::size_t>(std::clamp(cascade_steps, 0, static_cast<int>(n_layers)));
    first = n_layers - steps;
  }
  // Per-layer seeds make cascade step k+1 extend step k rather than redraw it.
  for (std::size_t i = first; i < n_layers; ++i) {
    layers[i] = InitLayer(layers[i].in_dim(), layers[i].out_dim(), DeriveSeed(seed, "layer", i));
  }
  return TrainedModel(model.spec(), std::move(layers), model.training_stats());
}

std::string ModelToJson(const TrainedModel& model) {
  return ModelToJsonValue(model).dump(2);
}

TrainedModel ModelFromJson(const std::string& json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("model JSON: ") + e.what());
  }
  return ModelFromJsonValue(doc);
}

}  // namespace respscore
