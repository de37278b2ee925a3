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

#include "respscore/explainability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include <Eigen/QR>

#include "respscore/errors.hpp"
#include "respscore/rng.hpp"

namespace respscore {

const char* ExplainedOutputName(ExplainedOutput o) {
  return o == ExplainedOutput::kLogit ? "logit" : "probability";
}

ExplainedOutput ParseExplainedOutput(const std::string& name) {
  if (name == "logit") return ExplainedOutput::kLogit;
  if (name == "probability") return ExplainedOutput::kProbability;
  throw Error(ErrorKind::kConfig, "explained output must be 'logit' or 'probability', got '" +
                                      name + "'");
}

namespace {

Matrix Outputs(const TrainedModel& model, const Matrix& X, ExplainedOutput output) {
  return output == ExplainedOutput::kLogit ? model.Logits(X) : model.PredictProba(X);
}

std::vector<int> ExpandTargets(std::span<const int> targets, Eigen::Index rows, int n_classes) {
  std::vector<int> out;
  if (targets.size() == 1) {
    out.assign(static_cast<std::size_t>(rows), targets[0]);
  } else if (targets.size() == static_cast<std::size_t>(rows)) {
    out.assign(targets.begin(), targets.end());
  } else {
    throw Error(ErrorKind::kInput, "need one target class per row or a single shared one");
  }
  for (int c : out) {
    if (c < 0 || c >= n_classes) {
      throw Error(ErrorKind::kInput, "target class " + std::to_string(c) + " out of range");
    }
  }
  return out;
}

void CheckColumns(const TrainedModel& model, const Matrix& X, const char* what) {
  if (X.cols() != model.input_dim()) {
    throw Error(ErrorKind::kInput, std::string(what) + " has " + std::to_string(X.cols()) +
                                       " columns, model expects " +
                                       std::to_string(model.input_dim()));
  }
}

double Binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Rows of `z` are coalitions (1 = feature kept from x), with kernel weights.
struct CoalitionDesign {
  Eigen::MatrixXd z;
  Eigen::VectorXd weight;
  bool exact = false;
};

void AppendCombinations(int d, int size, double weight, std::vector<std::vector<double>>& rows,
                        std::vector<double>& weights) {
  std::vector<int> idx(static_cast<std::size_t>(size));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::vector<double> row(static_cast<std::size_t>(d), 0.0);
    for (int j : idx) row[static_cast<std::size_t>(j)] = 1.0;
    rows.push_back(std::move(row));
    weights.push_back(weight);
    int i = size - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == d - size + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < size; ++k) {
      idx[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k - 1)] + 1;
    }
  }
}

// Fully enumerates complementary subset sizes (1 and d-1, then 2 and d-2, ...)
// while they fit the budget, then samples complement pairs from the remaining
// sizes in proportion to their kernel mass.
CoalitionDesign BuildDesign(int d, int budget, std::uint64_t seed) {
  std::vector<std::vector<double>> rows;
  std::vector<double> weights;
  auto kernel = [d](int s) { return (d - 1.0) / (Binomial(d, s) * s * (d - s)); };
  auto mass = [d](int s) { return (d - 1.0) / (static_cast<double>(s) * (d - s)); };

  int remaining = budget;
  int s = 1;
  for (; s <= d / 2; ++s) {
    const double count = Binomial(d, s) * (2 * s == d ? 1.0 : 2.0);
    if (count > remaining) break;
    AppendCombinations(d, s, kernel(s), rows, weights);
    if (2 * s != d) AppendCombinations(d, d - s, kernel(d - s), rows, weights);
    remaining -= static_cast<int>(count);
  }
  const bool exact = s > d / 2;

  if (!exact && remaining > 0) {
    std::vector<int> sizes;
    std::vector<double> cumulative;
    double total = 0.0;
    for (int k = s; k <= d - s; ++k) {
      sizes.push_back(k);
      total += mass(k);
      cumulative.push_back(total);
    }
    const double each = total / remaining;
    Rng rng(seed);
    std::vector<int> perm(static_cast<std::size_t>(d));
    while (remaining > 0) {
      const double u = rng.Uniform() * total;
      const auto pos = std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
      const int size = sizes[static_cast<std::size_t>(std::min<std::ptrdiff_t>(
          pos, static_cast<std::ptrdiff_t>(sizes.size()) - 1))];
      std::iota(perm.begin(), perm.end(), 0);
      for (int i = 0; i < size; ++i) {
        const auto j = i + static_cast<int>(rng.UniformInt(static_cast<std::uint64_t>(d - i)));
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
      }
      std::vector<double> row(static_cast<std::size_t>(d), 0.0);
      for (int i = 0; i < size; ++i) row[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = 1.0;
      std::vector<double> complement(row.size());
      for (std::size_t j = 0; j < row.size(); ++j) complement[j] = 1.0 - row[j];
      rows.push_back(std::move(row));
      weights.push_back(each);
      if (--remaining > 0) {
        rows.push_back(std::move(complement));
        weights.push_back(each);
        --remaining;
      }
    }
  }

  CoalitionDesign design;
  design.exact = exact;
  design.z.resize(static_cast<Eigen::Index>(rows.size()), d);
  design.weight.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (int j = 0; j < d; ++j) design.z(static_cast<Eigen::Index>(k), j) = rows[k][static_cast<std::size_t>(j)];
    design.weight[static_cast<Eigen::Index>(k)] = weights[k];
  }
  return design;
}

// Mean explained output over the background for each coalition: v[k].
Eigen::VectorXd CoalitionValues(const TrainedModel& model, const RowVector& x,
                                const Matrix& background, const Eigen::MatrixXd& z, int target,
                                ExplainedOutput output) {
  const Eigen::Index K = z.rows(), B = background.rows(), d = x.cols();
  Eigen::VectorXd v(K);
  const Eigen::Index chunk = std::max<Eigen::Index>(1, (Eigen::Index{1} << 20) / std::max<Eigen::Index>(1, B * d));
  for (Eigen::Index k0 = 0; k0 < K; k0 += chunk) {
    const Eigen::Index k1 = std::min(K, k0 + chunk);
    Matrix batch((k1 - k0) * B, d);
    for (Eigen::Index k = k0; k < k1; ++k) {
      for (Eigen::Index b = 0; b < B; ++b) {
        auto row = batch.row((k - k0) * B + b);
        for (Eigen::Index j = 0; j < d; ++j) row[j] = z(k, j) != 0.0 ? x[j] : background(b, j);
      }
    }
    const Matrix out = Outputs(model, batch, output);
    for (Eigen::Index k = k0; k < k1; ++k) {
      v[k] = out.col(target).segment((k - k0) * B, B).mean();
    }
  }
  return v;
}

std::vector<double> Ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::span<const double> RowSpan(const Matrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

double Mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::vector<double> ExplainedValues(const TrainedModel& model, const Matrix& X,
                                    std::span<const int> target_classes, ExplainedOutput output) {
  CheckColumns(model, X, "input");
  const auto targets = ExpandTargets(target_classes, X.rows(), model.n_classes());
  const Matrix out = Outputs(model, X, output);
  std::vector<double> v(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) v[static_cast<std::size_t>(i)] = out(i, targets[static_cast<std::size_t>(i)]);
  return v;
}

std::string BackgroundFingerprint(const Matrix& background) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001B3ULL;
    }
  };
  const std::int64_t shape[2] = {background.rows(), background.cols()};
  mix(shape, sizeof(shape));
  mix(background.data(), static_cast<std::size_t>(background.size()) * sizeof(double));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

AttributionMatrix KernelShap(const TrainedModel& model, const Matrix& X, const Matrix& background,
                             std::span<const int> target_classes, const ShapConfig& config) {
  CheckColumns(model, X, "explained rows");
  CheckColumns(model, background, "background");
  if (background.rows() == 0) throw Error(ErrorKind::kInput, "background sample is empty");
  const int d = model.input_dim();
  const int budget = config.n_coalitions == 0 ? 2 * d + 512 : config.n_coalitions;
  if (budget < 2 * d + 2) {
    throw Error(ErrorKind::kConfig, "n_coalitions must be >= 2d + 2 = " + std::to_string(2 * d + 2));
  }
  const auto targets = ExpandTargets(target_classes, X.rows(), model.n_classes());

  AttributionMatrix result;
  result.values = Matrix::Zero(X.rows(), d);
  result.target_classes = targets;
  result.background_ref = BackgroundFingerprint(background);
  result.base_values.resize(targets.size());

  const Matrix background_out = Outputs(model, background, config.output);
  const RowVector base_by_class = background_out.colwise().mean();
  const std::vector<double> fx = ExplainedValues(model, X, targets, config.output);
  for (std::size_t i = 0; i < targets.size(); ++i) result.base_values[i] = base_by_class[targets[i]];

  if (d == 1) {
    result.exact = true;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      result.values(static_cast<Eigen::Index>(i), 0) = fx[i] - result.base_values[i];
    }
    return result;
  }

  const CoalitionDesign design = BuildDesign(d, budget, config.seed);
  result.exact = design.exact;
  result.n_coalitions = static_cast<int>(design.z.rows());

  // The full-coalition constraint eliminates the last feature:
  // phi_last = (f(x) - base) - sum(phi_head).
  const Eigen::Index K = design.z.rows();
  const Eigen::VectorXd sqrt_w = design.weight.array().sqrt();
  const Eigen::VectorXd last = design.z.col(d - 1);
  Eigen::MatrixXd A = design.z.leftCols(d - 1).colwise() - last;
  A = sqrt_w.asDiagonal() * A;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  result.least_norm = cod.rank() < d - 1;

  Eigen::MatrixXd rhs(K, X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const Eigen::VectorXd v =
        CoalitionValues(model, X.row(i), background, design.z, targets[ui], config.output);
    const double total = fx[ui] - result.base_values[ui];
    rhs.col(i) = sqrt_w.cwiseProduct((v.array() - result.base_values[ui]).matrix() - last * total);
  }
  const Eigen::MatrixXd head = cod.solve(rhs);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double total = fx[ui] - result.base_values[ui];
    for (int j = 0; j < d - 1; ++j) result.values(i, j) = head(j, i);
    result.values(i, d - 1) = total - head.col(i).sum();
    const double err = std::abs(result.base_values[ui] + result.values.row(i).sum() - fx[ui]);
    result.max_local_accuracy_error = std::max(result.max_local_accuracy_error, err);
  }
  return result;
}

double PearsonCorrelation(std::span<const double> a, std::span<const double> b, bool* degenerate) {
  if (a.size() != b.size()) throw Error(ErrorKind::kInput, "correlation inputs differ in length");
  if (degenerate) *degenerate = false;
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  // Relative floor so rounding noise around a constant does not count as variance.
  const double floor_a = 1e-24 * std::max(1.0, ma * ma) * n;
  const double floor_b = 1e-24 * std::max(1.0, mb * mb) * n;
  if (a.size() < 2 || saa <= floor_a || sbb <= floor_b) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double SpearmanCorrelation(std::span<const double> a, std::span<const double> b, bool* degenerate) {
  if (a.size() != b.size()) throw Error(ErrorKind::kInput, "correlation inputs differ in length");
  const auto ra = Ranks(a), rb = Ranks(b);
  return PearsonCorrelation(ra, rb, degenerate);
}

double Consistency(const Matrix& attributions, std::span<const int> labels, bool* no_matching_pairs) {
  if (labels.size() != static_cast<std::size_t>(attributions.rows())) {
    throw Error(ErrorKind::kInput, "one label per attribution row required");
  }
  std::map<std::vector<signed char>, std::map<int, long long>> groups;
  for (Eigen::Index i = 0; i < attributions.rows(); ++i) {
    const double max_abs = attributions.row(i).cwiseAbs().maxCoeff();
    std::vector<signed char> sig(static_cast<std::size_t>(attributions.cols()));
    for (Eigen::Index j = 0; j < attributions.cols(); ++j) {
      const double a = attributions(i, j);
      sig[static_cast<std::size_t>(j)] =
          std::abs(a) < 1e-3 * max_abs || max_abs == 0.0 ? 0 : (a > 0 ? 1 : -1);
    }
    ++groups[sig][labels[static_cast<std::size_t>(i)]];
  }
  long long pairs = 0, consistent = 0;
  for (const auto& [sig, by_label] : groups) {
    long long m = 0;
    for (const auto& [label, c] : by_label) {
      m += c;
      consistent += c * (c - 1) / 2;
    }
    pairs += m * (m - 1) / 2;
  }
  if (no_matching_pairs) *no_matching_pairs = pairs == 0;
  return pairs == 0 ? 1.0 : static_cast<double>(consistent) / static_cast<double>(pairs);
}

StabilityResult LipschitzAndConsistency(const TrainedModel& model, const Matrix& X,
                                        const AttributionMatrix& attributions,
                                        const Matrix& background, const ShapConfig& shap,
                                        double perturb_radius, int n_perturbations,
                                        std::uint64_t seed) {
  if (attributions.values.rows() != X.rows() || attributions.values.cols() != X.cols()) {
    throw Error(ErrorKind::kInput, "attributions do not match the explained rows");
  }
  if (!(perturb_radius > 0.0) || n_perturbations < 1) {
    throw Error(ErrorKind::kConfig, "perturbation radius and count must be positive");
  }
  const Eigen::Index n = X.rows(), d = X.cols();
  Matrix perturbed(n * n_perturbations, d);
  std::vector<int> targets;
  for (Eigen::Index i = 0; i < n; ++i) {
    Rng rng(DeriveSeed(seed, "lipschitz", static_cast<std::uint64_t>(i)));
    for (int p = 0; p < n_perturbations; ++p) {
      auto row = perturbed.row(i * n_perturbations + p);
      do {
        for (Eigen::Index j = 0; j < d; ++j) row[j] = X(i, j) + rng.Uniform(-perturb_radius, perturb_radius);
      } while ((row - X.row(i)).norm() == 0.0);
      targets.push_back(attributions.target_classes[static_cast<std::size_t>(i)]);
    }
  }
  StabilityResult r;
  if (n > 0) {
    const AttributionMatrix e = KernelShap(model, perturbed, background, targets, shap);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double worst = 0.0;
      for (int p = 0; p < n_perturbations; ++p) {
        const Eigen::Index k = i * n_perturbations + p;
        const double num = (attributions.values.row(i) - e.values.row(k)).norm();
        worst = std::max(worst, num / (X.row(i) - perturbed.row(k)).norm());
      }
      sum += worst;
    }
    r.lipschitz = sum / static_cast<double>(n);
  }
  r.consistency = Consistency(attributions.values, model.Predict(X), &r.no_matching_pairs);
  return r;
}

FaithfulnessResult FaithfulnessMetrics(const TrainedModel& model, const Matrix& X,
                                       const AttributionMatrix& attributions, int subset_size,
                                       int n_subsets, const RowVector& baseline,
                                       ExplainedOutput output, std::uint64_t seed) {
  const Eigen::Index n = X.rows(), d = X.cols();
  if (subset_size < 1 || subset_size >= d) {
    throw Error(ErrorKind::kInput, "faithfulness subset size must lie in [1, d)");
  }
  if (n_subsets < 2) throw Error(ErrorKind::kConfig, "faithfulness needs at least 2 subsets");
  if (baseline.cols() != d || attributions.values.rows() != n || attributions.values.cols() != d) {
    throw Error(ErrorKind::kInput, "faithfulness inputs disagree in shape");
  }
  const auto& targets = attributions.target_classes;
  const std::vector<double> fx = ExplainedValues(model, X, targets, output);
  FaithfulnessResult result;
  std::vector<double> corrs, estimates;
  std::vector<int> perm(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const std::span<const int> target(&targets[ui], 1);

    Rng rng(DeriveSeed(seed, "faithfulness_correlation", static_cast<std::uint64_t>(i)));
    Matrix masked(n_subsets, d);
    std::vector<double> sums(static_cast<std::size_t>(n_subsets), 0.0);
    for (int t = 0; t < n_subsets; ++t) {
      masked.row(t) = X.row(i);
      std::iota(perm.begin(), perm.end(), 0);
      for (int k = 0; k < subset_size; ++k) {
        const auto j = k + static_cast<int>(rng.UniformInt(static_cast<std::uint64_t>(d - k)));
        std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(j)]);
        const int f = perm[static_cast<std::size_t>(k)];
        masked(t, f) = baseline[f];
        sums[static_cast<std::size_t>(t)] += attributions.values(i, f);
      }
    }
    std::vector<double> drops = ExplainedValues(model, masked, target, output);
    for (double& v : drops) v = fx[ui] - v;
    bool degenerate = false;
    corrs.push_back(PearsonCorrelation(sums, drops, &degenerate));
    result.degenerate_samples += degenerate;

    Matrix single(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      single.row(j) = X.row(i);
      single(j, j) = baseline[j];
    }
    std::vector<double> single_drops = ExplainedValues(model, single, target, output);
    for (double& v : single_drops) v = fx[ui] - v;
    estimates.push_back(PearsonCorrelation(RowSpan(attributions.values, i), single_drops, &degenerate));
    result.degenerate_samples += degenerate;
  }
  result.correlation = Mean(corrs);
  result.estimate = Mean(estimates);
  return result;
}

RandomizationResult RandomizationMetrics(const TrainedModel& model, const Matrix& X,
                                         const AttributionMatrix& attributions,
                                         const Matrix& background, const ShapConfig& shap,
                                         std::uint64_t seed) {
  const auto& targets = attributions.target_classes;
  const std::span<const double> original(attributions.values.data(),
                                         static_cast<std::size_t>(attributions.values.size()));
  RandomizationResult result;
  const int n_layers = static_cast<int>(model.layers().size());
  if (n_layers < 1) throw Error(ErrorKind::kInput, "model has no layers");
  double sum = 0.0;
  for (int step = 1; step <= n_layers; ++step) {
    const TrainedModel randomized =
        RandomizeParameters(model, RandomizeMode::kTopDownCascade, DeriveSeed(seed, "mprt"), step);
    const AttributionMatrix e = KernelShap(randomized, X, background, targets, shap);
    bool degenerate = false;
    const double rho = std::abs(SpearmanCorrelation(
        original, {e.values.data(), static_cast<std::size_t>(e.values.size())}, &degenerate));
    result.degenerate_correlations += degenerate;
    result.mprt_step_correlations.push_back(rho);
    sum += rho;
  }
  result.mprt_score = std::clamp(1.0 - sum / n_layers, 0.0, 1.0);

  const int C = model.n_classes();
  std::vector<int> others(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    Rng rng(DeriveSeed(seed, "random_logit", i));
    int other = static_cast<int>(rng.UniformInt(static_cast<std::uint64_t>(C - 1)));
    if (other >= targets[i]) ++other;
    others[i] = other;
  }
  double mean = 0.0;
  if (!others.empty()) {
    const AttributionMatrix e = KernelShap(model, X, background, others, shap);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      bool degenerate = false;
      mean += PearsonCorrelation(RowSpan(attributions.values, i), RowSpan(e.values, i), &degenerate);
      result.degenerate_correlations += degenerate;
    }
    mean /= static_cast<double>(X.rows());
  }
  result.random_logit_score = std::clamp(1.0 - std::max(0.0, mean), 0.0, 1.0);
  return result;
}

ComplexityResult ComplexityMetrics(const Matrix& attributions) {
  ComplexityResult result;
  const Eigen::Index n = attributions.rows(), d = attributions.cols();
  if (n == 0 || d == 0) throw Error(ErrorKind::kInput, "no attributions to measure");
  double gini_sum = 0.0, entropy_sum = 0.0;
  std::vector<double> x(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] = std::abs(attributions(i, j));
    const double total = std::accumulate(x.begin(), x.end(), 0.0);
    if (total == 0.0) {
      ++result.zero_rows;
      entropy_sum += std::log(static_cast<double>(d));
      continue;
    }
    std::sort(x.begin(), x.end());
    double weighted = 0.0, h = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      weighted += static_cast<double>(k + 1) * x[k];
      const double p = x[k] / total;
      if (p > 0.0) h -= p * std::log(p);
    }
    const double dd = static_cast<double>(d);
    gini_sum += std::clamp(2.0 * weighted / (dd * total) - (dd + 1.0) / dd, 0.0, 1.0);
    entropy_sum += std::max(0.0, h);
  }
  result.sparseness = gini_sum / static_cast<double>(n);
  result.entropy = entropy_sum / static_cast<double>(n);
  return result;
}

void ExplainabilityConfig::Validate() const {
  if (n_explain < 1 || background_size < 1) {
    throw Error(ErrorKind::kConfig, "explain and background sample sizes must be positive");
  }
  if (lipschitz_samples < 1 || lipschitz_perturbations < 1 || !(lipschitz_radius > 0.0)) {
    throw Error(ErrorKind::kConfig, "lipschitz settings must be positive");
  }
  if (faithfulness_subset_size < 0 || faithfulness_subsets < 2) {
    throw Error(ErrorKind::kConfig, "invalid faithfulness settings");
  }
  if (shap.n_coalitions < 0) throw Error(ErrorKind::kConfig, "n_coalitions must be >= 0");
}

namespace {

std::vector<std::size_t> SampleRows(Eigen::Index n, int k, std::uint64_t seed) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.Shuffle(idx);
  idx.resize(std::min(idx.size(), static_cast<std::size_t>(k)));
  std::sort(idx.begin(), idx.end());
  return idx;
}

Matrix Rows(const Matrix& X, const std::vector<std::size_t>& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), X.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(idx[i]));
  return out;
}

}  // namespace

ExplainabilityReport EvaluateExplainability(const TrainedModel& model, const Matrix& X_eval,
                                            const Matrix& X_background,
                                            const ExplainabilityConfig& config,
                                            std::uint64_t seed) {
  config.Validate();
  if (X_eval.rows() == 0 || X_background.rows() == 0) {
    throw Error(ErrorKind::kInput, "explainability needs evaluation and background rows");
  }
  ExplainabilityReport report;
  const int d = model.input_dim();
  report.log_n_features = std::log(static_cast<double>(d));
  report.explained_rows = SampleRows(X_eval.rows(), config.n_explain, DeriveSeed(seed, "explain_rows"));
  const Matrix X = Rows(X_eval, report.explained_rows);
  const Matrix background =
      Rows(X_background, SampleRows(X_background.rows(), config.background_size, DeriveSeed(seed, "background")));
  ShapConfig shap = config.shap;
  shap.seed = DeriveSeed(seed, "kernel_shap");

  const std::vector<int> predicted = model.Predict(X);
  report.attributions = KernelShap(model, X, background, predicted, shap);
  if (report.attributions.least_norm) {
    report.flags.push_back("kernel_shap: rank-deficient coalition design, least-norm solution");
  }

  const Eigen::Index n_lip = std::min<Eigen::Index>(X.rows(), config.lipschitz_samples);
  AttributionMatrix head = report.attributions;
  head.values = report.attributions.values.topRows(n_lip);
  head.base_values.resize(static_cast<std::size_t>(n_lip));
  head.target_classes.resize(static_cast<std::size_t>(n_lip));
  const StabilityResult stability =
      LipschitzAndConsistency(model, X.topRows(n_lip), head, background, shap,
                              config.lipschitz_radius, config.lipschitz_perturbations,
                              DeriveSeed(seed, "stability"));
  report.lipschitz = stability.lipschitz;
  bool no_pairs = false;
  report.consistency = Consistency(report.attributions.values, predicted, &no_pairs);
  if (no_pairs) report.flags.push_back("consistency: no signature-matched pairs, defined as 1");

  if (d >= 2) {
    const int subset = config.faithfulness_subset_size > 0 ? config.faithfulness_subset_size
                                                           : std::max(1, d / 4);
    const FaithfulnessResult f =
        FaithfulnessMetrics(model, X, report.attributions, subset, config.faithfulness_subsets,
                            background.colwise().mean(), shap.output, DeriveSeed(seed, "faithfulness"));
    report.faithfulness_correlation = f.correlation;
    report.faithfulness_estimate = f.estimate;
    if (f.degenerate_samples > 0) {
      report.flags.push_back("faithfulness: " + std::to_string(f.degenerate_samples) +
                             " zero-variance correlations defined as 0");
    }
  } else {
    report.flags.push_back("faithfulness: undefined for a single feature, correlations set to 0");
  }

  const RandomizationResult rnd =
      RandomizationMetrics(model, X, report.attributions, background, shap, DeriveSeed(seed, "randomization"));
  report.mprt_score = rnd.mprt_score;
  report.random_logit_score = rnd.random_logit_score;
  if (rnd.degenerate_correlations > 0) {
    report.flags.push_back("randomization: " + std::to_string(rnd.degenerate_correlations) +
                           " zero-variance correlations defined as 0");
  }

  const ComplexityResult c = ComplexityMetrics(report.attributions.values);
  report.sparseness = c.sparseness;
  report.complexity_entropy = c.entropy;
  if (c.zero_rows > 0) {
    report.flags.push_back("complexity: " + std::to_string(c.zero_rows) +
                           " all-zero attribution rows (sparseness 0, entropy ln d)");
  }
  return report;
}

}  // namespace respscore
