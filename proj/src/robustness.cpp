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

#include "respscore/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "respscore/errors.hpp"
#include "respscore/rng.hpp"

namespace respscore {

void AttackConfig::Validate() const {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::kConfig, "epsilon must be positive");
  if (!(clever_radius > 0.0)) throw Error(ErrorKind::kConfig, "clever_radius must be positive");
  if (clever_norm != "l2") throw Error(ErrorKind::kConfig, "clever_norm must be 'l2'");
  if (n_batches < 1 || batch_size < 1 ||
      static_cast<long long>(n_batches) * batch_size < 50) {
    throw Error(ErrorKind::kConfig, "n_batches * batch_size must be >= 50");
  }
  if (clever_samples < 1) throw Error(ErrorKind::kConfig, "clever_samples must be positive");
}

namespace {

void CheckLabels(const TrainedModel& model, const Matrix& X, std::span<const int> y) {
  if (X.rows() == 0) throw Error(ErrorKind::kInput, "no samples");
  if (static_cast<Eigen::Index>(y.size()) != X.rows()) {
    throw Error(ErrorKind::kInput, "label count does not match sample count");
  }
  for (int label : y) {
    if (label < 0 || label >= model.n_classes()) {
      throw Error(ErrorKind::kInput, "label " + std::to_string(label) + " out of range");
    }
  }
}

double Accuracy(const std::vector<int>& pred, std::span<const int> y) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y.size(); ++i) hits += pred[i] == y[i];
  return static_cast<double>(hits) / static_cast<double>(y.size());
}

// Weibull MLE for t > 0: shape k solves
//   sum t^k ln t / sum t^k - 1/k - mean(ln t) = 0,
// which is increasing in k; bisection on log k. Returns the log-likelihood.
double WeibullProfile(const std::vector<double>& t, double* shape, double* scale) {
  const double n = static_cast<double>(t.size());
  double mean_log = 0.0;
  for (double v : t) mean_log += std::log(v);
  mean_log /= n;
  auto g = [&](double k) {
    double a = 0.0, b = 0.0;
    const double tmax = *std::max_element(t.begin(), t.end());
    for (double v : t) {
      const double p = std::pow(v / tmax, k);
      a += p * std::log(v);
      b += p;
    }
    return a / b - 1.0 / k - mean_log;
  };
  double lo = std::log(1e-3), hi = std::log(1e3);
  if (g(std::exp(lo)) > 0.0 || g(std::exp(hi)) < 0.0) return -INFINITY;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(std::exp(mid)) < 0.0 ? lo : hi) = mid;
  }
  const double k = std::exp(0.5 * (lo + hi));
  double sum_pow = 0.0;
  for (double v : t) sum_pow += std::pow(v, k);
  const double sigma = std::pow(sum_pow / n, 1.0 / k);
  double ll = 0.0;
  for (double v : t) {
    ll += std::log(k / sigma) + (k - 1.0) * std::log(v / sigma) - std::pow(v / sigma, k);
  }
  *shape = k;
  *scale = sigma;
  return ll;
}

}  // namespace

Matrix FgsmPerturb(const TrainedModel& model, const Matrix& X, std::span<const int> y,
                   double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::kConfig, "epsilon must be positive");
  CheckLabels(model, X, y);
  const Matrix grad = model.InputGradient(X, GradientTarget::Loss({y.begin(), y.end()}));
  if (!grad.allFinite()) throw Error(ErrorKind::kNumerical, "non-finite loss gradient in FGSM");
  const Matrix sign = grad.unaryExpr([](double g) { return g > 0.0 ? 1.0 : (g < 0.0 ? -1.0 : 0.0); });
  Matrix adv = X + epsilon * sign;
  // Rounding of x + eps can overshoot by an ulp; pull such entries back.
  for (Eigen::Index i = 0; i < adv.size(); ++i) {
    double& a = adv.data()[i];
    const double x = X.data()[i];
    while (std::abs(a - x) > epsilon) a = std::nextafter(a, x);
  }
  return adv;
}

FgsmResult FgsmAccuracyGap(const TrainedModel& model, const Matrix& X, std::span<const int> y,
                           double epsilon) {
  FgsmResult r;
  r.clean_accuracy = Accuracy(model.Predict(X), y);
  r.adversarial_accuracy = Accuracy(model.Predict(FgsmPerturb(model, X, y, epsilon)), y);
  r.accuracy_gap = r.clean_accuracy - r.adversarial_accuracy;
  return r;
}

WeibullFit FitReverseWeibull(std::span<const double> maxima) {
  WeibullFit fit;
  if (maxima.size() < 3) return fit;
  const double top = *std::max_element(maxima.begin(), maxima.end());
  const double bottom = *std::min_element(maxima.begin(), maxima.end());
  const double range = top - bottom;
  fit.location = top;
  if (!(range > 1e-12 * std::max(1.0, std::abs(top)))) return fit;

  std::vector<double> t(maxima.size());
  auto profile = [&](double offset, double* k, double* s) {
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = top + offset - maxima[i];
    return WeibullProfile(t, k, s);
  };
  // Golden-section search over log(mu - max) in [range * 1e-6, range * 10].
  double a = std::log(range * 1e-6), b = std::log(range * 10.0);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double k = 0.0, s = 0.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = profile(std::exp(c), &k, &s), fd = profile(std::exp(d), &k, &s);
  for (int it = 0; it < 100 && b - a > 1e-8; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = profile(std::exp(c), &k, &s);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = profile(std::exp(d), &k, &s);
    }
  }
  const double best = 0.5 * (a + b);
  const double ll = profile(std::exp(best), &k, &s);
  const double lo = std::log(range * 1e-6), hi = std::log(range * 10.0);
  // An optimum pinned to either end of the bracket means the likelihood has no
  // interior maximum (unbounded as mu -> max, or flat as mu -> infinity).
  const bool interior = best - lo > 1e-3 * (hi - lo) && hi - best > 1e-3 * (hi - lo);
  if (std::isfinite(ll) && interior && k > 0.0 && std::isfinite(k)) {
    fit.location = top + std::exp(best);
    fit.shape = k;
    fit.scale = s;
    fit.converged = true;
  }
  return fit;
}

CleverResult CleverU(const TrainedModel& model, const RowVector& x, const AttackConfig& cfg,
                     std::uint64_t sample_index) {
  cfg.Validate();
  if (x.cols() != model.input_dim()) throw Error(ErrorKind::kInput, "input width mismatch");
  const Eigen::Index d = x.cols();
  const RowVector logits = model.Logits(x).row(0);
  CleverResult result;
  Eigen::Index c = 0;
  logits.maxCoeff(&c);
  result.predicted_class = static_cast<int>(c);
  result.score = cfg.clever_radius;

  for (int j = 0; j < model.n_classes(); ++j) {
    if (j == c) continue;
    const double margin = logits[c] - logits[j];
    Rng rng(DeriveSeed(DeriveSeed(cfg.seed, "clever", sample_index), "class",
                       static_cast<std::uint64_t>(j)));
    std::vector<double> maxima;
    Matrix batch(cfg.batch_size, d);
    for (int b = 0; b < cfg.n_batches; ++b) {
      for (int s = 0; s < cfg.batch_size; ++s) {
        RowVector dir(d);
        double norm = 0.0;
        do {
          for (Eigen::Index k = 0; k < d; ++k) dir[k] = rng.Normal();
          norm = dir.norm();
        } while (norm == 0.0);
        const double r = cfg.clever_radius * std::pow(rng.Uniform(), 1.0 / static_cast<double>(d));
        batch.row(s) = x + (r / norm) * dir;
      }
      const Matrix g = model.InputGradient(batch, GradientTarget::Margin(static_cast<int>(c), j));
      if (!g.allFinite()) throw Error(ErrorKind::kNumerical, "non-finite margin gradient in CLEVER");
      maxima.push_back(g.rowwise().norm().maxCoeff());
    }
    const double top = *std::max_element(maxima.begin(), maxima.end());
    if (top == 0.0) {
      result.zero_gradients = true;
      continue;
    }
    const WeibullFit fit = FitReverseWeibull(maxima);
    if (!fit.converged) result.used_fallback = true;
    const double lipschitz = fit.converged ? fit.location : top;
    result.score = std::min(result.score, std::min(margin / lipschitz, cfg.clever_radius));
  }
  result.score = std::clamp(result.score, 0.0, cfg.clever_radius);
  return result;
}

double LossSensitivity(const TrainedModel& model, const Matrix& X, std::span<const int> y) {
  CheckLabels(model, X, y);
  const Matrix grad = model.InputGradient(X, GradientTarget::Loss({y.begin(), y.end()}));
  if (!grad.allFinite()) throw Error(ErrorKind::kNumerical, "non-finite loss gradient");
  return grad.rowwise().norm().mean();
}

RobustnessReport EvaluateRobustness(const TrainedModel& model, const Matrix& X,
                                    std::span<const int> y, const AttackConfig& cfg) {
  cfg.Validate();
  RobustnessReport report;
  const FgsmResult fgsm = FgsmAccuracyGap(model, X, y, cfg.epsilon);
  report.clean_accuracy = fgsm.clean_accuracy;
  report.adversarial_accuracy = fgsm.adversarial_accuracy;
  report.accuracy_gap = fgsm.accuracy_gap;
  if (fgsm.accuracy_gap < 0.0) {
    report.flags.push_back("fgsm: negative accuracy gap (attack improved accuracy)");
  }
  report.loss_sensitivity = LossSensitivity(model, X, y);

  std::vector<std::size_t> rows(static_cast<std::size_t>(X.rows()));
  std::iota(rows.begin(), rows.end(), 0);
  Rng rng(DeriveSeed(cfg.seed, "clever_rows"));
  rng.Shuffle(rows);
  rows.resize(std::min(rows.size(), static_cast<std::size_t>(cfg.clever_samples)));
  std::sort(rows.begin(), rows.end());
  int zero = 0;
  for (std::size_t r : rows) {
    const CleverResult c = CleverU(model, X.row(static_cast<Eigen::Index>(r)), cfg, r);
    report.clever_scores.push_back(c.score);
    report.clever_fallbacks += c.used_fallback;
    zero += c.zero_gradients;
  }
  report.clever_rows = rows;
  report.clever_u_mean = std::accumulate(report.clever_scores.begin(), report.clever_scores.end(), 0.0) /
                         static_cast<double>(report.clever_scores.size());
  if (report.clever_fallbacks > 0) {
    report.flags.push_back("clever: " + std::to_string(report.clever_fallbacks) +
                           " samples used the max-of-maxima fallback");
  }
  if (zero > 0) {
    report.flags.push_back("clever: " + std::to_string(zero) +
                           " samples had all-zero margin gradients for some class");
  }
  return report;
}

}  // namespace respscore
