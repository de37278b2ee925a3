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

#include <numeric>

#include "respscore/errors.hpp"
#include "respscore/explainability.hpp"
#include "respscore/rng.hpp"
#include "shapley_oracle.hpp"
#include "test_util.hpp"

using namespace respscore;
using namespace respscore::testing;

namespace {

std::vector<double> RandomVector(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.Normal();
  return v;
}

TrainedModel RandomMlp(int d, int classes, std::uint64_t seed) {
  ModelSpec spec = ModelSpec::DefaultMlp(d, classes);
  spec.hidden_dims = {8, 6};
  return TrainedModel::Initialize(spec, seed);
}

}  // namespace

TEST_CASE("linear models: kernel SHAP equals the closed form for random w, x, z") {
  Rng rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(rng.UniformInt(9));
    const auto w = RandomVector(static_cast<std::size_t>(d), rng);
    const TrainedModel model = BinaryLinearModel(w, rng.Normal());
    const Matrix X = RandomMatrix(4, d, rng, 2.0);
    const Matrix z = RandomMatrix(trial % 2 == 0 ? 1 : 7, d, rng);
    ShapConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const std::vector<int> target{1};
    const AttributionMatrix a = KernelShap(model, X, z, target, cfg);
    const RowVector zbar = z.colwise().mean();
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const auto phi = LinearShapley(w, X.row(i), zbar);
      for (int j = 0; j < d; ++j) CHECK(std::abs(a.values(i, j) - phi[static_cast<std::size_t>(j)]) < 1e-6);
    }
    CHECK(a.max_local_accuracy_error <= 1e-6);
  }
}

TEST_CASE("full enumeration reproduces exact Shapley values of a nonlinear model") {
  Rng rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    const int d = 3 + trial % 5;
    const TrainedModel model = RandomMlp(d, 3, 40 + static_cast<std::uint64_t>(trial));
    const Matrix X = RandomMatrix(3, d, rng);
    const Matrix bg = RandomMatrix(5, d, rng);
    ShapConfig cfg;
    cfg.n_coalitions = (1 << d);
    const std::vector<int> targets{0, 1, 2};
    const AttributionMatrix a = KernelShap(model, X, bg, targets, cfg);
    CHECK(a.exact);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const auto phi = ExactShapleyLogit(model, X.row(i), bg, targets[static_cast<std::size_t>(i)]);
      for (int j = 0; j < d; ++j) {
        CHECK(std::abs(a.values(i, j) - phi[static_cast<std::size_t>(j)]) < 1e-9);
      }
    }
  }
}

TEST_CASE("paired-size enumeration plus sampling stays close to exact values") {
  Rng rng(8);
  const int d = 10;
  const TrainedModel model = RandomMlp(d, 2, 5);
  const Matrix X = RandomMatrix(3, d, rng);
  const Matrix bg = RandomMatrix(4, d, rng);
  ShapConfig cfg;
  cfg.seed = 3;
  const AttributionMatrix a = KernelShap(model, X, bg, std::vector<int>{1}, cfg);
  CHECK_FALSE(a.exact);
  CHECK(a.n_coalitions == 2 * d + 512);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const auto phi = ExactShapleyLogit(model, X.row(i), bg, 1);
    const double scale = std::accumulate(phi.begin(), phi.end(), 0.0,
                                         [](double s, double p) { return s + std::abs(p); });
    for (int j = 0; j < d; ++j) CHECK(std::abs(a.values(i, j) - phi[static_cast<std::size_t>(j)]) < 0.05 * scale + 1e-9);
  }
}

TEST_CASE("local accuracy on random networks with sampled coalitions") {
  Rng rng(9);
  for (int trial = 0; trial < 6; ++trial) {
    const int d = 12 + trial;
    ModelSpec spec = trial % 2 ? ModelSpec::DefaultTabResNet(d, 3) : ModelSpec::DefaultMlp(d, 2);
    const TrainedModel model = TrainedModel::Initialize(spec, 100 + static_cast<std::uint64_t>(trial));
    const Matrix X = RandomMatrix(5, d, rng);
    const Matrix bg = RandomMatrix(10, d, rng);
    for (ExplainedOutput out : {ExplainedOutput::kLogit, ExplainedOutput::kProbability}) {
      ShapConfig cfg;
      cfg.output = out;
      cfg.seed = static_cast<std::uint64_t>(trial);
      const AttributionMatrix a = KernelShap(model, X, bg, std::vector<int>{1}, cfg);
      const auto fx = ExplainedValues(model, X, std::vector<int>{1}, out);
      for (Eigen::Index i = 0; i < X.rows(); ++i) {
        CHECK(std::abs(a.base_values[static_cast<std::size_t>(i)] + a.values.row(i).sum() -
                       fx[static_cast<std::size_t>(i)]) < 1e-6);
      }
    }
  }
}

TEST_CASE("constant model: zero attributions and base equal to the constant") {
  Matrix W = Matrix::Zero(4, 2);
  RowVector b(2);
  b << 1.5, -0.5;
  const TrainedModel model = LinearModel(W, b);
  Rng rng(1);
  const AttributionMatrix a = KernelShap(model, RandomMatrix(3, 4, rng), RandomMatrix(2, 4, rng),
                                         std::vector<int>{0}, ShapConfig{});
  CHECK(a.values.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(a.base_values[0] == doctest::Approx(1.5));
}

TEST_CASE("single feature and input validation") {
  const TrainedModel model = BinaryLinearModel({2.0}, 0.5);
  Matrix X(1, 1), bg(1, 1);
  X << 3.0;
  bg << 1.0;
  const AttributionMatrix a = KernelShap(model, X, bg, std::vector<int>{1}, ShapConfig{});
  CHECK(a.values(0, 0) == doctest::Approx(4.0));
  CHECK(a.base_values[0] == doctest::Approx(2.5));

  const TrainedModel m4 = BinaryLinearModel({1, 2, 3, 4}, 0);
  Rng rng(2);
  const Matrix X4 = RandomMatrix(2, 4, rng);
  ShapConfig small;
  small.n_coalitions = 9;
  try {
    KernelShap(m4, X4, X4, std::vector<int>{1}, small);
    FAIL("expected config error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kConfig);
  }
  small.n_coalitions = 10;
  CHECK_NOTHROW(KernelShap(m4, X4, X4, std::vector<int>{1}, small));
  CHECK_THROWS_AS(KernelShap(m4, X4, Matrix(0, 4), std::vector<int>{1}, ShapConfig{}), Error);
  CHECK_THROWS_AS(KernelShap(m4, X4, X4, std::vector<int>{2}, ShapConfig{}), Error);
  CHECK_THROWS_AS(KernelShap(m4, X4, X4, std::vector<int>{1, 1, 1}, ShapConfig{}), Error);
  CHECK_THROWS_AS(ParseExplainedOutput("margin"), Error);
}

TEST_CASE("correlation helpers") {
  const std::vector<double> a{1, 2, 3, 4, 5}, b{2, 4, 6, 8, 10}, c{5, 4, 3, 2, 1};
  CHECK(PearsonCorrelation(a, b) == doctest::Approx(1.0));
  CHECK(PearsonCorrelation(a, c) == doctest::Approx(-1.0));
  bool degenerate = false;
  CHECK(PearsonCorrelation(a, std::vector<double>(5, 3.0), &degenerate) == 0.0);
  CHECK(degenerate);
  // Spearman is Pearson on average ranks: ties (1,2,2,4) -> ranks (1, 2.5, 2.5, 4).
  const std::vector<double> tied{1, 2, 2, 4}, y{1, 3, 2, 4};
  const std::vector<double> ranks{1, 2.5, 2.5, 4}, yr{1, 3, 2, 4};
  CHECK(SpearmanCorrelation(tied, y) == doctest::Approx(PearsonCorrelation(ranks, yr)));
  const std::vector<double> x{0.1, 5, 7, 100}, mono{-3, 0, 1, 2};
  CHECK(SpearmanCorrelation(x, mono) == doctest::Approx(1.0));
}

TEST_CASE("consistency by hand-enumerated pairs") {
  Matrix a(4, 3);
  a << 1, -1, 0.5,   //
      2, -3, 1,      // same signature as row 0
      -1, 1, 1,      //
      -5, 2, 0.1;    // same as row 2
  bool none = true;
  CHECK(Consistency(a, std::vector<int>{1, 1, 0, 1}, &none) == doctest::Approx(0.5));
  CHECK_FALSE(none);
  Matrix same = Matrix::Ones(5, 3);
  CHECK(Consistency(same, std::vector<int>(5, 2)) == 1.0);
  Matrix unique(2, 2);
  unique << 1, 1, -1, -1;
  CHECK(Consistency(unique, std::vector<int>{0, 1}, &none) == 1.0);
  CHECK(none);
  // Near-zero bucket is relative to the row maximum.
  Matrix tiny(2, 2);
  tiny << 1, 1e-4, 1, -1e-4;
  CHECK(Consistency(tiny, std::vector<int>{0, 1}) == 0.0);
}

TEST_CASE("lipschitz of a constant explanation is zero; positive for a nonlinear model") {
  const TrainedModel constant = ZeroModel(ModelSpec::DefaultMlp(4, 2));
  Rng rng(12);
  const Matrix X = RandomMatrix(3, 4, rng), bg = RandomMatrix(5, 4, rng);
  ShapConfig cfg;
  const AttributionMatrix a = KernelShap(constant, X, bg, std::vector<int>{0}, cfg);
  const StabilityResult s = LipschitzAndConsistency(constant, X, a, bg, cfg, 0.1, 4, 5);
  CHECK(s.lipschitz == 0.0);
  CHECK(s.consistency == 1.0);

  const TrainedModel model = RandomMlp(4, 2, 3);
  const AttributionMatrix b = KernelShap(model, X, bg, model.Predict(X), cfg);
  const StabilityResult t = LipschitzAndConsistency(model, X, b, bg, cfg, 0.1, 4, 5);
  CHECK(t.lipschitz > 0.0);
  CHECK(t.consistency >= 0.0);
  CHECK(t.consistency <= 1.0);
  CHECK(LipschitzAndConsistency(model, X, b, bg, cfg, 0.1, 4, 5).lipschitz == t.lipschitz);
  CHECK_THROWS_AS(LipschitzAndConsistency(model, X, b, bg, cfg, 0.0, 4, 5), Error);
}

TEST_CASE("faithfulness: exact linear SHAP gives estimate 1; noise gives near-zero correlation") {
  Rng rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 4 + trial;
    const auto w = RandomVector(static_cast<std::size_t>(d), rng);
    const TrainedModel model = BinaryLinearModel(w, 0.3);
    const Matrix X = RandomMatrix(6, d, rng), bg = RandomMatrix(8, d, rng);
    const AttributionMatrix a = KernelShap(model, X, bg, std::vector<int>{1}, ShapConfig{});
    const FaithfulnessResult f = FaithfulnessMetrics(model, X, a, std::max(1, d / 4), 100,
                                                     bg.colwise().mean(), ExplainedOutput::kLogit, 4);
    CHECK(f.estimate == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(f.correlation == doctest::Approx(1.0).epsilon(1e-6));
  }
  const int d = 12;
  const TrainedModel model = BinaryLinearModel(RandomVector(d, rng), 0.0);
  const Matrix X = RandomMatrix(40, d, rng), bg = RandomMatrix(8, d, rng);
  AttributionMatrix noise = KernelShap(model, X, bg, std::vector<int>{1}, ShapConfig{});
  noise.values = RandomMatrix(40, d, rng);
  const FaithfulnessResult f =
      FaithfulnessMetrics(model, X, noise, 3, 200, bg.colwise().mean(), ExplainedOutput::kLogit, 9);
  CHECK(std::abs(f.correlation) < 0.2);
}

TEST_CASE("faithfulness of a constant model is zero by the zero-variance rule") {
  const TrainedModel model = ZeroModel(ModelSpec::DefaultMlp(5, 2));
  Rng rng(2);
  const Matrix X = RandomMatrix(3, 5, rng), bg = RandomMatrix(3, 5, rng);
  const AttributionMatrix a = KernelShap(model, X, bg, std::vector<int>{0}, ShapConfig{});
  const FaithfulnessResult f =
      FaithfulnessMetrics(model, X, a, 1, 50, bg.colwise().mean(), ExplainedOutput::kLogit, 1);
  CHECK(f.correlation == 0.0);
  CHECK(f.estimate == 0.0);
  CHECK(f.degenerate_samples == 6);
  CHECK_THROWS_AS(FaithfulnessMetrics(model, X, a, 5, 50, bg.colwise().mean(), ExplainedOutput::kLogit, 1), Error);
}

TEST_CASE("randomization sanity: identity correlation 1, independent vectors near 0") {
  Rng rng(55);
  const std::vector<double> v = RandomVector(2000, rng);
  CHECK(1.0 - std::abs(SpearmanCorrelation(v, v)) == 0.0);
  const std::vector<double> u = RandomVector(2000, rng);
  CHECK(1.0 - std::abs(SpearmanCorrelation(v, u)) > 0.9);
  CHECK(1.0 - std::max(0.0, PearsonCorrelation(v, u)) > 0.9);

  const TrainedModel model = RandomMlp(6, 3, 8);
  const Matrix X = RandomMatrix(10, 6, rng), bg = RandomMatrix(6, 6, rng);
  const AttributionMatrix a = KernelShap(model, X, bg, model.Predict(X), ShapConfig{});
  const RandomizationResult r = RandomizationMetrics(model, X, a, bg, ShapConfig{}, 2);
  CHECK(r.mprt_step_correlations.size() == model.layers().size());
  CHECK(r.mprt_score >= 0.0);
  CHECK(r.mprt_score <= 1.0);
  CHECK(r.random_logit_score >= 0.0);
  CHECK(r.random_logit_score <= 1.0);

  // Binary linear model, logit output: class 0 is constant, so every random
  // logit correlation is degenerate and the score is 1.
  const TrainedModel lin = BinaryLinearModel({1, -2, 0.5}, 0.1);
  const Matrix X3 = RandomMatrix(5, 3, rng);
  const AttributionMatrix b = KernelShap(lin, X3, X3, std::vector<int>{1}, ShapConfig{});
  const RandomizationResult s = RandomizationMetrics(lin, X3, b, X3, ShapConfig{}, 2);
  CHECK(s.random_logit_score == 1.0);
}

TEST_CASE("complexity examples and scale invariance") {
  Matrix point(1, 4);
  point << 1, 0, 0, 0;
  ComplexityResult c = ComplexityMetrics(point);
  CHECK(c.sparseness == doctest::Approx(0.75));
  CHECK(c.entropy == 0.0);
  Matrix uniform = Matrix::Constant(2, 6, -0.7);
  c = ComplexityMetrics(uniform);
  CHECK(c.sparseness == doctest::Approx(0.0).epsilon(1e-12).scale(1));
  CHECK(c.entropy == doctest::Approx(std::log(6.0)));
  Matrix zero = Matrix::Zero(1, 5);
  c = ComplexityMetrics(zero);
  CHECK(c.sparseness == 0.0);
  CHECK(c.entropy == doctest::Approx(std::log(5.0)));
  CHECK(c.zero_rows == 1);

  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = RandomMatrix(3, 7, rng);
    const double k = rng.Uniform(0.01, 100.0);
    const ComplexityResult x = ComplexityMetrics(a), y = ComplexityMetrics(a * k);
    CHECK(x.sparseness == doctest::Approx(y.sparseness).epsilon(1e-12));
    CHECK(x.entropy == doctest::Approx(y.entropy).epsilon(1e-12));
    CHECK(x.sparseness >= 0.0);
    CHECK(x.sparseness <= 1.0);
  }
}

TEST_CASE("end-to-end explainability report is deterministic and in range") {
  Rng rng(77);
  const TrainedModel model = TrainedModel::Initialize(ModelSpec::DefaultTabResNet(8, 2), 4);
  const Matrix X = RandomMatrix(60, 8, rng), train = RandomMatrix(80, 8, rng);
  ExplainabilityConfig cfg;
  cfg.n_explain = 12;
  cfg.background_size = 10;
  cfg.lipschitz_samples = 3;
  cfg.lipschitz_perturbations = 2;
  cfg.faithfulness_subsets = 20;
  const ExplainabilityReport a = EvaluateExplainability(model, X, train, cfg, 11);
  const ExplainabilityReport b = EvaluateExplainability(model, X, train, cfg, 11);
  CHECK(a.lipschitz == b.lipschitz);
  CHECK(a.faithfulness_correlation == b.faithfulness_correlation);
  CHECK(a.mprt_score == b.mprt_score);
  CHECK(a.attributions.values == b.attributions.values);
  CHECK(a.explained_rows.size() == 12);
  CHECK(a.lipschitz >= 0.0);
  for (double v : {a.consistency, a.mprt_score, a.random_logit_score, a.sparseness}) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  for (double v : {a.faithfulness_correlation, a.faithfulness_estimate}) {
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
  }
  CHECK(a.complexity_entropy <= a.log_n_features + 1e-12);
  CHECK(a.attributions.max_local_accuracy_error < 1e-6);
  const ExplainabilityReport c = EvaluateExplainability(model, X, train, cfg, 12);
  CHECK(c.explained_rows != a.explained_rows);
}
