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

#include "respscore/rng.hpp"
#include "respscore/sustainability.hpp"

using namespace respscore;

TEST_CASE("two hours at 300 W, PUE 1.58, 0.432 kg/kWh") {
  // 0.3 kW * 2 h * 1.58 * 0.432
  CHECK(EstimateCo2e(7200.0, EmissionContext{}) == doctest::Approx(0.409536).epsilon(1e-12));
}

TEST_CASE("zero time emits nothing; emissions are linear in time") {
  const EmissionContext ctx;
  CHECK(EstimateCo2e(0.0, ctx) == 0.0);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const double t = rng.Uniform(0.0, 1e5);
    const double k = rng.Uniform(0.0, 10.0);
    CHECK(EstimateCo2e(k * t, ctx) == doctest::Approx(k * EstimateCo2e(t, ctx)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(EstimateCo2e(-1.0, ctx), Error);
}

TEST_CASE("modeled and measured time bases") {
  TrainingStats stats;
  stats.samples_processed = 1000;
  stats.wall_clock_seconds = 7.5;
  CostProfile cost{100, 2000, 990};
  EmissionContext ctx;
  CHECK(TrainingSeconds(stats, cost, ctx) == doctest::Approx(1000.0 * 3 * 2000 / 1e9));
  ctx.time_basis = TimeBasis::kMeasured;
  CHECK(TrainingSeconds(stats, cost, ctx) == 7.5);
  CHECK(EstimateCo2e(stats, cost, ctx) == doctest::Approx(EstimateCo2e(7.5, ctx)));
}

TEST_CASE("emission context validation") {
  EmissionContext ctx;
  CHECK_NOTHROW(ctx.Validate());
  ctx.pue = 0.9;
  CHECK_THROWS_AS(ctx.Validate(), Error);
  ctx = EmissionContext{};
  ctx.device_power_watts = 0.0;
  CHECK_THROWS_AS(ctx.Validate(), Error);
}

TEST_CASE("max-norm inversion examples") {
  const std::vector<double> pool{100.0, 50.0, 10.0};
  const auto s = MaxNormInvert(pool);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == doctest::Approx(0.5));
  CHECK(s[2] == doctest::Approx(0.9));
  CHECK(MaxNormInvert(std::vector<double>{42.0}) == std::vector<double>{0.0});
  bool all_zero = false;
  CHECK(MaxNormInvert(std::vector<double>{0.0, 0.0}, &all_zero) == std::vector<double>{1.0, 1.0});
  CHECK(all_zero);
  CHECK_THROWS_AS(MaxNormInvert(std::vector<double>{1.0, -0.5}), Error);
}

TEST_CASE("max-norm inversion is scale invariant, bounded, and zeroes the maximum") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + rng.UniformInt(8));
    for (double& x : v) x = rng.Uniform(0.0, 1e6);
    const double c = rng.Uniform(1e-3, 1e3);
    std::vector<double> scaled = v;
    for (double& x : scaled) x *= c;
    const auto a = MaxNormInvert(v);
    const auto b = MaxNormInvert(scaled);
    const auto argmax = std::max_element(v.begin(), v.end()) - v.begin();
    CHECK(a[static_cast<std::size_t>(argmax)] == 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(a[i] >= 0.0);
      CHECK(a[i] <= 1.0);
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
  }
}
