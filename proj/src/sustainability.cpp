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

#include "respscore/sustainability.hpp"

#include <algorithm>
#include <cmath>

namespace respscore {

void EmissionContext::Validate() const {
  if (!(device_power_watts > 0.0) || !(carbon_intensity_kg_per_kwh > 0.0) ||
      !(device_flops_per_second > 0.0)) {
    throw Error(ErrorKind::kConfig, "emission context values must be positive");
  }
  if (!(pue >= 1.0)) throw Error(ErrorKind::kConfig, "PUE must be >= 1");
}

double EstimateCo2e(double training_seconds, const EmissionContext& ctx) {
  if (!(training_seconds >= 0.0)) {
    throw Error(ErrorKind::kDomain, "training time must be nonnegative");
  }
  return (ctx.device_power_watts / 1000.0) * (training_seconds / 3600.0) * ctx.pue *
         ctx.carbon_intensity_kg_per_kwh;
}

double TrainingSeconds(const TrainingStats& stats, const CostProfile& cost,
                       const EmissionContext& ctx) {
  if (ctx.time_basis == TimeBasis::kMeasured) return stats.wall_clock_seconds;
  return static_cast<double>(stats.samples_processed) * 3.0 *
         static_cast<double>(cost.flops_per_forward) / ctx.device_flops_per_second;
}

double EstimateCo2e(const TrainingStats& stats, const CostProfile& cost,
                    const EmissionContext& ctx) {
  return EstimateCo2e(TrainingSeconds(stats, cost, ctx), ctx);
}

std::vector<double> MaxNormInvert(std::span<const double> values, bool* all_zero) {
  double max = 0.0;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::kDomain, "max-norm inversion needs finite nonnegative values");
    }
    max = std::max(max, v);
  }
  if (all_zero) *all_zero = max == 0.0;
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(max == 0.0 ? 1.0 : 1.0 - v / max);
  return out;
}

}  // namespace respscore
