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

#include <span>
#include <string>
#include <vector>

#include "respscore/model.hpp"

namespace respscore {

// Which training duration feeds the emission estimate.
//  kModeled: samples_processed * 3 * flops_per_forward / device_flops_per_second
//            (forward + backward), reproducible across machines and runs.
//  kMeasured: TrainingStats::wall_clock_seconds.
enum class TimeBasis { kModeled, kMeasured };

struct EmissionContext {
  double device_power_watts = 300.0;
  double pue = 1.58;
  double carbon_intensity_kg_per_kwh = 0.432;
  std::string region_label = "configurable";
  TimeBasis time_basis = TimeBasis::kModeled;
  double device_flops_per_second = 1e9;

  void Validate() const;
};

// power[kW] * hours * PUE * intensity
double EstimateCo2e(double training_seconds, const EmissionContext& ctx);

double TrainingSeconds(const TrainingStats& stats, const CostProfile& cost,
                       const EmissionContext& ctx);

double EstimateCo2e(const TrainingStats& stats, const CostProfile& cost,
                    const EmissionContext& ctx);

// score_i = 1 - v_i / max(v). An all-zero vector maps to all ones and sets
// *all_zero. Negative entries are a domain error.
std::vector<double> MaxNormInvert(std::span<const double> values, bool* all_zero = nullptr);

struct SustainabilityReport {
  double kg_co2e = 0.0;
  double training_seconds = 0.0;
  CostProfile cost;
  // Filled once the comparison pool is known.
  double params_score = 0.0;
  double flops_score = 0.0;
  double macs_score = 0.0;
  double co2e_score = 0.0;
};

}  // namespace respscore
