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

// Group-disparity metrics for a binary sensitive attribute.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace respscore {

struct GroupedPredictions {
  std::vector<int> y_true;
  std::vector<int> y_pred;
  std::vector<int> group;  // 1 = privileged

  // Equal lengths, binary values, both groups present.
  void Validate() const;
};

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct GroupConfusion {
  ConfusionCounts privileged;
  ConfusionCounts unprivileged;
};

GroupConfusion ComputeGroupConfusion(const GroupedPredictions& gp);

// Rates with an empty denominator are 0 and listed in `flags`.
struct GroupRates {
  ConfusionCounts counts;
  double accuracy = 0.0;
  double precision = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
  double positive_rate = 0.0;
  std::vector<std::string> flags;
};

GroupRates ComputeGroupRates(const ConfusionCounts& counts);

struct FairnessReport {
  double accuracy_diff = 0.0;
  double precision_diff = 0.0;
  double tpr_diff = 0.0;
  double fpr_diff = 0.0;
  double demographic_parity_diff = 0.0;
  double equalized_odds_diff = 0.0;  // max(tpr_diff, fpr_diff)
  GroupRates privileged;
  GroupRates unprivileged;
};

FairnessReport ComputeFairnessReport(const GroupedPredictions& gp);

// Predictions CSV with columns y_true, y_pred, group (0/1 each).
GroupedPredictions LoadPredictionsCsv(const std::string& path);

}  // namespace respscore
