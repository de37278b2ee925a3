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

// Metric normalization, dimension aggregation and the responsibility score.
//
// Every raw metric is mapped onto [0, 1] with 1 as the ideal by its
// normalization rule. Dimension scores are plain means of the normalized
// metrics that participate in the dimension mean; explainability first
// averages within each of its four categories. The responsibility score is a
// weighted (default uniform) mean of the four dimension scores. F1 is carried
// alongside and never enters any score.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace respscore {

enum class Dimension { kExplainability = 0, kFairness = 1, kSustainability = 2, kRobustness = 3 };
inline constexpr std::array<Dimension, 4> kDimensions = {
    Dimension::kExplainability, Dimension::kFairness, Dimension::kSustainability,
    Dimension::kRobustness};

const char* DimensionName(Dimension d);  // "explainability", ...
const char* DimensionTitle(Dimension d);  // "Explainability", ...
Dimension ParseDimension(const std::string& name);

enum class Direction { kHigherBetter, kLowerBetter };

enum class NormRule {
  kIdentityClamp,       // raw in [0, 1]
  kOneMinusRaw,         // raw in [0, 1]
  kMaxNormInvert,       // raw >= 0, pooled
  kRatioOfRadius,       // raw in [0, param]
  kRescaleCorrelation,  // raw in [-1, 1] -> (raw + 1) / 2
  kRescaleEntropy,      // raw in [0, param = ln d] -> 1 - raw / param
};

const char* DirectionName(Direction d);
const char* NormRuleName(NormRule r);
NormRule ParseNormRule(const std::string& name);
Direction ParseDirection(const std::string& name);

struct MetricRecord {
  std::string name;
  Dimension dimension = Dimension::kExplainability;
  std::string category;  // explainability only
  double raw = 0.0;
  double raw_stddev = 0.0;  // across repeats
  Direction direction = Direction::kHigherBetter;
  NormRule norm_rule = NormRule::kIdentityClamp;
  double rule_param = 0.0;
  double normalized = 0.0;
  bool in_dimension_mean = true;
  std::vector<std::string> flags;
};

// Canonical names of the 21 engine metrics.
namespace metric {
inline constexpr const char* kLipschitz = "local_lipschitz_estimate";
inline constexpr const char* kConsistency = "consistency";
inline constexpr const char* kFaithfulnessCorrelation = "faithfulness_correlation";
inline constexpr const char* kFaithfulnessEstimate = "faithfulness_estimate";
inline constexpr const char* kMprt = "model_parameter_randomization";
inline constexpr const char* kRandomLogit = "random_logit";
inline constexpr const char* kSparseness = "sparseness";
inline constexpr const char* kComplexity = "complexity";
inline constexpr const char* kAccuracyDiff = "accuracy_diff";
inline constexpr const char* kPrecisionDiff = "precision_diff";
inline constexpr const char* kTprDiff = "tpr_diff";
inline constexpr const char* kFprDiff = "fpr_diff";
inline constexpr const char* kDemographicParityDiff = "demographic_parity_diff";
inline constexpr const char* kEqualizedOddsDiff = "equalized_odds_diff";
inline constexpr const char* kParameterCount = "parameter_count";
inline constexpr const char* kFlops = "flops";
inline constexpr const char* kMacs = "macs";
inline constexpr const char* kCo2e = "kg_co2e";
inline constexpr const char* kAccuracyGap = "fgsm_accuracy_gap";
inline constexpr const char* kCleverU = "clever_u";
inline constexpr const char* kLossSensitivity = "loss_sensitivity";
}  // namespace metric

// Explainability categories, in report order.
inline constexpr std::array<const char*, 4> kExplainabilityCategories = {
    "complexity", "faithfulness", "robustness", "randomization"};

// Record template for a known metric name (raw = 0). `include_supplements`
// controls whether DemP/EOd enter the fairness mean. Unknown names throw.
MetricRecord MakeMetricRecord(const std::string& name, double raw, double rule_param = 0.0,
                              bool include_supplements = false);
std::vector<std::string> AllMetricNames();

// Applies the record's rule. `pool` holds the raw values of the same metric
// across every cell of the comparison (needed by kMaxNormInvert; it must
// contain record.raw). Out-of-domain raws throw Error(kNormalization).
double Normalize(const MetricRecord& record, std::span<const double> pool = {});

// Mean over records of `dimension` with in_dimension_mean; explainability
// averages category means. Throws Error(kAggregation) when nothing qualifies.
double DimensionScore(std::span<const MetricRecord> records, Dimension dimension);

// Category means for the explainability dimension (NaN for empty categories).
std::array<double, 4> ExplainabilityCategoryScores(std::span<const MetricRecord> records);

using DimensionScores = std::array<double, 4>;
using Weights = std::array<double, 4>;

void ValidateWeights(const Weights& w);
double ResponsibilityScore(const DimensionScores& ds, const std::optional<Weights>& weights = {});

struct ResponsibilityProfile {
  DimensionScores dimension_scores{};
  double responsibility_score = 0.0;
  double f1 = 0.0;
  double f1_stddev = 0.0;
  std::vector<MetricRecord> per_metric;
  int repeats = 1;
  std::string aggregation = "mean_over_repeats";
};

// Averages raw values (and F1) per metric across repeats; keeps the
// population stddev. Metric sets must match by name and order.
ResponsibilityProfile AggregateRepeats(std::span<const ResponsibilityProfile> profiles);

// Fills `normalized` of every record, pooling raws of the same metric across
// all given profiles, then dimension scores and RS.
void NormalizeAndScore(std::span<ResponsibilityProfile* const> profiles,
                       const std::optional<Weights>& weights = {});

// Dimension and RS from already-normalized records.
void ScoreProfile(ResponsibilityProfile& profile, const std::optional<Weights>& weights = {});

}  // namespace respscore
