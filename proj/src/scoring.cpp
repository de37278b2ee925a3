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

#include "respscore/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "respscore/errors.hpp"
#include "respscore/sustainability.hpp"

namespace respscore {

const char* DimensionName(Dimension d) {
  switch (d) {
    case Dimension::kExplainability: return "explainability";
    case Dimension::kFairness: return "fairness";
    case Dimension::kSustainability: return "sustainability";
    case Dimension::kRobustness: return "robustness";
  }
  return "";
}

const char* DimensionTitle(Dimension d) {
  switch (d) {
    case Dimension::kExplainability: return "Explainability";
    case Dimension::kFairness: return "Fairness";
    case Dimension::kSustainability: return "Sustainability";
    case Dimension::kRobustness: return "Robustness";
  }
  return "";
}

Dimension ParseDimension(const std::string& name) {
  for (Dimension d : kDimensions) {
    if (name == DimensionName(d)) return d;
  }
  throw Error(ErrorKind::kInput, "unknown dimension '" + name + "'");
}

const char* DirectionName(Direction d) {
  return d == Direction::kHigherBetter ? "higher_better" : "lower_better";
}

Direction ParseDirection(const std::string& name) {
  if (name == "higher_better") return Direction::kHigherBetter;
  if (name == "lower_better") return Direction::kLowerBetter;
  throw Error(ErrorKind::kInput, "unknown direction '" + name + "'");
}

const char* NormRuleName(NormRule r) {
  switch (r) {
    case NormRule::kIdentityClamp: return "identity_clamp";
    case NormRule::kOneMinusRaw: return "one_minus_raw";
    case NormRule::kMaxNormInvert: return "max_norm_invert";
    case NormRule::kRatioOfRadius: return "ratio_of_radius";
    case NormRule::kRescaleCorrelation: return "rescale_correlation";
    case NormRule::kRescaleEntropy: return "rescale_entropy";
  }
  return "";
}

NormRule ParseNormRule(const std::string& name) {
  for (NormRule r : {NormRule::kIdentityClamp, NormRule::kOneMinusRaw, NormRule::kMaxNormInvert,
                     NormRule::kRatioOfRadius, NormRule::kRescaleCorrelation,
                     NormRule::kRescaleEntropy}) {
    if (name == NormRuleName(r)) return r;
  }
  throw Error(ErrorKind::kInput, "unknown normalization rule '" + name + "'");
}

namespace {

struct CatalogEntry {
  const char* name;
  Dimension dimension;
  const char* category;
  Direction direction;
  NormRule rule;
  bool supplement;  // reported, outside the fairness mean by default
};

constexpr Direction kHi = Direction::kHigherBetter;
constexpr Direction kLo = Direction::kLowerBetter;

const CatalogEntry kCatalog[] = {
    {metric::kLipschitz, Dimension::kExplainability, "robustness", kLo, NormRule::kMaxNormInvert, false},
    {metric::kConsistency, Dimension::kExplainability, "robustness", kHi, NormRule::kIdentityClamp, false},
    {metric::kFaithfulnessCorrelation, Dimension::kExplainability, "faithfulness", kHi, NormRule::kRescaleCorrelation, false},
    {metric::kFaithfulnessEstimate, Dimension::kExplainability, "faithfulness", kHi, NormRule::kRescaleCorrelation, false},
    {metric::kMprt, Dimension::kExplainability, "randomization", kHi, NormRule::kIdentityClamp, false},
    {metric::kRandomLogit, Dimension::kExplainability, "randomization", kHi, NormRule::kIdentityClamp, false},
    {metric::kSparseness, Dimension::kExplainability, "complexity", kHi, NormRule::kIdentityClamp, false},
    {metric::kComplexity, Dimension::kExplainability, "complexity", kLo, NormRule::kRescaleEntropy, false},
    {metric::kAccuracyDiff, Dimension::kFairness, "", kLo, NormRule::kOneMinusRaw, false},
    {metric::kPrecisionDiff, Dimension::kFairness, "", kLo, NormRule::kOneMinusRaw, false},
    {metric::kTprDiff, Dimension::kFairness, "", kLo, NormRule::kOneMinusRaw, false},
    {metric::kFprDiff, Dimension::kFairness, "", kLo, NormRule::kOneMinusRaw, false},
    {metric::kDemographicParityDiff, Dimension::kFairness, "", kLo, NormRule::kOneMinusRaw, true},
    {metric::kEqualizedOddsDiff, Dimension::kFairness, "", kLo, NormRule::kOneMinusRaw, true},
    {metric::kParameterCount, Dimension::kSustainability, "", kLo, NormRule::kMaxNormInvert, false},
    {metric::kFlops, Dimension::kSustainability, "", kLo, NormRule::kMaxNormInvert, false},
    {metric::kMacs, Dimension::kSustainability, "", kLo, NormRule::kMaxNormInvert, false},
    {metric::kCo2e, Dimension::kSustainability, "", kLo, NormRule::kMaxNormInvert, false},
    {metric::kAccuracyGap, Dimension::kRobustness, "", kLo, NormRule::kOneMinusRaw, false},
    {metric::kCleverU, Dimension::kRobustness, "", kHi, NormRule::kRatioOfRadius, false},
    {metric::kLossSensitivity, Dimension::kRobustness, "", kLo, NormRule::kMaxNormInvert, false},
};

constexpr double kDomainSlack = 1e-9;

[[noreturn]] void DomainError(const MetricRecord& r, const std::string& domain) {
  std::ostringstream os;
  os.precision(17);
  os << "metric '" << r.name << "': raw value " << r.raw << " outside " << domain << " for rule "
     << NormRuleName(r.norm_rule);
  throw Error(ErrorKind::kNormalization, os.str());
}

double InRange(const MetricRecord& r, double lo, double hi, const std::string& domain) {
  if (!std::isfinite(r.raw) || r.raw < lo - kDomainSlack || r.raw > hi + kDomainSlack) {
    DomainError(r, domain);
  }
  return std::clamp(r.raw, lo, hi);
}

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

MetricRecord MakeMetricRecord(const std::string& name, double raw, double rule_param,
                              bool include_supplements) {
  for (const auto& e : kCatalog) {
    if (name != e.name) continue;
    MetricRecord r;
    r.name = e.name;
    r.dimension = e.dimension;
    r.category = e.category;
    r.raw = raw;
    r.direction = e.direction;
    r.norm_rule = e.rule;
    r.rule_param = rule_param;
    r.in_dimension_mean = !e.supplement || include_supplements;
    return r;
  }
  throw Error(ErrorKind::kInput, "unknown metric '" + name + "'");
}

std::vector<std::string> AllMetricNames() {
  std::vector<std::string> names;
  for (const auto& e : kCatalog) names.emplace_back(e.name);
  return names;
}

double Normalize(const MetricRecord& r, std::span<const double> pool) {
  switch (r.norm_rule) {
    case NormRule::kIdentityClamp:
      return InRange(r, 0.0, 1.0, "[0, 1]");
    case NormRule::kOneMinusRaw:
      return 1.0 - InRange(r, 0.0, 1.0, "[0, 1]");
    case NormRule::kMaxNormInvert: {
      if (!std::isfinite(r.raw) || r.raw < 0.0) DomainError(r, "[0, inf)");
      const std::vector<double> own{r.raw};
      const std::span<const double> values = pool.empty() ? std::span<const double>(own) : pool;
      const auto it = std::find(values.begin(), values.end(), r.raw);
      if (it == values.end()) {
        throw Error(ErrorKind::kNormalization,
                    "metric '" + r.name + "': raw value missing from its normalization pool");
      }
      return MaxNormInvert(values)[static_cast<std::size_t>(it - values.begin())];
    }
    case NormRule::kRatioOfRadius: {
      if (!(r.rule_param > 0.0)) {
        throw Error(ErrorKind::kNormalization, "metric '" + r.name + "': radius must be positive");
      }
      return InRange(r, 0.0, r.rule_param, "[0, radius]") / r.rule_param;
    }
    case NormRule::kRescaleCorrelation:
      return (InRange(r, -1.0, 1.0, "[-1, 1]") + 1.0) / 2.0;
    case NormRule::kRescaleEntropy: {
      if (!(r.rule_param >= 0.0)) {
        throw Error(ErrorKind::kNormalization, "metric '" + r.name + "': ln d must be >= 0");
      }
      // A single feature carries no entropy; the explanation is maximally concise.
      if (r.rule_param == 0.0) return InRange(r, 0.0, 0.0, "[0, ln d]") == 0.0 ? 1.0 : 0.0;
      return 1.0 - InRange(r, 0.0, r.rule_param, "[0, ln d]") / r.rule_param;
    }
  }
  return 0.0;
}

std::array<double, 4> ExplainabilityCategoryScores(std::span<const MetricRecord> records) {
  std::array<double, 4> out;
  for (std::size_t c = 0; c < kExplainabilityCategories.size(); ++c) {
    std::vector<double> values;
    for (const auto& r : records) {
      if (r.dimension == Dimension::kExplainability && r.in_dimension_mean &&
          r.category == kExplainabilityCategories[c]) {
        values.push_back(r.normalized);
      }
    }
    out[c] = values.empty() ? std::numeric_limits<double>::quiet_NaN() : Mean(values);
  }
  return out;
}

double DimensionScore(std::span<const MetricRecord> records, Dimension dimension) {
  if (dimension == Dimension::kExplainability) {
    // Category means in first-appearance order; categories outside the
    // standard four are allowed.
    std::vector<std::string> order;
    std::map<std::string, std::vector<double>> by_category;
    for (const auto& r : records) {
      if (r.dimension != dimension || !r.in_dimension_mean) continue;
      if (!by_category.count(r.category)) order.push_back(r.category);
      by_category[r.category].push_back(r.normalized);
    }
    if (order.empty()) {
      throw Error(ErrorKind::kAggregation, "no explainability metrics to aggregate");
    }
    std::vector<double> means;
    for (const auto& c : order) means.push_back(Mean(by_category[c]));
    return Mean(means);
  }
  std::vector<double> values;
  for (const auto& r : records) {
    if (r.dimension == dimension && r.in_dimension_mean) values.push_back(r.normalized);
  }
  if (values.empty()) {
    throw Error(ErrorKind::kAggregation,
                std::string("no ") + DimensionName(dimension) + " metrics to aggregate");
  }
  return Mean(values);
}

void ValidateWeights(const Weights& w) {
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw Error(ErrorKind::kConfig, "responsibility weights must be nonnegative");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorKind::kConfig, "responsibility weights must sum to 1");
  }
}

double ResponsibilityScore(const DimensionScores& ds, const std::optional<Weights>& weights) {
  const Weights w = weights.value_or(Weights{0.25, 0.25, 0.25, 0.25});
  ValidateWeights(w);
  double rs = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (w[i] > 0.0) rs += w[i] * ds[i];
  }
  return rs;
}

ResponsibilityProfile AggregateRepeats(std::span<const ResponsibilityProfile> profiles) {
  if (profiles.empty()) throw Error(ErrorKind::kAggregation, "no profiles to aggregate");
  const auto& first = profiles.front();
  for (const auto& p : profiles) {
    bool same = p.per_metric.size() == first.per_metric.size();
    for (std::size_t m = 0; same && m < p.per_metric.size(); ++m) {
      same = p.per_metric[m].name == first.per_metric[m].name;
    }
    if (!same) throw Error(ErrorKind::kAggregation, "repeats have mismatched metric sets");
  }
  const double n = static_cast<double>(profiles.size());
  auto mean_sd = [&](auto&& get) {
    double mean = 0.0;
    for (const auto& p : profiles) mean += get(p);
    mean /= n;
    double var = 0.0;
    for (const auto& p : profiles) var += (get(p) - mean) * (get(p) - mean);
    return std::pair<double, double>(mean, std::sqrt(var / n));
  };
  ResponsibilityProfile out;
  out.repeats = 0;
  for (const auto& p : profiles) out.repeats += p.repeats;
  std::tie(out.f1, out.f1_stddev) = mean_sd([](const ResponsibilityProfile& p) { return p.f1; });
  for (std::size_t m = 0; m < first.per_metric.size(); ++m) {
    MetricRecord r = first.per_metric[m];
    std::tie(r.raw, r.raw_stddev) =
        mean_sd([m](const ResponsibilityProfile& p) { return p.per_metric[m].raw; });
    // rule_param (radius, ln d) is a configuration constant; keep the first.
    std::set<std::string> flags;
    for (const auto& p : profiles) {
      for (const auto& f : p.per_metric[m].flags) flags.insert(f);
    }
    r.flags.assign(flags.begin(), flags.end());
    r.normalized = 0.0;
    out.per_metric.push_back(std::move(r));
  }
  return out;
}

void ScoreProfile(ResponsibilityProfile& profile, const std::optional<Weights>& weights) {
  for (Dimension d : kDimensions) {
    profile.dimension_scores[static_cast<std::size_t>(d)] = DimensionScore(profile.per_metric, d);
  }
  profile.responsibility_score = ResponsibilityScore(profile.dimension_scores, weights);
}

void NormalizeAndScore(std::span<ResponsibilityProfile* const> profiles,
                       const std::optional<Weights>& weights) {
  std::map<std::string, std::vector<double>> pools;
  for (const auto* p : profiles) {
    for (const auto& r : p->per_metric) pools[r.name].push_back(r.raw);
  }
  for (auto* p : profiles) {
    for (auto& r : p->per_metric) {
      r.normalized = Normalize(r, pools[r.name]);
      if (r.norm_rule == NormRule::kMaxNormInvert) {
        bool all_zero = false;
        MaxNormInvert(pools[r.name], &all_zero);
        if (all_zero &&
            std::find(r.flags.begin(), r.flags.end(), "all-zero pool") == r.flags.end()) {
          r.flags.push_back("all-zero pool");
        }
      }
    }
    ScoreProfile(*p, weights);
  }
}

}  // namespace respscore
