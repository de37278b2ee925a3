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

// Exhaustive oracle for the fairness metrics: rates are computed as
// conditional means over index sets, never via confusion counts.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "respscore/errors.hpp"
#include "respscore/fairness.hpp"

namespace respscore::testing {

struct OracleMetrics {
  double acc, prec, tpr, fpr, demp, eod;
};

inline double ConditionalMean(const std::vector<int>& value, const std::vector<bool>& cond) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (cond[i]) {
      num += value[i];
      den += 1.0;
    }
  }
  return den == 0.0 ? 0.0 : num / den;
}

inline OracleMetrics OracleFairness(const GroupedPredictions& gp) {
  const std::size_t n = gp.y_true.size();
  auto rates = [&](int g) {
    std::vector<bool> in(n), in_pos(n), in_neg(n), in_pred_pos(n);
    std::vector<int> correct(n), pred(n), truth(n);
    for (std::size_t i = 0; i < n; ++i) {
      in[i] = gp.group[i] == g;
      in_pos[i] = in[i] && gp.y_true[i] == 1;
      in_neg[i] = in[i] && gp.y_true[i] == 0;
      in_pred_pos[i] = in[i] && gp.y_pred[i] == 1;
      correct[i] = gp.y_true[i] == gp.y_pred[i];
      pred[i] = gp.y_pred[i];
      truth[i] = gp.y_true[i];
    }
    return std::vector<double>{ConditionalMean(correct, in), ConditionalMean(truth, in_pred_pos),
                               ConditionalMean(pred, in_pos), ConditionalMean(pred, in_neg),
                               ConditionalMean(pred, in)};
  };
  const auto a = rates(1), b = rates(0);
  OracleMetrics m{std::abs(a[0] - b[0]), std::abs(a[1] - b[1]), std::abs(a[2] - b[2]),
                  std::abs(a[3] - b[3]), std::abs(a[4] - b[4]), 0.0};
  m.eod = std::max(m.tpr, m.fpr);
  return m;
}

// Runs every binary (y_true, y_pred, group) assignment of length 1..max_n.
// Returns the number of mismatches; `checked` counts evaluated assignments.
inline std::size_t ExhaustiveFairnessCheck(int max_n, std::size_t* checked) {
  std::size_t mismatches = 0;
  *checked = 0;
  for (int n = 1; n <= max_n; ++n) {
    const std::uint64_t total = std::uint64_t{1} << (3 * n);
    GroupedPredictions gp;
    gp.y_true.resize(static_cast<std::size_t>(n));
    gp.y_pred.resize(static_cast<std::size_t>(n));
    gp.group.resize(static_cast<std::size_t>(n));
    for (std::uint64_t code = 0; code < total; ++code) {
      bool priv = false, unpriv = false;
      for (int i = 0; i < n; ++i) {
        const auto cell = (code >> (3 * i)) & 7u;
        gp.y_true[static_cast<std::size_t>(i)] = static_cast<int>(cell & 1u);
        gp.y_pred[static_cast<std::size_t>(i)] = static_cast<int>((cell >> 1) & 1u);
        gp.group[static_cast<std::size_t>(i)] = static_cast<int>((cell >> 2) & 1u);
        priv |= (cell >> 2) & 1u;
        unpriv |= !((cell >> 2) & 1u);
      }
      if (!priv || !unpriv) {
        bool threw = false;
        try {
          ComputeFairnessReport(gp);
        } catch (const Error& e) {
          threw = e.kind() == ErrorKind::kGrouping;
        }
        mismatches += !threw;
        continue;
      }
      const FairnessReport r = ComputeFairnessReport(gp);
      const OracleMetrics o = OracleFairness(gp);
      constexpr double kTol = 1e-12;
      const bool ok = std::abs(r.accuracy_diff - o.acc) < kTol &&
                      std::abs(r.precision_diff - o.prec) < kTol &&
                      std::abs(r.tpr_diff - o.tpr) < kTol && std::abs(r.fpr_diff - o.fpr) < kTol &&
                      std::abs(r.demographic_parity_diff - o.demp) < kTol &&
                      std::abs(r.equalized_odds_diff - o.eod) < kTol;
      mismatches += !ok;
      ++*checked;
    }
  }
  return mismatches;
}

}  // namespace respscore::testing
