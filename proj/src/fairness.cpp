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

#include "respscore/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "respscore/data.hpp"
#include "respscore/errors.hpp"

namespace respscore {

void GroupedPredictions::Validate() const {
  if (y_true.size() != y_pred.size() || y_true.size() != group.size()) {
    throw Error(ErrorKind::kInput, "y_true, y_pred and group must have equal lengths");
  }
  bool has_priv = false, has_unpriv = false;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if ((y_true[i] != 0 && y_true[i] != 1) || (y_pred[i] != 0 && y_pred[i] != 1) ||
        (group[i] != 0 && group[i] != 1)) {
      throw Error(ErrorKind::kInput, "non-binary value at index " + std::to_string(i));
    }
    has_priv |= group[i] == 1;
    has_unpriv |= group[i] == 0;
  }
  if (!has_priv || !has_unpriv) {
    throw Error(ErrorKind::kGrouping, std::string("no samples in the ") +
                                          (has_priv ? "unprivileged" : "privileged") + " group");
  }
}

GroupConfusion ComputeGroupConfusion(const GroupedPredictions& gp) {
  gp.Validate();
  GroupConfusion out;
  for (std::size_t i = 0; i < gp.y_true.size(); ++i) {
    ConfusionCounts& c = gp.group[i] ? out.privileged : out.unprivileged;
    const bool t = gp.y_true[i] == 1;
    const bool p = gp.y_pred[i] == 1;
    if (t && p) ++c.tp;
    else if (!t && p) ++c.fp;
    else if (!t && !p) ++c.tn;
    else ++c.fn;
  }
  return out;
}

GroupRates ComputeGroupRates(const ConfusionCounts& c) {
  GroupRates r;
  r.counts = c;
  auto rate = [&r](std::size_t num, std::size_t den, const char* name) {
    if (den == 0) {
      r.flags.push_back(std::string(name) + ": empty denominator, defined as 0");
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  r.accuracy = rate(c.tp + c.tn, c.total(), "accuracy");
  r.precision = rate(c.tp, c.tp + c.fp, "precision");
  r.tpr = rate(c.tp, c.tp + c.fn, "tpr");
  r.fpr = rate(c.fp, c.fp + c.tn, "fpr");
  r.positive_rate = rate(c.tp + c.fp, c.total(), "positive_rate");
  return r;
}

FairnessReport ComputeFairnessReport(const GroupedPredictions& gp) {
  const GroupConfusion conf = ComputeGroupConfusion(gp);
  FairnessReport rep;
  rep.privileged = ComputeGroupRates(conf.privileged);
  rep.unprivileged = ComputeGroupRates(conf.unprivileged);
  const GroupRates& a = rep.privileged;
  const GroupRates& b = rep.unprivileged;
  rep.accuracy_diff = std::abs(a.accuracy - b.accuracy);
  rep.precision_diff = std::abs(a.precision - b.precision);
  rep.tpr_diff = std::abs(a.tpr - b.tpr);
  rep.fpr_diff = std::abs(a.fpr - b.fpr);
  rep.demographic_parity_diff = std::abs(a.positive_rate - b.positive_rate);
  rep.equalized_odds_diff = std::max(rep.tpr_diff, rep.fpr_diff);
  return rep;
}

GroupedPredictions LoadPredictionsCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open predictions file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto records = ParseCsvRecords(ss.str());
  if (records.empty()) throw Error(ErrorKind::kSchema, "predictions CSV has no header row");
  std::map<std::string, std::size_t> header;
  for (std::size_t i = 0; i < records[0].size(); ++i) header[records[0][i]] = i;
  std::size_t cols[3];
  const char* names[3] = {"y_true", "y_pred", "group"};
  for (int k = 0; k < 3; ++k) {
    const auto it = header.find(names[k]);
    if (it == header.end()) {
      throw Error(ErrorKind::kSchema, std::string("predictions CSV is missing column '") + names[k] + "'");
    }
    cols[k] = it->second;
  }
  GroupedPredictions gp;
  std::vector<int>* targets[3] = {&gp.y_true, &gp.y_pred, &gp.group};
  for (std::size_t r = 1; r < records.size(); ++r) {
    for (int k = 0; k < 3; ++k) {
      const std::string cell = cols[k] < records[r].size() ? records[r][cols[k]] : "";
      if (cell != "0" && cell != "1") {
        throw Error(ErrorKind::kParse, "row " + std::to_string(r) + ", column \"" + names[k] +
                                           "\": expected 0 or 1, got '" + cell + "'");
      }
      targets[k]->push_back(cell == "1");
    }
  }
  return gp;
}

}  // namespace respscore
