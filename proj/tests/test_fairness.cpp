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

#include <filesystem>
#include <fstream>

#include "fairness_oracle.hpp"
#include "respscore/fairness.hpp"
#include "respscore/rng.hpp"

using namespace respscore;

TEST_CASE("group confusion by hand enumeration") {
  const GroupConfusion c = ComputeGroupConfusion({{1, 0, 1, 0}, {1, 1, 0, 0}, {1, 1, 0, 0}});
  CHECK(c.privileged == ConfusionCounts{1, 1, 0, 0});
  CHECK(c.unprivileged == ConfusionCounts{0, 0, 1, 1});
}

TEST_CASE("perfect predictions have no errors and counts sum to group sizes") {
  Rng rng(3);
  GroupedPredictions gp;
  for (int i = 0; i < 50; ++i) {
    gp.y_true.push_back(static_cast<int>(rng.UniformInt(2)));
    gp.group.push_back(i % 3 == 0);
  }
  gp.y_pred = gp.y_true;
  const GroupConfusion c = ComputeGroupConfusion(gp);
  CHECK(c.privileged.fp + c.privileged.fn + c.unprivileged.fp + c.unprivileged.fn == 0);
  CHECK(c.privileged.total() == 17);
  CHECK(c.unprivileged.total() == 33);
}

TEST_CASE("absent group is a grouping error") {
  try {
    ComputeGroupConfusion({{1, 0}, {1, 0}, {1, 1}});
    FAIL("expected grouping error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kGrouping);
  }
  CHECK_THROWS_AS(ComputeGroupConfusion({{1, 0}, {1}, {1, 0}}), Error);
  CHECK_THROWS_AS(ComputeGroupConfusion({{2, 0}, {1, 0}, {1, 0}}), Error);
}

TEST_CASE("identical behaviour in both groups gives zero disparity") {
  const FairnessReport r = ComputeFairnessReport({{1, 0, 1, 1, 0, 1}, {1, 1, 0, 1, 1, 0}, {1, 1, 1, 0, 0, 0}});
  CHECK(r.accuracy_diff == 0.0);
  CHECK(r.precision_diff == 0.0);
  CHECK(r.tpr_diff == 0.0);
  CHECK(r.fpr_diff == 0.0);
  CHECK(r.demographic_parity_diff == 0.0);
  CHECK(r.equalized_odds_diff == 0.0);
}

TEST_CASE("demographic parity from positive rates 6/10 vs 4/10") {
  GroupedPredictions gp;
  for (int i = 0; i < 10; ++i) {
    gp.y_true.push_back(1);
    gp.y_pred.push_back(i < 6);
    gp.group.push_back(1);
  }
  for (int i = 0; i < 10; ++i) {
    gp.y_true.push_back(1);
    gp.y_pred.push_back(i < 4);
    gp.group.push_back(0);
  }
  CHECK(ComputeFairnessReport(gp).demographic_parity_diff == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("empty denominators are zero and flagged") {
  // Privileged group never predicts positive: precision denominator empty.
  const FairnessReport r = ComputeFairnessReport({{1, 0, 1, 0}, {0, 0, 1, 1}, {1, 1, 0, 0}});
  CHECK(r.privileged.precision == 0.0);
  CHECK_FALSE(r.privileged.flags.empty());
  CHECK(r.unprivileged.precision == 0.5);
  CHECK(r.precision_diff == 0.5);
}

TEST_CASE("equalized odds is the max of TPR and FPR gaps; relabeling groups is symmetric") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    GroupedPredictions gp;
    for (int i = 0; i < 30; ++i) {
      gp.y_true.push_back(static_cast<int>(rng.UniformInt(2)));
      gp.y_pred.push_back(static_cast<int>(rng.UniformInt(2)));
      gp.group.push_back(i % 2);
    }
    const FairnessReport r = ComputeFairnessReport(gp);
    CHECK(r.equalized_odds_diff == std::max(r.tpr_diff, r.fpr_diff));
    GroupedPredictions flipped = gp;
    for (int& g : flipped.group) g = 1 - g;
    const FairnessReport f = ComputeFairnessReport(flipped);
    CHECK(f.accuracy_diff == r.accuracy_diff);
    CHECK(f.precision_diff == r.precision_diff);
    CHECK(f.tpr_diff == r.tpr_diff);
    CHECK(f.fpr_diff == r.fpr_diff);
    CHECK(f.demographic_parity_diff == r.demographic_parity_diff);
    CHECK(f.equalized_odds_diff == r.equalized_odds_diff);
  }
}

TEST_CASE("exhaustive oracle agreement up to n = 6") {
  std::size_t checked = 0;
  CHECK(testing::ExhaustiveFairnessCheck(6, &checked) == 0);
  CHECK(checked > 200000);
}

TEST_CASE("predictions CSV reader") {
  const auto path = (std::filesystem::temp_directory_path() / "respscore_preds.csv").string();
  std::ofstream(path) << "group,y_true,y_pred\n1,1,1\n1,0,1\n0,1,0\n0,0,0\n";
  const GroupedPredictions gp = LoadPredictionsCsv(path);
  CHECK(gp.y_true == std::vector<int>{1, 0, 1, 0});
  CHECK(gp.y_pred == std::vector<int>{1, 1, 0, 0});
  CHECK(gp.group == std::vector<int>{1, 1, 0, 0});
  std::ofstream(path) << "y_true,y_pred\n1,1\n";
  CHECK_THROWS_AS(LoadPredictionsCsv(path), Error);
  std::ofstream(path) << "y_true,y_pred,group\n1,yes,0\n";
  CHECK_THROWS_AS(LoadPredictionsCsv(path), Error);
}
