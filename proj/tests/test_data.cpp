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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "respscore/data.hpp"

using namespace respscore;

namespace {

const char* kSchemaJson = R"({
  "name": "tiny",
  "columns": [
    {"name": "age", "kind": "numeric"},
    {"name": "sex", "kind": "categorical", "categories": ["M", "F"]},
    {"name": "y", "kind": "categorical", "categories": ["good", "bad"]}
  ],
  "label_column": "y",
  "positive_label": "good",
  "sensitive_column": "sex",
  "privileged_value": "M"
})";

std::string WriteTemp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

TabularDataset Numeric(const std::vector<double>& a, const std::vector<int>& labels,
                       const std::vector<int>& groups) {
  TabularDataset ds;
  ds.schema.columns = {{"a", ColumnKind::kNumeric, {}},
                       {"g", ColumnKind::kCategorical, {"p", "u"}},
                       {"y", ColumnKind::kCategorical, {"0", "1"}}};
  ds.schema.label_column = "y";
  ds.schema.positive_label = "1";
  ds.schema.sensitive_column = "g";
  ds.schema.privileged_value = "p";
  ds.columns.resize(3);
  ds.columns[0].numeric = a;
  for (int g : groups) ds.columns[1].codes.push_back(g ? 0 : 1);
  ds.columns[2].codes = labels;
  ds.n_rows = a.size();
  return ds;
}

}  // namespace

TEST_CASE("load a three-row CSV") {
  const DatasetSchema schema = SchemaFromJson(kSchemaJson);
  const std::string path = WriteTemp("respscore_three.csv", "age,sex,y\n30,M,good\n45,F,bad\n22,F,good\n");
  const LoadResult r = LoadCsv(path, schema);
  CHECK(r.dataset.n_rows == 3);
  CHECK(r.report.rows_loaded == 3);
  r.dataset.Validate();
  CHECK(r.dataset.Labels() == std::vector<int>{1, 0, 1});
  CHECK(r.dataset.Groups() == std::vector<int>{1, 0, 0});
  CHECK(r.dataset.Cell(1, "age") == "45");
  CHECK(r.dataset.Cell(2, "sex") == "F");
}

TEST_CASE("header-only CSV loads empty and cannot be split") {
  const LoadResult r = ParseCsv("age,sex,y\n", SchemaFromJson(kSchemaJson));
  CHECK(r.dataset.n_rows == 0);
  CHECK_THROWS_AS(Split(r.dataset, 0.2, 1), Error);
}

TEST_CASE("unparseable numeric cell names row and column") {
  try {
    ParseCsv("age,sex,y\n30,M,good\nabc,F,bad\n", SchemaFromJson(kSchemaJson));
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kParse);
    const std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("\"age\"") != std::string::npos);
  }
}

TEST_CASE("schema and category errors") {
  const DatasetSchema schema = SchemaFromJson(kSchemaJson);
  try {
    ParseCsv("age,y\n1,good\n", schema);
    FAIL("expected schema error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSchema);
    CHECK(std::string(e.what()).find("sex") != std::string::npos);
  }
  CHECK_THROWS_AS(ParseCsv("age,sex,y\n1,X,good\n", schema), Error);
  CHECK_THROWS_AS(SchemaFromJson(R"({"columns": []})"), Error);
  CHECK_THROWS_AS(SchemaFromJson(R"({"columns":[{"name":"y","kind":"numeric"},{"name":"s","kind":"categorical"}],
    "label_column":"y","positive_label":"1","sensitive_column":"s","privileged_value":"a"})"), Error);
}

TEST_CASE("rows missing label or sensitive value are rejected and counted") {
  const LoadResult r = ParseCsv("age,sex,y\n1,M,good\n2,M,\n3,,bad\n4,F,bad\n", SchemaFromJson(kSchemaJson));
  CHECK(r.dataset.n_rows == 2);
  CHECK(r.report.rows_read == 4);
  CHECK(r.report.rejected_missing_label == 1);
  CHECK(r.report.rejected_missing_sensitive == 1);
}

TEST_CASE("RFC-4180 quoting and inferred categories") {
  const auto recs = ParseCsvRecords("a,b\r\n\"x, y\",\"say \"\"hi\"\"\"\r\n\"multi\nline\",z\n");
  REQUIRE(recs.size() == 3);
  CHECK(recs[1][0] == "x, y");
  CHECK(recs[1][1] == "say \"hi\"");
  CHECK(recs[2][0] == "multi\nline");
  CHECK_THROWS_AS(ParseCsvRecords("\"open"), Error);

  DatasetSchema s = SchemaFromJson(kSchemaJson);
  s.columns[1].categories.clear();
  const LoadResult r = ParseCsv("age,sex,y\n1,M,good\n2,F,bad\n", s);
  CHECK(r.dataset.schema.columns[1].categories == std::vector<std::string>{"F", "M"});
}

TEST_CASE("standardization uses population statistics of the train split") {
  const TabularDataset ds = Numeric({0, 2, 100}, {1, 0, 1}, {1, 0, 1});
  const EncodedSplit e = EncodeAndStandardize(ds, SplitIndices{{0, 1}, {2}});
  CHECK(e.X_train(0, 0) == doctest::Approx(-1.0));
  CHECK(e.X_train(1, 0) == doctest::Approx(1.0));
  CHECK(e.X_test(0, 0) == doctest::Approx(99.0));
  CHECK(e.encoder_state[0].mean == 1.0);
  CHECK(e.encoder_state[0].scale == 1.0);
  CHECK(e.feature_names == std::vector<std::string>{"a", "g=p", "g=u"});
  CHECK(e.X_train(0, 1) == 1.0);
  CHECK(e.X_train(0, 2) == 0.0);
  CHECK(e.group_test == std::vector<int>{1});

  EncodeOptions no_sensitive;
  no_sensitive.include_sensitive_feature = false;
  CHECK(EncodeAndStandardize(ds, SplitIndices{{0, 1}, {2}}, no_sensitive).X_train.cols() == 1);
}

TEST_CASE("constant numeric column encodes to zeros with a warning") {
  const TabularDataset ds = Numeric({5, 5, 5, 5}, {1, 0, 1, 0}, {1, 0, 1, 0});
  const EncodedSplit e = EncodeAndStandardize(ds, SplitIndices{{0, 1, 2}, {3}});
  CHECK(e.X_train.col(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(e.X_test(0, 0) == 0.0);
  CHECK(e.warnings.size() == 1);
}

TEST_CASE("encoding invariants on synthetic data") {
  const TabularDataset ds = GenerateSynthetic({500, 4, 3, 0.1, 3});
  const SplitIndices s = Split(ds, 0.2, 8);
  const EncodedSplit e = EncodeAndStandardize(ds, s);
  CHECK(e.X_train.cols() == e.X_test.cols());
  for (Eigen::Index j = 0; j < 4; ++j) {
    const double mean = e.X_train.col(j).mean();
    const double sd = std::sqrt((e.X_train.col(j).array() - mean).square().mean());
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(sd - 1.0) < 1e-6);
  }
  // one-hot blocks: 3 categorical columns x 3 categories, then group x 2
  for (Eigen::Index i = 0; i < e.X_train.rows(); ++i) {
    for (Eigen::Index block = 0; block < 3; ++block) CHECK(e.X_train.row(i).segment(4 + 3 * block, 3).sum() == 1.0);
    CHECK(e.X_train.row(i).segment(13, 2).sum() == 1.0);
  }

  // Changing test rows never changes the encoder state.
  TabularDataset perturbed = ds;
  for (std::size_t i : s.test) perturbed.columns[0].numeric[i] += 1000.0;
  const EncodedSplit e2 = EncodeAndStandardize(perturbed, s);
  for (std::size_t c = 0; c < e.encoder_state.size(); ++c) {
    CHECK(e.encoder_state[c].mean == e2.encoder_state[c].mean);
    CHECK(e.encoder_state[c].scale == e2.encoder_state[c].scale);
  }
  CHECK_THROWS_AS(EncodeAndStandardize(ds, SplitIndices{{0, 1}, {1}}), Error);
}

TEST_CASE("stratified split arithmetic") {
  const TabularDataset ds = Numeric(std::vector<double>(10, 0.0), {1, 1, 1, 1, 1, 0, 0, 0, 0, 0},
                                    {1, 0, 1, 0, 1, 0, 1, 0, 1, 0});
  const SplitIndices s = Split(ds, 0.2, 4);
  REQUIRE(s.test.size() == 2);
  const auto y = ds.Labels();
  CHECK(y[s.test[0]] + y[s.test[1]] == 1);
}

TEST_CASE("split is a deterministic partition") {
  const TabularDataset ds = GenerateSynthetic({1000, 2, 0, 0.0, 1});
  const SplitIndices a = Split(ds, 0.2, 11);
  const SplitIndices b = Split(ds, 0.2, 11);
  const SplitIndices c = Split(ds, 0.2, 12);
  CHECK(a.test == b.test);
  CHECK(a.train == b.train);
  CHECK(a.test != c.test);
  CHECK(a.test.size() == 200);
  std::vector<std::size_t> all = a.train;
  all.insert(all.end(), a.test.begin(), a.test.end());
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expected(1000);
  std::iota(expected.begin(), expected.end(), 0);
  CHECK(all == expected);
}

TEST_CASE("split rejects a label class with fewer than two rows") {
  const TabularDataset ds = Numeric({0, 1, 2, 3, 4, 5}, {1, 0, 0, 0, 0, 0}, {1, 0, 1, 0, 1, 0});
  try {
    Split(ds, 0.2, 1);
    FAIL("expected stratification error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kStratification);
  }
}

namespace {
double BaseRateGap(const TabularDataset& ds) {
  const auto y = ds.Labels();
  const auto g = ds.Groups();
  double pos[2] = {0, 0}, cnt[2] = {0, 0};
  for (std::size_t i = 0; i < y.size(); ++i) {
    pos[g[i]] += y[i];
    cnt[g[i]] += 1;
  }
  return pos[1] / cnt[1] - pos[0] / cnt[0];
}
}  // namespace

TEST_CASE("synthetic base-rate gap follows bias_strength") {
  CHECK(std::abs(BaseRateGap(GenerateSynthetic({10000, 5, 2, 0.0, 21}))) < 0.05);
  CHECK(std::abs(BaseRateGap(GenerateSynthetic({10000, 5, 2, 0.3, 22})) - 0.3) < 0.03);
  CHECK(std::abs(BaseRateGap(GenerateSynthetic({10000, 5, 2, -0.3, 23})) + 0.3) < 0.03);
}

TEST_CASE("synthetic generation is seeded") {
  const TabularDataset a = GenerateSynthetic({200, 3, 1, 0.2, 5});
  const TabularDataset b = GenerateSynthetic({200, 3, 1, 0.2, 5});
  for (std::size_t c = 0; c < a.columns.size(); ++c) {
    CHECK(a.columns[c].numeric == b.columns[c].numeric);
    CHECK(a.columns[c].codes == b.columns[c].codes);
  }
  a.Validate();
  CHECK_THROWS_AS(GenerateSynthetic({9, 3, 1, 0.0, 5}), Error);
}
