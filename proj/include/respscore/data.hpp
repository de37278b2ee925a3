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

// Tabular dataset ingestion: schema descriptors, CSV loading, encoding,
// stratified splitting and a synthetic biased-dataset generator.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "respscore/model.hpp"

namespace respscore {

enum class ColumnKind { kNumeric, kCategorical };

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  // Declared category order for categorical columns; defines one-hot layout.
  std::vector<std::string> categories;
};

struct DatasetSchema {
  std::string name;
  std::vector<ColumnSchema> columns;
  std::string label_column;
  std::string positive_label;
  std::string sensitive_column;
  std::string privileged_value;

  // Index of a column by name, or -1.
  int ColumnIndex(const std::string& column) const;
  void Validate() const;
};

DatasetSchema SchemaFromJson(const std::string& json);
DatasetSchema LoadSchemaFile(const std::string& path);
std::string SchemaToJson(const DatasetSchema& schema);

// Column-major storage. Numeric columns fill `numeric`, categorical columns
// fill `codes` (index into the schema's category list).
struct DataColumn {
  std::vector<double> numeric;
  std::vector<int> codes;
};

struct TabularDataset {
  DatasetSchema schema;
  std::vector<DataColumn> columns;  // parallel to schema.columns
  std::size_t n_rows = 0;

  // 1 where the label equals positive_label.
  std::vector<int> Labels() const;
  // 1 where the sensitive column equals privileged_value.
  std::vector<int> Groups() const;
  // Cell rendered as text (category name or number).
  std::string Cell(std::size_t row, const std::string& column) const;
  // Binary label present in both classes is not required; the sensitive
  // column must show at least two values.
  void Validate() const;
};

struct LoadReport {
  std::size_t rows_read = 0;
  std::size_t rows_loaded = 0;
  std::size_t rejected_missing_label = 0;
  std::size_t rejected_missing_sensitive = 0;
};

struct LoadResult {
  TabularDataset dataset;
  LoadReport report;
};

// Header required; extra CSV columns not named in the schema are ignored.
// Parse errors name the 1-based data row (header excluded) and the column.
LoadResult LoadCsv(const std::string& path, const DatasetSchema& schema);
LoadResult ParseCsv(const std::string& text, const DatasetSchema& schema);

// RFC-4180 record splitter, exposed for the predictions-CSV reader.
std::vector<std::vector<std::string>> ParseCsvRecords(const std::string& text);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Label-stratified split with |test| = round(test_fraction * n).
SplitIndices Split(const TabularDataset& dataset, double test_fraction, std::uint64_t seed);

struct ColumnEncoding {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  double mean = 0.0;
  double scale = 1.0;  // population stdev; 0 marks a constant column
  std::vector<std::string> categories;
};

struct EncodedSplit {
  Matrix X_train;
  Matrix X_test;
  std::vector<int> y_train;
  std::vector<int> y_test;
  std::vector<int> group_train;
  std::vector<int> group_test;  // 1 = privileged
  std::vector<std::string> feature_names;
  std::vector<ColumnEncoding> encoder_state;
  std::vector<std::string> warnings;
};

struct EncodeOptions {
  bool include_sensitive_feature = true;
};

EncodedSplit EncodeAndStandardize(const TabularDataset& dataset, const SplitIndices& split,
                                  const EncodeOptions& options = {});

struct SyntheticSpec {
  std::size_t n_rows = 1000;
  int n_numeric = 6;
  int n_categorical = 2;
  // P(y=1 | privileged) - P(y=1 | unprivileged), in [-1, 1].
  double bias_strength = 0.0;
  std::uint64_t seed = 0;
};

// Columns x0.., c0.. (categories a/b/c), group {priv, unpriv}, label y {0, 1}.
TabularDataset GenerateSynthetic(const SyntheticSpec& spec);

}  // namespace respscore
