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

#include "respscore/data.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json_io.hpp"
#include "respscore/rng.hpp"

namespace respscore {

using nlohmann::json;

int DatasetSchema::ColumnIndex(const std::string& column) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == column) return static_cast<int>(i);
  }
  return -1;
}

namespace {

int CategoryIndex(const ColumnSchema& column, const std::string& value) {
  const auto it = std::find(column.categories.begin(), column.categories.end(), value);
  return it == column.categories.end() ? -1 : static_cast<int>(it - column.categories.begin());
}

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

void DatasetSchema::Validate() const {
  std::set<std::string> seen;
  for (const auto& c : columns) {
    if (c.name.empty()) throw Error(ErrorKind::kSchema, "column with empty name");
    if (!seen.insert(c.name).second) {
      throw Error(ErrorKind::kSchema, "duplicate column '" + c.name + "'");
    }
  }
  auto require_categorical = [&](const std::string& column, const std::string& value,
                                 const char* role) {
    const int idx = ColumnIndex(column);
    if (idx < 0) throw Error(ErrorKind::kSchema, std::string(role) + " column '" + column + "' not in schema");
    const ColumnSchema& c = columns[static_cast<std::size_t>(idx)];
    if (c.kind != ColumnKind::kCategorical) {
      throw Error(ErrorKind::kSchema, std::string(role) + " column '" + column + "' must be categorical");
    }
    if (!c.categories.empty() && CategoryIndex(c, value) < 0) {
      throw Error(ErrorKind::kSchema,
                  "value '" + value + "' is not a declared category of '" + column + "'");
    }
  };
  require_categorical(label_column, positive_label, "label");
  require_categorical(sensitive_column, privileged_value, "sensitive");
  if (label_column == sensitive_column) {
    throw Error(ErrorKind::kSchema, "label and sensitive column must differ");
  }
}

DatasetSchema SchemaFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("schema JSON: ") + e.what());
  }
  DatasetSchema s;
  s.name = OptionalField<std::string>(j, "name", "dataset", "");
  s.label_column = RequireField<std::string>(j, "label_column", "");
  s.positive_label = RequireField<std::string>(j, "positive_label", "");
  s.sensitive_column = RequireField<std::string>(j, "sensitive_column", "");
  s.privileged_value = RequireField<std::string>(j, "privileged_value", "");
  if (!j.contains("columns") || !j.at("columns").is_array()) {
    throw Error(ErrorKind::kInput, "missing field at /columns");
  }
  const json& cols = j.at("columns");
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const std::string ptr = "/columns/" + std::to_string(i);
    ColumnSchema c;
    c.name = RequireField<std::string>(cols[i], "name", ptr);
    const auto kind = RequireField<std::string>(cols[i], "kind", ptr);
    if (kind == "numeric") {
      c.kind = ColumnKind::kNumeric;
    } else if (kind == "categorical") {
      c.kind = ColumnKind::kCategorical;
      c.categories = OptionalField<std::vector<std::string>>(cols[i], "categories", {}, ptr);
    } else {
      throw Error(ErrorKind::kSchema, "unknown column kind '" + kind + "' at " + ptr);
    }
    s.columns.push_back(std::move(c));
  }
  s.Validate();
  return s;
}

DatasetSchema LoadSchemaFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open schema file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return SchemaFromJson(ss.str());
}

std::string SchemaToJson(const DatasetSchema& schema) {
  json cols = json::array();
  for (const auto& c : schema.columns) {
    json jc{{"name", c.name}, {"kind", c.kind == ColumnKind::kNumeric ? "numeric" : "categorical"}};
    if (c.kind == ColumnKind::kCategorical) jc["categories"] = c.categories;
    cols.push_back(std::move(jc));
  }
  return json{{"name", schema.name},
              {"columns", cols},
              {"label_column", schema.label_column},
              {"positive_label", schema.positive_label},
              {"sensitive_column", schema.sensitive_column},
              {"privileged_value", schema.privileged_value}}
      .dump(2);
}

std::vector<std::vector<std::string>> ParseCsvRecords(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t i = 0;
  // Skip a UTF-8 byte-order mark.
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;
  auto end_record = [&]() {
    record.push_back(std::move(field));
    field.clear();
    const bool blank = record.size() == 1 && record[0].empty() && !field_started;
    if (!blank) records.push_back(std::move(record));
    record.clear();
    field_started = false;
  };
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) throw Error(ErrorKind::kParse, "unterminated quoted CSV field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

LoadResult ParseCsv(const std::string& text, const DatasetSchema& schema_in) {
  schema_in.Validate();
  const auto records = ParseCsvRecords(text);
  if (records.empty()) throw Error(ErrorKind::kSchema, "CSV has no header row");
  std::map<std::string, std::size_t> header;
  for (std::size_t i = 0; i < records[0].size(); ++i) header[Trim(records[0][i])] = i;

  DatasetSchema schema = schema_in;
  std::vector<std::size_t> source(schema.columns.size());
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const auto it = header.find(schema.columns[c].name);
    if (it == header.end()) {
      throw Error(ErrorKind::kSchema, "CSV is missing column '" + schema.columns[c].name + "'");
    }
    source[c] = it->second;
  }
  const int label_idx = schema.ColumnIndex(schema.label_column);
  const int sens_idx = schema.ColumnIndex(schema.sensitive_column);

  // Undeclared category lists are inferred (sorted) from the data.
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    ColumnSchema& col = schema.columns[c];
    if (col.kind != ColumnKind::kCategorical || !col.categories.empty()) continue;
    std::set<std::string> values;
    for (std::size_t r = 1; r < records.size(); ++r) {
      if (source[c] < records[r].size()) {
        const std::string v = Trim(records[r][source[c]]);
        if (!v.empty()) values.insert(v);
      }
    }
    col.categories.assign(values.begin(), values.end());
  }

  LoadResult result;
  result.dataset.schema = schema;
  result.dataset.columns.resize(schema.columns.size());
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    ++result.report.rows_read;
    if (rec.size() != records[0].size()) {
      throw Error(ErrorKind::kParse, "row " + std::to_string(r) + " has " +
                                         std::to_string(rec.size()) + " fields, header has " +
                                         std::to_string(records[0].size()));
    }
    if (Trim(rec[source[static_cast<std::size_t>(label_idx)]]).empty()) {
      ++result.report.rejected_missing_label;
      continue;
    }
    if (Trim(rec[source[static_cast<std::size_t>(sens_idx)]]).empty()) {
      ++result.report.rejected_missing_sensitive;
      continue;
    }
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
      const ColumnSchema& col = schema.columns[c];
      const std::string cell = Trim(rec[source[c]]);
      if (col.kind == ColumnKind::kNumeric) {
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(cell.c_str(), &end);
        if (cell.empty() || end != cell.c_str() + cell.size() || errno == ERANGE ||
            !std::isfinite(v)) {
          throw Error(ErrorKind::kParse, "row " + std::to_string(r) + ", column \"" + col.name +
                                             "\": cannot parse '" + cell + "' as a number");
        }
        result.dataset.columns[c].numeric.push_back(v);
      } else {
        const int code = CategoryIndex(col, cell);
        if (code < 0) {
          throw Error(ErrorKind::kSchema, "row " + std::to_string(r) + ", column \"" + col.name +
                                              "\": unknown category '" + cell + "'");
        }
        result.dataset.columns[c].codes.push_back(code);
      }
    }
    ++result.dataset.n_rows;
  }
  result.report.rows_loaded = result.dataset.n_rows;
  return result;
}

LoadResult LoadCsv(const std::string& path, const DatasetSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open CSV file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseCsv(ss.str(), schema);
}

std::vector<int> TabularDataset::Labels() const {
  const int idx = schema.ColumnIndex(schema.label_column);
  const auto& col = schema.columns[static_cast<std::size_t>(idx)];
  const int positive = CategoryIndex(col, schema.positive_label);
  std::vector<int> y;
  y.reserve(n_rows);
  for (int code : columns[static_cast<std::size_t>(idx)].codes) y.push_back(code == positive);
  return y;
}

std::vector<int> TabularDataset::Groups() const {
  const int idx = schema.ColumnIndex(schema.sensitive_column);
  const auto& col = schema.columns[static_cast<std::size_t>(idx)];
  const int privileged = CategoryIndex(col, schema.privileged_value);
  std::vector<int> g;
  g.reserve(n_rows);
  for (int code : columns[static_cast<std::size_t>(idx)].codes) g.push_back(code == privileged);
  return g;
}

std::string TabularDataset::Cell(std::size_t row, const std::string& column) const {
  const int idx = schema.ColumnIndex(column);
  if (idx < 0 || row >= n_rows) throw Error(ErrorKind::kInput, "no such cell");
  const auto& col = schema.columns[static_cast<std::size_t>(idx)];
  const auto& data = columns[static_cast<std::size_t>(idx)];
  if (col.kind == ColumnKind::kCategorical) {
    return col.categories[static_cast<std::size_t>(data.codes[row])];
  }
  std::ostringstream os;
  os << data.numeric[row];
  return os.str();
}

void TabularDataset::Validate() const {
  schema.Validate();
  if (columns.size() != schema.columns.size()) {
    throw Error(ErrorKind::kSchema, "column storage does not match schema");
  }
  const int sens = schema.ColumnIndex(schema.sensitive_column);
  const auto& codes = columns[static_cast<std::size_t>(sens)].codes;
  const std::set<int> observed(codes.begin(), codes.end());
  if (observed.size() < 2) {
    throw Error(ErrorKind::kSchema, "sensitive column '" + schema.sensitive_column +
                                        "' has fewer than two observed values");
  }
}

SplitIndices Split(const TabularDataset& dataset, double test_fraction, std::uint64_t seed) {
  const std::size_t n = dataset.n_rows;
  if (n < 5) {
    throw Error(ErrorKind::kInput, "split needs at least 5 rows, dataset has " + std::to_string(n));
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorKind::kConfig, "test_fraction must lie in (0, 1)");
  }
  const std::vector<int> y = dataset.Labels();
  std::vector<std::vector<std::size_t>> by_class(2);
  for (std::size_t i = 0; i < n; ++i) by_class[static_cast<std::size_t>(y[i])].push_back(i);
  for (std::size_t c = 0; c < 2; ++c) {
    if (!by_class[c].empty() && by_class[c].size() < 2) {
      throw Error(ErrorKind::kStratification,
                  "label class " + std::to_string(c) + " has fewer than 2 rows");
    }
  }
  const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  // Largest-remainder allocation of the test budget across label classes.
  std::vector<std::size_t> take(2);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    const double exact = test_fraction * static_cast<double>(by_class[c].size());
    take[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += take[c];
    remainders.emplace_back(-(exact - std::floor(exact)), c);
  }
  std::sort(remainders.begin(), remainders.end());
  for (std::size_t k = 0; assigned < n_test && k < remainders.size(); ++k) {
    const std::size_t c = remainders[k].second;
    if (take[c] < by_class[c].size()) {
      ++take[c];
      ++assigned;
    }
  }

  SplitIndices out;
  for (std::size_t c = 0; c < 2; ++c) {
    Rng rng(DeriveSeed(seed, "split", c));
    rng.Shuffle(by_class[c]);
    out.test.insert(out.test.end(), by_class[c].begin(), by_class[c].begin() + static_cast<std::ptrdiff_t>(take[c]));
    out.train.insert(out.train.end(), by_class[c].begin() + static_cast<std::ptrdiff_t>(take[c]), by_class[c].end());
  }
  // Row order within each side follows the per-class permutations.
  Rng order_rng(DeriveSeed(seed, "split-order"));
  order_rng.Shuffle(out.train);
  order_rng.Shuffle(out.test);
  return out;
}

EncodedSplit EncodeAndStandardize(const TabularDataset& dataset, const SplitIndices& split,
                                  const EncodeOptions& options) {
  const std::size_t n = dataset.n_rows;
  std::vector<char> used(n, 0);
  for (const auto* side : {&split.train, &split.test}) {
    for (std::size_t i : *side) {
      if (i >= n) throw Error(ErrorKind::kConfig, "split index out of range");
      if (used[i]) throw Error(ErrorKind::kConfig, "split index sets overlap");
      used[i] = 1;
    }
  }
  if (split.train.empty()) throw Error(ErrorKind::kConfig, "training split is empty");

  const DatasetSchema& schema = dataset.schema;
  EncodedSplit out;
  std::vector<std::size_t> feature_columns;
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const auto& col = schema.columns[c];
    if (col.name == schema.label_column) continue;
    if (col.name == schema.sensitive_column && !options.include_sensitive_feature) continue;
    feature_columns.push_back(c);
    ColumnEncoding enc;
    enc.name = col.name;
    enc.kind = col.kind;
    if (col.kind == ColumnKind::kNumeric) {
      const auto& v = dataset.columns[c].numeric;
      double mean = 0.0;
      for (std::size_t i : split.train) mean += v[i];
      mean /= static_cast<double>(split.train.size());
      double var = 0.0;
      for (std::size_t i : split.train) var += (v[i] - mean) * (v[i] - mean);
      var /= static_cast<double>(split.train.size());
      enc.mean = mean;
      enc.scale = std::sqrt(var);
      if (!(enc.scale > 0.0)) {
        enc.scale = 0.0;
        out.warnings.push_back("column '" + col.name + "' is constant on the training split; encoded as zeros");
      }
      out.feature_names.push_back(col.name);
    } else {
      enc.categories = col.categories;
      for (const auto& cat : col.categories) out.feature_names.push_back(col.name + "=" + cat);
    }
    out.encoder_state.push_back(std::move(enc));
  }

  const auto width = static_cast<Eigen::Index>(out.feature_names.size());
  auto encode = [&](const std::vector<std::size_t>& rows, Matrix& X) {
    X = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), width);
    Eigen::Index offset = 0;
    for (std::size_t f = 0; f < feature_columns.size(); ++f) {
      const std::size_t c = feature_columns[f];
      const ColumnEncoding& enc = out.encoder_state[f];
      if (enc.kind == ColumnKind::kNumeric) {
        const auto& v = dataset.columns[c].numeric;
        for (std::size_t r = 0; r < rows.size(); ++r) {
          X(static_cast<Eigen::Index>(r), offset) =
              enc.scale > 0.0 ? (v[rows[r]] - enc.mean) / enc.scale : 0.0;
        }
        offset += 1;
      } else {
        const auto& codes = dataset.columns[c].codes;
        for (std::size_t r = 0; r < rows.size(); ++r) {
          X(static_cast<Eigen::Index>(r), offset + codes[rows[r]]) = 1.0;
        }
        offset += static_cast<Eigen::Index>(enc.categories.size());
      }
    }
  };
  encode(split.train, out.X_train);
  encode(split.test, out.X_test);

  const std::vector<int> y = dataset.Labels();
  const std::vector<int> g = dataset.Groups();
  for (std::size_t i : split.train) {
    out.y_train.push_back(y[i]);
    out.group_train.push_back(g[i]);
  }
  for (std::size_t i : split.test) {
    out.y_test.push_back(y[i]);
    out.group_test.push_back(g[i]);
  }
  return out;
}

TabularDataset GenerateSynthetic(const SyntheticSpec& spec) {
  if (spec.n_rows < 10) throw Error(ErrorKind::kConfig, "synthetic dataset needs n_rows >= 10");
  if (spec.n_numeric < 0 || spec.n_categorical < 0) {
    throw Error(ErrorKind::kConfig, "feature counts must be nonnegative");
  }
  if (!(std::abs(spec.bias_strength) <= 1.0)) {
    throw Error(ErrorKind::kConfig, "bias_strength must lie in [-1, 1]");
  }
  TabularDataset ds;
  ds.schema.name = "synthetic";
  for (int j = 0; j < spec.n_numeric; ++j) {
    ds.schema.columns.push_back({"x" + std::to_string(j), ColumnKind::kNumeric, {}});
  }
  for (int k = 0; k < spec.n_categorical; ++k) {
    ds.schema.columns.push_back({"c" + std::to_string(k), ColumnKind::kCategorical, {"a", "b", "c"}});
  }
  ds.schema.columns.push_back({"group", ColumnKind::kCategorical, {"priv", "unpriv"}});
  ds.schema.columns.push_back({"y", ColumnKind::kCategorical, {"0", "1"}});
  ds.schema.label_column = "y";
  ds.schema.positive_label = "1";
  ds.schema.sensitive_column = "group";
  ds.schema.privileged_value = "priv";
  ds.columns.resize(ds.schema.columns.size());
  ds.n_rows = spec.n_rows;

  Rng weight_rng(DeriveSeed(spec.seed, "synthetic-weights"));
  std::vector<double> w(static_cast<std::size_t>(spec.n_numeric));
  for (double& v : w) v = weight_rng.Normal();
  std::vector<std::vector<double>> effects(static_cast<std::size_t>(spec.n_categorical), std::vector<double>(3));
  for (auto& e : effects) {
    for (double& v : e) v = weight_rng.Normal();
    const double mean = (e[0] + e[1] + e[2]) / 3.0;
    for (double& v : e) v -= mean;
  }
  double norm = 0.0;
  for (double v : w) norm += v * v;
  for (const auto& e : effects) norm += (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]) / 3.0;
  norm = std::sqrt(std::max(norm, 1e-12));

  const std::size_t group_col = static_cast<std::size_t>(spec.n_numeric + spec.n_categorical);
  const std::size_t label_col = group_col + 1;
  const double b = spec.bias_strength;
  for (std::size_t i = 0; i < spec.n_rows; ++i) {
    Rng rng(DeriveSeed(spec.seed, "synthetic-row", i));
    double score = 0.0;
    for (int j = 0; j < spec.n_numeric; ++j) {
      const double x = rng.Normal();
      ds.columns[static_cast<std::size_t>(j)].numeric.push_back(x);
      score += w[static_cast<std::size_t>(j)] * x;
    }
    for (int k = 0; k < spec.n_categorical; ++k) {
      const int code = static_cast<int>(rng.UniformInt(3));
      ds.columns[static_cast<std::size_t>(spec.n_numeric + k)].codes.push_back(code);
      score += effects[static_cast<std::size_t>(k)][static_cast<std::size_t>(code)];
    }
    const bool privileged = rng.Uniform() < 0.5;
    ds.columns[group_col].codes.push_back(privileged ? 0 : 1);
    // Mixture: with probability |b| the label is fixed by group membership,
    // otherwise it follows a group-blind logistic score with mean 0.5. This
    // makes the base-rate gap exactly b in expectation.
    int label;
    if (rng.Uniform() < std::abs(b)) {
      label = (privileged == (b > 0.0)) ? 1 : 0;
    } else {
      const double p = 1.0 / (1.0 + std::exp(-3.0 * score / norm));
      label = rng.Uniform() < p ? 1 : 0;
    }
    ds.columns[label_col].codes.push_back(label);
  }
  return ds;
}

}  // namespace respscore
