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

#include "respscore/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace respscore {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void InputError(const std::string& pointer, const std::string& what) {
  throw Error(ErrorKind::kInput, what + " at " + (pointer.empty() ? "/" : pointer));
}

const json& Require(const json& j, const std::string& key, const std::string& pointer) {
  if (!j.is_object() || !j.contains(key)) InputError(pointer + "/" + key, "missing field");
  return j.at(key);
}

std::string RequireString(const json& j, const std::string& key, const std::string& pointer) {
  const json& v = Require(j, key, pointer);
  if (!v.is_string()) InputError(pointer + "/" + key, "expected a string");
  return v.get<std::string>();
}

double RequireNumber(const json& v, const std::string& pointer) {
  if (!v.is_number()) InputError(pointer, "expected a number");
  return v.get<double>();
}

bool IsCatalogMetric(const std::string& name) {
  const auto names = AllMetricNames();
  return std::find(names.begin(), names.end(), name) != names.end();
}

MetricRecord ParseRecord(const json& j, const std::string& pointer) {
  if (!j.is_object()) InputError(pointer, "expected an object");
  MetricRecord r;
  r.name = RequireString(j, "name", pointer);
  if (IsCatalogMetric(r.name)) r = MakeMetricRecord(r.name, 0.0);
  try {
    r.dimension = ParseDimension(RequireString(j, "dimension", pointer));
  } catch (const Error&) {
    InputError(pointer + "/dimension", "unknown dimension");
  }
  r.category.clear();
  if (j.contains("category") && !j.at("category").is_null()) {
    r.category = RequireString(j, "category", pointer);
  }
  if (r.dimension == Dimension::kExplainability && r.category.empty()) {
    InputError(pointer + "/category", "explainability records need a category");
  }
  r.normalized = RequireNumber(Require(j, "normalized", pointer), pointer + "/normalized");
  if (!(r.normalized >= 0.0 && r.normalized <= 1.0)) {
    InputError(pointer + "/normalized", "normalized value outside [0, 1]");
  }
  if (j.contains("in_dimension_mean")) {
    const json& v = j.at("in_dimension_mean");
    if (!v.is_boolean()) InputError(pointer + "/in_dimension_mean", "expected a boolean");
    r.in_dimension_mean = v.get<bool>();
  }
  if (j.contains("raw") && j.at("raw").is_number()) r.raw = j.at("raw").get<double>();
  if (j.contains("raw_stddev") && j.at("raw_stddev").is_number()) r.raw_stddev = j.at("raw_stddev").get<double>();
  if (j.contains("rule_param") && j.at("rule_param").is_number()) r.rule_param = j.at("rule_param").get<double>();
  if (j.contains("flags") && j.at("flags").is_array()) {
    for (const auto& f : j.at("flags")) {
      if (f.is_string()) r.flags.push_back(f.get<std::string>());
    }
  }
  return r;
}

std::optional<Weights> ParseWeights(const json& j, const std::string& pointer) {
  if (!j.contains("weights") || j.at("weights").is_null()) return std::nullopt;
  const json& w = j.at("weights");
  if (!w.is_array() || w.size() != 4) InputError(pointer + "/weights", "expected 4 numbers");
  Weights out{};
  for (std::size_t i = 0; i < 4; ++i) out[i] = RequireNumber(w[i], pointer + "/weights/" + std::to_string(i));
  try {
    ValidateWeights(out);
  } catch (const Error& e) {
    InputError(pointer + "/weights", e.what());
  }
  return out;
}

std::optional<AttributionTable> ParseAttributions(const json& seed) {
  if (!seed.contains("attributions")) return std::nullopt;
  const json& a = seed.at("attributions");
  AttributionTable t;
  t.seed = seed.value("seed", std::uint64_t{0});
  t.feature_names = a.value("feature_names", std::vector<std::string>{});
  t.rows = a.value("rows", std::vector<std::size_t>{});
  t.values = a.value("values", std::vector<std::vector<double>>{});
  return t;
}

ScoredCell ParseCell(const json& c, const std::string& p, bool run_report,
                     const std::optional<Weights>& weights) {
  if (!c.is_object()) InputError(p, "expected an object");
  ScoredCell cell;
  cell.dataset = RequireString(c, "dataset", p);
  cell.model = RequireString(c, "model", p);
  if (run_report && c.value("status", std::string("ok")) != "ok") {
    cell.ok = false;
    cell.errors = c.value("errors", std::vector<std::string>{});
    return cell;
  }
  if (c.contains("f1") && !c.at("f1").is_null()) cell.f1 = RequireNumber(c.at("f1"), p + "/f1");
  const json& metrics = Require(c, "metrics", p);
  if (!metrics.is_array()) InputError(p + "/metrics", "expected an array");
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    cell.profile.per_metric.push_back(ParseRecord(metrics[m], p + "/metrics/" + std::to_string(m)));
  }
  if (run_report) {
    cell.profile.repeats = c.value("repeats", 1);
    cell.profile.f1_stddev = c.value("f1_stddev", 0.0);
    if (c.contains("seeds") && c.at("seeds").is_array()) {
      for (const auto& s : c.at("seeds")) {
        if (s.value("status", std::string()) == "ok") {
          cell.attributions = ParseAttributions(s);
          break;
        }
      }
    }
  }
  if (cell.f1) cell.profile.f1 = *cell.f1;
  try {
    ScoreReplayProfile(cell.profile, weights);
  } catch (const Error& e) {
    throw Error(ErrorKind::kInput, std::string(e.what()) + " at " + p);
  }
  cell.categories = ExplainabilityCategoryScores(cell.profile.per_metric);
  return cell;
}

std::string Trimmed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string XmlEscape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw Error(ErrorKind::kIo, "failed writing '" + path.string() + "'");
}

std::vector<std::string> DatasetsInOrder(const std::vector<ScoredCell>& cells) {
  std::vector<std::string> out;
  for (const auto& c : cells) {
    if (std::find(out.begin(), out.end(), c.dataset) == out.end()) out.push_back(c.dataset);
  }
  return out;
}

}  // namespace

void ScoreReplayProfile(ResponsibilityProfile& profile, const std::optional<Weights>& weights) {
  const Weights w = weights.value_or(Weights{0.25, 0.25, 0.25, 0.25});
  ValidateWeights(w);
  for (Dimension d : kDimensions) {
    const auto i = static_cast<std::size_t>(d);
    const bool present = std::any_of(profile.per_metric.begin(), profile.per_metric.end(),
                                     [&](const MetricRecord& r) { return r.dimension == d && r.in_dimension_mean; });
    if (present) {
      profile.dimension_scores[i] = DimensionScore(profile.per_metric, d);
    } else if (w[i] > 0.0) {
      throw Error(ErrorKind::kAggregation, std::string("no metrics for weighted dimension ") + DimensionName(d));
    } else {
      profile.dimension_scores[i] = std::nan("");
    }
  }
  profile.responsibility_score = ResponsibilityScore(profile.dimension_scores, w);
}

std::vector<ScoredCell> LoadScoredCells(const std::string& json_text, const std::optional<Weights>& weights) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("input is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) InputError("", "expected an object");
  const bool run_report = doc.value("kind", std::string()) == "respscore.run_report";
  std::optional<Weights> w = weights;
  if (!w) w = run_report ? ParseWeights(doc.value("config", json::object()), "/config") : ParseWeights(doc, "");
  const json& cells = Require(doc, "cells", "");
  if (!cells.is_array()) InputError("/cells", "expected an array");
  std::vector<ScoredCell> out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out.push_back(ParseCell(cells[i], "/cells/" + std::to_string(i), run_report, w));
  }
  return out;
}

std::vector<ScoredCell> ScoredCellsFromRun(const RunReport& report) {
  std::vector<ScoredCell> out;
  for (const auto& c : report.cells) {
    ScoredCell cell;
    cell.dataset = c.dataset;
    cell.model = c.model;
    cell.ok = c.ok;
    cell.errors = c.errors;
    if (c.ok) {
      cell.profile = c.profile;
      cell.f1 = c.profile.f1;
      cell.categories = c.explainability_categories;
      for (const auto& s : c.seeds) {
        if (!s.ok) continue;
        AttributionTable t;
        t.seed = s.seed;
        t.feature_names = s.feature_names;
        t.rows = s.explainability.explained_rows;
        const Matrix& a = s.explainability.attributions.values;
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
          t.values.emplace_back(a.row(i).data(), a.row(i).data() + a.cols());
        }
        cell.attributions = std::move(t);
        break;
      }
    }
    out.push_back(std::move(cell));
  }
  return out;
}

std::string Format4(double value) {
  if (std::isnan(value)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  std::string s = buf;
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::string RenderScoreTable(const std::vector<ScoredCell>& cells) {
  std::size_t wd = 7, wm = 5;
  for (const auto& c : cells) {
    wd = std::max(wd, c.dataset.size());
    wm = std::max(wm, c.model.size());
  }
  std::ostringstream out;
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - std::min(w, s.size()), ' '); };
  out << pad("dataset", wd) << "  " << pad("model", wm) << "  ";
  for (const char* h : {"f1", "explain", "fairness", "sustain", "robust"}) out << pad(h, 8) << " ";
  out << "RS\n";
  for (const auto& c : cells) {
    out << pad(c.dataset, wd) << "  " << pad(c.model, wm) << "  ";
    if (!c.ok) {
      out << "FAILED";
      for (const auto& e : c.errors) out << " | " << e;
      out << "\n";
      continue;
    }
    out << pad(c.f1 ? Format4(*c.f1) : "n/a", 8) << " ";
    for (double ds : c.profile.dimension_scores) out << pad(Format4(ds), 8) << " ";
    out << Format4(c.profile.responsibility_score) << "\n";
  }
  return out.str();
}

std::string ScoredCellsToJson(const std::vector<ScoredCell>& cells) {
  ojson arr = ojson::array();
  for (const auto& c : cells) {
    ojson j{{"dataset", c.dataset}, {"model", c.model}, {"status", c.ok ? "ok" : "failed"}};
    if (!c.ok) {
      j["errors"] = c.errors;
    } else {
      j["f1"] = c.f1 ? ojson(*c.f1) : ojson();
      ojson ds;
      for (Dimension d : kDimensions) {
        const double v = c.profile.dimension_scores[static_cast<std::size_t>(d)];
        ds[DimensionName(d)] = std::isnan(v) ? ojson() : ojson(v);
      }
      ojson cats;
      for (std::size_t k = 0; k < 4; ++k) {
        cats[kExplainabilityCategories[k]] = std::isnan(c.categories[k]) ? ojson() : ojson(c.categories[k]);
      }
      j["dimension_scores"] = ds;
      j["explainability_categories"] = cats;
      j["responsibility_score"] = c.profile.responsibility_score;
    }
    arr.push_back(j);
  }
  ojson doc{{"schema_version", 1}, {"kind", "respscore.scores"}, {"cells", arr}};
  return doc.dump(2) + "\n";
}

std::string RenderMarkdown(const std::vector<ScoredCell>& cells) {
  struct Row {
    std::string label;
    bool bold;
    enum { kF1, kRs, kDimension, kCategory, kMetric } kind;
    std::size_t index;
    const char* metric;
  };
  using M = const char*;
  const std::vector<Row> rows{
      {"F1-Score", true, Row::kF1, 0, M{}},
      {"Responsibility Score", true, Row::kRs, 0, M{}},
      {"Explainability Score", true, Row::kDimension, 0, M{}},
      {"Complexity", false, Row::kCategory, 0, M{}},
      {"Faithfulness", false, Row::kCategory, 1, M{}},
      {"Robustness", false, Row::kCategory, 2, M{}},
      {"Randomisation", false, Row::kCategory, 3, M{}},
      {"Fairness Score", true, Row::kDimension, 1, M{}},
      {"Accuracy Diff*", false, Row::kMetric, 0, metric::kAccuracyDiff},
      {"Precision Diff*", false, Row::kMetric, 0, metric::kPrecisionDiff},
      {"TPR Diff*", false, Row::kMetric, 0, metric::kTprDiff},
      {"FPR Diff*", false, Row::kMetric, 0, metric::kFprDiff},
      {"DemP Diff*", false, Row::kMetric, 0, metric::kDemographicParityDiff},
      {"EOd Diff*", false, Row::kMetric, 0, metric::kEqualizedOddsDiff},
      {"Sustainability Score", true, Row::kDimension, 2, M{}},
      {"Parameters Count*", false, Row::kMetric, 0, metric::kParameterCount},
      {"FLOPs*", false, Row::kMetric, 0, metric::kFlops},
      {"MACs*", false, Row::kMetric, 0, metric::kMacs},
      {"Normalized kgCO2e*", false, Row::kMetric, 0, metric::kCo2e},
      {"Robustness Score", true, Row::kDimension, 3, M{}},
      {"Accuracy Gap*", false, Row::kMetric, 0, metric::kAccuracyGap},
      {"CLEVER-u", false, Row::kMetric, 0, metric::kCleverU},
      {"Loss Sensitivity*", false, Row::kMetric, 0, metric::kLossSensitivity},
  };

  std::vector<const ScoredCell*> columns;
  for (const auto& d : DatasetsInOrder(cells)) {
    for (const auto& c : cells) {
      if (c.dataset == d) columns.push_back(&c);
    }
  }
  std::ostringstream out;
  out << "| Metric |";
  for (const auto* c : columns) out << " " << c->dataset << " / " << c->model << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < columns.size(); ++i) out << "---:|";
  out << "\n";
  for (const auto& row : rows) {
    out << "| " << (row.bold ? "**" + row.label + "**" : row.label) << " |";
    for (const auto* c : columns) {
      std::string cell;
      if (!c->ok) {
        cell = "failed";
      } else {
        double v = std::nan("");
        switch (row.kind) {
          case Row::kF1: v = c->f1.value_or(std::nan("")); break;
          case Row::kRs: v = c->profile.responsibility_score; break;
          case Row::kDimension: v = c->profile.dimension_scores[row.index]; break;
          case Row::kCategory: v = c->categories[row.index]; break;
          case Row::kMetric:
            for (const auto& r : c->profile.per_metric) {
              if (r.name == row.metric) v = r.normalized;
            }
            break;
        }
        cell = Format4(v);
        if (row.bold && cell != "n/a") cell = "**" + cell + "**";
      }
      out << " " << cell << " |";
    }
    out << "\n";
  }
  out << "\nMetrics marked with * are lower-is-better; their normalized values are inverted so that 1 is ideal.\n";
  return out.str();
}

std::array<std::pair<double, double>, 4> RadarVertices(const DimensionScores& ds) {
  auto v = [](double x) { return std::isnan(x) ? 0.0 : std::clamp(x, 0.0, 1.0) * kRadarRadius; };
  return {{{kRadarCenter, kRadarCenter - v(ds[0])},
           {kRadarCenter + v(ds[1]), kRadarCenter},
           {kRadarCenter, kRadarCenter + v(ds[2])},
           {kRadarCenter - v(ds[3]), kRadarCenter}}};
}

std::string RenderRadarSvg(const std::string& dataset, const std::vector<ScoredCell>& cells) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                   "#8c564b", "#e377c2", "#17becf"};
  const double c = kRadarCenter, r = kRadarRadius;
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"620\" height=\"440\" viewBox=\"0 0 620 440\">\n"
      << "  <title>" << XmlEscape(dataset) << "</title>\n"
      << "  <rect width=\"620\" height=\"440\" fill=\"#ffffff\"/>\n"
      << "  <g id=\"grid\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"1\">\n";
  for (int step = 1; step <= 4; ++step) {
    const double k = r * step / 4.0;
    svg << "    <path d=\"M " << Trimmed(c) << " " << Trimmed(c - k) << " L " << Trimmed(c + k) << " "
        << Trimmed(c) << " L " << Trimmed(c) << " " << Trimmed(c + k) << " L " << Trimmed(c - k) << " "
        << Trimmed(c) << " Z\"/>\n";
  }
  svg << "    <line x1=\"" << Trimmed(c) << "\" y1=\"" << Trimmed(c - r) << "\" x2=\"" << Trimmed(c)
      << "\" y2=\"" << Trimmed(c + r) << "\"/>\n"
      << "    <line x1=\"" << Trimmed(c - r) << "\" y1=\"" << Trimmed(c) << "\" x2=\"" << Trimmed(c + r)
      << "\" y2=\"" << Trimmed(c) << "\"/>\n"
      << "  </g>\n"
      << "  <g id=\"axes\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#333333\">\n"
      << "    <text x=\"" << Trimmed(c) << "\" y=\"" << Trimmed(c - r - 12) << "\" text-anchor=\"middle\">Explainability</text>\n"
      << "    <text x=\"" << Trimmed(c + r + 6) << "\" y=\"" << Trimmed(c - 6) << "\" text-anchor=\"start\">Fairness</text>\n"
      << "    <text x=\"" << Trimmed(c) << "\" y=\"" << Trimmed(c + r + 22) << "\" text-anchor=\"middle\">Sustainability</text>\n"
      << "    <text x=\"" << Trimmed(c - r - 6) << "\" y=\"" << Trimmed(c - 6) << "\" text-anchor=\"end\">Robustness</text>\n"
      << "  </g>\n";
  int n = 0;
  for (const auto& cell : cells) {
    if (cell.dataset != dataset || !cell.ok) continue;
    const char* color = kPalette[n % 8];
    const auto v = RadarVertices(cell.profile.dimension_scores);
    svg << "  <path class=\"profile\" data-model=\"" << XmlEscape(cell.model) << "\" d=\"M "
        << Trimmed(v[0].first) << " " << Trimmed(v[0].second);
    for (std::size_t i = 1; i < 4; ++i) svg << " L " << Trimmed(v[i].first) << " " << Trimmed(v[i].second);
    svg << " Z\" fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    const double ly = 40.0 + 22.0 * n;
    svg << "  <rect x=\"440\" y=\"" << Trimmed(ly - 10) << "\" width=\"12\" height=\"12\" fill=\"" << color
        << "\"/>\n"
        << "  <text x=\"458\" y=\"" << Trimmed(ly) << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << XmlEscape(cell.model) << " (RS " << Format4(cell.profile.responsibility_score) << ")</text>\n";
    ++n;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string RenderAttributionCsv(const AttributionTable& table) {
  std::ostringstream out;
  for (std::size_t k = 0; k < table.feature_names.size(); ++k) {
    out << (k ? "," : "") << CsvField(table.feature_names[k]);
  }
  out << "\n";
  char buf[64];
  for (const auto& row : table.values) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[k]);
      out << (k ? "," : "") << buf;
    }
    out << "\n";
  }
  return out.str();
}

std::string SanitizeFileComponent(const std::string& name) {
  std::string out;
  for (char ch : name) {
    const bool safe = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                      ch == '-' || ch == '_' || ch == '.';
    out += safe ? ch : '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

std::vector<std::string> EmitReports(const std::vector<ScoredCell>& cells,
                                     const std::vector<std::string>& formats,
                                     const std::string& output_dir, const std::string& report_json) {
  static const std::set<std::string> kKnown{"json", "markdown", "radar_svg", "attribution_csv"};
  for (const auto& f : formats) {
    if (!kKnown.count(f)) throw Error(ErrorKind::kConfig, "unknown output format '" + f + "'");
  }
  const std::filesystem::path dir(output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::kIo, "cannot create output directory '" + output_dir + "'");
  }
  auto wants = [&](const char* f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    const auto path = dir / name;
    WriteFile(path, content);
    written.push_back(path.string());
  };
  if (wants("json")) emit("report.json", report_json.empty() ? ScoredCellsToJson(cells) : report_json);
  if (wants("markdown")) emit("report.md", RenderMarkdown(cells));
  if (wants("radar_svg")) {
    for (const auto& d : DatasetsInOrder(cells)) {
      emit("radar_" + SanitizeFileComponent(d) + ".svg", RenderRadarSvg(d, cells));
    }
  }
  if (wants("attribution_csv")) {
    for (const auto& c : cells) {
      if (!c.ok || !c.attributions) continue;
      emit("attributions_" + SanitizeFileComponent(c.dataset) + "_" + SanitizeFileComponent(c.model) + ".csv",
           RenderAttributionCsv(*c.attributions));
    }
  }
  return written;
}

}  // namespace respscore
