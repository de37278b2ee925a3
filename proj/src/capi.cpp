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

#include "respscore/respscore.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>

#include "json.hpp"
#include "respscore/fairness.hpp"
#include "respscore/model.hpp"
#include "respscore/pipeline.hpp"
#include "respscore/report.hpp"

struct rs_model {
  respscore::TrainedModel model;
};

namespace {

using respscore::Error;
using respscore::ErrorKind;

thread_local std::string g_last_error;

rs_status StatusOf(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return RS_ERR_CONFIG;
    case ErrorKind::kInput: return RS_ERR_INPUT;
    case ErrorKind::kParse: return RS_ERR_PARSE;
    case ErrorKind::kSchema: return RS_ERR_SCHEMA;
    case ErrorKind::kStratification: return RS_ERR_STRATIFICATION;
    case ErrorKind::kNumerical: return RS_ERR_NUMERICAL;
    case ErrorKind::kTraining: return RS_ERR_TRAINING;
    case ErrorKind::kGrouping: return RS_ERR_GROUPING;
    case ErrorKind::kDomain: return RS_ERR_DOMAIN;
    case ErrorKind::kNormalization: return RS_ERR_NORMALIZATION;
    case ErrorKind::kAggregation: return RS_ERR_AGGREGATION;
    case ErrorKind::kIo: return RS_ERR_IO;
  }
  return RS_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into a status and the thread's message.
template <typename F>
rs_status Guard(F&& body) {
  g_last_error.clear();
  try {
    body();
    return RS_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return StatusOf(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return RS_ERR_INTERNAL;
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> SplitFormats(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

nlohmann::ordered_json GroupJson(const respscore::GroupRates& g) {
  return {{"tp", g.counts.tp}, {"fp", g.counts.fp}, {"tn", g.counts.tn}, {"fn", g.counts.fn},
          {"accuracy", g.accuracy}, {"precision", g.precision}, {"tpr", g.tpr}, {"fpr", g.fpr},
          {"positive_rate", g.positive_rate}, {"flags", g.flags}};
}

}  // namespace

extern "C" {

const char* rs_version(void) { return respscore::EngineVersion(); }

const char* rs_status_name(rs_status status) {
  switch (status) {
    case RS_OK: return "ok";
    case RS_ERR_CONFIG: return "config";
    case RS_ERR_INPUT: return "input";
    case RS_ERR_PARSE: return "parse";
    case RS_ERR_SCHEMA: return "schema";
    case RS_ERR_STRATIFICATION: return "stratification";
    case RS_ERR_NUMERICAL: return "numerical";
    case RS_ERR_TRAINING: return "training";
    case RS_ERR_GROUPING: return "grouping";
    case RS_ERR_DOMAIN: return "domain";
    case RS_ERR_NORMALIZATION: return "normalization";
    case RS_ERR_AGGREGATION: return "aggregation";
    case RS_ERR_IO: return "io";
    case RS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case RS_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* rs_last_error(void) { return g_last_error.c_str(); }

void rs_string_free(char* s) { std::free(s); }

rs_status rs_run(const char* config_path, const rs_run_options* options, char** report_json,
                 int* failed_cells) {
  if (!config_path) {
    g_last_error = "config_path is NULL";
    return RS_ERR_INVALID_ARGUMENT;
  }
  return Guard([&] {
    respscore::RunConfig cfg = respscore::LoadRunConfig(config_path);
    if (options) {
      if (options->output_dir) cfg.output_dir = options->output_dir;
      if (options->workers < 0) throw Error(ErrorKind::kConfig, "workers must be >= 1");
      if (options->workers > 0) cfg.workers = options->workers;
      for (auto& s : cfg.seeds) s += options->seed_offset;
      cfg.Validate();
    }
    const respscore::RunReport report = respscore::Run(cfg);
    const std::string json = respscore::RunReportToJson(report);
    respscore::EmitReports(respscore::ScoredCellsFromRun(report), cfg.formats, cfg.output_dir, json);
    if (failed_cells) *failed_cells = report.FailedCells();
    if (report_json) *report_json = Dup(json);
  });
}

rs_status rs_score_replay(const char* json_text, const double* weights, char** scores_json,
                          char** table_text) {
  if (!json_text) {
    g_last_error = "json_text is NULL";
    return RS_ERR_INVALID_ARGUMENT;
  }
  return Guard([&] {
    std::optional<respscore::Weights> w;
    if (weights) {
      w = respscore::Weights{weights[0], weights[1], weights[2], weights[3]};
      respscore::ValidateWeights(*w);
    }
    const auto cells = respscore::LoadScoredCells(json_text, w);
    char* scores = scores_json ? Dup(respscore::ScoredCellsToJson(cells)) : nullptr;
    if (table_text) {
      try {
        *table_text = Dup(respscore::RenderScoreTable(cells));
      } catch (...) {
        std::free(scores);
        throw;
      }
    }
    if (scores_json) *scores_json = scores;
  });
}

rs_status rs_emit_reports(const char* json_text, const char* formats, const char* output_dir) {
  if (!json_text || !formats || !output_dir) {
    g_last_error = "NULL argument";
    return RS_ERR_INVALID_ARGUMENT;
  }
  return Guard([&] {
    const auto cells = respscore::LoadScoredCells(json_text);
    const bool run_report = nlohmann::json::parse(json_text).value("kind", std::string()) ==
                            "respscore.run_report";
    respscore::EmitReports(cells, SplitFormats(formats), output_dir, run_report ? std::string(json_text) : "");
  });
}

rs_status rs_fairness_audit(const char* predictions_csv_path, int include_supplements, char** report_json) {
  if (!predictions_csv_path || !report_json) {
    g_last_error = "NULL argument";
    return RS_ERR_INVALID_ARGUMENT;
  }
  return Guard([&] {
    const auto gp = respscore::LoadPredictionsCsv(predictions_csv_path);
    const auto f = respscore::ComputeFairnessReport(gp);
    const std::pair<const char*, double> diffs[] = {
        {respscore::metric::kAccuracyDiff, f.accuracy_diff},
        {respscore::metric::kPrecisionDiff, f.precision_diff},
        {respscore::metric::kTprDiff, f.tpr_diff},
        {respscore::metric::kFprDiff, f.fpr_diff},
        {respscore::metric::kDemographicParityDiff, f.demographic_parity_diff},
        {respscore::metric::kEqualizedOddsDiff, f.equalized_odds_diff}};
    nlohmann::ordered_json metrics = nlohmann::ordered_json::array();
    std::vector<respscore::MetricRecord> records;
    for (const auto& [name, raw] : diffs) {
      auto r = respscore::MakeMetricRecord(name, raw, 0.0, include_supplements != 0);
      r.normalized = respscore::Normalize(r);
      metrics.push_back({{"name", name}, {"raw", raw}, {"normalized", r.normalized},
                         {"in_dimension_mean", r.in_dimension_mean}});
      records.push_back(r);
    }
    nlohmann::ordered_json doc{
        {"schema_version", 1},
        {"kind", "respscore.fairness_audit"},
        {"n_samples", gp.y_true.size()},
        {"include_supplements", include_supplements != 0},
        {"fairness_score", respscore::DimensionScore(records, respscore::Dimension::kFairness)},
        {"metrics", metrics},
        {"privileged", GroupJson(f.privileged)},
        {"unprivileged", GroupJson(f.unprivileged)}};
    *report_json = Dup(doc.dump(2) + "\n");
  });
}

rs_status rs_model_from_json(const char* json_text, rs_model** out) {
  if (!json_text || !out) {
    g_last_error = "NULL argument";
    return RS_ERR_INVALID_ARGUMENT;
  }
  return Guard([&] { *out = new rs_model{respscore::ModelFromJson(json_text)}; });
}

rs_status rs_model_to_json(const rs_model* model, char** json_text) {
  if (!model || !json_text) {
    g_last_error = "NULL argument";
    return RS_ERR_INVALID_ARGUMENT;
  }
  return Guard([&] { *json_text = Dup(respscore::ModelToJson(model->model)); });
}

void rs_model_free(rs_model* model) { delete model; }

rs_status rs_model_dims(const rs_model* model, int* input_dim, int* n_classes) {
  if (!model) {
    g_last_error = "NULL model";
    return RS_ERR_INVALID_ARGUMENT;
  }
  if (input_dim) *input_dim = model->model.input_dim();
  if (n_classes) *n_classes = model->model.n_classes();
  g_last_error.clear();
  return RS_OK;
}

rs_status rs_model_predict_proba(const rs_model* model, const double* X, size_t n_rows, double* proba) {
  if (!model || (n_rows > 0 && (!X || !proba))) {
    g_last_error = "NULL argument";
    return RS_ERR_INVALID_ARGUMENT;
  }
  return Guard([&] {
    const auto d = static_cast<Eigen::Index>(model->model.input_dim());
    const respscore::Matrix input = Eigen::Map<const respscore::Matrix>(X, static_cast<Eigen::Index>(n_rows), d);
    const respscore::Matrix p = model->model.PredictProba(input);
    std::memcpy(proba, p.data(), sizeof(double) * static_cast<std::size_t>(p.size()));
  });
}

rs_status rs_model_cost(const rs_model* model, uint64_t* parameter_count, uint64_t* flops, uint64_t* macs) {
  if (!model) {
    g_last_error = "NULL model";
    return RS_ERR_INVALID_ARGUMENT;
  }
  return Guard([&] {
    const auto cost = respscore::ComputeCostProfile(model->model.spec());
    if (parameter_count) *parameter_count = cost.parameter_count;
    if (flops) *flops = cost.flops_per_forward;
    if (macs) *macs = cost.macs_per_forward;
  });
}

}  // extern "C"
