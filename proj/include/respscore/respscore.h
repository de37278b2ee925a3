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

/*
 * C interface of the respscore engine.
 *
 * Every function returns an rs_status. On failure a message is available from
 * rs_last_error() on the calling thread until the next call on that thread.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with rs_string_free().
 */

#ifndef RESPSCORE_RESPSCORE_H_
#define RESPSCORE_RESPSCORE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RS_API __declspec(dllexport)
#else
#define RS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rs_status {
  RS_OK = 0,
  RS_ERR_CONFIG = 1,
  RS_ERR_INPUT = 2,
  RS_ERR_PARSE = 3,
  RS_ERR_SCHEMA = 4,
  RS_ERR_STRATIFICATION = 5,
  RS_ERR_NUMERICAL = 6,
  RS_ERR_TRAINING = 7,
  RS_ERR_GROUPING = 8,
  RS_ERR_DOMAIN = 9,
  RS_ERR_NORMALIZATION = 10,
  RS_ERR_AGGREGATION = 11,
  RS_ERR_IO = 12,
  RS_ERR_INVALID_ARGUMENT = 13,
  RS_ERR_INTERNAL = 14
} rs_status;

/* Opaque trained model. */
typedef struct rs_model rs_model;

RS_API const char* rs_version(void);
RS_API const char* rs_status_name(rs_status status);
RS_API const char* rs_last_error(void);
RS_API void rs_string_free(char* s);

/* ---- pipeline --------------------------------------------------------- */

typedef struct rs_run_options {
  const char* output_dir; /* NULL keeps the config (and environment) value */
  int workers;            /* 0 keeps the config (and environment) value */
  uint64_t seed_offset;   /* added to every configured seed */
} rs_run_options;

/*
 * Runs the config file, writes the configured report formats and optionally
 * returns the run-report JSON. *failed_cells receives the number of failed
 * (dataset, model) cells; a run with failed cells still returns RS_OK.
 */
RS_API rs_status rs_run(const char* config_path, const rs_run_options* options,
                        char** report_json, int* failed_cells);

/*
 * Scores a replay document or run report. `weights` is NULL or 4 values.
 * Outputs are optional: scores JSON and a plain-text table.
 */
RS_API rs_status rs_score_replay(const char* json_text, const double* weights,
                                 char** scores_json, char** table_text);

/*
 * Renders a replay document or run report into output_dir. `formats` is a
 * comma-separated subset of json,markdown,radar_svg,attribution_csv.
 */
RS_API rs_status rs_emit_reports(const char* json_text, const char* formats,
                                 const char* output_dir);

/* Fairness metrics for a y_true,y_pred,group CSV. */
RS_API rs_status rs_fairness_audit(const char* predictions_csv_path, int include_supplements,
                                   char** report_json);

/* ---- models ----------------------------------------------------------- */

RS_API rs_status rs_model_from_json(const char* json_text, rs_model** out);
RS_API rs_status rs_model_to_json(const rs_model* model, char** json_text);
RS_API void rs_model_free(rs_model* model);
RS_API rs_status rs_model_dims(const rs_model* model, int* input_dim, int* n_classes);
/* X is row-major n_rows x input_dim; proba receives n_rows x n_classes. */
RS_API rs_status rs_model_predict_proba(const rs_model* model, const double* X, size_t n_rows,
                                        double* proba);
RS_API rs_status rs_model_cost(const rs_model* model, uint64_t* parameter_count,
                               uint64_t* flops, uint64_t* macs);

#ifdef __cplusplus
}
#endif

#endif /* RESPSCORE_RESPSCORE_H_ */
