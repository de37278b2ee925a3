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

// Command-line front end. Talks to the engine through the C API only.
//
// Exit codes: 0 success, 1 one or more failed cells or a runtime failure,
// 2 invalid configuration, input or output location.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "respscore/respscore.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct CString {
  char* p = nullptr;
  ~CString() { rs_string_free(p); }
};

int ExitCodeFor(rs_status status) {
  switch (status) {
    case RS_OK:
      return kExitOk;
    case RS_ERR_CONFIG:
    case RS_ERR_INPUT:
    case RS_ERR_PARSE:
    case RS_ERR_SCHEMA:
    case RS_ERR_IO:
    case RS_ERR_INVALID_ARGUMENT:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

int Report(rs_status status) {
  if (status != RS_OK) {
    std::cerr << "respscore: " << rs_status_name(status) << " error: " << rs_last_error() << "\n";
  }
  return ExitCodeFor(status);
}

bool ReadFile(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "respscore: io error: cannot read '" << path << "'\n";
    return false;
  }
  std::ostringstream s;
  s << in.rdbuf();
  *out = s.str();
  return true;
}

std::string DefaultOutputDir() {
  const char* env = std::getenv("RESPSCORE_OUTPUT_DIR");
  return env && *env ? env : "respscore_out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Responsibility scoring for tabular classifiers"};
  app.set_version_flag("--version", std::string(rs_version()));
  app.require_subcommand(1);

  std::string config_path, run_output_dir;
  int workers = 0;
  std::uint64_t seed_offset = 0;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Train, measure and score every (dataset, model) cell");
  run->add_option("--config", config_path, "Run-config JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--output-dir", run_output_dir, "Overrides output_dir");
  run->add_option("--workers", workers, "Overrides the worker count")->check(CLI::PositiveNumber);
  run->add_option("--seed-offset", seed_offset, "Added to every configured seed");
  run->add_flag("--quiet", quiet, "Do not print the score table");

  std::string score_input;
  std::vector<double> weights;
  bool score_json = false;
  auto* score = app.add_subcommand("score", "Score a replay document or run report");
  score->add_option("--input", score_input, "Replay JSON or report.json")->required();
  score->add_option("--weights", weights, "Four dimension weights summing to 1")
      ->expected(4)
      ->delimiter(',');
  score->add_flag("--json", score_json, "Print JSON instead of a table");

  std::string report_input, report_formats = "markdown,radar_svg", report_output_dir = DefaultOutputDir();
  auto* report = app.add_subcommand("report", "Render reports from a replay document or run report");
  report->add_option("--input", report_input, "Replay JSON or report.json")->required();
  report->add_option("--format", report_formats, "Comma-separated: json,markdown,radar_svg,attribution_csv")
      ->capture_default_str();
  report->add_option("--output-dir", report_output_dir, "Destination directory")->capture_default_str();

  std::string predictions;
  bool supplements = false;
  auto* audit = app.add_subcommand("fairness-audit", "Group fairness metrics for stored predictions");
  audit->add_option("--predictions", predictions, "CSV with y_true,y_pred,group")->required();
  audit->add_flag("--include-supplements", supplements, "Include DemP and EOd in the fairness score");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (run->parsed()) {
    rs_run_options options{run_output_dir.empty() ? nullptr : run_output_dir.c_str(), workers, seed_offset};
    CString json;
    int failed = 0;
    const rs_status st = rs_run(config_path.c_str(), &options, &json.p, &failed);
    if (st != RS_OK) return Report(st);
    if (!quiet) {
      CString table;
      if (rs_score_replay(json.p, nullptr, nullptr, &table.p) == RS_OK) std::cout << table.p;
    }
    if (failed > 0) {
      std::cerr << "respscore: " << failed << " cell(s) failed; see report.json\n";
      return kExitFailure;
    }
    return kExitOk;
  }

  if (score->parsed()) {
    std::string text;
    if (!ReadFile(score_input, &text)) return kExitUsage;
    CString json, table;
    const rs_status st = rs_score_replay(text.c_str(), weights.empty() ? nullptr : weights.data(),
                                         score_json ? &json.p : nullptr, score_json ? nullptr : &table.p);
    if (st != RS_OK) return Report(st);
    std::cout << (score_json ? json.p : table.p);
    return kExitOk;
  }

  if (report->parsed()) {
    std::string text;
    if (!ReadFile(report_input, &text)) return kExitUsage;
    return Report(rs_emit_reports(text.c_str(), report_formats.c_str(), report_output_dir.c_str()));
  }

  if (audit->parsed()) {
    CString json;
    const rs_status st = rs_fairness_audit(predictions.c_str(), supplements ? 1 : 0, &json.p);
    if (st != RS_OK) return Report(st);
    std::cout << json.p;
    return kExitOk;
  }
  return kExitUsage;
}
