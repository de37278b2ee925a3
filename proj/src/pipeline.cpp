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

#include "respscore/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "json_io.hpp"
#include "respscore/rng.hpp"

#ifndef RESPSCORE_VERSION
#define RESPSCORE_VERSION "0.0.0"
#endif

namespace respscore {

using ojson = nlohmann::ordered_json;
using nlohmann::json;

const char* EngineVersion() { return RESPSCORE_VERSION; }

namespace {

// ---- config parsing ------------------------------------------------------

void CheckKeys(const json& j, const std::string& pointer, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw Error(ErrorKind::kConfig, "expected an object at " + (pointer.empty() ? "/" : pointer));
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw Error(ErrorKind::kConfig, "unknown field " + pointer + "/" + key);
  }
}

template <typename T>
T Field(const json& j, const std::string& key, T fallback, const std::string& pointer) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::kConfig, "wrong type at " + pointer + "/" + key);
  }
}

std::string Resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty()) return path;
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

const char* TimeBasisName(TimeBasis b) { return b == TimeBasis::kModeled ? "modeled" : "measured"; }

TimeBasis ParseTimeBasis(const std::string& s, const std::string& pointer) {
  if (s == "modeled") return TimeBasis::kModeled;
  if (s == "measured") return TimeBasis::kMeasured;
  throw Error(ErrorKind::kConfig, "time_basis must be 'modeled' or 'measured' at " + pointer);
}

const char* PoolScopeName(PoolScope s) { return s == PoolScope::kGlobal ? "global" : "per_dataset"; }

const std::set<std::string> kFormats{"json", "markdown", "radar_svg", "attribution_csv"};

}  // namespace

void RunConfig::Validate() const {
  if (datasets.empty()) throw Error(ErrorKind::kConfig, "config needs at least one dataset");
  if (models.empty()) throw Error(ErrorKind::kConfig, "config needs at least one model");
  if (seeds.empty()) throw Error(ErrorKind::kConfig, "config needs at least one seed");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorKind::kConfig, "split.test_fraction must lie in (0, 1)");
  }
  if (workers < 1) throw Error(ErrorKind::kConfig, "workers must be >= 1");
  std::set<std::string> names;
  for (const auto& d : datasets) {
    if (d.name.empty()) throw Error(ErrorKind::kConfig, "dataset without a name");
    if (!names.insert(d.name).second) throw Error(ErrorKind::kConfig, "duplicate dataset name '" + d.name + "'");
  }
  names.clear();
  for (const auto& m : models) {
    if (!names.insert(m.name).second) throw Error(ErrorKind::kConfig, "duplicate model name '" + m.name + "'");
    ModelSpec probe = m.spec;
    probe.input_dim = 1;
    probe.n_classes = 2;
    probe.Validate();
  }
  std::set<std::uint64_t> unique_seeds(seeds.begin(), seeds.end());
  if (unique_seeds.size() != seeds.size()) throw Error(ErrorKind::kConfig, "duplicate seeds");
  if (weights) ValidateWeights(*weights);
  if (!(train.learning_rate > 0.0) || train.max_epochs < 1 || train.patience < 1 ||
      train.batch_size < 1 || !(train.validation_fraction > 0.0 && train.validation_fraction < 1.0)) {
    throw Error(ErrorKind::kConfig, "invalid train settings");
  }
  attack.Validate();
  emission.Validate();
  explainability.Validate();
  for (const auto& f : formats) {
    if (!kFormats.count(f)) throw Error(ErrorKind::kConfig, "unknown output format '" + f + "'");
  }
}

RunConfig ParseRunConfig(const std::string& json_text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("run config is not valid JSON: ") + e.what());
  }
  CheckKeys(doc, "", {"datasets", "models", "seeds", "split", "train", "attack", "emission", "shap",
                      "explainability", "weights", "fairness_include_supplements", "pool_scope",
                      "output_dir", "workers", "formats"});
  RunConfig cfg;

  const json datasets = Field<json>(doc, "datasets", json::array(), "");
  if (!datasets.is_array()) throw Error(ErrorKind::kConfig, "wrong type at /datasets");
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    const std::string p = "/datasets/" + std::to_string(i);
    const json& d = datasets[i];
    CheckKeys(d, p, {"name", "schema", "csv", "synthetic"});
    DatasetSource src;
    src.name = Field<std::string>(d, "name", "", p);
    if (d.contains("synthetic")) {
      const json& s = d.at("synthetic");
      CheckKeys(s, p + "/synthetic", {"n_rows", "n_numeric", "n_categorical", "bias_strength", "seed"});
      SyntheticSpec spec;
      spec.n_rows = Field<std::size_t>(s, "n_rows", spec.n_rows, p + "/synthetic");
      spec.n_numeric = Field<int>(s, "n_numeric", spec.n_numeric, p + "/synthetic");
      spec.n_categorical = Field<int>(s, "n_categorical", spec.n_categorical, p + "/synthetic");
      spec.bias_strength = Field<double>(s, "bias_strength", spec.bias_strength, p + "/synthetic");
      spec.seed = Field<std::uint64_t>(s, "seed", spec.seed, p + "/synthetic");
      src.synthetic = spec;
      if (src.name.empty()) src.name = "synthetic";
    } else {
      if (!d.contains("schema") || !d.contains("csv")) {
        throw Error(ErrorKind::kConfig, p + " needs either 'synthetic' or both 'schema' and 'csv'");
      }
      src.schema_path = Resolve(base_dir, Field<std::string>(d, "schema", "", p));
      src.csv_path = Resolve(base_dir, Field<std::string>(d, "csv", "", p));
      if (src.name.empty()) src.name = LoadSchemaFile(src.schema_path).name;
    }
    cfg.datasets.push_back(std::move(src));
  }

  const json models = Field<json>(doc, "models", json::array(), "");
  if (!models.is_array()) throw Error(ErrorKind::kConfig, "wrong type at /models");
  for (std::size_t i = 0; i < models.size(); ++i) {
    const std::string p = "/models/" + std::to_string(i);
    CheckKeys(models[i], p, {"name", "architecture", "hidden_dims", "dropout_rates", "activation"});
    ModelEntry entry;
    json spec_json = models[i];
    spec_json.erase("name");
    try {
      entry.spec = SpecFromJsonValue(spec_json, p);
    } catch (const Error& e) {
      throw Error(ErrorKind::kConfig, e.what());
    }
    entry.name = Field<std::string>(models[i], "name", ArchitectureName(entry.spec.architecture), p);
    cfg.models.push_back(std::move(entry));
  }

  cfg.seeds = Field<std::vector<std::uint64_t>>(doc, "seeds", cfg.seeds, "");

  if (doc.contains("split")) {
    CheckKeys(doc["split"], "/split", {"test_fraction"});
    cfg.test_fraction = Field<double>(doc["split"], "test_fraction", cfg.test_fraction, "/split");
  }
  if (doc.contains("train")) {
    const json& t = doc["train"];
    CheckKeys(t, "/train", {"learning_rate", "max_epochs", "patience", "batch_size",
                            "validation_fraction", "target_f1"});
    cfg.train.learning_rate = Field<double>(t, "learning_rate", cfg.train.learning_rate, "/train");
    cfg.train.max_epochs = Field<int>(t, "max_epochs", cfg.train.max_epochs, "/train");
    cfg.train.patience = Field<int>(t, "patience", cfg.train.patience, "/train");
    cfg.train.batch_size = Field<int>(t, "batch_size", cfg.train.batch_size, "/train");
    cfg.train.validation_fraction =
        Field<double>(t, "validation_fraction", cfg.train.validation_fraction, "/train");
    cfg.train.target_f1 = Field<double>(t, "target_f1", cfg.train.target_f1, "/train");
  }
  if (doc.contains("attack")) {
    const json& a = doc["attack"];
    CheckKeys(a, "/attack", {"epsilon", "clever_radius", "clever_norm", "n_batches", "batch_size",
                             "clever_samples"});
    cfg.attack.epsilon = Field<double>(a, "epsilon", cfg.attack.epsilon, "/attack");
    cfg.attack.clever_radius = Field<double>(a, "clever_radius", cfg.attack.clever_radius, "/attack");
    cfg.attack.clever_norm = Field<std::string>(a, "clever_norm", cfg.attack.clever_norm, "/attack");
    cfg.attack.n_batches = Field<int>(a, "n_batches", cfg.attack.n_batches, "/attack");
    cfg.attack.batch_size = Field<int>(a, "batch_size", cfg.attack.batch_size, "/attack");
    cfg.attack.clever_samples = Field<int>(a, "clever_samples", cfg.attack.clever_samples, "/attack");
  }
  if (doc.contains("emission")) {
    const json& e = doc["emission"];
    CheckKeys(e, "/emission", {"device_power_watts", "pue", "carbon_intensity_kg_per_kwh",
                               "region_label", "time_basis", "device_flops_per_second"});
    auto& em = cfg.emission;
    em.device_power_watts = Field<double>(e, "device_power_watts", em.device_power_watts, "/emission");
    em.pue = Field<double>(e, "pue", em.pue, "/emission");
    em.carbon_intensity_kg_per_kwh =
        Field<double>(e, "carbon_intensity_kg_per_kwh", em.carbon_intensity_kg_per_kwh, "/emission");
    em.region_label = Field<std::string>(e, "region_label", em.region_label, "/emission");
    em.time_basis = ParseTimeBasis(Field<std::string>(e, "time_basis", "modeled", "/emission"),
                                   "/emission/time_basis");
    em.device_flops_per_second =
        Field<double>(e, "device_flops_per_second", em.device_flops_per_second, "/emission");
  }
  auto& ex = cfg.explainability;
  if (doc.contains("shap")) {
    const json& s = doc["shap"];
    CheckKeys(s, "/shap", {"background_size", "n_coalitions", "n_explain", "explained_output"});
    ex.background_size = Field<int>(s, "background_size", ex.background_size, "/shap");
    ex.shap.n_coalitions = Field<int>(s, "n_coalitions", ex.shap.n_coalitions, "/shap");
    ex.n_explain = Field<int>(s, "n_explain", ex.n_explain, "/shap");
    try {
      ex.shap.output = ParseExplainedOutput(Field<std::string>(s, "explained_output", "logit", "/shap"));
    } catch (const Error& e) {
      throw Error(ErrorKind::kConfig, std::string(e.what()) + " at /shap/explained_output");
    }
  }
  if (doc.contains("explainability")) {
    const json& s = doc["explainability"];
    CheckKeys(s, "/explainability", {"lipschitz_samples", "lipschitz_perturbations", "lipschitz_radius",
                                     "faithfulness_subset_size", "faithfulness_subsets"});
    ex.lipschitz_samples = Field<int>(s, "lipschitz_samples", ex.lipschitz_samples, "/explainability");
    ex.lipschitz_perturbations =
        Field<int>(s, "lipschitz_perturbations", ex.lipschitz_perturbations, "/explainability");
    ex.lipschitz_radius = Field<double>(s, "lipschitz_radius", ex.lipschitz_radius, "/explainability");
    ex.faithfulness_subset_size =
        Field<int>(s, "faithfulness_subset_size", ex.faithfulness_subset_size, "/explainability");
    ex.faithfulness_subsets =
        Field<int>(s, "faithfulness_subsets", ex.faithfulness_subsets, "/explainability");
  }
  if (doc.contains("weights") && !doc["weights"].is_null()) {
    const auto w = Field<std::vector<double>>(doc, "weights", {}, "");
    if (w.size() != 4) throw Error(ErrorKind::kConfig, "/weights must have 4 entries");
    cfg.weights = Weights{w[0], w[1], w[2], w[3]};
  }
  cfg.fairness_include_supplements =
      Field<bool>(doc, "fairness_include_supplements", cfg.fairness_include_supplements, "");
  const auto scope = Field<std::string>(doc, "pool_scope", "global", "");
  if (scope == "global") {
    cfg.pool_scope = PoolScope::kGlobal;
  } else if (scope == "per_dataset") {
    cfg.pool_scope = PoolScope::kPerDataset;
  } else {
    throw Error(ErrorKind::kConfig, "/pool_scope must be 'global' or 'per_dataset'");
  }
  cfg.output_dir = Resolve(base_dir, Field<std::string>(doc, "output_dir", cfg.output_dir, ""));
  cfg.workers = Field<int>(doc, "workers", cfg.workers, "");
  cfg.formats = Field<std::vector<std::string>>(doc, "formats", cfg.formats, "");
  cfg.Validate();
  return cfg;
}

void ApplyEnvironmentOverrides(RunConfig& config) {
  if (const char* dir = std::getenv("RESPSCORE_OUTPUT_DIR"); dir && *dir) config.output_dir = dir;
  if (const char* w = std::getenv("RESPSCORE_WORKERS"); w && *w) {
    char* end = nullptr;
    const long n = std::strtol(w, &end, 10);
    if (*end != '\0' || n < 1 || n > 1024) {
      throw Error(ErrorKind::kConfig, std::string("RESPSCORE_WORKERS must be a positive integer, got '") + w + "'");
    }
    config.workers = static_cast<int>(n);
  }
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kConfig, "cannot read run config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  const auto base = std::filesystem::path(path).parent_path().string();
  RunConfig cfg = ParseRunConfig(text.str(), base.empty() ? "." : base);
  ApplyEnvironmentOverrides(cfg);
  cfg.Validate();
  return cfg;
}

namespace {

ojson ConfigJson(const RunConfig& c) {
  ojson datasets = ojson::array();
  for (const auto& d : c.datasets) {
    ojson j{{"name", d.name}};
    if (d.synthetic) {
      j["synthetic"] = {{"n_rows", d.synthetic->n_rows},
                        {"n_numeric", d.synthetic->n_numeric},
                        {"n_categorical", d.synthetic->n_categorical},
                        {"bias_strength", d.synthetic->bias_strength},
                        {"seed", d.synthetic->seed}};
    } else {
      j["schema"] = std::filesystem::path(d.schema_path).filename().string();
      j["csv"] = std::filesystem::path(d.csv_path).filename().string();
    }
    datasets.push_back(j);
  }
  ojson models = ojson::array();
  for (const auto& m : c.models) {
    models.push_back({{"name", m.name},
                      {"architecture", ArchitectureName(m.spec.architecture)},
                      {"hidden_dims", m.spec.hidden_dims},
                      {"dropout_rates", m.spec.dropout_rates},
                      {"activation", "relu"}});
  }
  const auto& ex = c.explainability;
  ojson j{
      {"datasets", datasets},
      {"models", models},
      {"seeds", c.seeds},
      {"split", {{"test_fraction", c.test_fraction}}},
      {"train",
       {{"learning_rate", c.train.learning_rate},
        {"max_epochs", c.train.max_epochs},
        {"patience", c.train.patience},
        {"batch_size", c.train.batch_size},
        {"validation_fraction", c.train.validation_fraction},
        {"target_f1", c.train.target_f1}}},
      {"attack",
       {{"epsilon", c.attack.epsilon},
        {"clever_radius", c.attack.clever_radius},
        {"clever_norm", c.attack.clever_norm},
        {"n_batches", c.attack.n_batches},
        {"batch_size", c.attack.batch_size},
        {"clever_samples", c.attack.clever_samples}}},
      {"emission",
       {{"device_power_watts", c.emission.device_power_watts},
        {"pue", c.emission.pue},
        {"carbon_intensity_kg_per_kwh", c.emission.carbon_intensity_kg_per_kwh},
        {"region_label", c.emission.region_label},
        {"time_basis", TimeBasisName(c.emission.time_basis)},
        {"device_flops_per_second", c.emission.device_flops_per_second}}},
      {"shap",
       {{"background_size", ex.background_size},
        {"n_coalitions", ex.shap.n_coalitions},
        {"n_explain", ex.n_explain},
        {"explained_output", ExplainedOutputName(ex.shap.output)}}},
      {"explainability",
       {{"lipschitz_samples", ex.lipschitz_samples},
        {"lipschitz_perturbations", ex.lipschitz_perturbations},
        {"lipschitz_radius", ex.lipschitz_radius},
        {"faithfulness_subset_size", ex.faithfulness_subset_size},
        {"faithfulness_subsets", ex.faithfulness_subsets}}},
      {"weights", c.weights ? ojson(std::vector<double>(c.weights->begin(), c.weights->end())) : ojson()},
      {"fairness_include_supplements", c.fairness_include_supplements},
      {"pool_scope", PoolScopeName(c.pool_scope)},
      {"formats", c.formats}};
  return j;
}

std::string Fnv1aHex(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void AttachFlags(ResponsibilityProfile& p, const std::vector<std::string>& flags) {
  static const std::map<std::string, std::vector<std::string>> kTargets{
      {"kernel_shap", {metric::kLipschitz, metric::kConsistency, metric::kFaithfulnessCorrelation,
                       metric::kFaithfulnessEstimate, metric::kMprt, metric::kRandomLogit,
                       metric::kSparseness, metric::kComplexity}},
      {"consistency", {metric::kConsistency}},
      {"faithfulness", {metric::kFaithfulnessCorrelation, metric::kFaithfulnessEstimate}},
      {"randomization", {metric::kMprt, metric::kRandomLogit}},
      {"complexity", {metric::kSparseness, metric::kComplexity}},
      {"fgsm", {metric::kAccuracyGap}},
      {"clever", {metric::kCleverU}},
  };
  for (const auto& flag : flags) {
    const auto prefix = flag.substr(0, flag.find(':'));
    const auto it = kTargets.find(prefix);
    if (it == kTargets.end()) continue;
    for (auto& r : p.per_metric) {
      for (const auto& name : it->second) {
        if (r.name == name) r.flags.push_back(flag);
      }
    }
  }
}

}  // namespace

std::string CanonicalConfigJson(const RunConfig& config) { return ConfigJson(config).dump(); }

std::string ConfigHash(const RunConfig& config) { return Fnv1aHex(CanonicalConfigJson(config)); }

int RunReport::FailedCells() const {
  int n = 0;
  for (const auto& c : cells) n += !c.ok;
  return n;
}

SeedResult RunSeed(const TabularDataset& dataset, const ModelEntry& entry, std::uint64_t seed,
                   const RunConfig& config) {
  SeedResult r;
  r.seed = seed;
  const SplitIndices split = Split(dataset, config.test_fraction, DeriveSeed(seed, "split"));
  const EncodedSplit enc = EncodeAndStandardize(dataset, split);
  r.feature_names = enc.feature_names;
  r.warnings = enc.warnings;

  ModelSpec spec = entry.spec;
  spec.input_dim = static_cast<int>(enc.X_train.cols());
  spec.n_classes = 2;
  const TrainedModel model = Train(spec, enc.X_train, enc.y_train, config.train, DeriveSeed(seed, "train"));
  r.training = model.training_stats();

  const std::vector<int> pred = model.Predict(enc.X_test);
  r.f1 = F1Score(enc.y_test, pred, 2);
  r.fairness = ComputeFairnessReport({enc.y_test, pred, enc.group_test});

  r.cost = ComputeCostProfile(spec);
  r.training_seconds = TrainingSeconds(r.training, r.cost, config.emission);
  r.kg_co2e = EstimateCo2e(r.training_seconds, config.emission);

  AttackConfig attack = config.attack;
  attack.seed = DeriveSeed(seed, "attack");
  r.robustness = EvaluateRobustness(model, enc.X_test, enc.y_test, attack);
  r.explainability = EvaluateExplainability(model, enc.X_test, enc.X_train, config.explainability,
                                            DeriveSeed(seed, "explain"));

  const auto& e = r.explainability;
  const bool supp = config.fairness_include_supplements;
  auto& recs = r.raw_profile.per_metric;
  recs.push_back(MakeMetricRecord(metric::kLipschitz, e.lipschitz));
  recs.push_back(MakeMetricRecord(metric::kConsistency, e.consistency));
  recs.push_back(MakeMetricRecord(metric::kFaithfulnessCorrelation, e.faithfulness_correlation));
  recs.push_back(MakeMetricRecord(metric::kFaithfulnessEstimate, e.faithfulness_estimate));
  recs.push_back(MakeMetricRecord(metric::kMprt, e.mprt_score));
  recs.push_back(MakeMetricRecord(metric::kRandomLogit, e.random_logit_score));
  recs.push_back(MakeMetricRecord(metric::kSparseness, e.sparseness));
  recs.push_back(MakeMetricRecord(metric::kComplexity, e.complexity_entropy, e.log_n_features));
  const auto& f = r.fairness;
  recs.push_back(MakeMetricRecord(metric::kAccuracyDiff, f.accuracy_diff, 0.0, supp));
  recs.push_back(MakeMetricRecord(metric::kPrecisionDiff, f.precision_diff, 0.0, supp));
  recs.push_back(MakeMetricRecord(metric::kTprDiff, f.tpr_diff, 0.0, supp));
  recs.push_back(MakeMetricRecord(metric::kFprDiff, f.fpr_diff, 0.0, supp));
  recs.push_back(MakeMetricRecord(metric::kDemographicParityDiff, f.demographic_parity_diff, 0.0, supp));
  recs.push_back(MakeMetricRecord(metric::kEqualizedOddsDiff, f.equalized_odds_diff, 0.0, supp));
  recs.push_back(MakeMetricRecord(metric::kParameterCount, static_cast<double>(r.cost.parameter_count)));
  recs.push_back(MakeMetricRecord(metric::kFlops, static_cast<double>(r.cost.flops_per_forward)));
  recs.push_back(MakeMetricRecord(metric::kMacs, static_cast<double>(r.cost.macs_per_forward)));
  recs.push_back(MakeMetricRecord(metric::kCo2e, r.kg_co2e));
  const auto& rob = r.robustness;
  MetricRecord gap = MakeMetricRecord(metric::kAccuracyGap, std::max(0.0, rob.accuracy_gap));
  if (rob.accuracy_gap < 0.0) gap.flags.push_back("negative gap scored as 0");
  recs.push_back(gap);
  recs.push_back(MakeMetricRecord(metric::kCleverU, rob.clever_u_mean, config.attack.clever_radius));
  recs.push_back(MakeMetricRecord(metric::kLossSensitivity, rob.loss_sensitivity));
  AttachFlags(r.raw_profile, e.flags);
  AttachFlags(r.raw_profile, rob.flags);
  r.raw_profile.f1 = r.f1;
  r.ok = true;
  return r;
}

RunReport Run(const RunConfig& config) {
  config.Validate();
  RunReport report;
  report.config = config;
  report.timestamp = UtcTimestamp();
  report.config_hash = ConfigHash(config);

  // Load every dataset up front; a load failure fails all of its cells.
  std::vector<std::optional<TabularDataset>> data(config.datasets.size());
  std::vector<std::string> load_errors(config.datasets.size());
  for (std::size_t d = 0; d < config.datasets.size(); ++d) {
    const auto& src = config.datasets[d];
    try {
      if (src.synthetic) {
        data[d] = GenerateSynthetic(*src.synthetic);
      } else {
        data[d] = LoadCsv(src.csv_path, LoadSchemaFile(src.schema_path)).dataset;
      }
      data[d]->schema.name = src.name;
      data[d]->Validate();
    } catch (const std::exception& e) {
      load_errors[d] = e.what();
      data[d].reset();
    }
  }

  const std::size_t n_models = config.models.size(), n_seeds = config.seeds.size();
  const std::size_t n_tasks = config.datasets.size() * n_models * n_seeds;
  std::vector<SeedResult> results(n_tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < n_tasks; t = next++) {
      const std::size_t d = t / (n_models * n_seeds), m = (t / n_seeds) % n_models, s = t % n_seeds;
      SeedResult& slot = results[t];
      slot.seed = config.seeds[s];
      if (!data[d]) {
        slot.error = std::string("dataset load failed: ") + load_errors[d];
        continue;
      }
      try {
        slot = RunSeed(*data[d], config.models[m], config.seeds[s], config);
      } catch (const Error& e) {
        slot.error = std::string(ErrorKindName(e.kind())) + ": " + e.what();
      } catch (const std::exception& e) {
        slot.error = e.what();
      }
    }
  };
  const int n_workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(config.workers), n_tasks));
  std::vector<std::thread> pool;
  for (int i = 1; i < n_workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  // Barrier: aggregate repeats, pool and score on this thread only.
  for (std::size_t d = 0; d < config.datasets.size(); ++d) {
    for (std::size_t m = 0; m < n_models; ++m) {
      CellResult cell;
      cell.dataset = config.datasets[d].name;
      cell.model = config.models[m].name;
      std::vector<ResponsibilityProfile> repeats;
      for (std::size_t s = 0; s < n_seeds; ++s) {
        SeedResult& r = results[(d * n_models + m) * n_seeds + s];
        if (r.ok) {
          repeats.push_back(r.raw_profile);
        } else {
          cell.errors.push_back("seed " + std::to_string(r.seed) + ": " + r.error);
        }
        cell.seeds.push_back(std::move(r));
      }
      // A cell with any failed seed is marked failed; surviving seeds are
      // still reported but the cell stays out of the pools.
      cell.ok = cell.errors.empty();
      if (cell.ok) cell.profile = AggregateRepeats(repeats);
      report.cells.push_back(std::move(cell));
    }
  }

  std::map<std::string, std::vector<CellResult*>> pools;
  for (auto& c : report.cells) {
    if (!c.ok) continue;
    pools[config.pool_scope == PoolScope::kGlobal ? std::string() : c.dataset].push_back(&c);
  }
  for (auto& [key, cells] : pools) {
    std::vector<ResponsibilityProfile*> profiles;
    for (auto* c : cells) profiles.push_back(&c->profile);
    try {
      NormalizeAndScore(profiles, config.weights);
      for (auto* c : cells) c->explainability_categories = ExplainabilityCategoryScores(c->profile.per_metric);
    } catch (const std::exception& e) {
      for (auto* c : cells) {
        c->ok = false;
        c->errors.push_back(std::string("scoring: ") + e.what());
      }
    }
  }
  return report;
}

namespace {

ojson RecordJson(const MetricRecord& r) {
  return ojson{{"name", r.name},
               {"dimension", DimensionName(r.dimension)},
               {"category", r.category.empty() ? ojson() : ojson(r.category)},
               {"raw", r.raw},
               {"raw_stddev", r.raw_stddev},
               {"direction", DirectionName(r.direction)},
               {"norm_rule", NormRuleName(r.norm_rule)},
               {"rule_param", r.rule_param},
               {"normalized", r.normalized},
               {"in_dimension_mean", r.in_dimension_mean},
               {"flags", r.flags}};
}

ojson GroupJson(const GroupRates& g) {
  return ojson{{"tp", g.counts.tp}, {"fp", g.counts.fp}, {"tn", g.counts.tn}, {"fn", g.counts.fn},
               {"accuracy", g.accuracy}, {"precision", g.precision}, {"tpr", g.tpr},
               {"fpr", g.fpr}, {"positive_rate", g.positive_rate}, {"flags", g.flags}};
}

ojson SeedJson(const SeedResult& r, const RunConfig& config) {
  ojson j{{"seed", r.seed}, {"status", r.ok ? "ok" : "failed"}};
  if (!r.ok) {
    j["error"] = r.error;
    return j;
  }
  j["f1"] = r.f1;
  ojson training{{"epochs_run", r.training.epochs_run},
                 {"samples_processed", r.training.samples_processed},
                 {"final_validation_f1", r.training.final_f1},
                 {"training_seconds", r.training_seconds},
                 {"time_basis", TimeBasisName(config.emission.time_basis)}};
  // Measured wall clock only appears when it drives the estimate, keeping
  // modeled-basis reports reproducible byte for byte.
  if (config.emission.time_basis == TimeBasis::kMeasured) {
    training["wall_clock_seconds"] = r.training.wall_clock_seconds;
  }
  j["training"] = training;
  j["warnings"] = r.warnings;
  const auto& f = r.fairness;
  j["fairness"] = {{"accuracy_diff", f.accuracy_diff},
                   {"precision_diff", f.precision_diff},
                   {"tpr_diff", f.tpr_diff},
                   {"fpr_diff", f.fpr_diff},
                   {"demographic_parity_diff", f.demographic_parity_diff},
                   {"equalized_odds_diff", f.equalized_odds_diff},
                   {"privileged", GroupJson(f.privileged)},
                   {"unprivileged", GroupJson(f.unprivileged)}};
  j["sustainability"] = {{"kg_co2e", r.kg_co2e},
                         {"training_seconds", r.training_seconds},
                         {"cost", json::parse(CostToJsonValue(r.cost).dump())}};
  const auto& rob = r.robustness;
  j["robustness"] = {{"clean_accuracy", rob.clean_accuracy},
                     {"adversarial_accuracy", rob.adversarial_accuracy},
                     {"accuracy_gap", rob.accuracy_gap},
                     {"clever_u_mean", rob.clever_u_mean},
                     {"clever_scores", rob.clever_scores},
                     {"clever_rows", rob.clever_rows},
                     {"clever_fallbacks", rob.clever_fallbacks},
                     {"loss_sensitivity", rob.loss_sensitivity},
                     {"flags", rob.flags}};
  const auto& e = r.explainability;
  j["explainability"] = {{"lipschitz", e.lipschitz},
                         {"consistency", e.consistency},
                         {"faithfulness_correlation", e.faithfulness_correlation},
                         {"faithfulness_estimate", e.faithfulness_estimate},
                         {"mprt_score", e.mprt_score},
                         {"random_logit_score", e.random_logit_score},
                         {"sparseness", e.sparseness},
                         {"complexity_entropy", e.complexity_entropy},
                         {"log_n_features", e.log_n_features},
                         {"explained_output", ExplainedOutputName(config.explainability.shap.output)},
                         {"background_ref", e.attributions.background_ref},
                         {"n_coalitions", e.attributions.n_coalitions},
                         {"exact_enumeration", e.attributions.exact},
                         {"max_local_accuracy_error", e.attributions.max_local_accuracy_error},
                         {"explained_rows", e.explained_rows},
                         {"flags", e.flags}};
  ojson values = ojson::array();
  const Matrix& a = e.attributions.values;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(a.cols()));
    for (Eigen::Index k = 0; k < a.cols(); ++k) row[static_cast<std::size_t>(k)] = a(i, k);
    values.push_back(row);
  }
  j["attributions"] = {{"feature_names", r.feature_names},
                       {"rows", e.explained_rows},
                       {"target_classes", e.attributions.target_classes},
                       {"base_values", e.attributions.base_values},
                       {"values", values}};
  ojson metrics = ojson::array();
  for (const auto& m : r.raw_profile.per_metric) metrics.push_back({{"name", m.name}, {"raw", m.raw}});
  j["raw_metrics"] = metrics;
  return j;
}

}  // namespace

std::string RunReportToJson(const RunReport& report) {
  ojson cells = ojson::array();
  for (const auto& c : report.cells) {
    ojson cell{{"dataset", c.dataset}, {"model", c.model}, {"status", c.ok ? "ok" : "failed"},
               {"errors", c.errors}};
    if (c.ok) {
      const auto& p = c.profile;
      ojson ds;
      for (Dimension d : kDimensions) ds[DimensionName(d)] = p.dimension_scores[static_cast<std::size_t>(d)];
      ojson cats;
      for (std::size_t k = 0; k < kExplainabilityCategories.size(); ++k) {
        cats[kExplainabilityCategories[k]] = c.explainability_categories[k];
      }
      ojson metrics = ojson::array();
      for (const auto& m : p.per_metric) metrics.push_back(RecordJson(m));
      cell["repeats"] = p.repeats;
      cell["aggregation"] = p.aggregation;
      cell["f1"] = p.f1;
      cell["f1_stddev"] = p.f1_stddev;
      cell["responsibility_score"] = p.responsibility_score;
      cell["dimension_scores"] = ds;
      cell["explainability_categories"] = cats;
      cell["metrics"] = metrics;
    }
    ojson seeds = ojson::array();
    for (const auto& s : c.seeds) seeds.push_back(SeedJson(s, report.config));
    cell["seeds"] = seeds;
    cells.push_back(cell);
  }
  ojson doc{{"schema_version", 1},
            {"kind", "respscore.run_report"},
            {"metadata",
             {{"engine_version", EngineVersion()},
              {"config_hash", report.config_hash},
              {"timestamp", report.timestamp},
              {"failed_cells", report.FailedCells()}}},
            {"config", ConfigJson(report.config)},
            {"cells", cells}};
  return doc.dump(2) + "\n";
}

}  // namespace respscore
