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

#include "json_io.hpp"

#include <vector>

namespace respscore {

using nlohmann::json;

json SpecToJsonValue(const ModelSpec& spec) {
  return json{{"architecture", ArchitectureName(spec.architecture)},
              {"input_dim", spec.input_dim},
              {"hidden_dims", spec.hidden_dims},
              {"n_classes", spec.n_classes},
              {"activation", "relu"},
              {"dropout_rates", spec.dropout_rates}};
}

ModelSpec SpecFromJsonValue(const json& j, const std::string& pointer) {
  ModelSpec spec;
  spec.architecture = ParseArchitecture(RequireField<std::string>(j, "architecture", pointer));
  spec.input_dim = OptionalField<int>(j, "input_dim", 0, pointer);
  spec.n_classes = OptionalField<int>(j, "n_classes", 2, pointer);
  const ModelSpec defaults = spec.architecture == Architecture::kMlp
                                 ? ModelSpec::DefaultMlp(1, 2)
                                 : ModelSpec::DefaultTabResNet(1, 2);
  spec.hidden_dims =
      OptionalField<std::vector<int>>(j, "hidden_dims", defaults.hidden_dims, pointer);
  spec.dropout_rates =
      OptionalField<std::vector<double>>(j, "dropout_rates", defaults.dropout_rates, pointer);
  const auto activation = OptionalField<std::string>(j, "activation", "relu", pointer);
  if (activation != "relu") {
    throw Error(ErrorKind::kConfig, "unsupported activation '" + activation + "' at " + pointer);
  }
  return spec;
}

json ModelToJsonValue(const TrainedModel& model) {
  json layers = json::array();
  for (const auto& layer : model.layers()) {
    std::vector<double> w(layer.weight.data(), layer.weight.data() + layer.weight.size());
    std::vector<double> b(layer.bias.data(), layer.bias.data() + layer.bias.size());
    layers.push_back({{"in", layer.in_dim()}, {"out", layer.out_dim()}, {"weight", w}, {"bias", b}});
  }
  const auto& s = model.training_stats();
  return json{{"format_version", kModelFormatVersion},
              {"kind", "respscore.model"},
              {"spec", SpecToJsonValue(model.spec())},
              {"layers", layers},
              {"training_stats",
               {{"epochs_run", s.epochs_run},
                {"wall_clock_seconds", s.wall_clock_seconds},
                {"final_f1", s.final_f1},
                {"seed", s.seed},
                {"samples_processed", s.samples_processed}}}};
}

TrainedModel ModelFromJsonValue(const json& j) {
  const int version = RequireField<int>(j, "format_version", "");
  if (version != kModelFormatVersion) {
    throw Error(ErrorKind::kInput, "unsupported model format_version " + std::to_string(version));
  }
  if (!j.contains("spec")) throw Error(ErrorKind::kInput, "missing field at /spec");
  ModelSpec spec = SpecFromJsonValue(j.at("spec"), "/spec");
  spec.Validate();
  const json& jl = j.contains("layers") ? j.at("layers") : json();
  if (!jl.is_array()) throw Error(ErrorKind::kInput, "missing field at /layers");
  std::vector<DenseLayer> layers;
  for (std::size_t i = 0; i < jl.size(); ++i) {
    const std::string ptr = "/layers/" + std::to_string(i);
    const int in = RequireField<int>(jl[i], "in", ptr);
    const int out = RequireField<int>(jl[i], "out", ptr);
    const auto w = RequireField<std::vector<double>>(jl[i], "weight", ptr);
    const auto b = RequireField<std::vector<double>>(jl[i], "bias", ptr);
    if (in < 1 || out < 1 || w.size() != static_cast<std::size_t>(in) * out ||
        b.size() != static_cast<std::size_t>(out)) {
      throw Error(ErrorKind::kInput, "inconsistent parameter array sizes at " + ptr);
    }
    DenseLayer layer{Matrix(in, out), RowVector(out)};
    std::copy(w.begin(), w.end(), layer.weight.data());
    std::copy(b.begin(), b.end(), layer.bias.data());
    layers.push_back(std::move(layer));
  }
  TrainingStats stats;
  if (j.contains("training_stats")) {
    const json& s = j.at("training_stats");
    stats.epochs_run = OptionalField<int>(s, "epochs_run", 0, "/training_stats");
    stats.wall_clock_seconds =
        OptionalField<double>(s, "wall_clock_seconds", 0.0, "/training_stats");
    stats.final_f1 = OptionalField<double>(s, "final_f1", 0.0, "/training_stats");
    stats.seed = OptionalField<std::uint64_t>(s, "seed", 0, "/training_stats");
    stats.samples_processed =
        OptionalField<std::uint64_t>(s, "samples_processed", 0, "/training_stats");
  }
  return TrainedModel(std::move(spec), std::move(layers), stats);
}

json CostToJsonValue(const CostProfile& cost) {
  return json{{"parameter_count", cost.parameter_count},
              {"flops_per_forward", cost.flops_per_forward},
              {"macs_per_forward", cost.macs_per_forward}};
}

}  // namespace respscore
