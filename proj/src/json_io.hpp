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

// JSON conversions shared by the engine's file formats. Internal header.

#pragma once

#include <string>

#include "json.hpp"
#include "respscore/model.hpp"

namespace respscore {

inline constexpr int kModelFormatVersion = 1;

nlohmann::json SpecToJsonValue(const ModelSpec& spec);
// `pointer` prefixes error messages (JSON pointer of the object).
ModelSpec SpecFromJsonValue(const nlohmann::json& j, const std::string& pointer = "");

nlohmann::json ModelToJsonValue(const TrainedModel& model);
TrainedModel ModelFromJsonValue(const nlohmann::json& j);

nlohmann::json CostToJsonValue(const CostProfile& cost);

// Typed field access that reports the JSON pointer of a bad field.
template <typename T>
T RequireField(const nlohmann::json& j, const std::string& key, const std::string& pointer);

template <typename T>
T OptionalField(const nlohmann::json& j, const std::string& key, T fallback,
                const std::string& pointer);

}  // namespace respscore

#include "json_io_inl.hpp"
