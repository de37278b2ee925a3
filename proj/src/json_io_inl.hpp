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

#pragma once

#include "respscore/errors.hpp"

namespace respscore {

template <typename T>
T RequireField(const nlohmann::json& j, const std::string& key, const std::string& pointer) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::kInput, "missing field at " + pointer + "/" + key);
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::kInput, "wrong type at " + pointer + "/" + key);
  }
}

template <typename T>
T OptionalField(const nlohmann::json& j, const std::string& key, T fallback,
                const std::string& pointer) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  return RequireField<T>(j, key, pointer);
}

}  // namespace respscore
