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

#include "respscore/errors.hpp"

namespace respscore {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "configuration error";
    case ErrorKind::kInput: return "input error";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kSchema: return "schema error";
    case ErrorKind::kStratification: return "stratification error";
    case ErrorKind::kNumerical: return "numerical error";
    case ErrorKind::kTraining: return "training failure";
    case ErrorKind::kGrouping: return "grouping error";
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kNormalization: return "normalization error";
    case ErrorKind::kAggregation: return "aggregation error";
    case ErrorKind::kIo: return "I/O error";
  }
  return "error";
}

}  // namespace respscore
