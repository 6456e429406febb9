/*
 * Copyright 2026 The tanc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tanc/error.hpp"

namespace tanc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInfeasibleExtension: return "InfeasibleExtension";
    case ErrorCode::kObservationConstraintViolated: return "ObservationConstraintViolated";
    case ErrorCode::kNotPsd: return "NotPSD";
    case ErrorCode::kBadDimensions: return "BadDimensions";
    case ErrorCode::kCholeskyFailed: return "CholeskyFailed";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kInvalidSpan: return "InvalidSpan";
    case ErrorCode::kPreconditionNotMet: return "PreconditionNotMet";
    case ErrorCode::kDivergenceDetected: return "DivergenceDetected";
    case ErrorCode::kInfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace tanc
