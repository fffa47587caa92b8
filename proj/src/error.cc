/*
 * Copyright 2026 The HySite Authors.
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

#include "hysite/error.h"

#include <string>

namespace hysite {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchema:
      return "schema";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kDuplicateKey:
      return "duplicate_key";
    case ErrorCode::kRange:
      return "range";
    case ErrorCode::kUnfillableSeries:
      return "unfillable_series";
    case ErrorCode::kEmptyInput:
      return "empty_input";
    case ErrorCode::kInfeasibleK:
      return "infeasible_k";
    case ErrorCode::kUndefinedSilhouette:
      return "undefined_silhouette";
    case ErrorCode::kAlignment:
      return "alignment";
    case ErrorCode::kLabelCoverage:
      return "label_coverage";
    case ErrorCode::kParameter:
      return "parameter";
    case ErrorCode::kShape:
      return "shape";
    case ErrorCode::kEmptyBackground:
      return "empty_background";
    case ErrorCode::kDegenerateImportance:
      return "degenerate_importance";
    case ErrorCode::kUnsupportedVersion:
      return "unsupported_version";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kStartup:
      return "startup";
  }
  return "unknown";
}

Error Error::WithContext(std::string_view context) const {
  return Error(code_, std::string(context) + ": " + what());
}

}  // namespace hysite
