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

#ifndef HYSITE_ERROR_H_
#define HYSITE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace hysite {

enum class ErrorCode {
  kSchema,
  kParse,
  kDuplicateKey,
  kRange,
  kUnfillableSeries,
  kEmptyInput,
  kInfeasibleK,
  kUndefinedSilhouette,
  kAlignment,
  kLabelCoverage,
  kParameter,
  kShape,
  kEmptyBackground,
  kDegenerateImportance,
  kUnsupportedVersion,
  kIo,
  kStartup,
};

// Stable lower-case identifier, used in service error bodies.
std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this type. The code survives
// re-wrapping so callers can attach context (e.g. a pipeline stage) without
// losing what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

  // Same code, message prefixed with `context: `.
  Error WithContext(std::string_view context) const;

 private:
  ErrorCode code_;
};

}  // namespace hysite

#endif  // HYSITE_ERROR_H_
