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

#include "hysite/index.h"

#include <cmath>
#include <string>

#include "hysite/error.h"

namespace hysite {

std::string_view WeightModeName(WeightMode mode) {
  return mode == WeightMode::kRaw ? "raw" : "normalized";
}

WeightMode ParseWeightMode(std::string_view name) {
  if (name == "raw") return WeightMode::kRaw;
  if (name == "normalized") return WeightMode::kNormalized;
  throw Error(ErrorCode::kParameter,
              "unknown weight mode '" + std::string(name) + "'");
}

void BinThresholds::Validate() const {
  for (size_t i = 0; i < cuts.size(); ++i) {
    if (!std::isfinite(cuts[i]) || (i > 0 && !(cuts[i - 1] < cuts[i]))) {
      throw Error(ErrorCode::kParameter,
                  "bin thresholds must be finite and strictly ascending");
    }
  }
}

int BinSci(double value, const BinThresholds& thresholds) {
  int c = 0;
  for (const double cut : thresholds.cuts) {
    if (value >= cut) ++c;
  }
  return c;
}

std::string_view SciClassLabel(int sci_class) {
  return kSuitabilityLabels.at(sci_class);
}

SuitabilityResult ComputeSci(std::span<const double> adjusted_row,
                             const CompositeWeights& weights,
                             const BinThresholds& thresholds) {
  if (adjusted_row.size() != kNumFeatures) {
    throw Error(ErrorCode::kShape, "expected " + std::to_string(kNumFeatures) +
                                       " features, got " +
                                       std::to_string(adjusted_row.size()));
  }
  SuitabilityResult r;
  r.mode = weights.mode;
  for (int j = 0; j < kNumFeatures; ++j) {
    r.contributions[j] = weights.values[j] * adjusted_row[j];
    r.sci += r.contributions[j];
  }
  r.sci_class = BinSci(r.sci, thresholds);
  r.label = std::string(SciClassLabel(r.sci_class));
  return r;
}

}  // namespace hysite
