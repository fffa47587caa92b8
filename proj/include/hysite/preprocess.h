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

#ifndef HYSITE_PREPROCESS_H_
#define HYSITE_PREPROCESS_H_

#include <array>
#include <span>
#include <vector>

#include "hysite/dataset.h"
#include "hysite/schema.h"

namespace hysite {

enum class MatrixKind { kRaw, kScaled, kAdjusted };

// Row-major, one row per record, columns in schema order.
struct FeatureMatrix {
  std::vector<FeatureRow> rows;
  MatrixKind kind = MatrixKind::kRaw;

  size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
};

struct ScalingParams {
  FeatureRow min{};
  FeatureRow max{};
  std::array<bool, kNumFeatures> degenerate{};

  friend bool operator==(const ScalingParams&, const ScalingParams&) = default;
};

// Raw matrix from records in dataset order. Throws kParameter if any aod is
// missing.
FeatureMatrix ToFeatureMatrix(const Dataset& dataset);

// Per city, fills missing aod by linear interpolation on the day index;
// leading and trailing gaps copy the nearest observed value. Present values
// are kept bit-for-bit. Throws kUnfillableSeries naming a city with no aod.
Dataset InterpolateMissing(const Dataset& dataset);

// Throws kEmptyInput on an empty matrix.
ScalingParams FitScaler(const FeatureMatrix& raw);

// (x - min) / (max - min) clamped to [0, 1]; degenerate columns map to 0.5.
FeatureRow TransformRow(const ScalingParams& params, const FeatureRow& raw);
FeatureMatrix Transform(const ScalingParams& params, const FeatureMatrix& raw);

// Cost columns become 1 - x; benefit columns pass through. Applying it to an
// adjusted matrix undoes the adjustment.
FeatureRow DirectionalAdjustRow(const FeatureRow& scaled,
                                const FeatureSchema& schema);
FeatureMatrix DirectionalAdjust(const FeatureMatrix& scaled,
                                const FeatureSchema& schema);

}  // namespace hysite

#endif  // HYSITE_PREPROCESS_H_
