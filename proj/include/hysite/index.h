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

// Stage 4: the composite site suitability index (SCI), a weighted sum of
// scaled, direction-adjusted features, and its five ordinal bins.
//
// Two weight scales exist. Normalised weights sum to one and keep the index in
// [0, 1]. Raw weights are the mean |SHAP| values themselves; the default bin
// cut points (2.4, 3.4, 4.4, 5.4) are expressed on that scale.

#ifndef HYSITE_INDEX_H_
#define HYSITE_INDEX_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hysite/schema.h"

namespace hysite {

enum class WeightMode { kRaw, kNormalized };

std::string_view WeightModeName(WeightMode mode);
// Throws kParameter on anything but "raw" / "normalized".
WeightMode ParseWeightMode(std::string_view name);

struct CompositeWeights {
  FeatureRow values{};
  WeightMode mode = WeightMode::kRaw;
  std::string provenance;

  friend bool operator==(const CompositeWeights&,
                         const CompositeWeights&) = default;
};

struct BinThresholds {
  std::array<double, kNumSuitabilityClasses - 1> cuts = {2.4, 3.4, 4.4, 5.4};

  // Throws kParameter unless strictly ascending and finite.
  void Validate() const;
  friend bool operator==(const BinThresholds&, const BinThresholds&) = default;
};

struct SuitabilityResult {
  double sci = 0;
  int sci_class = 0;
  std::string label;
  FeatureRow contributions{};  // w_j * x_j
  WeightMode mode = WeightMode::kRaw;
};

// Left-closed bins: a value equal to a cut point belongs to the upper class.
// Total over the reals; NaN falls in the lowest class.
int BinSci(double value, const BinThresholds& thresholds);
std::string_view SciClassLabel(int sci_class);

// Throws kShape on a row of the wrong arity.
SuitabilityResult ComputeSci(std::span<const double> adjusted_row,
                             const CompositeWeights& weights,
                             const BinThresholds& thresholds = {});

}  // namespace hysite

#endif  // HYSITE_INDEX_H_
