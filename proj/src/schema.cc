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

#include "hysite/schema.h"

namespace hysite {

const FeatureSchema& FeatureSchema::Canonical() {
  static const FeatureSchema* const kSchema = new FeatureSchema({{
      {"solar_irradiance", "kWh/m2/day", Direction::kBenefit,
       FeatureKind::kContinuous},
      {"temperature", "degC", Direction::kBenefit, FeatureKind::kContinuous},
      {"wind_speed", "m/s", Direction::kBenefit, FeatureKind::kContinuous},
      {"aod", "dimensionless", Direction::kCost, FeatureKind::kContinuous},
      {"land_cover_class", "code", Direction::kBenefit,
       FeatureKind::kCodedCategorical},
      {"water_proximity", "km", Direction::kCost, FeatureKind::kContinuous},
      {"elevation", "m", Direction::kCost, FeatureKind::kContinuous},
      {"month", "month", Direction::kBenefit, FeatureKind::kCyclicMonth},
  }});
  return *kSchema;
}

std::optional<int> FeatureSchema::IndexOf(std::string_view name) const {
  for (int i = 0; i < kNumFeatures; ++i) {
    if (features_[i].name == name) return i;
  }
  return std::nullopt;
}

std::string_view DirectionName(Direction d) {
  return d == Direction::kCost ? "cost" : "benefit";
}

std::string_view FeatureKindName(FeatureKind k) {
  switch (k) {
    case FeatureKind::kContinuous:
      return "continuous";
    case FeatureKind::kCodedCategorical:
      return "coded-categorical";
    case FeatureKind::kCyclicMonth:
      return "cyclic-month";
  }
  return "continuous";
}

}  // namespace hysite
