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

// Feature schema shared by every stage: the eight site features, their units,
// whether larger values help or hurt suitability, and how they are encoded.

#ifndef HYSITE_SCHEMA_H_
#define HYSITE_SCHEMA_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace hysite {

inline constexpr int kNumFeatures = 8;

// Canonical column order. The integer value is the column index everywhere.
enum class Feature : int {
  kSolarIrradiance = 0,
  kTemperature = 1,
  kWindSpeed = 2,
  kAod = 3,
  kLandCoverClass = 4,
  kWaterProximity = 5,
  kElevation = 6,
  kMonth = 7,
};

enum class Direction { kBenefit, kCost };
enum class FeatureKind { kContinuous, kCodedCategorical, kCyclicMonth };

struct FeatureDescriptor {
  std::string_view name;
  std::string_view unit;
  Direction direction;
  FeatureKind kind;
};

using FeatureRow = std::array<double, kNumFeatures>;

class FeatureSchema {
 public:
  // The one schema this project understands.
  static const FeatureSchema& Canonical();

  const std::array<FeatureDescriptor, kNumFeatures>& features() const {
    return features_;
  }
  const FeatureDescriptor& at(int index) const { return features_.at(index); }
  const FeatureDescriptor& at(Feature f) const {
    return features_[static_cast<int>(f)];
  }

  std::optional<int> IndexOf(std::string_view name) const;
  bool IsCost(int index) const {
    return features_.at(index).direction == Direction::kCost;
  }

 private:
  explicit FeatureSchema(std::array<FeatureDescriptor, kNumFeatures> features)
      : features_(features) {}
  std::array<FeatureDescriptor, kNumFeatures> features_;
};

constexpr int Index(Feature f) { return static_cast<int>(f); }

std::string_view DirectionName(Direction d);
std::string_view FeatureKindName(FeatureKind k);

// Ordinal suitability classes shared by the proxy labels and the SCI bins.
inline constexpr int kNumSuitabilityClasses = 5;
inline constexpr std::array<std::string_view, kNumSuitabilityClasses>
    kSuitabilityLabels = {"Very Low", "Low", "Moderate", "High", "Very High"};

}  // namespace hysite

#endif  // HYSITE_SCHEMA_H_
