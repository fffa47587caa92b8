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

// City-day observations, the canonical CSV format, the synthetic generator and
// exploratory statistics.

#ifndef HYSITE_DATASET_H_
#define HYSITE_DATASET_H_

#include <array>
#include <chrono>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hysite/schema.h"

namespace hysite {

using Date = std::chrono::year_month_day;

// Strict YYYY-MM-DD. Returns nullopt on any deviation or invalid calendar day.
std::optional<Date> ParseIsoDate(std::string_view text);
std::string FormatIsoDate(const Date& date);

struct SiteRecord {
  std::string city;
  Date date;
  double solar_irradiance = 0;  // kWh/m2/day
  double temperature = 0;       // degC
  double wind_speed = 0;        // m/s
  std::optional<double> aod;    // only feature allowed to be missing
  int land_cover_class = 0;
  double water_proximity = 0;  // km
  double elevation = 0;        // m
  int month = 1;

  // Schema-ordered values. Requires aod to be present.
  FeatureRow Features() const;

  friend bool operator==(const SiteRecord&, const SiteRecord&) = default;
};

// Records unique on (city, date), kept sorted by (city, date).
class Dataset {
 public:
  Dataset() = default;

  // Sorts and validates. Throws kDuplicateKey on a repeated (city, date).
  static Dataset FromRecords(std::vector<SiteRecord> records);

  const std::vector<SiteRecord>& records() const { return records_; }
  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const FeatureSchema& schema() const { return FeatureSchema::Canonical(); }

  // Distinct city names in sorted order.
  std::vector<std::string> Cities() const;
  bool HasMissingAod() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<SiteRecord> records_;
};

inline constexpr std::string_view kCsvHeader =
    "city,date,solar_irradiance,temperature,wind_speed,aod,land_cover_class,"
    "water_proximity,elevation,month";

// Errors: kSchema (bad header, names the column), kParse (with line number),
// kDuplicateKey.
Dataset LoadCsv(std::istream& source);
Dataset LoadCsvFile(const std::string& path);
std::string WriteCsv(const Dataset& dataset);

struct CityProfile {
  std::string name;
  double base_elevation = 0;   // m
  double water_proximity = 0;  // km
  int land_cover_code = 50;
  double aod_annual_mean = 0.3;
  double aod_summer_amplitude = 0.1;
  double solar_mode_low = 5.0;   // kWh/m2/day
  double solar_mode_high = 6.5;  // kWh/m2/day
  double wind_scale = 3.2;       // m/s, distribution mean

  friend bool operator==(const CityProfile&, const CityProfile&) = default;
};

// Ten Omani sites with aerosol/solar calibration loosely following published
// climatology. The same table ships as data/oman_profiles.json.
std::vector<CityProfile> DefaultCityProfiles();
std::vector<CityProfile> LoadProfilesJson(const std::string& path);

// One record per (profile, day) in [start, end]; deterministic for a seed.
// Throws kRange if start > end, kParameter on an empty or invalid profile list.
Dataset GenerateSynthetic(std::span<const CityProfile> profiles,
                          const Date& start, const Date& end, uint64_t seed);

struct MomentSummary {
  double mean = 0;
  double stddev = 0;    // population
  double skewness = 0;  // g1 = m3 / m2^1.5; 0 when m2 == 0
  size_t count = 0;
};

struct EdaSummary {
  std::array<MomentSummary, kNumFeatures> moments;
  // Feature indices of kind kContinuous, in schema order.
  std::vector<int> correlation_features;
  // nullopt where a participant has zero variance.
  std::vector<std::vector<std::optional<double>>> correlation;
  // city -> month (1..12) -> mean aod; nullopt when no observation.
  std::map<std::string, std::array<std::optional<double>, 12>> monthly_aod;
};

// Population-moment skewness. nullopt on empty input; 0 for zero variance.
std::optional<double> Skewness(std::span<const double> values);
// nullopt when either side has zero variance or sizes differ / are empty.
std::optional<double> PearsonCorrelation(std::span<const double> x,
                                         std::span<const double> y);

// Missing aod is excluded pairwise. Throws kEmptyInput on an empty dataset.
EdaSummary ComputeEda(const Dataset& dataset);

}  // namespace hysite

#endif  // HYSITE_DATASET_H_
