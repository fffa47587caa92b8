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

// Synthetic daily site weather.
//
// Each city gets its own random stream derived from (seed, city name), so a
// city's series does not change when other profiles are added or removed.
//
//   season(d)  = cos(2*pi*(d - 172) / 365.25)        peaks near the solstice
//   dust(d)    = cos(2*pi*(d - 196) / 365.25)        peaks mid July
//   solar      = mixture(low, high; P(high) = 0.5 + 0.4*season)
//                + 0.35*season + N(0, 0.3)
//   temperature= 27.4 - 6.5e-3*elevation + 8.5*season + N(0, 1.8)
//   wind       = Gamma(shape 2.5, mean wind_scale)
//   aod        = aod_mean + amplitude*dust + N(0, 0.03), clipped at 0
//
// The season term is shared by solar and temperature, which makes them
// positively correlated; the gamma wind draw is right skewed (g1 ~ 1.26).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hashing.h"
#include "hysite/dataset.h"
#include "hysite/error.h"
#include "json.hpp"

namespace hysite {

namespace {

constexpr double kSolsticeDay = 172.0;
constexpr double kDustPeakDay = 196.0;
constexpr double kYearDays = 365.25;
constexpr double kWindShape = 2.5;

uint64_t CitySeed(uint64_t seed, const std::string& name) {
  using internal::SplitMix64;
  return SplitMix64(seed ^ SplitMix64(internal::Fnv1a64(name)));
}

void ValidateProfiles(std::span<const CityProfile> profiles) {
  if (profiles.empty()) {
    throw Error(ErrorCode::kParameter, "at least one city profile required");
  }
  std::set<std::string> names;
  for (const CityProfile& p : profiles) {
    if (p.name.empty()) {
      throw Error(ErrorCode::kParameter, "city profile with empty name");
    }
    if (!names.insert(p.name).second) {
      throw Error(ErrorCode::kParameter, "duplicate city profile " + p.name);
    }
    if (!(p.aod_annual_mean > 0)) {
      throw Error(ErrorCode::kParameter,
                  p.name + ": aod_annual_mean must be > 0");
    }
    if (!(p.solar_mode_low < p.solar_mode_high)) {
      throw Error(ErrorCode::kParameter,
                  p.name + ": solar_mode_low must be < solar_mode_high");
    }
    if (!(p.wind_scale > 0) || p.water_proximity < 0 ||
        p.aod_summer_amplitude < 0) {
      throw Error(ErrorCode::kParameter, p.name + ": invalid profile values");
    }
  }
}

}  // namespace

std::vector<CityProfile> DefaultCityProfiles() {
  // name, elevation m, water km, land cover, aod mean, aod amplitude,
  // solar low/high, wind mean.
  return {
      {"Al Jazer", 60, 2.5, 60, 0.31, 0.20, 5.3, 6.8, 4.2},
      {"Duqm", 30, 1.2, 60, 0.36, 0.25, 5.2, 6.7, 4.6},
      {"Ibra", 470, 38, 60, 0.28, 0.12, 5.2, 6.7, 2.8},
      {"Ibri", 330, 95, 60, 0.25, 0.09, 5.4, 6.9, 2.9},
      {"Khasab", 10, 0.4, 50, 0.27, 0.15, 4.9, 6.3, 3.0},
      {"Muscat", 15, 1.0, 50, 0.33, 0.22, 5.0, 6.4, 3.4},
      {"Nizwa", 520, 45, 60, 0.26, 0.10, 5.3, 6.8, 2.6},
      {"Salalah", 20, 0.8, 50, 0.22, 0.12, 4.6, 6.0, 3.8},
      {"Sohar", 5, 0.6, 50, 0.32, 0.20, 5.0, 6.4, 3.2},
      {"Sur", 10, 0.5, 50, 0.34, 0.23, 5.1, 6.5, 3.9},
  };
}

std::vector<CityProfile> LoadProfilesJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::vector<CityProfile> out;
  try {
    const nlohmann::json doc = nlohmann::json::parse(in);
    for (const nlohmann::json& p : doc.at("profiles")) {
      CityProfile c;
      c.name = p.at("name").get<std::string>();
      c.base_elevation = p.at("base_elevation").get<double>();
      c.water_proximity = p.at("water_proximity").get<double>();
      c.land_cover_code = p.at("land_cover_code").get<int>();
      c.aod_annual_mean = p.at("aod_annual_mean").get<double>();
      c.aod_summer_amplitude = p.at("aod_summer_amplitude").get<double>();
      c.solar_mode_low = p.at("solar_mode_low").get<double>();
      c.solar_mode_high = p.at("solar_mode_high").get<double>();
      c.wind_scale = p.at("wind_scale").get<double>();
      out.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchema, path + ": " + e.what());
  }
  ValidateProfiles(out);
  return out;
}

Dataset GenerateSynthetic(std::span<const CityProfile> profiles,
                          const Date& start, const Date& end, uint64_t seed) {
  if (!start.ok() || !end.ok()) {
    throw Error(ErrorCode::kRange, "invalid calendar date");
  }
  const std::chrono::sys_days first{start};
  const std::chrono::sys_days last{end};
  if (first > last) {
    throw Error(ErrorCode::kRange, "start " + FormatIsoDate(start) +
                                       " is after end " + FormatIsoDate(end));
  }
  ValidateProfiles(profiles);

  std::vector<SiteRecord> records;
  records.reserve(profiles.size() *
                  static_cast<size_t>((last - first).count() + 1));
  for (const CityProfile& p : profiles) {
    std::mt19937_64 rng(CitySeed(seed, p.name));
    std::normal_distribution<double> unit_normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::gamma_distribution<double> wind(kWindShape, p.wind_scale / kWindShape);
    for (std::chrono::sys_days day = first; day <= last;
         day += std::chrono::days{1}) {
      const Date date{day};
      const std::chrono::sys_days jan1{date.year() / std::chrono::January / 1};
      const double doy = static_cast<double>((day - jan1).count() + 1);
      const double season =
          std::cos(2 * std::numbers::pi * (doy - kSolsticeDay) / kYearDays);
      const double dust =
          std::cos(2 * std::numbers::pi * (doy - kDustPeakDay) / kYearDays);

      // Draw order is fixed; changing it changes every generated dataset.
      const bool high_mode = uniform(rng) < 0.5 + 0.4 * season;
      const double solar_noise = unit_normal(rng);
      const double temp_noise = unit_normal(rng);
      const double wind_draw = wind(rng);
      const double aod_noise = unit_normal(rng);

      SiteRecord r;
      r.city = p.name;
      r.date = date;
      r.solar_irradiance =
          std::max(0.0, (high_mode ? p.solar_mode_high : p.solar_mode_low) +
                            0.35 * season + 0.3 * solar_noise);
      r.temperature =
          27.4 - 6.5e-3 * p.base_elevation + 8.5 * season + 1.8 * temp_noise;
      r.wind_speed = wind_draw;
      r.aod = std::max(0.0, p.aod_annual_mean + p.aod_summer_amplitude * dust +
                                0.03 * aod_noise);
      r.land_cover_class = p.land_cover_code;
      r.water_proximity = p.water_proximity;
      r.elevation = p.base_elevation;
      r.month = static_cast<int>(unsigned(date.month()));
      records.push_back(std::move(r));
    }
  }
  return Dataset::FromRecords(std::move(records));
}

}  // namespace hysite
