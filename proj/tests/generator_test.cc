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

#include <cmath>
#include <map>
#include <string>

#include "gtest/gtest.h"
#include "hysite/dataset.h"
#include "hysite/error.h"
#include "oracles/calendar.h"
#include "test_support.h"

namespace hysite {
namespace {

using testing::MakeDate;

TEST(Generator, ThreeDaysDeterministic) {
  const std::vector<CityProfile> one = {DefaultCityProfiles()[0]};
  const Dataset a =
      GenerateSynthetic(one, MakeDate(2020, 1, 1), MakeDate(2020, 1, 3), 7);
  const Dataset b =
      GenerateSynthetic(one, MakeDate(2020, 1, 1), MakeDate(2020, 1, 3), 7);
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(WriteCsv(a), WriteCsv(b));
  const Dataset c =
      GenerateSynthetic(one, MakeDate(2020, 1, 1), MakeDate(2020, 1, 3), 8);
  EXPECT_NE(WriteCsv(a), WriteCsv(c));
}

TEST(Generator, FiveYearRecordCountMatchesCalendar) {
  const std::vector<CityProfile> profiles = DefaultCityProfiles();
  ASSERT_EQ(profiles.size(), 10u);
  const Dataset d = GenerateSynthetic(profiles, MakeDate(2020, 1, 1),
                                      MakeDate(2024, 12, 31), 3);
  const long days = oracle::InclusiveDayCount(2020, 1, 1, 2024, 12, 31);
  EXPECT_EQ(days, 1827);
  EXPECT_EQ(d.size(), static_cast<size_t>(10 * days));

  std::map<std::string, SiteRecord> first;
  for (const SiteRecord& r : d.records()) {
    EXPECT_EQ(r.month, static_cast<int>(unsigned(r.date.month())));
    ASSERT_TRUE(r.aod.has_value());
    EXPECT_GE(*r.aod, 0.0);
    EXPECT_GE(r.solar_irradiance, 0.0);
    EXPECT_GT(r.wind_speed, 0.0);
    const auto [it, inserted] = first.emplace(r.city, r);
    if (!inserted) {
      EXPECT_EQ(r.elevation, it->second.elevation);
      EXPECT_EQ(r.water_proximity, it->second.water_proximity);
      EXPECT_EQ(r.land_cover_class, it->second.land_cover_class);
    }
  }
  EXPECT_EQ(first.size(), 10u);
}

TEST(Generator, JulyAodExceedsJanuaryForDustyCoast) {
  CityProfile p = DefaultCityProfiles()[1];
  p.aod_summer_amplitude = 0.25;
  const Dataset d =
      GenerateSynthetic(std::vector<CityProfile>{p}, MakeDate(2022, 1, 1),
                        MakeDate(2022, 12, 31), 5);
  const EdaSummary eda = ComputeEda(d);
  const auto& months = eda.monthly_aod.at(p.name);
  EXPECT_GT(*months[6], *months[0]);
}

TEST(Generator, SolarTemperatureCorrelationPositiveEveryYear) {
  for (int year = 2020; year <= 2024; ++year) {
    const Dataset d =
        GenerateSynthetic(DefaultCityProfiles(), MakeDate(year, 1, 1),
                          MakeDate(year, 12, 31), 100 + year);
    const EdaSummary eda = ComputeEda(d);
    // correlation_features lists solar first and temperature second.
    ASSERT_EQ(eda.correlation_features[0], Index(Feature::kSolarIrradiance));
    ASSERT_EQ(eda.correlation_features[1], Index(Feature::kTemperature));
    EXPECT_GT(*eda.correlation[0][1], 0.0) << year;
  }
}

TEST(Generator, Errors) {
  const std::vector<CityProfile> profiles = DefaultCityProfiles();
  try {
    GenerateSynthetic(profiles, MakeDate(2020, 1, 2), MakeDate(2020, 1, 1), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRange);
  }
  EXPECT_THROW(
      GenerateSynthetic({}, MakeDate(2020, 1, 1), MakeDate(2020, 1, 1), 1),
      Error);
  CityProfile bad = profiles[0];
  bad.solar_mode_low = bad.solar_mode_high;
  EXPECT_THROW(GenerateSynthetic(std::vector<CityProfile>{bad},
                                 MakeDate(2020, 1, 1), MakeDate(2020, 1, 1), 1),
               Error);
  bad = profiles[0];
  bad.aod_annual_mean = 0;
  EXPECT_THROW(GenerateSynthetic(std::vector<CityProfile>{bad},
                                 MakeDate(2020, 1, 1), MakeDate(2020, 1, 1), 1),
               Error);
}

TEST(Generator, ShippedProfilesMatchDefaults) {
  EXPECT_EQ(LoadProfilesJson(std::string(HYSITE_SOURCE_DIR) +
                             "/data/oman_profiles.json"),
            DefaultCityProfiles());
}

TEST(Generator, CsvRoundTrip) {
  const Dataset d = GenerateSynthetic(
      DefaultCityProfiles(), MakeDate(2023, 1, 1), MakeDate(2023, 3, 31), 9);
  std::istringstream in(WriteCsv(d));
  EXPECT_EQ(LoadCsv(in), d);
}

}  // namespace
}  // namespace hysite
