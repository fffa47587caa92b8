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
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "hysite/dataset.h"
#include "hysite/error.h"
#include "test_support.h"

namespace hysite {
namespace {

TEST(Skewness, HandComputedExample) {
  // m2 = 0.1875, m3 = 0.09375, g1 = m3 / m2^1.5.
  const std::vector<double> v = {0, 0, 0, 1};
  const double expected = 0.09375 / std::pow(0.1875, 1.5);
  EXPECT_NEAR(*Skewness(v), expected, 1e-12);
  EXPECT_NEAR(*Skewness(v), 1.1547, 5e-5);
}

TEST(Skewness, SymmetricAndDegenerate) {
  EXPECT_NEAR(*Skewness(std::vector<double>{-1, 0, 1}), 0.0, 1e-15);
  EXPECT_EQ(*Skewness(std::vector<double>{2, 2, 2}), 0.0);
  EXPECT_FALSE(Skewness(std::vector<double>{}).has_value());
}

TEST(Skewness, MirrorNegates) {
  std::mt19937_64 rng(5);
  std::gamma_distribution<double> g(2.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(5 + trial);
    for (double& x : v) x = g(rng);
    std::vector<double> mirrored(v.size());
    for (size_t i = 0; i < v.size(); ++i) mirrored[i] = -v[i];
    EXPECT_NEAR(*Skewness(mirrored), -*Skewness(v), 1e-12);
  }
}

TEST(Pearson, Examples) {
  EXPECT_NEAR(*PearsonCorrelation(std::vector<double>{1, 2, 3},
                                  std::vector<double>{2, 4, 6}),
              1.0, 1e-15);
  EXPECT_NEAR(*PearsonCorrelation(std::vector<double>{1, 2, 3},
                                  std::vector<double>{3, 2, 1}),
              -1.0, 1e-15);
  EXPECT_FALSE(PearsonCorrelation(std::vector<double>{1, 1, 1},
                                  std::vector<double>{1, 2, 3}));
  EXPECT_FALSE(PearsonCorrelation(std::vector<double>{1, 2},
                                  std::vector<double>{1, 2, 3}));
}

TEST(ComputeEda, MatrixPropertiesOnGeneratedData) {
  const Dataset d =
      GenerateSynthetic(DefaultCityProfiles(), testing::MakeDate(2022, 1, 1),
                        testing::MakeDate(2022, 12, 31), 17);
  const EdaSummary eda = ComputeEda(d);
  const size_t n = eda.correlation_features.size();
  ASSERT_EQ(eda.correlation.size(), n);
  for (size_t i = 0; i < n; ++i) {
    ASSERT_TRUE(eda.correlation[i][i].has_value());
    EXPECT_EQ(*eda.correlation[i][i], 1.0);
    for (size_t j = 0; j < n; ++j) {
      ASSERT_EQ(eda.correlation[i][j].has_value(),
                eda.correlation[j][i].has_value());
      if (!eda.correlation[i][j]) continue;
      EXPECT_EQ(*eda.correlation[i][j], *eda.correlation[j][i]);
      EXPECT_LE(std::abs(*eda.correlation[i][j]), 1.0);
    }
  }
  EXPECT_EQ(eda.moments[0].count, d.size());
  EXPECT_EQ(eda.monthly_aod.size(), 10u);
}

TEST(ComputeEda, MissingAodExcludedAndZeroVarianceUndefined) {
  using testing::MakeDate;
  using testing::MakeRecord;
  std::vector<SiteRecord> r = {
      MakeRecord("A", MakeDate(2023, 1, 1), {5, 20, 3, 0.2, 50, 1, 10, 1}),
      MakeRecord("A", MakeDate(2023, 1, 2), {6, 21, 4, 0.4, 50, 1, 10, 1}),
      MakeRecord("A", MakeDate(2023, 2, 1), {7, 22, 5, 0.0, 50, 1, 10, 2}),
  };
  r[2].aod.reset();
  const EdaSummary eda = ComputeEda(Dataset::FromRecords(r));
  EXPECT_EQ(eda.moments[Index(Feature::kAod)].count, 2u);
  EXPECT_NEAR(eda.moments[Index(Feature::kAod)].mean, 0.3, 1e-15);
  EXPECT_NEAR(*eda.monthly_aod.at("A")[0], 0.3, 1e-15);
  EXPECT_FALSE(eda.monthly_aod.at("A")[1].has_value());
  // water_proximity is constant: its correlations are undefined, not 0.
  size_t water = 0;
  for (size_t i = 0; i < eda.correlation_features.size(); ++i) {
    if (eda.correlation_features[i] == Index(Feature::kWaterProximity)) {
      water = i;
    }
  }
  EXPECT_FALSE(eda.correlation[water][0].has_value());
  EXPECT_THROW(ComputeEda(Dataset{}), Error);
}

}  // namespace
}  // namespace hysite
