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

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "hysite/dataset.h"
#include "hysite/error.h"

namespace hysite {

namespace {

double Mean(std::span<const double> v) {
  double sum = 0;
  for (const double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

MomentSummary Moments(std::span<const double> v) {
  MomentSummary m;
  m.count = v.size();
  if (v.empty()) return m;
  m.mean = Mean(v);
  double m2 = 0;
  double m3 = 0;
  for (const double x : v) {
    const double d = x - m.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(v.size());
  m3 /= static_cast<double>(v.size());
  m.stddev = std::sqrt(m2);
  m.skewness = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return m;
}

}  // namespace

std::optional<double> Skewness(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  return Moments(values).skewness;
}

std::optional<double> PearsonCorrelation(std::span<const double> x,
                                         std::span<const double> y) {
  if (x.empty() || x.size() != y.size()) return std::nullopt;
  const double mx = Mean(x);
  const double my = Mean(y);
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0 || syy <= 0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

EdaSummary ComputeEda(const Dataset& dataset) {
  if (dataset.empty()) {
    throw Error(ErrorCode::kEmptyInput, "EDA needs at least one record");
  }
  const FeatureSchema& schema = dataset.schema();
  const int aod = Index(Feature::kAod);

  // Column values, with a presence mask for aod.
  std::array<std::vector<double>, kNumFeatures> columns;
  std::vector<bool> has_aod;
  has_aod.reserve(dataset.size());
  for (const SiteRecord& r : dataset.records()) {
    const FeatureRow row = {r.solar_irradiance,
                            r.temperature,
                            r.wind_speed,
                            r.aod.value_or(0.0),
                            static_cast<double>(r.land_cover_class),
                            r.water_proximity,
                            r.elevation,
                            static_cast<double>(r.month)};
    for (int j = 0; j < kNumFeatures; ++j) columns[j].push_back(row[j]);
    has_aod.push_back(r.aod.has_value());
  }
  auto present = [&](int j) {
    if (j != aod) return columns[j];
    std::vector<double> out;
    for (size_t i = 0; i < has_aod.size(); ++i) {
      if (has_aod[i]) out.push_back(columns[j][i]);
    }
    return out;
  };

  EdaSummary s;
  for (int j = 0; j < kNumFeatures; ++j) s.moments[j] = Moments(present(j));

  for (int j = 0; j < kNumFeatures; ++j) {
    if (schema.at(j).kind == FeatureKind::kContinuous) {
      s.correlation_features.push_back(j);
    }
  }
  const size_t n = s.correlation_features.size();
  s.correlation.assign(n, std::vector<std::optional<double>>(n));
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = a; b < n; ++b) {
      const int ja = s.correlation_features[a];
      const int jb = s.correlation_features[b];
      std::vector<double> xa;
      std::vector<double> xb;
      for (size_t i = 0; i < has_aod.size(); ++i) {
        if ((ja == aod || jb == aod) && !has_aod[i]) continue;
        xa.push_back(columns[ja][i]);
        xb.push_back(columns[jb][i]);
      }
      std::optional<double> r = PearsonCorrelation(xa, xb);
      if (a == b && r) r = 1.0;
      s.correlation[a][b] = r;
      s.correlation[b][a] = r;
    }
  }

  std::map<std::string, std::array<std::pair<double, int>, 12>> sums;
  for (const SiteRecord& r : dataset.records()) {
    auto& city = sums[r.city];
    if (!r.aod) continue;
    auto& cell = city[r.month - 1];
    cell.first += *r.aod;
    cell.second += 1;
  }
  for (const auto& [city, months] : sums) {
    auto& out = s.monthly_aod[city];
    for (int m = 0; m < 12; ++m) {
      if (months[m].second > 0) out[m] = months[m].first / months[m].second;
    }
  }
  return s;
}

}  // namespace hysite
