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

#include "hysite/preprocess.h"

#include <algorithm>
#include <chrono>
#include <string>
#include <vector>

#include "hysite/error.h"

namespace hysite {

FeatureMatrix ToFeatureMatrix(const Dataset& dataset) {
  FeatureMatrix m;
  m.kind = MatrixKind::kRaw;
  m.rows.reserve(dataset.size());
  for (const SiteRecord& r : dataset.records()) m.rows.push_back(r.Features());
  return m;
}

Dataset InterpolateMissing(const Dataset& dataset) {
  std::vector<SiteRecord> records = dataset.records();
  size_t begin = 0;
  // Records are sorted by (city, date), so each city is a contiguous run.
  while (begin < records.size()) {
    size_t end = begin;
    while (end < records.size() && records[end].city == records[begin].city) {
      ++end;
    }
    std::vector<size_t> known;
    for (size_t i = begin; i < end; ++i) {
      if (records[i].aod) known.push_back(i);
    }
    if (known.empty()) {
      throw Error(ErrorCode::kUnfillableSeries,
                  "city '" + records[begin].city + "' has no aod values");
    }
    auto day = [&](size_t i) {
      return static_cast<double>(
          std::chrono::sys_days{records[i].date}.time_since_epoch().count());
    };
    size_t next = 0;  // index into `known` of the first known >= i
    for (size_t i = begin; i < end; ++i) {
      while (next < known.size() && known[next] < i) ++next;
      if (records[i].aod) continue;
      if (next == 0) {
        records[i].aod = records[known.front()].aod;
      } else if (next == known.size()) {
        records[i].aod = records[known.back()].aod;
      } else {
        const size_t lo = known[next - 1];
        const size_t hi = known[next];
        const double t = (day(i) - day(lo)) / (day(hi) - day(lo));
        records[i].aod =
            *records[lo].aod + t * (*records[hi].aod - *records[lo].aod);
      }
    }
    begin = end;
  }
  return Dataset::FromRecords(std::move(records));
}

ScalingParams FitScaler(const FeatureMatrix& raw) {
  if (raw.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot fit scaler on empty matrix");
  }
  ScalingParams p;
  p.min = raw.rows.front();
  p.max = raw.rows.front();
  for (const FeatureRow& row : raw.rows) {
    for (int j = 0; j < kNumFeatures; ++j) {
      p.min[j] = std::min(p.min[j], row[j]);
      p.max[j] = std::max(p.max[j], row[j]);
    }
  }
  for (int j = 0; j < kNumFeatures; ++j) p.degenerate[j] = p.min[j] == p.max[j];
  return p;
}

FeatureRow TransformRow(const ScalingParams& params, const FeatureRow& raw) {
  FeatureRow out;
  for (int j = 0; j < kNumFeatures; ++j) {
    if (params.degenerate[j]) {
      out[j] = 0.5;
    } else {
      const double v =
          (raw[j] - params.min[j]) / (params.max[j] - params.min[j]);
      out[j] = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

FeatureMatrix Transform(const ScalingParams& params, const FeatureMatrix& raw) {
  FeatureMatrix out;
  out.kind = MatrixKind::kScaled;
  out.rows.reserve(raw.size());
  for (const FeatureRow& row : raw.rows) {
    out.rows.push_back(TransformRow(params, row));
  }
  return out;
}

FeatureRow DirectionalAdjustRow(const FeatureRow& scaled,
                                const FeatureSchema& schema) {
  FeatureRow out = scaled;
  for (int j = 0; j < kNumFeatures; ++j) {
    if (schema.IsCost(j)) out[j] = 1.0 - scaled[j];
  }
  return out;
}

FeatureMatrix DirectionalAdjust(const FeatureMatrix& scaled,
                                const FeatureSchema& schema) {
  FeatureMatrix out;
  out.kind = scaled.kind == MatrixKind::kAdjusted ? MatrixKind::kScaled
                                                  : MatrixKind::kAdjusted;
  out.rows.reserve(scaled.size());
  for (const FeatureRow& row : scaled.rows) {
    out.rows.push_back(DirectionalAdjustRow(row, schema));
  }
  return out;
}

}  // namespace hysite
