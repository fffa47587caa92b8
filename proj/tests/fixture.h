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

// A small trained model shared by the pipeline, persistence, service and CLI
// tests. Trained once per process.

#ifndef HYSITE_TESTS_FIXTURE_H_
#define HYSITE_TESTS_FIXTURE_H_

#include <vector>

#include "hysite/dataset.h"
#include "hysite/pipeline.h"
#include "test_support.h"

namespace hysite::testing {

inline const Dataset& SmallDataset() {
  static const Dataset* d = [] {
    std::vector<CityProfile> all = DefaultCityProfiles();
    std::vector<CityProfile> some(all.begin(), all.begin() + 4);
    return new Dataset(GenerateSynthetic(some, MakeDate(2023, 1, 1),
                                         MakeDate(2023, 4, 30), 11));
  }();
  return *d;
}

inline PipelineConfig SmallConfig() {
  PipelineConfig c;
  c.k_max = 5;
  c.n_init = 3;
  c.gbt.rounds = 25;
  c.gbt.max_depth = 3;
  c.background_size = 16;
  c.shap_sample_size = 24;
  return c;
}

inline const PipelineResult& SmallPipeline() {
  static const PipelineResult* r =
      new PipelineResult(RunPipeline(SmallDataset(), SmallConfig()));
  return *r;
}

}  // namespace hysite::testing

#endif  // HYSITE_TESTS_FIXTURE_H_
