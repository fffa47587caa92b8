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

// Reference Shapley values computed the slow way: every coalition value is
// recomputed from scratch for every feature by routing composite rows through
// PredictMargins. Nothing is cached or shared with the library's evaluator.

#ifndef HYSITE_TESTS_ORACLES_BRUTE_SHAP_H_
#define HYSITE_TESTS_ORACLES_BRUTE_SHAP_H_

#include <vector>

#include "hysite/gbt.h"
#include "hysite/shap.h"

namespace hysite::oracle {

inline double Factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline double Binomial(int n, int k) {
  return Factorial(n) / (Factorial(k) * Factorial(n - k));
}

// 1 / (n * C(n-1, s)), the same rational as s! (n-s-1)! / n!.
inline double Weight(int s) {
  return 1.0 / (kNumFeatures * Binomial(kNumFeatures - 1, s));
}

inline double CoalitionValue(const GbtEnsemble& ensemble, const FeatureRow& x,
                             const std::vector<FeatureRow>& background,
                             unsigned mask, int class_id) {
  double total = 0;
  for (const FeatureRow& b : background) {
    FeatureRow z = b;
    for (int j = 0; j < kNumFeatures; ++j) {
      if (mask >> j & 1u) z[j] = x[j];
    }
    total += PredictMargins(ensemble, z)[class_id];
  }
  return total / static_cast<double>(background.size());
}

inline FeatureRow BruteForceShap(const GbtEnsemble& ensemble,
                                 const FeatureRow& x,
                                 const std::vector<FeatureRow>& background,
                                 int class_id) {
  FeatureRow phi{};
  for (int j = 0; j < kNumFeatures; ++j) {
    const unsigned bit = 1u << j;
    double sum = 0;
    for (unsigned s = 0; s < (1u << kNumFeatures); ++s) {
      if (s & bit) continue;
      int size = 0;
      for (int i = 0; i < kNumFeatures; ++i) size += (s >> i) & 1u;
      const double with =
          CoalitionValue(ensemble, x, background, s | bit, class_id);
      const double without =
          CoalitionValue(ensemble, x, background, s, class_id);
      sum += Weight(size) * (with - without);
    }
    phi[j] = sum;
  }
  return phi;
}

}  // namespace hysite::oracle

#endif  // HYSITE_TESTS_ORACLES_BRUTE_SHAP_H_
