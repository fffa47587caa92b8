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

// Stage 3: exact Shapley values of the ensemble margins.
//
// The coalition value of a feature set S for instance x is the interventional
// expectation
//
//   v(S) = 1/|B| * sum_{b in B} margin_c(x_S, b_{not S})
//
// over a background set B. With eight features there are 256 coalitions, all
// evaluated once and shared across features; each phi_j then sums the
// weighted marginal contributions |S|! (n-|S|-1)! / n! * (v(S u j) - v(S))
// over the 128 subsets S not containing j, in ascending bitmask order.
//
// Coalition values are computed per tree: the leaf reached by the composite
// row only depends on which of the tree's own split features come from x, so
// each (tree, background row) pair is resolved into a small table and then
// gathered into all 256 coalition margins. Margins accumulate in exactly the
// order PredictMargins uses, so v(S) is bit-identical to averaging direct
// PredictMargins calls on the composite rows.

#ifndef HYSITE_SHAP_H_
#define HYSITE_SHAP_H_

#include <array>
#include <cstdint>
#include <vector>

#include "hysite/gbt.h"
#include "hysite/index.h"
#include "hysite/preprocess.h"

namespace hysite {

inline constexpr int kNumCoalitions = 1 << kNumFeatures;

struct BackgroundSet {
  std::vector<FeatureRow> rows;
  uint64_t seed = 0;

  size_t size() const { return rows.size(); }
  friend bool operator==(const BackgroundSet&, const BackgroundSet&) = default;
};

// `size` rows drawn without replacement (kept in source order), or every row
// when size >= rows. Throws kEmptyBackground on an empty source or size 0.
BackgroundSet SampleBackground(const FeatureMatrix& scaled, size_t size,
                               uint64_t seed);

// Seeded sample of row indices without replacement, ascending.
std::vector<size_t> SampleRowIndices(size_t rows, size_t size, uint64_t seed);

struct ShapAttribution {
  FeatureRow instance{};
  int class_id = 0;
  FeatureRow phi{};
  double baseline = 0;  // v(empty set): mean background margin
  double margin = 0;    // margin of the instance itself
};

// v(S) for every coalition S (bit j set = feature j taken from the instance),
// indexed [class][S].
std::vector<std::array<double, kNumCoalitions>> CoalitionValues(
    const GbtEnsemble& ensemble, const FeatureRow& instance,
    const BackgroundSet& background);

// Shapley weight |S|! (n - |S| - 1)! / n! for n = kNumFeatures.
double ShapleyWeight(int coalition_size);

FeatureRow ShapleyFromCoalitions(const std::array<double, kNumCoalitions>& v);

// Throws kEmptyBackground / kShape / kParameter (class out of range).
ShapAttribution ShapExact(const GbtEnsemble& ensemble,
                          const FeatureRow& instance,
                          const BackgroundSet& background, int class_id);
std::vector<ShapAttribution> ShapExactAllClasses(
    const GbtEnsemble& ensemble, const FeatureRow& instance,
    const BackgroundSet& background);

struct ImportanceTable {
  FeatureRow mean_abs_shap{};
  FeatureRow weights{};  // normalised copy, sums to 1
  size_t sample_size = 0;
  size_t background_size = 0;
};

// Mean over sample rows and classes of |phi_j|. Throws kEmptyInput.
ImportanceTable GlobalImportance(const GbtEnsemble& ensemble,
                                 const FeatureMatrix& sample,
                                 const BackgroundSet& background);

// Table from already computed mean |SHAP| values (e.g. published ones).
ImportanceTable ImportanceFromValues(const FeatureRow& mean_abs_shap);

// w_j = |phi_j| / sum_k |phi_k|. Throws kDegenerateImportance when every
// importance is zero.
CompositeWeights WeightsFromImportance(const ImportanceTable& table);
CompositeWeights RawWeights(const ImportanceTable& table);

// Feature indices ordered by descending importance (ties -> schema order).
std::vector<int> ImportanceOrder(const ImportanceTable& table);

}  // namespace hysite

#endif  // HYSITE_SHAP_H_
