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

#include "hysite/shap.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "hysite/error.h"

namespace hysite {

namespace {

constexpr uint64_t Factorial(int n) {
  uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<uint64_t>(i);
  return f;
}

// A tree together with the map from global coalition masks to masks over the
// tree's own split features.
struct PreparedTree {
  const RegressionTree* tree = nullptr;
  std::array<int, kNumFeatures> local_bit{};  // -1 when unused
  int num_local = 0;
  std::array<uint8_t, kNumCoalitions> project{};
};

PreparedTree Prepare(const RegressionTree& tree) {
  PreparedTree p;
  p.tree = &tree;
  p.local_bit.fill(-1);
  for (const TreeNode& n : tree.nodes) {
    if (n.IsLeaf()) continue;
    if (n.feature < 0 || n.feature >= kNumFeatures) {
      throw Error(ErrorCode::kShape,
                  "tree splits on feature " + std::to_string(n.feature));
    }
    if (p.local_bit[n.feature] < 0) p.local_bit[n.feature] = p.num_local++;
  }
  for (int s = 0; s < kNumCoalitions; ++s) {
    uint8_t local = 0;
    for (int j = 0; j < kNumFeatures; ++j) {
      if ((s >> j & 1) && p.local_bit[j] >= 0) local |= 1u << p.local_bit[j];
    }
    p.project[s] = local;
  }
  return p;
}

class CoalitionEvaluator {
 public:
  explicit CoalitionEvaluator(const GbtEnsemble& ensemble)
      : ensemble_(ensemble) {
    prepared_.reserve(ensemble.trees.size());
    for (const auto& round : ensemble.trees) {
      if (static_cast<int>(round.size()) != ensemble.n_classes) {
        throw Error(ErrorCode::kShape, "round with wrong number of trees");
      }
      std::vector<PreparedTree> per_class;
      for (const RegressionTree& t : round) per_class.push_back(Prepare(t));
      prepared_.push_back(std::move(per_class));
    }
  }

  std::vector<std::array<double, kNumCoalitions>> Evaluate(
      const FeatureRow& x, const BackgroundSet& background) const {
    const int K = ensemble_.n_classes;
    std::vector<std::array<double, kNumCoalitions>> acc(K);
    for (auto& a : acc) a.fill(0.0);
    std::vector<std::array<double, kNumCoalitions>> margin(K);
    std::array<double, kNumCoalitions> table{};

    for (const FeatureRow& b : background.rows) {
      for (auto& m : margin) m.fill(ensemble_.base_score);
      for (const auto& round : prepared_) {
        for (int c = 0; c < K; ++c) {
          const PreparedTree& t = round[c];
          FillTable(t, x, b, table);
          double* m = margin[c].data();
          const uint8_t* proj = t.project.data();
          for (int s = 0; s < kNumCoalitions; ++s) m[s] += table[proj[s]];
        }
      }
      for (int c = 0; c < K; ++c) {
        for (int s = 0; s < kNumCoalitions; ++s) acc[c][s] += margin[c][s];
      }
    }
    const double n = static_cast<double>(background.size());
    for (auto& a : acc) {
      for (double& v : a) v /= n;
    }
    return acc;
  }

 private:
  // table[local mask] = leaf weight reached by the composite row that takes
  // the masked split features from x and the rest from b.
  static void FillTable(const PreparedTree& t, const FeatureRow& x,
                        const FeatureRow& b,
                        std::array<double, kNumCoalitions>& table) {
    const std::vector<TreeNode>& nodes = t.tree->nodes;
    const unsigned full = (1u << t.num_local) - 1;
    struct Frame {
      int node;
      unsigned in;   // local features forced to come from x
      unsigned out;  // local features forced to come from b
    };
    Frame stack[64];
    int top = 0;
    stack[top++] = {0, 0, 0};
    while (top > 0) {
      const Frame f = stack[--top];
      const TreeNode& n = nodes[f.node];
      if (n.IsLeaf()) {
        const unsigned free = full & ~(f.in | f.out);
        for (unsigned sub = free;; sub = (sub - 1) & free) {
          table[f.in | sub] = n.weight;
          if (sub == 0) break;
        }
        continue;
      }
      const unsigned bit = 1u << t.local_bit[n.feature];
      const int x_child = x[n.feature] < n.threshold ? n.left : n.right;
      const int b_child = b[n.feature] < n.threshold ? n.left : n.right;
      if (f.in & bit) {
        stack[top++] = {x_child, f.in, f.out};
      } else if (f.out & bit) {
        stack[top++] = {b_child, f.in, f.out};
      } else if (x_child == b_child) {
        stack[top++] = {x_child, f.in, f.out};
      } else {
        stack[top++] = {x_child, f.in | bit, f.out};
        stack[top++] = {b_child, f.in, f.out | bit};
      }
    }
  }

  const GbtEnsemble& ensemble_;
  std::vector<std::vector<PreparedTree>> prepared_;
};

void CheckBackground(const BackgroundSet& background) {
  if (background.rows.empty()) {
    throw Error(ErrorCode::kEmptyBackground, "background set is empty");
  }
}

}  // namespace

std::vector<size_t> SampleRowIndices(size_t rows, size_t size, uint64_t seed) {
  std::vector<size_t> idx(rows);
  std::iota(idx.begin(), idx.end(), 0);
  if (size >= rows) return idx;
  std::mt19937_64 rng(seed);
  for (size_t i = 0; i < size; ++i) {
    std::uniform_int_distribution<size_t> pick(i, rows - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(size);
  std::sort(idx.begin(), idx.end());
  return idx;
}

BackgroundSet SampleBackground(const FeatureMatrix& scaled, size_t size,
                               uint64_t seed) {
  if (scaled.empty() || size == 0) {
    throw Error(ErrorCode::kEmptyBackground,
                "cannot draw an empty background set");
  }
  BackgroundSet bg;
  bg.seed = seed;
  for (const size_t i : SampleRowIndices(scaled.size(), size, seed)) {
    bg.rows.push_back(scaled.rows[i]);
  }
  return bg;
}

std::vector<std::array<double, kNumCoalitions>> CoalitionValues(
    const GbtEnsemble& ensemble, const FeatureRow& instance,
    const BackgroundSet& background) {
  CheckBackground(background);
  return CoalitionEvaluator(ensemble).Evaluate(instance, background);
}

double ShapleyWeight(int coalition_size) {
  return static_cast<double>(Factorial(coalition_size) *
                             Factorial(kNumFeatures - coalition_size - 1)) /
         static_cast<double>(Factorial(kNumFeatures));
}

FeatureRow ShapleyFromCoalitions(const std::array<double, kNumCoalitions>& v) {
  std::array<double, kNumFeatures> weight;
  for (int s = 0; s < kNumFeatures; ++s) weight[s] = ShapleyWeight(s);
  FeatureRow phi{};
  for (int j = 0; j < kNumFeatures; ++j) {
    const unsigned bit = 1u << j;
    double sum = 0;
    for (unsigned s = 0; s < kNumCoalitions; ++s) {
      if (s & bit) continue;
      sum += weight[std::popcount(s)] * (v[s | bit] - v[s]);
    }
    phi[j] = sum;
  }
  return phi;
}

std::vector<ShapAttribution> ShapExactAllClasses(
    const GbtEnsemble& ensemble, const FeatureRow& instance,
    const BackgroundSet& background) {
  CheckBackground(background);
  const auto values =
      CoalitionEvaluator(ensemble).Evaluate(instance, background);
  const Margins margins = PredictMargins(ensemble, instance);
  std::vector<ShapAttribution> out(ensemble.n_classes);
  for (int c = 0; c < ensemble.n_classes; ++c) {
    ShapAttribution& a = out[c];
    a.instance = instance;
    a.class_id = c;
    a.phi = ShapleyFromCoalitions(values[c]);
    a.baseline = values[c][0];
    a.margin = margins[c];
  }
  return out;
}

ShapAttribution ShapExact(const GbtEnsemble& ensemble,
                          const FeatureRow& instance,
                          const BackgroundSet& background, int class_id) {
  if (class_id < 0 || class_id >= ensemble.n_classes) {
    throw Error(ErrorCode::kParameter,
                "class " + std::to_string(class_id) + " not in ensemble");
  }
  return ShapExactAllClasses(ensemble, instance, background)[class_id];
}

namespace {

FeatureRow Normalize(const FeatureRow& values) {
  double total = 0;
  for (const double v : values) total += std::abs(v);
  FeatureRow w{};
  if (!(total > 0)) return w;
  for (int j = 0; j < kNumFeatures; ++j) w[j] = std::abs(values[j]) / total;
  return w;
}

}  // namespace

ImportanceTable ImportanceFromValues(const FeatureRow& mean_abs_shap) {
  ImportanceTable t;
  for (int j = 0; j < kNumFeatures; ++j) {
    t.mean_abs_shap[j] = std::abs(mean_abs_shap[j]);
  }
  t.weights = Normalize(t.mean_abs_shap);
  return t;
}

ImportanceTable GlobalImportance(const GbtEnsemble& ensemble,
                                 const FeatureMatrix& sample,
                                 const BackgroundSet& background) {
  if (sample.empty()) {
    throw Error(ErrorCode::kEmptyInput, "importance sample is empty");
  }
  CheckBackground(background);
  const CoalitionEvaluator evaluator(ensemble);
  FeatureRow sums{};
  for (const FeatureRow& row : sample.rows) {
    const auto values = evaluator.Evaluate(row, background);
    for (int c = 0; c < ensemble.n_classes; ++c) {
      const FeatureRow phi = ShapleyFromCoalitions(values[c]);
      for (int j = 0; j < kNumFeatures; ++j) sums[j] += std::abs(phi[j]);
    }
  }
  const double count = static_cast<double>(sample.size()) *
                       static_cast<double>(ensemble.n_classes);
  FeatureRow mean{};
  for (int j = 0; j < kNumFeatures; ++j) mean[j] = sums[j] / count;
  ImportanceTable t = ImportanceFromValues(mean);
  t.sample_size = sample.size();
  t.background_size = background.size();
  return t;
}

CompositeWeights WeightsFromImportance(const ImportanceTable& table) {
  double total = 0;
  for (const double v : table.mean_abs_shap) total += std::abs(v);
  if (!(total > 0)) {
    throw Error(ErrorCode::kDegenerateImportance,
                "all feature importances are zero");
  }
  CompositeWeights w;
  w.mode = WeightMode::kNormalized;
  w.values = Normalize(table.mean_abs_shap);
  w.provenance = "normalized mean |SHAP|";
  return w;
}

CompositeWeights RawWeights(const ImportanceTable& table) {
  CompositeWeights w;
  w.mode = WeightMode::kRaw;
  for (int j = 0; j < kNumFeatures; ++j) {
    w.values[j] = std::abs(table.mean_abs_shap[j]);
  }
  w.provenance = "mean |SHAP|";
  return w;
}

std::vector<int> ImportanceOrder(const ImportanceTable& table) {
  std::vector<int> order(kNumFeatures);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return table.mean_abs_shap[a] > table.mean_abs_shap[b];
  });
  return order;
}

}  // namespace hysite
