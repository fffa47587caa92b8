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

// Stage 2: multiclass gradient-boosted trees with a softmax objective.
//
// Every round fits one regression tree per class to the second-order
// statistics of the softmax cross-entropy (g = p - y, h = p (1 - p)) using
// exact greedy splits. Leaf weights are stored already multiplied by the
// learning rate, so a class margin is base_score plus the routed leaf weights
// summed in round order.

#ifndef HYSITE_GBT_H_
#define HYSITE_GBT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hysite/preprocess.h"
#include "hysite/schema.h"

namespace hysite {

inline constexpr int kMaxTreeDepth = 30;

struct TreeNode {
  int feature = -1;  // -1 for a leaf
  double threshold = 0;
  int left = -1;
  int right = -1;
  double weight = 0;  // leaf margin contribution

  bool IsLeaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Node 0 is the root. value < threshold goes left, everything else right.
struct RegressionTree {
  std::vector<TreeNode> nodes;

  double Predict(const FeatureRow& row) const {
    int i = 0;
    while (!nodes[i].IsLeaf()) {
      const TreeNode& n = nodes[i];
      i = row[n.feature] < n.threshold ? n.left : n.right;
    }
    return nodes[i].weight;
  }
  int Depth() const;
  friend bool operator==(const RegressionTree&,
                         const RegressionTree&) = default;
};

struct GbtEnsemble {
  int n_classes = 0;
  double learning_rate = 0.1;
  double base_score = 0.0;
  // trees[round][class]
  std::vector<std::vector<RegressionTree>> trees;

  int rounds() const { return static_cast<int>(trees.size()); }
  friend bool operator==(const GbtEnsemble&, const GbtEnsemble&) = default;
};

struct GbtParams {
  int n_classes = 5;
  double learning_rate = 0.1;
  int max_depth = 4;
  int rounds = 200;
  int early_stopping_patience = 20;  // 0 disables early stopping
  double lambda = 1.0;
  double gamma = 0.0;
  double min_child_hessian = 1e-3;
};

struct RoundStats {
  double train_logloss = 0;
  double train_accuracy = 0;
  std::optional<double> valid_logloss;
  std::optional<double> valid_accuracy;
};

struct TrainHistory {
  std::vector<RoundStats> rounds;
  int best_round = -1;  // last kept round (0-based); -1 when none
};

struct TrainResult {
  GbtEnsemble ensemble;
  TrainHistory history;
  // Row indices (into the caller's matrix) of each partition, ascending.
  std::vector<size_t> train_rows;
  std::vector<size_t> validation_rows;
};

// Errors: kParameter (bad params, validation_fraction outside [0, 1)),
// kAlignment (labels vs rows), kLabelCoverage (a class missing from the
// training split), kEmptyInput.
//
// The result does not depend on the order of the input rows: rows are put in
// a canonical order before splitting and fitting.
TrainResult TrainGbt(const FeatureMatrix& scaled, std::span<const int> labels,
                     const GbtParams& params, double validation_fraction,
                     uint64_t seed);

using Margins = std::vector<double>;

// Throws kShape unless the row has kNumFeatures entries.
Margins PredictMargins(const GbtEnsemble& ensemble,
                       std::span<const double> row);
double PredictClassMargin(const GbtEnsemble& ensemble, const FeatureRow& row,
                          int class_id);
std::vector<double> Softmax(std::span<const double> margins);
std::vector<double> PredictProba(const GbtEnsemble& ensemble,
                                 std::span<const double> row);
// argmax of probabilities; ties go to the lowest class id.
int PredictClass(const GbtEnsemble& ensemble, std::span<const double> row);
int ArgMax(std::span<const double> values);

// Mean of -log p(label), with p clipped at 1e-15.
double LogLoss(std::span<const std::vector<double>> probabilities,
               std::span<const int> labels);

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  size_t support = 0;
  bool precision_undefined = false;  // no predicted positives
  bool recall_undefined = false;     // no support
};

struct EvalReport {
  int n_classes = 0;
  std::vector<std::vector<size_t>> confusion;  // [true][predicted]
  std::vector<ClassMetrics> per_class;
  double accuracy = 0;
  double macro_precision = 0;
  double macro_recall = 0;
  double macro_f1 = 0;
  double weighted_precision = 0;
  double weighted_recall = 0;
  double weighted_f1 = 0;
  size_t total = 0;
};

// Metrics from label vectors. Throws kEmptyInput / kAlignment.
EvalReport ComputeEvalReport(std::span<const int> y_true,
                             std::span<const int> y_pred, int n_classes);

EvalReport Evaluate(const GbtEnsemble& ensemble, const FeatureMatrix& scaled,
                    std::span<const int> labels);

}  // namespace hysite

#endif  // HYSITE_GBT_H_
