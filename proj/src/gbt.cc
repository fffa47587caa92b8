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

#include "hysite/gbt.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hysite/error.h"

namespace hysite {

namespace {

constexpr double kProbabilityFloor = 1e-15;

// Split threshold strictly above `lo` and at most `hi`, so `lo` routes left and
// `hi` routes right.
double Midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2;
  return mid > lo ? mid : hi;
}

struct SplitCandidate {
  double gain = -std::numeric_limits<double>::infinity();
  int feature = -1;
  double threshold = 0;
};

struct NodeState {
  double g = 0;
  double h = 0;
  double g_min = std::numeric_limits<double>::infinity();
  double g_max = -std::numeric_limits<double>::infinity();
  bool active = false;
  SplitCandidate best;
};

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<FeatureRow>& rows,
              const std::vector<std::vector<int>>& sorted,
              const GbtParams& params)
      : rows_(rows), sorted_(sorted), params_(params) {}

  RegressionTree Build(const std::vector<double>& g,
                       const std::vector<double>& h) const {
    const size_t n = rows_.size();
    RegressionTree tree;
    tree.nodes.emplace_back();
    std::vector<int> node_of(n, 0);
    std::vector<int> frontier = {0};

    for (int depth = 0; !frontier.empty(); ++depth) {
      std::vector<NodeState> state(tree.nodes.size());
      for (const int nd : frontier) state[nd].active = true;
      for (size_t i = 0; i < n; ++i) {
        NodeState& s = state[node_of[i]];
        if (!s.active) continue;
        s.g += g[i];
        s.h += h[i];
        s.g_min = std::min(s.g_min, g[i]);
        s.g_max = std::max(s.g_max, g[i]);
      }
      if (depth < params_.max_depth) FindSplits(g, h, node_of, state);

      std::vector<int> next;
      for (const int nd : frontier) {
        const NodeState& s = state[nd];
        if (depth < params_.max_depth && AcceptSplit(s)) {
          const int left = static_cast<int>(tree.nodes.size());
          tree.nodes.emplace_back();
          tree.nodes.emplace_back();
          TreeNode& node = tree.nodes[nd];
          node.feature = s.best.feature;
          node.threshold = s.best.threshold;
          node.left = left;
          node.right = left + 1;
          next.push_back(left);
          next.push_back(left + 1);
        } else {
          tree.nodes[nd].weight = LeafWeight(s.g, s.h);
        }
      }
      for (size_t i = 0; i < n; ++i) {
        const TreeNode& node = tree.nodes[node_of[i]];
        if (!node.IsLeaf() && state[node_of[i]].active) {
          node_of[i] =
              rows_[i][node.feature] < node.threshold ? node.left : node.right;
        }
      }
      frontier = std::move(next);
    }
    return tree;
  }

 private:
  double LeafWeight(double g, double h) const {
    const double denom = h + params_.lambda;
    if (!(denom > 0)) return 0.0;
    return -g / denom * params_.learning_rate;
  }

  double Score(double g, double h) const {
    const double denom = h + params_.lambda;
    return denom > 0 ? g * g / denom : 0.0;
  }

  // Zero-gain splits are kept when the node's gradients are not all equal:
  // a symmetric node (XOR at the root) shows no gain one level down yet.
  bool AcceptSplit(const NodeState& s) const {
    if (s.best.feature < 0) return false;
    if (s.best.gain > 0) return true;
    return s.best.gain == 0 && s.g_min < s.g_max;
  }

  void FindSplits(const std::vector<double>& g, const std::vector<double>& h,
                  const std::vector<int>& node_of,
                  std::vector<NodeState>& state) const {
    const size_t num_nodes = state.size();
    std::vector<double> gl(num_nodes);
    std::vector<double> hl(num_nodes);
    std::vector<double> last(num_nodes);
    std::vector<char> seen(num_nodes);
    for (int f = 0; f < kNumFeatures; ++f) {
      std::fill(gl.begin(), gl.end(), 0.0);
      std::fill(hl.begin(), hl.end(), 0.0);
      std::fill(seen.begin(), seen.end(), 0);
      for (const int i : sorted_[f]) {
        const int nd = node_of[i];
        NodeState& s = state[nd];
        if (!s.active) continue;
        const double v = rows_[i][f];
        if (seen[nd] && v > last[nd]) {
          const double gr = s.g - gl[nd];
          const double hr = s.h - hl[nd];
          if (hl[nd] >= params_.min_child_hessian &&
              hr >= params_.min_child_hessian) {
            const double gain = 0.5 * (Score(gl[nd], hl[nd]) + Score(gr, hr) -
                                       Score(s.g, s.h)) -
                                params_.gamma;
            if (gain > s.best.gain) {
              s.best.gain = gain;
              s.best.feature = f;
              s.best.threshold = Midpoint(last[nd], v);
            }
          }
        }
        gl[nd] += g[i];
        hl[nd] += h[i];
        last[nd] = v;
        seen[nd] = 1;
      }
    }
  }

  const std::vector<FeatureRow>& rows_;
  const std::vector<std::vector<int>>& sorted_;
  const GbtParams& params_;
};

void ValidateParams(const GbtParams& p, double validation_fraction) {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kParameter, msg);
  };
  if (p.n_classes < 1) fail("n_classes must be >= 1");
  if (!(p.learning_rate > 0)) fail("learning_rate must be > 0");
  if (p.max_depth < 0 || p.max_depth > kMaxTreeDepth) {
    fail("max_depth must be in [0, " + std::to_string(kMaxTreeDepth) + "]");
  }
  if (p.rounds < 0) fail("rounds must be >= 0");
  if (p.early_stopping_patience < 0) fail("patience must be >= 0");
  if (!(p.lambda >= 0)) fail("lambda must be >= 0");
  if (!(p.gamma >= 0)) fail("gamma must be >= 0");
  if (!(p.min_child_hessian >= 0)) fail("min_child_hessian must be >= 0");
  if (!(validation_fraction >= 0 && validation_fraction < 1)) {
    fail("validation_fraction must be in [0, 1), got " +
         std::to_string(validation_fraction));
  }
}

double Accuracy(const std::vector<std::vector<double>>& probs,
                std::span<const int> labels) {
  size_t hits = 0;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (ArgMax(probs[i]) == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(probs.size());
}

}  // namespace

int RegressionTree::Depth() const {
  std::vector<int> depth(nodes.size(), 0);
  int max_depth = 0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].IsLeaf()) continue;
    depth[nodes[i].left] = depth[nodes[i].right] = depth[i] + 1;
    max_depth = std::max(max_depth, depth[i] + 1);
  }
  return max_depth;
}

int ArgMax(std::span<const double> values) {
  int best = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = static_cast<int>(i);
  }
  return best;
}

std::vector<double> Softmax(std::span<const double> margins) {
  const double max = *std::max_element(margins.begin(), margins.end());
  std::vector<double> p(margins.size());
  double sum = 0;
  for (size_t c = 0; c < margins.size(); ++c) {
    p[c] = std::exp(margins[c] - max);
    sum += p[c];
  }
  for (double& v : p) v /= sum;
  return p;
}

Margins PredictMargins(const GbtEnsemble& ensemble,
                       std::span<const double> row) {
  if (row.size() != kNumFeatures) {
    throw Error(ErrorCode::kShape, "expected " + std::to_string(kNumFeatures) +
                                       " features, got " +
                                       std::to_string(row.size()));
  }
  FeatureRow r;
  std::copy(row.begin(), row.end(), r.begin());
  Margins m(ensemble.n_classes, ensemble.base_score);
  for (const auto& round : ensemble.trees) {
    for (int c = 0; c < ensemble.n_classes; ++c) m[c] += round[c].Predict(r);
  }
  return m;
}

double PredictClassMargin(const GbtEnsemble& ensemble, const FeatureRow& row,
                          int class_id) {
  double m = ensemble.base_score;
  for (const auto& round : ensemble.trees) m += round[class_id].Predict(row);
  return m;
}

std::vector<double> PredictProba(const GbtEnsemble& ensemble,
                                 std::span<const double> row) {
  return Softmax(PredictMargins(ensemble, row));
}

int PredictClass(const GbtEnsemble& ensemble, std::span<const double> row) {
  return ArgMax(PredictProba(ensemble, row));
}

double LogLoss(std::span<const std::vector<double>> probabilities,
               std::span<const int> labels) {
  double sum = 0;
  for (size_t i = 0; i < probabilities.size(); ++i) {
    sum -= std::log(std::max(probabilities[i][labels[i]], kProbabilityFloor));
  }
  return sum / static_cast<double>(probabilities.size());
}

TrainResult TrainGbt(const FeatureMatrix& scaled, std::span<const int> labels,
                     const GbtParams& params, double validation_fraction,
                     uint64_t seed) {
  ValidateParams(params, validation_fraction);
  const size_t n = scaled.size();
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "no training rows");
  if (labels.size() != n) {
    throw Error(ErrorCode::kAlignment, "labels and rows differ in size");
  }
  for (const int y : labels) {
    if (y < 0 || y >= params.n_classes) {
      throw Error(ErrorCode::kParameter,
                  "label " + std::to_string(y) + " outside [0, " +
                      std::to_string(params.n_classes) + ")");
    }
  }

  // Canonical order: by feature values, then label, then input position
  // (only identical rows tie on the first two keys).
  std::vector<size_t> canonical(n);
  std::iota(canonical.begin(), canonical.end(), 0);
  std::sort(canonical.begin(), canonical.end(), [&](size_t a, size_t b) {
    if (scaled.rows[a] != scaled.rows[b])
      return scaled.rows[a] < scaled.rows[b];
    if (labels[a] != labels[b]) return labels[a] < labels[b];
    return a < b;
  });

  // Stratified holdout.
  std::mt19937_64 rng(seed);
  std::vector<char> is_valid(n, 0);
  for (int c = 0; c < params.n_classes; ++c) {
    std::vector<size_t> members;
    for (size_t pos = 0; pos < n; ++pos) {
      if (labels[canonical[pos]] == c) members.push_back(pos);
    }
    std::shuffle(members.begin(), members.end(), rng);
    size_t take = static_cast<size_t>(std::floor(
        validation_fraction * static_cast<double>(members.size()) + 0.5));
    if (take >= members.size() && !members.empty()) take = members.size() - 1;
    for (size_t t = 0; t < take; ++t) is_valid[members[t]] = 1;
  }

  std::vector<FeatureRow> train_x;
  std::vector<int> train_y;
  std::vector<FeatureRow> valid_x;
  std::vector<int> valid_y;
  TrainResult result;
  for (size_t pos = 0; pos < n; ++pos) {
    const size_t i = canonical[pos];
    if (is_valid[pos]) {
      valid_x.push_back(scaled.rows[i]);
      valid_y.push_back(labels[i]);
      result.validation_rows.push_back(i);
    } else {
      train_x.push_back(scaled.rows[i]);
      train_y.push_back(labels[i]);
      result.train_rows.push_back(i);
    }
  }
  std::sort(result.train_rows.begin(), result.train_rows.end());
  std::sort(result.validation_rows.begin(), result.validation_rows.end());

  std::vector<int> missing;
  std::vector<char> present(params.n_classes, 0);
  for (const int y : train_y) present[y] = 1;
  for (int c = 0; c < params.n_classes; ++c) {
    if (!present[c]) missing.push_back(c);
  }
  if (!missing.empty()) {
    std::string list;
    for (const int c : missing) {
      list += (list.empty() ? "" : ", ") + std::to_string(c);
    }
    throw Error(ErrorCode::kLabelCoverage,
                "classes absent from training split: " + list);
  }

  const int K = params.n_classes;
  const size_t nt = train_x.size();
  std::vector<std::vector<int>> sorted(kNumFeatures, std::vector<int>(nt));
  for (int f = 0; f < kNumFeatures; ++f) {
    std::iota(sorted[f].begin(), sorted[f].end(), 0);
    std::stable_sort(sorted[f].begin(), sorted[f].end(), [&](int a, int b) {
      return train_x[a][f] < train_x[b][f];
    });
  }

  GbtEnsemble& ensemble = result.ensemble;
  ensemble.n_classes = K;
  ensemble.learning_rate = params.learning_rate;
  ensemble.base_score = 0.0;

  std::vector<Margins> train_m(nt, Margins(K, ensemble.base_score));
  std::vector<Margins> valid_m(valid_x.size(), Margins(K, ensemble.base_score));
  std::vector<std::vector<double>> train_p(nt);
  std::vector<std::vector<double>> valid_p(valid_x.size());
  for (size_t i = 0; i < nt; ++i) train_p[i] = Softmax(train_m[i]);

  const TreeBuilder builder(train_x, sorted, params);
  const bool early_stop =
      !valid_x.empty() && params.early_stopping_patience > 0;
  double best_loss = std::numeric_limits<double>::infinity();
  int best_round = -1;
  std::vector<double> g(nt);
  std::vector<double> h(nt);

  for (int round = 0; round < params.rounds; ++round) {
    std::vector<RegressionTree> trees;
    trees.reserve(K);
    for (int c = 0; c < K; ++c) {
      for (size_t i = 0; i < nt; ++i) {
        const double p = train_p[i][c];
        g[i] = p - (train_y[i] == c ? 1.0 : 0.0);
        h[i] = p * (1.0 - p);
      }
      trees.push_back(builder.Build(g, h));
    }
    for (size_t i = 0; i < nt; ++i) {
      for (int c = 0; c < K; ++c) train_m[i][c] += trees[c].Predict(train_x[i]);
      train_p[i] = Softmax(train_m[i]);
    }
    for (size_t i = 0; i < valid_x.size(); ++i) {
      for (int c = 0; c < K; ++c) valid_m[i][c] += trees[c].Predict(valid_x[i]);
      valid_p[i] = Softmax(valid_m[i]);
    }
    ensemble.trees.push_back(std::move(trees));

    RoundStats stats;
    stats.train_logloss = LogLoss(train_p, train_y);
    stats.train_accuracy = Accuracy(train_p, train_y);
    if (!valid_x.empty()) {
      stats.valid_logloss = LogLoss(valid_p, valid_y);
      stats.valid_accuracy = Accuracy(valid_p, valid_y);
    }
    result.history.rounds.push_back(stats);

    if (!early_stop) {
      best_round = round;
      continue;
    }
    if (*stats.valid_logloss < best_loss) {
      best_loss = *stats.valid_logloss;
      best_round = round;
    } else if (round - best_round >= params.early_stopping_patience) {
      break;
    }
  }
  ensemble.trees.resize(static_cast<size_t>(best_round + 1));
  result.history.best_round = best_round;
  return result;
}

EvalReport ComputeEvalReport(std::span<const int> y_true,
                             std::span<const int> y_pred, int n_classes) {
  if (y_true.empty()) {
    throw Error(ErrorCode::kEmptyInput, "empty evaluation set");
  }
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorCode::kAlignment, "label vectors differ in size");
  }
  EvalReport r;
  r.n_classes = n_classes;
  r.total = y_true.size();
  r.confusion.assign(n_classes, std::vector<size_t>(n_classes, 0));
  for (size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] < 0 || y_true[i] >= n_classes || y_pred[i] < 0 ||
        y_pred[i] >= n_classes) {
      throw Error(ErrorCode::kParameter, "label outside class range");
    }
    ++r.confusion[y_true[i]][y_pred[i]];
  }
  size_t trace = 0;
  r.per_class.resize(n_classes);
  for (int c = 0; c < n_classes; ++c) {
    ClassMetrics& m = r.per_class[c];
    const size_t tp = r.confusion[c][c];
    size_t predicted = 0;
    for (int t = 0; t < n_classes; ++t) predicted += r.confusion[t][c];
    for (int p = 0; p < n_classes; ++p) m.support += r.confusion[c][p];
    trace += tp;
    m.precision_undefined = predicted == 0;
    m.recall_undefined = m.support == 0;
    m.precision = predicted ? static_cast<double>(tp) / predicted : 0.0;
    m.recall = m.support ? static_cast<double>(tp) / m.support : 0.0;
    m.f1 = m.precision + m.recall > 0
               ? 2 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    r.macro_precision += m.precision;
    r.macro_recall += m.recall;
    r.macro_f1 += m.f1;
    const double w = static_cast<double>(m.support);
    r.weighted_precision += w * m.precision;
    r.weighted_recall += w * m.recall;
    r.weighted_f1 += w * m.f1;
  }
  const double total = static_cast<double>(r.total);
  r.accuracy = static_cast<double>(trace) / total;
  r.macro_precision /= n_classes;
  r.macro_recall /= n_classes;
  r.macro_f1 /= n_classes;
  r.weighted_precision /= total;
  r.weighted_recall /= total;
  r.weighted_f1 /= total;
  return r;
}

EvalReport Evaluate(const GbtEnsemble& ensemble, const FeatureMatrix& scaled,
                    std::span<const int> labels) {
  if (scaled.empty()) {
    throw Error(ErrorCode::kEmptyInput, "empty evaluation set");
  }
  if (labels.size() != scaled.size()) {
    throw Error(ErrorCode::kAlignment, "labels and rows differ in size");
  }
  std::vector<int> predicted;
  predicted.reserve(scaled.size());
  for (const FeatureRow& row : scaled.rows) {
    predicted.push_back(PredictClass(ensemble, row));
  }
  return ComputeEvalReport(labels, predicted, ensemble.n_classes);
}

}  // namespace hysite
