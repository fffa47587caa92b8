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

#include "hysite/cluster.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "hashing.h"
#include "hysite/error.h"

namespace hysite {

namespace {

double SquaredDistance(const FeatureRow& a, const FeatureRow& b) {
  double s = 0;
  for (int j = 0; j < kNumFeatures; ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

using internal::SplitMix64;

uint64_t RestartSeed(uint64_t seed, int k, int restart) {
  return SplitMix64(SplitMix64(seed) ^
                    (static_cast<uint64_t>(k) << 32 | uint32_t(restart)));
}

std::vector<FeatureRow> KMeansPlusPlus(const FeatureMatrix& m, int k,
                                       uint64_t seed) {
  std::mt19937_64 rng(seed);
  const size_t n = m.size();
  std::vector<FeatureRow> centers;
  centers.reserve(k);
  centers.push_back(
      m.rows[std::uniform_int_distribution<size_t>(0, n - 1)(rng)]);
  std::vector<double> d2(n);
  for (size_t i = 0; i < n; ++i) d2[i] = SquaredDistance(m.rows[i], centers[0]);
  while (static_cast<int>(centers.size()) < k) {
    double total = 0;
    for (const double d : d2) total += d;
    size_t pick = 0;
    if (total > 0) {
      const double r = std::uniform_real_distribution<double>(0, total)(rng);
      double cumulative = 0;
      pick = n - 1;
      for (size_t i = 0; i < n; ++i) {
        cumulative += d2[i];
        if (cumulative > r && d2[i] > 0) {
          pick = i;
          break;
        }
      }
    } else {
      // Every point coincides with a chosen center.
      pick = std::uniform_int_distribution<size_t>(0, n - 1)(rng);
    }
    centers.push_back(m.rows[pick]);
    for (size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], SquaredDistance(m.rows[i], centers.back()));
    }
  }
  return centers;
}

// Assignment step; returns the inertia of the assignment.
double AssignInto(const std::vector<FeatureRow>& centroids,
                  const FeatureMatrix& m, std::vector<int>& labels,
                  std::vector<double>& dist) {
  double inertia = 0;
  for (size_t i = 0; i < m.size(); ++i) {
    int best = 0;
    double best_d = SquaredDistance(m.rows[i], centroids[0]);
    for (int c = 1; c < static_cast<int>(centroids.size()); ++c) {
      const double d = SquaredDistance(m.rows[i], centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels[i] = best;
    dist[i] = best_d;
    inertia += best_d;
  }
  return inertia;
}

}  // namespace

KMeansModel KMeansFitFrom(const FeatureMatrix& scaled,
                          std::vector<FeatureRow> initial, uint64_t seed,
                          const KMeansOptions& options) {
  const int k = static_cast<int>(initial.size());
  const size_t n = scaled.size();
  if (k < 1 || static_cast<size_t>(k) > n) {
    throw Error(ErrorCode::kInfeasibleK, "k = " + std::to_string(k) +
                                             " is infeasible for " +
                                             std::to_string(n) + " rows");
  }
  KMeansModel model;
  model.k = k;
  model.seed = seed;
  model.centroids = std::move(initial);

  std::vector<int> labels(n);
  std::vector<double> dist(n);
  for (int it = 0; it < options.max_iter; ++it) {
    model.inertia_trace.push_back(
        AssignInto(model.centroids, scaled, labels, dist));
    ++model.iterations_run;

    std::vector<FeatureRow> sums(k, FeatureRow{});
    std::vector<size_t> counts(k, 0);
    for (size_t i = 0; i < n; ++i) {
      for (int j = 0; j < kNumFeatures; ++j)
        sums[labels[i]][j] += scaled.rows[i][j];
      ++counts[labels[i]];
    }
    std::vector<FeatureRow> next(k);
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (int j = 0; j < kNumFeatures; ++j) {
        next[c][j] = sums[c][j] / static_cast<double>(counts[c]);
      }
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      // Re-seed with the point farthest from its (updated) centroid, taken
      // from a cluster that can spare it.
      size_t far = n;
      double far_d = -1;
      for (size_t i = 0; i < n; ++i) {
        if (counts[labels[i]] < 2) continue;
        const double d = SquaredDistance(scaled.rows[i], next[labels[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far == n) break;  // fewer distinct points than clusters
      --counts[labels[far]];
      labels[far] = c;
      counts[c] = 1;
      next[c] = scaled.rows[far];
    }
    double shift = 0;
    for (int c = 0; c < k; ++c) {
      shift = std::max(shift,
                       std::sqrt(SquaredDistance(next[c], model.centroids[c])));
    }
    model.centroids = std::move(next);
    if (shift < options.tol) break;
  }
  model.inertia = AssignInto(model.centroids, scaled, labels, dist);
  model.inertia_trace.push_back(model.inertia);
  return model;
}

KMeansModel KMeansFit(const FeatureMatrix& scaled, int k, uint64_t seed,
                      const KMeansOptions& options) {
  if (k < 1 || static_cast<size_t>(k) > scaled.size()) {
    throw Error(ErrorCode::kInfeasibleK,
                "k = " + std::to_string(k) + " is infeasible for " +
                    std::to_string(scaled.size()) + " rows");
  }
  return KMeansFitFrom(scaled, KMeansPlusPlus(scaled, k, seed), seed, options);
}

int AssignRow(const KMeansModel& model, const FeatureRow& row) {
  int best = 0;
  double best_d = SquaredDistance(row, model.centroids.at(0));
  for (int c = 1; c < model.k; ++c) {
    const double d = SquaredDistance(row, model.centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::vector<int> Assign(const KMeansModel& model, const FeatureMatrix& scaled) {
  std::vector<int> labels(scaled.size());
  std::vector<double> dist(scaled.size());
  AssignInto(model.centroids, scaled, labels, dist);
  return labels;
}

double Inertia(const KMeansModel& model, const FeatureMatrix& scaled,
               std::span<const int> labels) {
  if (labels.size() != scaled.size()) {
    throw Error(ErrorCode::kAlignment, "labels and rows differ in size");
  }
  double s = 0;
  for (size_t i = 0; i < scaled.size(); ++i) {
    s += SquaredDistance(scaled.rows[i], model.centroids.at(labels[i]));
  }
  return s;
}

double Silhouette(const FeatureMatrix& scaled, std::span<const int> labels) {
  const size_t n = scaled.size();
  if (labels.size() != n) {
    throw Error(ErrorCode::kAlignment, "labels and rows differ in size");
  }
  int num_clusters = 0;
  for (const int l : labels) {
    if (l < 0) throw Error(ErrorCode::kAlignment, "negative cluster id");
    num_clusters = std::max(num_clusters, l + 1);
  }
  std::vector<size_t> counts(num_clusters, 0);
  for (const int l : labels) ++counts[l];
  const auto non_empty = std::count_if(counts.begin(), counts.end(),
                                       [](size_t c) { return c > 0; });
  if (non_empty < 2) {
    throw Error(ErrorCode::kUndefinedSilhouette,
                "silhouette needs at least two non-empty clusters");
  }

  // sums[i * num_clusters + c] = total distance from point i to cluster c.
  std::vector<double> sums(n * num_clusters, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const FeatureRow& xi = scaled.rows[i];
    double* si = &sums[i * num_clusters];
    for (size_t j = i + 1; j < n; ++j) {
      const double d = std::sqrt(SquaredDistance(xi, scaled.rows[j]));
      si[labels[j]] += d;
      sums[j * num_clusters + labels[i]] += d;
    }
  }

  double total = 0;
  for (size_t i = 0; i < n; ++i) {
    const int own = labels[i];
    if (counts[own] < 2) continue;  // singleton: s = 0
    const double a = sums[i * num_clusters + own] / double(counts[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < num_clusters; ++c) {
      if (c == own || counts[c] == 0) continue;
      b = std::min(b, sums[i * num_clusters + c] / double(counts[c]));
    }
    const double denom = std::max(a, b);
    total += denom > 0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

int ElbowIndex(std::span<const double> inertia) {
  const int m = static_cast<int>(inertia.size());
  if (m < 3) return 0;
  // Both axes normalised to [0, 1] so the answer does not depend on units.
  const double y0 = inertia.front();
  const double y1 = inertia.back();
  const double span = y0 - y1;
  if (!(std::abs(span) > 0)) return 0;
  int best = 0;
  double best_d = -1;
  for (int i = 0; i < m; ++i) {
    const double x = static_cast<double>(i) / (m - 1);
    const double y = (inertia[i] - y1) / span;
    // Chord runs from (0, 1) to (1, 0): x + y - 1 = 0.
    const double d = std::abs(x + y - 1.0) / std::sqrt(2.0);
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

KSelection SelectK(const FeatureMatrix& scaled, int k_min, int k_max,
                   uint64_t seed, const KSelectionOptions& options) {
  if (k_min < 2 || k_min > k_max ||
      static_cast<size_t>(k_max) > scaled.size()) {
    throw Error(ErrorCode::kInfeasibleK,
                "k range [" + std::to_string(k_min) + ", " +
                    std::to_string(k_max) + "] is infeasible for " +
                    std::to_string(scaled.size()) + " rows");
  }
  if (options.n_init < 1) {
    throw Error(ErrorCode::kParameter, "n_init must be >= 1");
  }
  KSelection out;
  std::vector<KMeansModel> best_models;
  for (int k = k_min; k <= k_max; ++k) {
    std::optional<KMeansModel> best;
    for (int r = 0; r < options.n_init; ++r) {
      KMeansModel fit =
          KMeansFit(scaled, k, RestartSeed(seed, k, r), options.kmeans);
      if (!best || fit.inertia < best->inertia) best = std::move(fit);
    }
    if (!best_models.empty()) {
      // Extra restart warm-started from the best (k-1)-solution plus the point
      // farthest from it; its inertia can only fall from the (k-1) optimum, so
      // the reported curve is non-increasing in k.
      const KMeansModel& prev = best_models.back();
      std::vector<FeatureRow> init = prev.centroids;
      size_t far = 0;
      double far_d = -1;
      for (size_t i = 0; i < scaled.size(); ++i) {
        const double d = SquaredDistance(
            scaled.rows[i], prev.centroids[AssignRow(prev, scaled.rows[i])]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      init.push_back(scaled.rows[far]);
      KMeansModel warm =
          KMeansFitFrom(scaled, std::move(init),
                        RestartSeed(seed, k, options.n_init), options.kmeans);
      if (warm.inertia < best->inertia) best = std::move(warm);
    }
    const std::vector<int> labels = Assign(*best, scaled);
    KCandidate cand;
    cand.k = k;
    cand.inertia = best->inertia;
    cand.silhouette = Silhouette(scaled, labels);
    out.report.candidates.push_back(cand);
    best_models.push_back(std::move(*best));
  }
  size_t chosen = 0;
  for (size_t i = 1; i < out.report.candidates.size(); ++i) {
    if (out.report.candidates[i].silhouette >
        out.report.candidates[chosen].silhouette) {
      chosen = i;
    }
  }
  std::vector<double> curve;
  for (const KCandidate& c : out.report.candidates) curve.push_back(c.inertia);
  out.report.chosen_k = out.report.candidates[chosen].k;
  out.report.elbow_k = out.report.candidates[ElbowIndex(curve)].k;
  out.model = std::move(best_models[chosen]);
  return out;
}

std::vector<int> RankScores(std::span<const double> scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] < scores[b]; });
  std::vector<int> rank(scores.size());
  for (size_t r = 0; r < order.size(); ++r)
    rank[order[r]] = static_cast<int>(r);
  return rank;
}

std::vector<std::string> ClassLabelsFor(int k) {
  std::vector<std::string> out;
  if (k == kNumSuitabilityClasses) {
    for (const auto label : kSuitabilityLabels) out.emplace_back(label);
  } else {
    for (int c = 0; c < k; ++c) out.push_back("Class " + std::to_string(c));
  }
  return out;
}

ProxyLabeling RankClusters(const KMeansModel& model,
                           const FeatureMatrix& adjusted,
                           std::span<const int> labels) {
  if (labels.size() != adjusted.size()) {
    throw Error(ErrorCode::kAlignment,
                "labels (" + std::to_string(labels.size()) + ") and rows (" +
                    std::to_string(adjusted.size()) + ") differ");
  }
  const FeatureSchema& schema = FeatureSchema::Canonical();
  ProxyLabeling out;
  out.clusters.assign(model.k, ClusterStats{});
  std::vector<double> score_sums(model.k, 0.0);
  for (size_t i = 0; i < labels.size(); ++i) {
    const int c = labels[i];
    if (c < 0 || c >= model.k) {
      throw Error(ErrorCode::kAlignment,
                  "cluster id " + std::to_string(c) + " not in model");
    }
    ClusterStats& s = out.clusters[c];
    double row_sum = 0;
    for (int j = 0; j < kNumFeatures; ++j) {
      s.mean_adjusted[j] += adjusted.rows[i][j];
      row_sum += adjusted.rows[i][j];
    }
    score_sums[c] += row_sum / kNumFeatures;
    ++s.size;
  }
  std::vector<double> scores(model.k);
  for (int c = 0; c < model.k; ++c) {
    ClusterStats& s = out.clusters[c];
    if (s.size > 0) {
      for (double& v : s.mean_adjusted) v /= static_cast<double>(s.size);
      s.mean_score = score_sums[c] / static_cast<double>(s.size);
    } else {
      s.mean_adjusted = DirectionalAdjustRow(model.centroids[c], schema);
      double sum = 0;
      for (const double v : s.mean_adjusted) sum += v;
      s.mean_score = sum / kNumFeatures;
    }
    scores[c] = s.mean_score;
  }
  out.cluster_to_class = RankScores(scores);
  out.class_labels = ClassLabelsFor(model.k);
  return out;
}

double AdjustedRandIndex(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kAlignment, "labelings differ in size");
  }
  const double n = static_cast<double>(a.size());
  std::map<std::pair<int, int>, double> table;
  std::map<int, double> rows;
  std::map<int, double> cols;
  for (size_t i = 0; i < a.size(); ++i) {
    table[{a[i], b[i]}] += 1;
    rows[a[i]] += 1;
    cols[b[i]] += 1;
  }
  auto pairs = [](double x) { return x * (x - 1) / 2; };
  double index = 0;
  for (const auto& [key, v] : table) index += pairs(v);
  double sum_a = 0;
  for (const auto& [key, v] : rows) sum_a += pairs(v);
  double sum_b = 0;
  for (const auto& [key, v] : cols) sum_b += pairs(v);
  const double expected = sum_a * sum_b / pairs(n);
  const double max_index = (sum_a + sum_b) / 2;
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace hysite
