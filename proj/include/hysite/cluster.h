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

// Stage 1: k-means proxy labels. Scaled rows are clustered, the number of
// clusters is chosen by mean silhouette, and clusters are ranked into ordinal
// suitability classes by their mean direction-adjusted feature value.

#ifndef HYSITE_CLUSTER_H_
#define HYSITE_CLUSTER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hysite/preprocess.h"
#include "hysite/schema.h"

namespace hysite {

struct KMeansOptions {
  int max_iter = 300;
  double tol = 1e-6;
};

struct KMeansModel {
  int k = 0;
  std::vector<FeatureRow> centroids;
  double inertia = 0;
  int iterations_run = 0;
  uint64_t seed = 0;
  // Inertia of the assignment step of every Lloyd iteration, then the final
  // assignment. Non-increasing.
  std::vector<double> inertia_trace;
};

// k-means++ seeding followed by Lloyd iterations. Stops when the largest
// centroid shift drops below tol or after max_iter. Empty clusters are
// re-seeded with the point farthest from its centroid.
// Throws kInfeasibleK when k < 1 or k > rows.
KMeansModel KMeansFit(const FeatureMatrix& scaled, int k, uint64_t seed,
                      const KMeansOptions& options = {});

// Lloyd iterations from explicit starting centroids.
KMeansModel KMeansFitFrom(const FeatureMatrix& scaled,
                          std::vector<FeatureRow> initial, uint64_t seed,
                          const KMeansOptions& options = {});

// Nearest centroid; ties go to the lowest cluster id.
int AssignRow(const KMeansModel& model, const FeatureRow& row);
std::vector<int> Assign(const KMeansModel& model, const FeatureMatrix& scaled);

double Inertia(const KMeansModel& model, const FeatureMatrix& scaled,
               std::span<const int> labels);

// Mean silhouette, computed exactly in O(n^2). Singleton clusters score 0; a
// point with a == 0 scores 1 when b > 0 and 0 when b == 0.
// Throws kUndefinedSilhouette with fewer than two non-empty clusters and
// kAlignment when labels and rows disagree in size.
double Silhouette(const FeatureMatrix& scaled, std::span<const int> labels);

struct KCandidate {
  int k = 0;
  double inertia = 0;
  double silhouette = 0;
};

struct KSelectionReport {
  std::vector<KCandidate> candidates;  // ascending k
  int chosen_k = 0;                    // argmax silhouette, ties -> smaller k
  int elbow_k = 0;  // farthest point of the inertia curve from its chord
};

struct KSelection {
  KSelectionReport report;
  KMeansModel model;  // best-of-restarts fit for chosen_k
};

struct KSelectionOptions {
  int n_init = 10;
  KMeansOptions kmeans;
};

// Fits every k in [k_min, k_max] keeping the lowest-inertia restart.
// Throws kInfeasibleK unless 2 <= k_min <= k_max <= rows.
KSelection SelectK(const FeatureMatrix& scaled, int k_min, int k_max,
                   uint64_t seed, const KSelectionOptions& options = {});

// Index into the candidate list of the elbow (maximum distance to the chord).
int ElbowIndex(std::span<const double> inertia);

struct ClusterStats {
  size_t size = 0;
  FeatureRow mean_adjusted{};
  double mean_score = 0;
};

struct ProxyLabeling {
  std::vector<int> cluster_to_class;
  std::vector<std::string> class_labels;  // indexed by class
  std::vector<ClusterStats> clusters;     // indexed by cluster id

  int ClassOf(int cluster) const { return cluster_to_class.at(cluster); }
};

// Orders clusters ascending by mean adjusted score (ties -> lower cluster id)
// and assigns ordinal classes. Empty clusters use their adjusted centroid.
// Throws kAlignment when labels and rows disagree.
ProxyLabeling RankClusters(const KMeansModel& model,
                           const FeatureMatrix& adjusted,
                           std::span<const int> labels);

// Ordinal class ids for scores, ascending (ties -> lower index).
std::vector<int> RankScores(std::span<const double> scores);

std::vector<std::string> ClassLabelsFor(int k);

// Adjusted Rand index between two labelings of the same points.
double AdjustedRandIndex(std::span<const int> a, std::span<const int> b);

}  // namespace hysite

#endif  // HYSITE_CLUSTER_H_
