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

// End-to-end orchestration: proxy labels, classifier, attribution and index,
// assembled into a ModelBundle that can be persisted and served.

#ifndef HYSITE_PIPELINE_H_
#define HYSITE_PIPELINE_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hysite/cluster.h"
#include "hysite/dataset.h"
#include "hysite/gbt.h"
#include "hysite/index.h"
#include "hysite/preprocess.h"
#include "hysite/shap.h"

namespace hysite {

inline constexpr int kBundleFormatVersion = 1;

struct PipelineConfig {
  int k_min = 2;
  int k_max = 8;
  uint64_t cluster_seed = 42;
  int n_init = 10;
  KMeansOptions kmeans;
  // n_classes is ignored: the classifier always has one class per cluster.
  GbtParams gbt;
  double validation_fraction = 0.2;
  size_t background_size = 128;
  size_t shap_sample_size = 512;
  WeightMode weight_mode = WeightMode::kRaw;
  BinThresholds thresholds;
  // Drives the validation split and the SHAP background / sample draws.
  uint64_t seed = 42;

  // Throws kParameter naming the offending field.
  void Validate() const;
};

struct TrainingMetadata {
  std::string dataset_fingerprint;  // FNV-1a 64 of the canonical CSV, hex
  size_t record_count = 0;
  std::vector<std::string> cities;
  // Observation window of the training data. These are the bundle's only
  // timestamps, so identical inputs give identical bundles.
  std::string data_start;
  std::string data_end;
  PipelineConfig config;
};

struct ModelBundle {
  int format_version = kBundleFormatVersion;
  ScalingParams scaler;
  KMeansModel kmeans;
  ProxyLabeling labeling;
  GbtEnsemble ensemble;
  BackgroundSet background;  // scaled rows used for every explanation
  ImportanceTable importance;
  CompositeWeights weights;
  BinThresholds thresholds;
  TrainingMetadata metadata;

  int n_classes() const { return ensemble.n_classes; }
};

using ClassHistogram = std::array<size_t, kNumSuitabilityClasses>;

struct PipelineReports {
  KSelectionReport k_selection;
  TrainHistory history;
  // On the validation rows, or on all rows when validation_fraction is 0.
  EvalReport evaluation;
  bool evaluation_on_validation = true;
  ImportanceTable importance;
  ClassHistogram sci_histogram{};  // records per SCI class
};

struct PipelineResult {
  ModelBundle bundle;
  PipelineReports reports;
  std::vector<int> proxy_labels;  // ordinal class per record, dataset order
};

// Any failure is rethrown with the stage name prefixed to the message.
PipelineResult RunPipeline(const Dataset& dataset,
                           const PipelineConfig& config);

// 16 hex digits.
std::string DatasetFingerprint(const Dataset& dataset);

// Raw-unit row through the bundle's scaler and directional adjustment.
FeatureRow ScaleRow(const ModelBundle& bundle, const FeatureRow& raw);
FeatureRow AdjustRow(const ModelBundle& bundle, const FeatureRow& raw);

struct ScenarioResult {
  FeatureRow scaled{};
  FeatureRow adjusted{};
  int proxy_class = 0;
  std::string proxy_label;
  std::vector<double> probabilities;
  // Predicted class only, or every class when requested.
  std::vector<ShapAttribution> shap;
  SuitabilityResult sci;
};

ScenarioResult EvaluateScenario(const ModelBundle& bundle,
                                const FeatureRow& raw,
                                bool all_classes = false);

// Per-record SCI in dataset order (missing aod interpolated first).
std::vector<SuitabilityResult> IndexRecords(const Dataset& dataset,
                                            const ModelBundle& bundle);

struct CityRanking {
  std::string city;
  double mean_sci = 0;
  int modal_class = 0;  // ties -> lower class
  ClassHistogram histogram{};
  size_t records = 0;
};

// Cities by descending mean SCI, ties by name.
std::vector<CityRanking> RankSites(const Dataset& dataset,
                                   const ModelBundle& bundle);

// Proxy labels from the bundle's clustering against the classifier's
// predictions.
EvalReport EvaluateDataset(const Dataset& dataset, const ModelBundle& bundle);

}  // namespace hysite

#endif  // HYSITE_PIPELINE_H_
