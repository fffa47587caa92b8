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

#include "hysite/pipeline.h"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>

#include "hashing.h"
#include "hysite/error.h"

namespace hysite {

namespace {

// Seed streams drawn from PipelineConfig::seed.
constexpr uint64_t kSplitStream = 1;
constexpr uint64_t kBackgroundStream = 2;
constexpr uint64_t kSampleStream = 3;

template <typename F>
auto Stage(const char* name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw e.WithContext(name);
  }
}

FeatureMatrix Subset(const FeatureMatrix& m, const std::vector<size_t>& rows) {
  FeatureMatrix out;
  out.kind = m.kind;
  out.rows.reserve(rows.size());
  for (const size_t i : rows) out.rows.push_back(m.rows[i]);
  return out;
}

FeatureMatrix PrepareRaw(const Dataset& dataset) {
  return ToFeatureMatrix(InterpolateMissing(dataset));
}

}  // namespace

void PipelineConfig::Validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::kParameter, "config: " + msg);
  };
  if (k_min < 2) fail("k_min must be >= 2");
  if (k_max < k_min) fail("k_max must be >= k_min");
  if (n_init < 1) fail("n_init must be >= 1");
  if (kmeans.max_iter < 1) fail("max_iter must be >= 1");
  if (!(kmeans.tol >= 0)) fail("tol must be >= 0");
  if (!(validation_fraction >= 0 && validation_fraction < 1)) {
    fail("validation_fraction must be in [0, 1)");
  }
  if (background_size == 0) fail("background_size must be >= 1");
  if (shap_sample_size == 0) fail("shap_sample_size must be >= 1");
  try {
    thresholds.Validate();
  } catch (const Error& e) {
    fail(e.what());
  }
}

std::string DatasetFingerprint(const Dataset& dataset) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64,
                internal::Fnv1a64(WriteCsv(dataset)));
  return buf;
}

PipelineResult RunPipeline(const Dataset& dataset,
                           const PipelineConfig& config) {
  Stage("config", [&] { config.Validate(); });
  if (dataset.empty()) {
    throw Error(ErrorCode::kEmptyInput, "input: dataset is empty");
  }

  const FeatureMatrix raw =
      Stage("interpolate", [&] { return PrepareRaw(dataset); });
  const ScalingParams scaler = Stage("scale", [&] { return FitScaler(raw); });
  const FeatureMatrix scaled = Transform(scaler, raw);
  const FeatureMatrix adjusted =
      DirectionalAdjust(scaled, FeatureSchema::Canonical());

  KSelectionOptions kopts;
  kopts.n_init = config.n_init;
  kopts.kmeans = config.kmeans;
  const KSelection selection = Stage("select_k", [&] {
    return SelectK(scaled, config.k_min, config.k_max, config.cluster_seed,
                   kopts);
  });
  const std::vector<int> clusters = Assign(selection.model, scaled);
  const ProxyLabeling labeling = Stage("rank_clusters", [&] {
    return RankClusters(selection.model, adjusted, clusters);
  });
  std::vector<int> labels(clusters.size());
  for (size_t i = 0; i < clusters.size(); ++i) {
    labels[i] = labeling.ClassOf(clusters[i]);
  }

  GbtParams gbt = config.gbt;
  gbt.n_classes = selection.model.k;
  TrainResult trained = Stage("train", [&] {
    return TrainGbt(scaled, labels, gbt, config.validation_fraction,
                    internal::DeriveSeed(config.seed, kSplitStream));
  });

  PipelineResult result;
  PipelineReports& reports = result.reports;
  reports.k_selection = selection.report;
  reports.history = trained.history;
  Stage("evaluate", [&] {
    const bool holdout = !trained.validation_rows.empty();
    const std::vector<size_t>& rows =
        holdout ? trained.validation_rows : trained.train_rows;
    std::vector<int> y;
    y.reserve(rows.size());
    for (const size_t i : rows) y.push_back(labels[i]);
    reports.evaluation = Evaluate(trained.ensemble, Subset(scaled, rows), y);
    reports.evaluation_on_validation = holdout;
  });

  ModelBundle& bundle = result.bundle;
  bundle.ensemble = std::move(trained.ensemble);
  Stage("explain", [&] {
    const FeatureMatrix train = Subset(scaled, trained.train_rows);
    bundle.background =
        SampleBackground(train, config.background_size,
                         internal::DeriveSeed(config.seed, kBackgroundStream));
    const FeatureMatrix sample = Subset(
        train,
        SampleRowIndices(train.size(), config.shap_sample_size,
                         internal::DeriveSeed(config.seed, kSampleStream)));
    bundle.importance =
        GlobalImportance(bundle.ensemble, sample, bundle.background);
  });
  reports.importance = bundle.importance;

  Stage("weights", [&] {
    bundle.weights = config.weight_mode == WeightMode::kRaw
                         ? RawWeights(bundle.importance)
                         : WeightsFromImportance(bundle.importance);
  });
  bundle.thresholds = config.thresholds;
  for (const FeatureRow& row : adjusted.rows) {
    ++reports.sci_histogram[ComputeSci(row, bundle.weights, bundle.thresholds)
                                .sci_class];
  }

  bundle.scaler = scaler;
  bundle.kmeans = selection.model;
  bundle.labeling = labeling;
  TrainingMetadata& meta = bundle.metadata;
  meta.dataset_fingerprint = DatasetFingerprint(dataset);
  meta.record_count = dataset.size();
  meta.cities = dataset.Cities();
  Date first = dataset.records().front().date;
  Date last = first;
  for (const SiteRecord& r : dataset.records()) {
    first = std::min(first, r.date);
    last = std::max(last, r.date);
  }
  meta.data_start = FormatIsoDate(first);
  meta.data_end = FormatIsoDate(last);
  meta.config = config;

  result.proxy_labels = std::move(labels);
  return result;
}

FeatureRow ScaleRow(const ModelBundle& bundle, const FeatureRow& raw) {
  return TransformRow(bundle.scaler, raw);
}

FeatureRow AdjustRow(const ModelBundle& bundle, const FeatureRow& raw) {
  return DirectionalAdjustRow(ScaleRow(bundle, raw),
                              FeatureSchema::Canonical());
}

ScenarioResult EvaluateScenario(const ModelBundle& bundle,
                                const FeatureRow& raw, bool all_classes) {
  ScenarioResult r;
  r.scaled = ScaleRow(bundle, raw);
  r.adjusted = DirectionalAdjustRow(r.scaled, FeatureSchema::Canonical());
  r.probabilities = PredictProba(bundle.ensemble, r.scaled);
  r.proxy_class = ArgMax(r.probabilities);
  r.proxy_label = bundle.labeling.class_labels.at(r.proxy_class);
  std::vector<ShapAttribution> shap =
      ShapExactAllClasses(bundle.ensemble, r.scaled, bundle.background);
  if (all_classes) {
    r.shap = std::move(shap);
  } else {
    r.shap.push_back(std::move(shap[r.proxy_class]));
  }
  r.sci = ComputeSci(r.adjusted, bundle.weights, bundle.thresholds);
  return r;
}

std::vector<SuitabilityResult> IndexRecords(const Dataset& dataset,
                                            const ModelBundle& bundle) {
  const FeatureMatrix raw = PrepareRaw(dataset);
  std::vector<SuitabilityResult> out;
  out.reserve(raw.size());
  for (const FeatureRow& row : raw.rows) {
    out.push_back(
        ComputeSci(AdjustRow(bundle, row), bundle.weights, bundle.thresholds));
  }
  return out;
}

std::vector<CityRanking> RankSites(const Dataset& dataset,
                                   const ModelBundle& bundle) {
  const std::vector<SuitabilityResult> sci = IndexRecords(dataset, bundle);
  std::map<std::string, CityRanking> by_city;
  std::map<std::string, double> sums;
  for (size_t i = 0; i < sci.size(); ++i) {
    const std::string& city = dataset.records()[i].city;
    CityRanking& c = by_city[city];
    c.city = city;
    ++c.records;
    ++c.histogram[sci[i].sci_class];
    sums[city] += sci[i].sci;
  }
  std::vector<CityRanking> out;
  for (auto& [city, c] : by_city) {
    c.mean_sci = sums[city] / static_cast<double>(c.records);
    c.modal_class = static_cast<int>(
        std::max_element(c.histogram.begin(), c.histogram.end()) -
        c.histogram.begin());
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CityRanking& a, const CityRanking& b) {
                     return a.mean_sci > b.mean_sci;
                   });
  return out;
}

EvalReport EvaluateDataset(const Dataset& dataset, const ModelBundle& bundle) {
  const FeatureMatrix scaled = Transform(bundle.scaler, PrepareRaw(dataset));
  const std::vector<int> clusters = Assign(bundle.kmeans, scaled);
  std::vector<int> labels(clusters.size());
  for (size_t i = 0; i < clusters.size(); ++i) {
    labels[i] = bundle.labeling.ClassOf(clusters[i]);
  }
  return Evaluate(bundle.ensemble, scaled, labels);
}

}  // namespace hysite
