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

#include <cmath>
#include <string>
#include <vector>

#include "fixture.h"
#include "gtest/gtest.h"
#include "hysite/bundle_io.h"
#include "hysite/error.h"
#include "test_support.h"

namespace hysite {
namespace {

using testing::MakeDate;
using testing::MakeRecord;
using testing::SmallConfig;
using testing::SmallDataset;
using testing::SmallPipeline;

TEST(Pipeline, ProducesConsistentBundle) {
  const PipelineResult& r = SmallPipeline();
  const ModelBundle& b = r.bundle;
  const int k = r.reports.k_selection.chosen_k;
  EXPECT_EQ(b.n_classes(), k);
  EXPECT_EQ(b.kmeans.k, k);
  EXPECT_EQ(b.labeling.cluster_to_class.size(), static_cast<size_t>(k));
  EXPECT_EQ(r.proxy_labels.size(), SmallDataset().size());
  for (const int y : r.proxy_labels) {
    EXPECT_GE(y, 0);
    EXPECT_LT(y, k);
  }
  EXPECT_EQ(b.background.size(), 16u);
  EXPECT_EQ(b.importance.sample_size, 24u);
  EXPECT_EQ(b.weights, RawWeights(b.importance));
  EXPECT_TRUE(r.reports.evaluation_on_validation);
  size_t histogram_total = 0;
  for (const size_t n : r.reports.sci_histogram) histogram_total += n;
  EXPECT_EQ(histogram_total, SmallDataset().size());

  const TrainingMetadata& m = b.metadata;
  EXPECT_EQ(m.record_count, 4u * 120u);
  EXPECT_EQ(m.cities.size(), 4u);
  EXPECT_EQ(m.data_start, "2023-01-01");
  EXPECT_EQ(m.data_end, "2023-04-30");
  EXPECT_EQ(m.dataset_fingerprint, DatasetFingerprint(SmallDataset()));
  EXPECT_EQ(m.dataset_fingerprint.size(), 16u);
}

TEST(Pipeline, IsDeterministic) {
  const PipelineResult again = RunPipeline(SmallDataset(), SmallConfig());
  EXPECT_EQ(SerializeBundle(again.bundle),
            SerializeBundle(SmallPipeline().bundle));
  EXPECT_EQ(again.proxy_labels, SmallPipeline().proxy_labels);
}

TEST(Pipeline, ErrorsCarryStage) {
  const Dataset one = Dataset::FromRecords({MakeRecord(
      "Solo", MakeDate(2023, 1, 1), {5, 20, 3, 0.3, 50, 1, 10, 1})});
  try {
    RunPipeline(one, PipelineConfig{});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleK);
    EXPECT_EQ(std::string(e.what()).rfind("select_k: ", 0), 0u) << e.what();
  }
  try {
    RunPipeline(Dataset{}, PipelineConfig{});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInput);
  }
  PipelineConfig bad;
  bad.k_min = 1;
  try {
    RunPipeline(SmallDataset(), bad);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParameter);
    EXPECT_NE(std::string(e.what()).find("k_min"), std::string::npos);
  }
}

TEST(Pipeline, FingerprintTracksContent) {
  std::vector<SiteRecord> records = SmallDataset().records();
  const std::string before = DatasetFingerprint(SmallDataset());
  records[7].temperature += 0.5;
  EXPECT_NE(DatasetFingerprint(Dataset::FromRecords(records)), before);
  for (const char c : before) EXPECT_TRUE(std::isxdigit(c));
}

TEST(Scenario, AgreesWithBatchPaths) {
  const ModelBundle& b = SmallPipeline().bundle;
  const std::vector<SuitabilityResult> sci = IndexRecords(SmallDataset(), b);
  for (size_t i = 0; i < SmallDataset().size(); i += 37) {
    const FeatureRow raw = SmallDataset().records()[i].Features();
    const ScenarioResult s = EvaluateScenario(b, raw, /*all_classes=*/true);
    EXPECT_EQ(s.sci.sci, sci[i].sci);
    EXPECT_EQ(s.proxy_class, PredictClass(b.ensemble, s.scaled));
    EXPECT_EQ(s.proxy_label, b.labeling.class_labels[s.proxy_class]);
    ASSERT_EQ(s.shap.size(), static_cast<size_t>(b.n_classes()));
    for (const ShapAttribution& a : s.shap) {
      double sum = 0;
      for (const double v : a.phi) sum += v;
      EXPECT_NEAR(sum, a.margin - a.baseline, 1e-9);
    }
    const ScenarioResult one = EvaluateScenario(b, raw);
    ASSERT_EQ(one.shap.size(), 1u);
    EXPECT_EQ(one.shap[0].class_id, one.proxy_class);
  }
}

TEST(Scenario, OutOfRangeInputsAreClamped) {
  const ModelBundle& b = SmallPipeline().bundle;
  const ScenarioResult s =
      EvaluateScenario(b, {1e6, -1e6, 1e6, 1e6, 1e6, 1e6, -1e6, 99});
  for (const double v : s.scaled) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

ModelBundle HandBundle() {
  ModelBundle b;
  b.scaler.min.fill(0.0);
  b.scaler.max.fill(1.0);
  b.weights.values = {1, 1, 1, 1, 0, 1, 1, 0};
  return b;
}

TEST(RankSites, OrdersByMeanSci) {
  const ModelBundle b = HandBundle();
  std::vector<SiteRecord> records;
  // Alpha: 6.0 and 5.0; Beta and Gamma: 3.0 on both days.
  records.push_back(
      MakeRecord("Alpha", MakeDate(2023, 1, 1), {1, 1, 1, 0, 0, 0, 0, 1}));
  records.push_back(
      MakeRecord("Alpha", MakeDate(2023, 1, 2), {1, 1, 0, 0, 0, 0, 0, 1}));
  for (const char* city : {"Gamma", "Beta"}) {
    for (unsigned d = 1; d <= 2; ++d) {
      records.push_back(MakeRecord(city, MakeDate(2023, 1, d),
                                   {0.5, 0.5, 0.5, 0.5, 0, 0.5, 0.5, 1}));
    }
  }
  const std::vector<CityRanking> r =
      RankSites(Dataset::FromRecords(records), b);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0].city, "Alpha");
  EXPECT_DOUBLE_EQ(r[0].mean_sci, 5.5);
  EXPECT_EQ(r[0].histogram[3], 1u);
  EXPECT_EQ(r[0].histogram[4], 1u);
  EXPECT_EQ(r[0].modal_class, 3);  // tie between classes -> lower
  EXPECT_EQ(r[1].city, "Beta");
  EXPECT_EQ(r[2].city, "Gamma");
  EXPECT_DOUBLE_EQ(r[1].mean_sci, 3.0);
  EXPECT_EQ(r[1].modal_class, 1);  // 3.0 sits in [2.4, 3.4)
  EXPECT_EQ(r[1].records, 2u);
}

TEST(RankSites, FillsMissingAod) {
  const ModelBundle b = HandBundle();
  std::vector<SiteRecord> records;
  for (unsigned d = 1; d <= 3; ++d) {
    records.push_back(MakeRecord("Alpha", MakeDate(2023, 1, d),
                                 {0, 0, 0, 0.2 * d, 0, 1, 1, 1}));
  }
  records[1].aod.reset();
  const std::vector<SuitabilityResult> sci =
      IndexRecords(Dataset::FromRecords(records), b);
  EXPECT_NEAR(sci[1].sci, 1 - 0.4, 1e-15);
}

TEST(Config, ValidationNamesTheField) {
  auto message = [](const PipelineConfig& c) -> std::string {
    try {
      c.Validate();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParameter);
      return e.what();
    }
    return "";
  };
  EXPECT_EQ(message(PipelineConfig{}), "");
  PipelineConfig c;
  c.k_max = 1;
  EXPECT_NE(message(c).find("k_max"), std::string::npos);
  c = PipelineConfig{};
  c.validation_fraction = 1.0;
  EXPECT_NE(message(c).find("validation_fraction"), std::string::npos);
  c = PipelineConfig{};
  c.background_size = 0;
  EXPECT_NE(message(c).find("background_size"), std::string::npos);
  c = PipelineConfig{};
  c.thresholds.cuts = {3, 2, 4, 5};
  EXPECT_NE(message(c).find("thresholds"), std::string::npos);
}

TEST(Config, JsonRoundTripAndStrictKeys) {
  PipelineConfig c = SmallConfig();
  c.weight_mode = WeightMode::kNormalized;
  c.seed = 123456789012345ULL;
  c.thresholds.cuts = {0.1, 0.2, 0.3, 0.4};
  const PipelineConfig back = ParseConfig(Dump(ConfigToJson(c)));
  EXPECT_EQ(Dump(ConfigToJson(back)), Dump(ConfigToJson(c)));
  EXPECT_EQ(back.seed, c.seed);
  EXPECT_EQ(back.weight_mode, WeightMode::kNormalized);

  const PipelineConfig partial = ParseConfig(R"({"k_max": 4})");
  EXPECT_EQ(partial.k_max, 4);
  EXPECT_EQ(partial.k_min, 2);
  EXPECT_THROW(ParseConfig(R"({"k_maxx": 4})"), Error);
  EXPECT_THROW(ParseConfig(R"({"k_max": "four"})"), Error);
  EXPECT_THROW(ParseConfig(R"({"weight_mode": "cubic"})"), Error);
  EXPECT_THROW(ParseConfig("{"), Error);
}

}  // namespace
}  // namespace hysite
