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

#include "hysite/bundle_io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hysite/error.h"

namespace hysite {

namespace {

// Path-tracking view over a parsed document. Every accessor validates the
// type it expects and reports failures as kSchema with the JSON path.
class Node {
 public:
  Node(const Json& json, std::string path, std::string_view doc)
      : json_(&json), path_(std::move(path)), doc_(doc) {}

  const std::string& path() const { return path_; }
  const Json& raw() const { return *json_; }

  [[noreturn]] void Fail(const std::string& what) const {
    throw Error(ErrorCode::kSchema,
                std::string(doc_) + ": at " + path_ + ": " + what);
  }

  bool Has(const char* key) const {
    RequireObject();
    return json_->contains(key);
  }

  Node operator[](const char* key) const {
    RequireObject();
    const auto it = json_->find(key);
    if (it == json_->end()) {
      Fail(std::string("missing field '") + key + "'");
    }
    return Node(*it, path_ + "." + key, doc_);
  }

  Node at(size_t i) const {
    return Node((*json_)[i], path_ + "[" + std::to_string(i) + "]", doc_);
  }

  size_t ArraySize() const {
    if (!json_->is_array()) Fail("expected an array");
    return json_->size();
  }

  size_t ArraySize(size_t expected) const {
    const size_t n = ArraySize();
    if (n != expected) {
      Fail("expected " + std::to_string(expected) + " elements, got " +
           std::to_string(n));
    }
    return n;
  }

  void OnlyKeys(std::initializer_list<const char*> keys) const {
    RequireObject();
    for (const auto& [k, v] : json_->items()) {
      if (std::none_of(keys.begin(), keys.end(),
                       [&](const char* a) { return k == a; })) {
        Fail("unknown field '" + k + "'");
      }
    }
  }

  double Double() const {
    if (!json_->is_number()) Fail("expected a number");
    const double v = json_->get<double>();
    if (!std::isfinite(v)) Fail("expected a finite number");
    return v;
  }

  int64_t Int(int64_t lo = std::numeric_limits<int>::min(),
              int64_t hi = std::numeric_limits<int>::max()) const {
    if (!json_->is_number_integer()) Fail("expected an integer");
    if (json_->is_number_unsigned() &&
        json_->get<uint64_t>() > static_cast<uint64_t>(hi)) {
      Fail("integer out of range");
    }
    const int64_t v = json_->get<int64_t>();
    if (v < lo || v > hi) {
      Fail("expected an integer in [" + std::to_string(lo) + ", " +
           std::to_string(hi) + "], got " + std::to_string(v));
    }
    return v;
  }

  uint64_t U64() const {
    if (!json_->is_number_unsigned() &&
        !(json_->is_number_integer() && json_->get<int64_t>() >= 0)) {
      Fail("expected a non-negative integer");
    }
    return json_->get<uint64_t>();
  }

  size_t Size() const { return static_cast<size_t>(U64()); }

  bool Bool() const {
    if (!json_->is_boolean()) Fail("expected a boolean");
    return json_->get<bool>();
  }

  std::string Str() const {
    if (!json_->is_string()) Fail("expected a string");
    return json_->get<std::string>();
  }

  FeatureRow Row() const {
    ArraySize(kNumFeatures);
    FeatureRow r{};
    for (int j = 0; j < kNumFeatures; ++j) r[j] = at(j).Double();
    return r;
  }

  std::vector<double> Doubles() const {
    std::vector<double> v(ArraySize());
    for (size_t i = 0; i < v.size(); ++i) v[i] = at(i).Double();
    return v;
  }

 private:
  void RequireObject() const {
    if (!json_->is_object()) Fail("expected an object");
  }

  const Json* json_;
  std::string path_;
  std::string_view doc_;
};

Json RowJson(const FeatureRow& r) {
  return Json(std::vector<double>(r.begin(), r.end()));
}

Json OptionalJson(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json ParseText(std::string_view text, std::string_view doc) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kSchema, std::string(doc) +
                                        ": malformed JSON at byte " +
                                        std::to_string(e.byte));
  }
}

// ---- config ---------------------------------------------------------------

Json GbtToJson(const GbtParams& p) {
  Json j;
  j["learning_rate"] = p.learning_rate;
  j["max_depth"] = p.max_depth;
  j["rounds"] = p.rounds;
  j["early_stopping_patience"] = p.early_stopping_patience;
  j["lambda"] = p.lambda;
  j["gamma"] = p.gamma;
  j["min_child_hessian"] = p.min_child_hessian;
  return j;
}

PipelineConfig ConfigFromNode(const Node& n) {
  n.OnlyKeys({"k_min", "k_max", "cluster_seed", "n_init", "kmeans", "gbt",
              "validation_fraction", "background_size", "shap_sample_size",
              "weight_mode", "thresholds", "seed"});
  PipelineConfig c;
  if (n.Has("k_min")) c.k_min = static_cast<int>(n["k_min"].Int());
  if (n.Has("k_max")) c.k_max = static_cast<int>(n["k_max"].Int());
  if (n.Has("cluster_seed")) c.cluster_seed = n["cluster_seed"].U64();
  if (n.Has("n_init")) c.n_init = static_cast<int>(n["n_init"].Int());
  if (n.Has("kmeans")) {
    const Node k = n["kmeans"];
    k.OnlyKeys({"max_iter", "tol"});
    if (k.Has("max_iter")) {
      c.kmeans.max_iter = static_cast<int>(k["max_iter"].Int());
    }
    if (k.Has("tol")) c.kmeans.tol = k["tol"].Double();
  }
  if (n.Has("gbt")) {
    const Node g = n["gbt"];
    g.OnlyKeys({"learning_rate", "max_depth", "rounds",
                "early_stopping_patience", "lambda", "gamma",
                "min_child_hessian"});
    GbtParams& p = c.gbt;
    if (g.Has("learning_rate")) p.learning_rate = g["learning_rate"].Double();
    if (g.Has("max_depth"))
      p.max_depth = static_cast<int>(g["max_depth"].Int());
    if (g.Has("rounds")) p.rounds = static_cast<int>(g["rounds"].Int());
    if (g.Has("early_stopping_patience")) {
      p.early_stopping_patience =
          static_cast<int>(g["early_stopping_patience"].Int());
    }
    if (g.Has("lambda")) p.lambda = g["lambda"].Double();
    if (g.Has("gamma")) p.gamma = g["gamma"].Double();
    if (g.Has("min_child_hessian")) {
      p.min_child_hessian = g["min_child_hessian"].Double();
    }
  }
  if (n.Has("validation_fraction")) {
    c.validation_fraction = n["validation_fraction"].Double();
  }
  if (n.Has("background_size")) c.background_size = n["background_size"].Size();
  if (n.Has("shap_sample_size")) {
    c.shap_sample_size = n["shap_sample_size"].Size();
  }
  if (n.Has("weight_mode")) {
    const Node m = n["weight_mode"];
    try {
      c.weight_mode = ParseWeightMode(m.Str());
    } catch (const Error& e) {
      m.Fail(e.what());
    }
  }
  if (n.Has("thresholds")) {
    const Node t = n["thresholds"];
    t.ArraySize(c.thresholds.cuts.size());
    for (size_t i = 0; i < c.thresholds.cuts.size(); ++i) {
      c.thresholds.cuts[i] = t.at(i).Double();
    }
  }
  if (n.Has("seed")) c.seed = n["seed"].U64();
  return c;
}

// ---- bundle ---------------------------------------------------------------

Json SchemaJson() {
  Json arr = Json::array();
  for (const FeatureDescriptor& f : FeatureSchema::Canonical().features()) {
    Json d;
    d["name"] = f.name;
    d["unit"] = f.unit;
    d["direction"] = DirectionName(f.direction);
    d["kind"] = FeatureKindName(f.kind);
    arr.push_back(d);
  }
  return arr;
}

void CheckSchema(const Node& n) {
  n.ArraySize(kNumFeatures);
  for (int j = 0; j < kNumFeatures; ++j) {
    const FeatureDescriptor& f = FeatureSchema::Canonical().at(j);
    const Node d = n.at(j);
    if (d["name"].Str() != f.name ||
        d["direction"].Str() != DirectionName(f.direction) ||
        d["kind"].Str() != FeatureKindName(f.kind)) {
      d.Fail("feature does not match the schema (expected '" +
             std::string(f.name) + "')");
    }
  }
}

Json TreeJson(const RegressionTree& t) {
  Json nodes = Json::array();
  for (const TreeNode& n : t.nodes) {
    Json j;
    if (n.IsLeaf()) {
      j["weight"] = n.weight;
    } else {
      j["feature"] = n.feature;
      j["threshold"] = n.threshold;
      j["left"] = n.left;
      j["right"] = n.right;
    }
    nodes.push_back(j);
  }
  return nodes;
}

RegressionTree TreeFromNode(const Node& n) {
  const size_t count = n.ArraySize();
  if (count == 0) n.Fail("tree has no nodes");
  RegressionTree t;
  t.nodes.resize(count);
  std::vector<int> depth(count, 0);
  std::vector<int> parents(count, 0);
  for (size_t i = 0; i < count; ++i) {
    const Node j = n.at(i);
    TreeNode& node = t.nodes[i];
    if (j.Has("feature")) {
      node.feature = static_cast<int>(j["feature"].Int(0, kNumFeatures - 1));
      node.threshold = j["threshold"].Double();
      const int hi = static_cast<int>(count) - 1;
      node.left = static_cast<int>(j["left"].Int(static_cast<int>(i) + 1, hi));
      node.right =
          static_cast<int>(j["right"].Int(static_cast<int>(i) + 1, hi));
      if (node.left == node.right) j.Fail("children coincide");
      for (const int c : {node.left, node.right}) {
        ++parents[c];
        depth[c] = depth[i] + 1;
        if (depth[c] > kMaxTreeDepth) j.Fail("tree exceeds the maximum depth");
      }
    } else {
      node.weight = j["weight"].Double();
    }
  }
  for (size_t i = 1; i < count; ++i) {
    if (parents[i] != 1) n.at(i).Fail("node is not reachable exactly once");
  }
  return t;
}

Json KMeansJson(const KMeansModel& m) {
  Json j;
  j["k"] = m.k;
  Json centroids = Json::array();
  for (const FeatureRow& c : m.centroids) centroids.push_back(RowJson(c));
  j["centroids"] = centroids;
  j["inertia"] = m.inertia;
  j["iterations_run"] = m.iterations_run;
  j["seed"] = m.seed;
  j["inertia_trace"] = m.inertia_trace;
  return j;
}

KMeansModel KMeansFromNode(const Node& n) {
  KMeansModel m;
  m.k = static_cast<int>(n["k"].Int(1));
  const Node c = n["centroids"];
  c.ArraySize(m.k);
  for (int i = 0; i < m.k; ++i) m.centroids.push_back(c.at(i).Row());
  m.inertia = n["inertia"].Double();
  m.iterations_run = static_cast<int>(n["iterations_run"].Int(0));
  m.seed = n["seed"].U64();
  m.inertia_trace = n["inertia_trace"].Doubles();
  return m;
}

Json LabelingJson(const ProxyLabeling& l) {
  Json j;
  j["cluster_to_class"] = l.cluster_to_class;
  j["class_labels"] = l.class_labels;
  Json clusters = Json::array();
  for (const ClusterStats& s : l.clusters) {
    Json c;
    c["size"] = s.size;
    c["mean_adjusted"] = RowJson(s.mean_adjusted);
    c["mean_score"] = s.mean_score;
    clusters.push_back(c);
  }
  j["clusters"] = clusters;
  return j;
}

ProxyLabeling LabelingFromNode(const Node& n, int k) {
  ProxyLabeling l;
  const Node map = n["cluster_to_class"];
  map.ArraySize(k);
  std::vector<bool> used(k, false);
  for (int i = 0; i < k; ++i) {
    const int c = static_cast<int>(map.at(i).Int(0, k - 1));
    if (used[c]) map.at(i).Fail("class assigned twice");
    used[c] = true;
    l.cluster_to_class.push_back(c);
  }
  const Node labels = n["class_labels"];
  labels.ArraySize(k);
  for (int i = 0; i < k; ++i) l.class_labels.push_back(labels.at(i).Str());
  const Node clusters = n["clusters"];
  clusters.ArraySize(k);
  for (int i = 0; i < k; ++i) {
    const Node c = clusters.at(i);
    ClusterStats s;
    s.size = c["size"].Size();
    s.mean_adjusted = c["mean_adjusted"].Row();
    s.mean_score = c["mean_score"].Double();
    l.clusters.push_back(s);
  }
  return l;
}

Json EnsembleJson(const GbtEnsemble& e) {
  Json j;
  j["n_classes"] = e.n_classes;
  j["learning_rate"] = e.learning_rate;
  j["base_score"] = e.base_score;
  Json rounds = Json::array();
  for (const auto& round : e.trees) {
    Json per_class = Json::array();
    for (const RegressionTree& t : round) per_class.push_back(TreeJson(t));
    rounds.push_back(per_class);
  }
  j["trees"] = rounds;
  return j;
}

GbtEnsemble EnsembleFromNode(const Node& n) {
  GbtEnsemble e;
  e.n_classes = static_cast<int>(n["n_classes"].Int(1));
  e.learning_rate = n["learning_rate"].Double();
  e.base_score = n["base_score"].Double();
  const Node rounds = n["trees"];
  const size_t r = rounds.ArraySize();
  for (size_t i = 0; i < r; ++i) {
    const Node round = rounds.at(i);
    round.ArraySize(e.n_classes);
    std::vector<RegressionTree> per_class;
    for (int c = 0; c < e.n_classes; ++c) {
      per_class.push_back(TreeFromNode(round.at(c)));
    }
    e.trees.push_back(std::move(per_class));
  }
  return e;
}

Json ImportanceJsonImpl(const ImportanceTable& t) {
  Json j;
  j["mean_abs_shap"] = RowJson(t.mean_abs_shap);
  j["weights"] = RowJson(t.weights);
  j["sample_size"] = t.sample_size;
  j["background_size"] = t.background_size;
  return j;
}

ImportanceTable ImportanceFromNode(const Node& n) {
  ImportanceTable t;
  t.mean_abs_shap = n["mean_abs_shap"].Row();
  t.weights = n["weights"].Row();
  t.sample_size = n["sample_size"].Size();
  t.background_size = n["background_size"].Size();
  return t;
}

Json ThresholdsJson(const BinThresholds& t) {
  return Json(std::vector<double>(t.cuts.begin(), t.cuts.end()));
}

BinThresholds ThresholdsFromNode(const Node& n) {
  BinThresholds t;
  n.ArraySize(t.cuts.size());
  for (size_t i = 0; i < t.cuts.size(); ++i) t.cuts[i] = n.at(i).Double();
  try {
    t.Validate();
  } catch (const Error& e) {
    n.Fail(e.what());
  }
  return t;
}

}  // namespace

std::string Dump(const Json& json) { return json.dump(2) + "\n"; }

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "cannot read '" + path + "'");
  return ss.str();
}

void WriteTextFile(const std::string& path, std::string_view contents) {
  // Write to a sibling and rename so readers never see a partial file.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  }
}

Json ConfigToJson(const PipelineConfig& c) {
  Json j;
  j["k_min"] = c.k_min;
  j["k_max"] = c.k_max;
  j["cluster_seed"] = c.cluster_seed;
  j["n_init"] = c.n_init;
  j["kmeans"] = {{"max_iter", c.kmeans.max_iter}, {"tol", c.kmeans.tol}};
  j["gbt"] = GbtToJson(c.gbt);
  j["validation_fraction"] = c.validation_fraction;
  j["background_size"] = c.background_size;
  j["shap_sample_size"] = c.shap_sample_size;
  j["weight_mode"] = WeightModeName(c.weight_mode);
  j["thresholds"] = ThresholdsJson(c.thresholds);
  j["seed"] = c.seed;
  return j;
}

PipelineConfig ConfigFromJson(const Json& json) {
  return ConfigFromNode(Node(json, "$", "config"));
}

PipelineConfig ParseConfig(std::string_view text) {
  return ConfigFromJson(ParseText(text, "config"));
}

PipelineConfig LoadConfigFile(const std::string& path) {
  std::string text;
  try {
    text = ReadTextFile(path);
  } catch (const Error&) {
    throw Error(ErrorCode::kIo, "cannot read config file '" + path + "'");
  }
  try {
    return ParseConfig(text);
  } catch (const Error& e) {
    throw e.WithContext(path);
  }
}

Json BundleToJson(const ModelBundle& b) {
  Json j;
  j["format_version"] = b.format_version;
  j["schema"] = SchemaJson();
  j["scaler"] = {{"min", RowJson(b.scaler.min)},
                 {"max", RowJson(b.scaler.max)},
                 {"degenerate", std::vector<bool>(b.scaler.degenerate.begin(),
                                                  b.scaler.degenerate.end())}};
  j["kmeans"] = KMeansJson(b.kmeans);
  j["labeling"] = LabelingJson(b.labeling);
  j["ensemble"] = EnsembleJson(b.ensemble);
  Json rows = Json::array();
  for (const FeatureRow& r : b.background.rows) rows.push_back(RowJson(r));
  j["background"] = {{"seed", b.background.seed}, {"rows", rows}};
  j["importance"] = ImportanceJsonImpl(b.importance);
  j["weights"] = {{"values", RowJson(b.weights.values)},
                  {"mode", WeightModeName(b.weights.mode)},
                  {"provenance", b.weights.provenance}};
  j["thresholds"] = ThresholdsJson(b.thresholds);
  const TrainingMetadata& m = b.metadata;
  j["metadata"] = {{"dataset_fingerprint", m.dataset_fingerprint},
                   {"record_count", m.record_count},
                   {"cities", m.cities},
                   {"data_start", m.data_start},
                   {"data_end", m.data_end},
                   {"config", ConfigToJson(m.config)}};
  return j;
}

ModelBundle BundleFromJson(const Json& json) {
  const Node root(json, "$", "bundle");
  const Node version = root["format_version"];
  root.OnlyKeys({"format_version", "schema", "scaler", "kmeans", "labeling",
                 "ensemble", "background", "importance", "weights",
                 "thresholds", "metadata"});
  if (!version.raw().is_number_integer() ||
      version.raw().get<int64_t>() != kBundleFormatVersion) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "bundle: unsupported format_version " + version.raw().dump() +
                    " (expected " + std::to_string(kBundleFormatVersion) + ")");
  }
  ModelBundle b;
  CheckSchema(root["schema"]);

  const Node scaler = root["scaler"];
  b.scaler.min = scaler["min"].Row();
  b.scaler.max = scaler["max"].Row();
  const Node degenerate = scaler["degenerate"];
  degenerate.ArraySize(kNumFeatures);
  for (int j = 0; j < kNumFeatures; ++j) {
    b.scaler.degenerate[j] = degenerate.at(j).Bool();
  }

  b.kmeans = KMeansFromNode(root["kmeans"]);
  b.labeling = LabelingFromNode(root["labeling"], b.kmeans.k);
  const Node ensemble = root["ensemble"];
  b.ensemble = EnsembleFromNode(ensemble);
  if (b.ensemble.n_classes != b.kmeans.k) {
    ensemble["n_classes"].Fail("does not match the number of clusters");
  }

  const Node background = root["background"];
  b.background.seed = background["seed"].U64();
  const Node rows = background["rows"];
  const size_t n = rows.ArraySize();
  if (n == 0) rows.Fail("background set is empty");
  for (size_t i = 0; i < n; ++i) b.background.rows.push_back(rows.at(i).Row());

  b.importance = ImportanceFromNode(root["importance"]);
  const Node weights = root["weights"];
  b.weights.values = weights["values"].Row();
  try {
    b.weights.mode = ParseWeightMode(weights["mode"].Str());
  } catch (const Error& e) {
    weights["mode"].Fail(e.what());
  }
  b.weights.provenance = weights["provenance"].Str();
  b.thresholds = ThresholdsFromNode(root["thresholds"]);

  const Node meta = root["metadata"];
  TrainingMetadata& m = b.metadata;
  m.dataset_fingerprint = meta["dataset_fingerprint"].Str();
  m.record_count = meta["record_count"].Size();
  const Node cities = meta["cities"];
  for (size_t i = 0; i < cities.ArraySize(); ++i) {
    m.cities.push_back(cities.at(i).Str());
  }
  m.data_start = meta["data_start"].Str();
  m.data_end = meta["data_end"].Str();
  m.config = ConfigFromNode(meta["config"]);
  return b;
}

std::string SerializeBundle(const ModelBundle& bundle) {
  return Dump(BundleToJson(bundle));
}

ModelBundle ParseBundle(std::string_view text) {
  return BundleFromJson(ParseText(text, "bundle"));
}

void SaveBundle(const ModelBundle& bundle, const std::string& path) {
  WriteTextFile(path, SerializeBundle(bundle));
}

ModelBundle LoadBundle(const std::string& path) {
  try {
    return ParseBundle(ReadTextFile(path));
  } catch (const Error& e) {
    throw e.WithContext(path);
  }
}

// ---- reports --------------------------------------------------------------

Json EvalReportToJson(const EvalReport& r) {
  Json j;
  j["n_classes"] = r.n_classes;
  j["total"] = r.total;
  j["confusion"] = r.confusion;
  j["accuracy"] = r.accuracy;
  j["macro_precision"] = r.macro_precision;
  j["macro_recall"] = r.macro_recall;
  j["macro_f1"] = r.macro_f1;
  j["weighted_precision"] = r.weighted_precision;
  j["weighted_recall"] = r.weighted_recall;
  j["weighted_f1"] = r.weighted_f1;
  Json per_class = Json::array();
  for (size_t c = 0; c < r.per_class.size(); ++c) {
    const ClassMetrics& m = r.per_class[c];
    per_class.push_back({{"class", c},
                         {"precision", m.precision},
                         {"recall", m.recall},
                         {"f1", m.f1},
                         {"support", m.support},
                         {"precision_undefined", m.precision_undefined},
                         {"recall_undefined", m.recall_undefined}});
  }
  j["per_class"] = per_class;
  return j;
}

Json ImportanceToJson(const ImportanceTable& t) {
  Json features = Json::array();
  for (const int j : ImportanceOrder(t)) {
    features.push_back({{"name", FeatureSchema::Canonical().at(j).name},
                        {"mean_abs_shap", t.mean_abs_shap[j]},
                        {"weight", t.weights[j]}});
  }
  return {{"features", features},
          {"sample_size", t.sample_size},
          {"background_size", t.background_size}};
}

Json RankingToJson(const std::vector<CityRanking>& ranking) {
  Json cities = Json::array();
  std::vector<size_t> totals(kNumSuitabilityClasses, 0);
  for (const CityRanking& c : ranking) {
    cities.push_back({{"city", c.city},
                      {"mean_sci", c.mean_sci},
                      {"modal_class", c.modal_class},
                      {"modal_label", SciClassLabel(c.modal_class)},
                      {"histogram", c.histogram},
                      {"records", c.records}});
    for (int k = 0; k < kNumSuitabilityClasses; ++k)
      totals[k] += c.histogram[k];
  }
  return {{"cities", cities},
          {"histogram", totals},
          {"labels", kSuitabilityLabels}};
}

Json ReportsToJson(const PipelineReports& r) {
  Json j;
  Json candidates = Json::array();
  for (const KCandidate& c : r.k_selection.candidates) {
    candidates.push_back(
        {{"k", c.k}, {"inertia", c.inertia}, {"silhouette", c.silhouette}});
  }
  j["k_selection"] = {{"candidates", candidates},
                      {"chosen_k", r.k_selection.chosen_k},
                      {"elbow_k", r.k_selection.elbow_k}};
  Json rounds = Json::array();
  for (const RoundStats& s : r.history.rounds) {
    rounds.push_back({{"train_logloss", s.train_logloss},
                      {"train_accuracy", s.train_accuracy},
                      {"valid_logloss", OptionalJson(s.valid_logloss)},
                      {"valid_accuracy", OptionalJson(s.valid_accuracy)}});
  }
  j["history"] = {{"rounds", rounds}, {"best_round", r.history.best_round}};
  j["evaluation"] = EvalReportToJson(r.evaluation);
  j["evaluation_split"] = r.evaluation_on_validation ? "validation" : "train";
  j["importance"] = ImportanceToJson(r.importance);
  j["sci_histogram"] = {{"counts", r.sci_histogram},
                        {"labels", kSuitabilityLabels}};
  return j;
}

Json EdaToJson(const EdaSummary& eda) {
  const FeatureSchema& schema = FeatureSchema::Canonical();
  Json moments;
  for (int j = 0; j < kNumFeatures; ++j) {
    const MomentSummary& m = eda.moments[j];
    moments[std::string(schema.at(j).name)] = {{"mean", m.mean},
                                               {"stddev", m.stddev},
                                               {"skewness", m.skewness},
                                               {"count", m.count}};
  }
  std::vector<std::string> names;
  for (const int f : eda.correlation_features) {
    names.emplace_back(schema.at(f).name);
  }
  Json matrix = Json::array();
  for (const auto& row : eda.correlation) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(OptionalJson(v));
    matrix.push_back(r);
  }
  Json monthly;
  for (const auto& [city, months] : eda.monthly_aod) {
    Json m = Json::array();
    for (const auto& v : months) m.push_back(OptionalJson(v));
    monthly[city] = m;
  }
  return {{"moments", moments},
          {"correlation", {{"features", names}, {"matrix", matrix}}},
          {"monthly_aod", monthly}};
}

}  // namespace hysite
