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

#include "hysite/cli.h"

#include <algorithm>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hysite/bundle_io.h"
#include "hysite/error.h"
#include "hysite/numeric_text.h"
#include "hysite/pipeline.h"
#include "hysite/service.h"

namespace hysite {

namespace {

struct Options {
  std::string data;
  std::string bundle;
  std::string config;
  std::string out;
  std::string profiles;
  std::string start = "2023-01-01";
  std::string end = "2024-12-31";
  std::string row;
  std::string host = "127.0.0.1";
  std::optional<uint64_t> seed;
  int port = 8080;
  bool all_classes = false;
};

void Emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
  } else {
    WriteTextFile(o.out, text);
  }
}

Date ParseDateFlag(const std::string& text, const char* flag) {
  const std::optional<Date> d = ParseIsoDate(text);
  if (!d) {
    throw Error(
        ErrorCode::kParameter,
        std::string("--") + flag + ": expected YYYY-MM-DD, got '" + text + "'");
  }
  return *d;
}

FeatureRow ParseRowFlag(const std::string& text) {
  std::vector<std::string> cells;
  std::stringstream ss(text);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  if (cells.size() != kNumFeatures) {
    throw Error(ErrorCode::kShape,
                "--row: expected " + std::to_string(kNumFeatures) +
                    " comma-separated values in schema order, got " +
                    std::to_string(cells.size()));
  }
  FeatureRow row{};
  for (int j = 0; j < kNumFeatures; ++j) {
    const std::optional<double> v = ParseFiniteDouble(cells[j]);
    if (!v) {
      throw Error(ErrorCode::kParse,
                  "--row: '" + cells[j] + "' is not a number (" +
                      std::string(FeatureSchema::Canonical().at(j).name) + ")");
    }
    row[j] = *v;
  }
  return row;
}

Json FeatureMapJson(const FeatureRow& values) {
  Json m = Json::object();
  for (int j = 0; j < kNumFeatures; ++j) {
    m[std::string(FeatureSchema::Canonical().at(j).name)] = values[j];
  }
  return m;
}

void Generate(const Options& o, std::ostream& out) {
  const std::vector<CityProfile> profiles =
      o.profiles.empty() ? DefaultCityProfiles() : LoadProfilesJson(o.profiles);
  const Dataset d =
      GenerateSynthetic(profiles, ParseDateFlag(o.start, "start"),
                        ParseDateFlag(o.end, "end"), o.seed.value_or(7));
  Emit(o, out, WriteCsv(d));
}

void Train(const Options& o, std::ostream& out) {
  PipelineConfig config =
      o.config.empty() ? PipelineConfig{} : LoadConfigFile(o.config);
  if (o.seed) config.seed = *o.seed;
  const Dataset data = LoadCsvFile(o.data);
  const PipelineResult r = RunPipeline(data, config);
  const std::string reports_path = o.out + ".reports.json";
  SaveBundle(r.bundle, o.out);
  WriteTextFile(reports_path, Dump(ReportsToJson(r.reports)));
  const Json summary = {{"bundle", o.out},
                        {"reports", reports_path},
                        {"chosen_k", r.reports.k_selection.chosen_k},
                        {"rounds", r.bundle.ensemble.rounds()},
                        {"accuracy", r.reports.evaluation.accuracy},
                        {"macro_f1", r.reports.evaluation.macro_f1},
                        {"sci_histogram", r.reports.sci_histogram}};
  out << Dump(summary);
}

void EvaluateCmd(const Options& o, std::ostream& out) {
  const ModelBundle b = LoadBundle(o.bundle);
  Emit(o, out, Dump(EvalReportToJson(EvaluateDataset(LoadCsvFile(o.data), b))));
}

void Explain(const Options& o, std::ostream& out) {
  const ModelBundle b = LoadBundle(o.bundle);
  const ScenarioResult r =
      EvaluateScenario(b, ParseRowFlag(o.row), o.all_classes);
  Json classes = Json::array();
  for (const ShapAttribution& a : r.shap) {
    double sum = 0;
    for (const double v : a.phi) sum += v;
    classes.push_back({{"class", a.class_id},
                       {"label", b.labeling.class_labels.at(a.class_id)},
                       {"baseline", a.baseline},
                       {"margin", a.margin},
                       {"phi", FeatureMapJson(a.phi)},
                       {"phi_sum", sum}});
  }
  const Json j = {{"scaled", FeatureMapJson(r.scaled)},
                  {"proxy_class", r.proxy_class},
                  {"proxy_label", r.proxy_label},
                  {"probabilities", r.probabilities},
                  {"shap", classes},
                  {"sci", r.sci.sci},
                  {"sci_class", r.sci.label}};
  Emit(o, out, Dump(j));
}

void IndexCmd(const Options& o, std::ostream& out) {
  const ModelBundle b = LoadBundle(o.bundle);
  const Dataset data = LoadCsvFile(o.data);
  const std::vector<SuitabilityResult> sci = IndexRecords(data, b);
  std::string csv = "city,date,sci,sci_class,label\n";
  for (size_t i = 0; i < sci.size(); ++i) {
    const SiteRecord& r = data.records()[i];
    csv += r.city + "," + FormatIsoDate(r.date) + "," +
           FormatDouble(sci[i].sci) + "," + std::to_string(sci[i].sci_class) +
           "," + sci[i].label + "\n";
  }
  Emit(o, out, csv);
}

void Rank(const Options& o, std::ostream& out) {
  const ModelBundle b = LoadBundle(o.bundle);
  Emit(o, out, Dump(RankingToJson(RankSites(LoadCsvFile(o.data), b))));
}

void Eda(const Options& o, std::ostream& out) {
  Emit(o, out, Dump(EdaToJson(ComputeEda(LoadCsvFile(o.data)))));
}

void Serve(const Options& o, std::ostream& out) {
  auto bundle = std::make_shared<const ModelBundle>(LoadBundle(o.bundle));
  HttpServer server(bundle);
  const int port = server.Start(o.host, o.port);
  out << "serving " << o.bundle << " on http://" << o.host << ":" << port
      << std::endl;
  server.Wait();
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app(
      "Green-hydrogen site suitability: proxy labels, boosted trees, "
      "exact Shapley values and a composite index.",
      "hysite");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  Options o;
  uint64_t seed = 0;
  std::vector<CLI::Option*> seed_options;
  auto add_seed = [&](CLI::App* cmd) {
    seed_options.push_back(cmd->add_option("--seed", seed, "RNG seed"));
  };

  CLI::App* generate = app.add_subcommand("generate", "Write a synthetic CSV");
  generate->add_option("--out", o.out, "Output CSV (default: stdout)");
  generate->add_option("--profiles", o.profiles, "City profile JSON");
  generate->add_option("--start", o.start, "First day (YYYY-MM-DD)");
  generate->add_option("--end", o.end, "Last day (YYYY-MM-DD)");
  add_seed(generate);

  CLI::App* train = app.add_subcommand("train", "Run the full pipeline");
  train->add_option("--data", o.data, "Input CSV")->required();
  train->add_option("--config", o.config, "Pipeline config JSON");
  train->add_option("--out", o.out, "Bundle path")->required();
  add_seed(train);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score a CSV against its proxy labels");
  CLI::App* explain =
      app.add_subcommand("explain", "Shapley values for one raw-unit row");
  CLI::App* index = app.add_subcommand("index", "Per-record SCI as CSV");
  CLI::App* rank = app.add_subcommand("rank", "Rank cities by mean SCI");
  for (CLI::App* cmd : {evaluate, explain, index, rank}) {
    cmd->add_option("--bundle", o.bundle, "Model bundle")->required();
    cmd->add_option("--out", o.out, "Output file (default: stdout)");
  }
  for (CLI::App* cmd : {evaluate, index, rank}) {
    cmd->add_option("--data", o.data, "Input CSV")->required();
  }
  explain
      ->add_option("--row", o.row,
                   "Eight comma-separated raw values in schema order")
      ->required();
  explain->add_flag("--all-classes", o.all_classes,
                    "Explain every class, not just the predicted one");

  CLI::App* eda = app.add_subcommand("eda", "Summary statistics of a CSV");
  eda->add_option("--data", o.data, "Input CSV")->required();
  eda->add_option("--out", o.out, "Output file (default: stdout)");

  CLI::App* serve = app.add_subcommand("serve", "Start the HTTP service");
  serve->add_option("--bundle", o.bundle, "Model bundle")->required();
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--port", o.port, "Port (0 picks a free one)")
      ->check(CLI::Range(0, 65535));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  for (const CLI::Option* opt : seed_options) {
    if (opt->count() > 0) o.seed = seed;
  }

  try {
    if (generate->parsed()) Generate(o, out);
    if (train->parsed()) Train(o, out);
    if (evaluate->parsed()) EvaluateCmd(o, out);
    if (explain->parsed()) Explain(o, out);
    if (index->parsed()) IndexCmd(o, out);
    if (rank->parsed()) Rank(o, out);
    if (eda->parsed()) Eda(o, out);
    if (serve->parsed()) Serve(o, out);
  } catch (const Error& e) {
    err << "error (" << ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace hysite
