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

#include "hysite/service.h"

#include <cmath>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "httplib.h"
#include "hysite/bundle_io.h"
#include "hysite/error.h"

namespace hysite {

namespace {

// A client error carried to the reply.
struct RequestError {
  int status;
  std::string code;
  std::string message;
  std::string field;
};

HttpReply ErrorReply(const RequestError& e) {
  Json err = {{"code", e.code}, {"message", e.message}};
  if (!e.field.empty()) err["field"] = e.field;
  return {e.status, Dump(Json{{"error", err}})};
}

HttpReply Ok(const Json& body) { return {200, Dump(body)}; }

Json ParseBody(std::string_view body) {
  try {
    return Json::parse(body.begin(), body.end());
  } catch (const Json::parse_error& e) {
    throw RequestError{
        400, "malformed_json",
        "request body is not valid JSON (byte " + std::to_string(e.byte) + ")",
        ""};
  }
}

Json FeatureMap(const FeatureRow& values) {
  Json m = Json::object();
  for (int j = 0; j < kNumFeatures; ++j) {
    m[std::string(FeatureSchema::Canonical().at(j).name)] = values[j];
  }
  return m;
}

bool NonNegativeFeature(int j) {
  return j == Index(Feature::kSolarIrradiance) ||
         j == Index(Feature::kWindSpeed) || j == Index(Feature::kAod) ||
         j == Index(Feature::kWaterProximity);
}

bool IntegerFeature(int j) {
  return j == Index(Feature::kLandCoverClass) || j == Index(Feature::kMonth);
}

// Value of one feature, or nullopt for an explicit null when allowed.
std::optional<double> ReadFeature(const Json& obj, int j, bool allow_null,
                                  const std::string& where) {
  const std::string name(FeatureSchema::Canonical().at(j).name);
  const std::string field = where + name;
  const auto it = obj.find(name);
  if (it == obj.end()) {
    throw RequestError{400, "missing_field",
                       "missing required field '" + field + "'", field};
  }
  if (it->is_null() && allow_null) return std::nullopt;
  if (!it->is_number()) {
    throw RequestError{400, "invalid_field",
                       "field '" + field + "' must be a number", field};
  }
  const double v = it->get<double>();
  if (!std::isfinite(v)) {
    throw RequestError{400, "invalid_field",
                       "field '" + field + "' must be finite", field};
  }
  if (NonNegativeFeature(j) && v < 0) {
    throw RequestError{400, "invalid_field",
                       "field '" + field + "' must be >= 0", field};
  }
  if (IntegerFeature(j) && v != std::floor(v)) {
    throw RequestError{400, "invalid_field",
                       "field '" + field + "' must be an integer", field};
  }
  if (j == Index(Feature::kMonth) && (v < 1 || v > 12)) {
    throw RequestError{400, "invalid_field",
                       "field '" + field + "' must be in 1..12", field};
  }
  return v;
}

void RejectUnknownKeys(const Json& obj, const std::vector<std::string>& extra,
                       const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (FeatureSchema::Canonical().IndexOf(key)) continue;
    bool known = false;
    for (const std::string& e : extra) known = known || key == e;
    if (!known) {
      throw RequestError{400, "unknown_field",
                         "unknown field '" + where + key + "'", where + key};
    }
  }
}

FeatureRow ParseScenario(std::string_view body) {
  const Json j = ParseBody(body);
  if (!j.is_object()) {
    throw RequestError{400, "invalid_body", "expected a JSON object", ""};
  }
  RejectUnknownKeys(j, {}, "");
  FeatureRow row{};
  for (int f = 0; f < kNumFeatures; ++f) row[f] = *ReadFeature(j, f, false, "");
  return row;
}

Dataset ParseRankRecords(const Json& records) {
  if (!records.is_array()) {
    throw RequestError{400, "invalid_field", "'records' must be an array",
                       "records"};
  }
  std::vector<SiteRecord> out;
  for (size_t i = 0; i < records.size(); ++i) {
    const std::string where = "records[" + std::to_string(i) + "].";
    const Json& r = records[i];
    if (!r.is_object()) {
      const std::string item = "records[" + std::to_string(i) + "]";
      throw RequestError{400, "invalid_field",
                         "'" + item + "' must be an object", item};
    }
    RejectUnknownKeys(r, {"city", "date"}, where);
    SiteRecord rec;
    const auto city = r.find("city");
    if (city == r.end() || !city->is_string() ||
        city->get<std::string>().empty()) {
      throw RequestError{400,
                         city == r.end() ? "missing_field" : "invalid_field",
                         "field '" + where + "city' must be a non-empty string",
                         where + "city"};
    }
    rec.city = city->get<std::string>();
    const auto date = r.find("date");
    std::optional<Date> d;
    if (date != r.end() && date->is_string()) {
      d = ParseIsoDate(date->get<std::string>());
    }
    if (!d) {
      throw RequestError{400,
                         date == r.end() ? "missing_field" : "invalid_field",
                         "field '" + where + "date' must be a YYYY-MM-DD date",
                         where + "date"};
    }
    rec.date = *d;
    FeatureRow v{};
    for (int f = 0; f < kNumFeatures; ++f) {
      const bool is_aod = f == Index(Feature::kAod);
      const std::optional<double> x = ReadFeature(r, f, is_aod, where);
      if (is_aod) {
        rec.aod = x;
      } else {
        v[f] = *x;
      }
    }
    rec.solar_irradiance = v[Index(Feature::kSolarIrradiance)];
    rec.temperature = v[Index(Feature::kTemperature)];
    rec.wind_speed = v[Index(Feature::kWindSpeed)];
    rec.land_cover_class = static_cast<int>(v[Index(Feature::kLandCoverClass)]);
    rec.water_proximity = v[Index(Feature::kWaterProximity)];
    rec.elevation = v[Index(Feature::kElevation)];
    rec.month = static_cast<int>(v[Index(Feature::kMonth)]);
    if (rec.month != static_cast<int>(unsigned(rec.date.month()))) {
      throw RequestError{400, "invalid_field",
                         "field '" + where + "month' disagrees with the date",
                         where + "month"};
    }
    out.push_back(std::move(rec));
  }
  return Dataset::FromRecords(std::move(out));
}

// Library errors raised while handling a request are the client's fault
// unless they concern the bundle itself.
template <typename F>
HttpReply Handle(F&& fn) {
  try {
    return fn();
  } catch (const RequestError& e) {
    return ErrorReply(e);
  } catch (const Error& e) {
    return ErrorReply(
        {422, std::string(ErrorCodeName(e.code())), e.what(), ""});
  } catch (const std::exception& e) {
    return ErrorReply({500, "internal", e.what(), ""});
  }
}

}  // namespace

ScenarioService::ScenarioService(std::shared_ptr<const ModelBundle> bundle)
    : bundle_(std::move(bundle)) {
  if (!bundle_) throw Error(ErrorCode::kStartup, "no bundle to serve");
}

HttpReply ScenarioService::Scenario(std::string_view body,
                                    bool all_classes) const {
  return Handle([&] {
    const ModelBundle& b = *bundle_;
    const ScenarioResult r = EvaluateScenario(b, ParseScenario(body), true);
    const ShapAttribution& top = r.shap[r.proxy_class];
    Json out;
    out["proxy_class"] = r.proxy_class;
    out["proxy_label"] = r.proxy_label;
    out["probabilities"] = r.probabilities;
    out["shap"] = FeatureMap(top.phi);
    out["shap_baseline"] = top.baseline;
    out["margin"] = top.margin;
    out["sci"] = r.sci.sci;
    out["sci_class"] = r.sci.label;
    out["sci_class_id"] = r.sci.sci_class;
    out["contributions"] = FeatureMap(r.sci.contributions);
    out["weight_mode"] = WeightModeName(r.sci.mode);
    if (all_classes) {
      Json all = Json::array();
      for (const ShapAttribution& a : r.shap) {
        all.push_back({{"class", a.class_id},
                       {"label", b.labeling.class_labels.at(a.class_id)},
                       {"shap", FeatureMap(a.phi)},
                       {"baseline", a.baseline},
                       {"margin", a.margin}});
      }
      out["shap_all"] = all;
    }
    return Ok(out);
  });
}

HttpReply ScenarioService::Importance() const {
  return Handle([&] { return Ok(ImportanceToJson(bundle_->importance)); });
}

HttpReply ScenarioService::Meta() const {
  return Handle([&] {
    const ModelBundle& b = *bundle_;
    Json features = Json::array();
    for (int j = 0; j < kNumFeatures; ++j) {
      const FeatureDescriptor& f = FeatureSchema::Canonical().at(j);
      features.push_back({{"name", f.name},
                          {"unit", f.unit},
                          {"direction", DirectionName(f.direction)},
                          {"kind", FeatureKindName(f.kind)},
                          {"min", b.scaler.min[j]},
                          {"max", b.scaler.max[j]}});
    }
    Json out;
    out["format_version"] = b.format_version;
    out["config"] = ConfigToJson(b.metadata.config);
    out["dataset_fingerprint"] = b.metadata.dataset_fingerprint;
    out["record_count"] = b.metadata.record_count;
    out["cities"] = b.metadata.cities;
    out["data_start"] = b.metadata.data_start;
    out["data_end"] = b.metadata.data_end;
    out["thresholds"] =
        std::vector<double>(b.thresholds.cuts.begin(), b.thresholds.cuts.end());
    out["sci_labels"] = kSuitabilityLabels;
    out["weight_mode"] = WeightModeName(b.weights.mode);
    out["weights"] = FeatureMap(b.weights.values);
    out["n_classes"] = b.n_classes();
    out["class_labels"] = b.labeling.class_labels;
    out["features"] = features;
    return Ok(out);
  });
}

HttpReply ScenarioService::Rank(std::string_view body) const {
  return Handle([&] {
    const Json j = ParseBody(body);
    if (!j.is_object() || (j.contains("records") == j.contains("csv"))) {
      throw RequestError{400, "invalid_body",
                         "expected an object with either 'records' or 'csv'",
                         ""};
    }
    Dataset data;
    if (j.contains("records")) {
      data = ParseRankRecords(j["records"]);
    } else {
      if (!j["csv"].is_string()) {
        throw RequestError{400, "invalid_field", "'csv' must be a string",
                           "csv"};
      }
      std::istringstream in(j["csv"].get<std::string>());
      try {
        data = LoadCsv(in);
      } catch (const Error& e) {
        throw RequestError{400, std::string(ErrorCodeName(e.code())), e.what(),
                           "csv"};
      }
    }
    if (data.empty()) {
      throw RequestError{400, "empty_input", "no records to rank", ""};
    }
    return Ok(RankingToJson(RankSites(data, *bundle_)));
  });
}

HttpReply ScenarioService::Health() const { return Ok(Json{{"status", "ok"}}); }

struct HttpServer::Impl {
  explicit Impl(std::shared_ptr<const ModelBundle> bundle)
      : service(std::move(bundle)) {}

  ScenarioService service;
  httplib::Server server;
  std::thread thread;
};

namespace {

void Reply(httplib::Response& res, const HttpReply& reply) {
  res.status = reply.status;
  res.set_content(reply.body, "application/json");
}

bool FlagSet(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return false;
  const std::string v = req.get_param_value(name);
  return v.empty() || v == "1" || v == "true";
}

}  // namespace

HttpServer::HttpServer(std::shared_ptr<const ModelBundle> bundle)
    : impl_(std::make_unique<Impl>(std::move(bundle))) {
  const ScenarioService& s = impl_->service;
  httplib::Server& srv = impl_->server;
  // httplib defaults to SO_REUSEPORT, which lets a second server share the
  // port silently. Restarts still rebind through SO_REUSEADDR.
  srv.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR,
               reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  srv.Post("/v1/scenario",
           [&s](const httplib::Request& req, httplib::Response& res) {
             Reply(res, s.Scenario(req.body, FlagSet(req, "all_classes")));
           });
  srv.Get("/v1/importance",
          [&s](const httplib::Request&, httplib::Response& res) {
            Reply(res, s.Importance());
          });
  srv.Get("/v1/model/meta",
          [&s](const httplib::Request&, httplib::Response& res) {
            Reply(res, s.Meta());
          });
  srv.Post("/v1/rank",
           [&s](const httplib::Request& req, httplib::Response& res) {
             Reply(res, s.Rank(req.body));
           });
  srv.Get("/v1/health", [&s](const httplib::Request&, httplib::Response& res) {
    Reply(res, s.Health());
  });
  // The dashboard is served from another origin during development.
  srv.set_post_routing_handler(
      [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
      });
  srv.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  srv.set_error_handler(
      [](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        const std::string code = res.status == 404 ? "not_found" : "http_error";
        res.set_content(Dump(Json{{"error",
                                   {{"code", code},
                                    {"message", "no route for " + req.method +
                                                    " " + req.path}}}}),
                        "application/json");
      });
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Start(const std::string& host, int port) {
  httplib::Server& srv = impl_->server;
  int bound = port;
  if (port == 0) {
    bound = srv.bind_to_any_port(host);
  } else if (!srv.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw Error(ErrorCode::kStartup,
                "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([&srv] { srv.listen_after_bind(); });
  srv.wait_until_ready();
  return bound;
}

void HttpServer::Wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

void HttpServer::Stop() {
  if (!impl_) return;
  impl_->server.stop();
  Wait();
}

}  // namespace hysite
