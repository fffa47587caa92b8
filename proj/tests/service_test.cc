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

#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "fixture.h"
#include "gtest/gtest.h"
#include "httplib.h"
#include "hysite/bundle_io.h"
#include "hysite/error.h"

namespace hysite {
namespace {

std::shared_ptr<const ModelBundle> SharedBundle() {
  static const auto b =
      std::make_shared<const ModelBundle>(testing::SmallPipeline().bundle);
  return b;
}

Json ScenarioBody() {
  return {{"solar_irradiance", 6.1}, {"temperature", 31.0},
          {"wind_speed", 4.2},       {"aod", 0.35},
          {"land_cover_class", 60},  {"water_proximity", 2.5},
          {"elevation", 15.0},       {"month", 7}};
}

Json Body(const HttpReply& r) { return Json::parse(r.body); }

class ServiceTest : public ::testing::Test {
 protected:
  ScenarioService service_{SharedBundle()};
};

TEST_F(ServiceTest, ScenarioMatchesLibrary) {
  const HttpReply r = service_.Scenario(ScenarioBody().dump(), false);
  ASSERT_EQ(r.status, 200) << r.body;
  const Json j = Body(r);
  const ScenarioResult expected = EvaluateScenario(
      *SharedBundle(), {6.1, 31.0, 4.2, 0.35, 60, 2.5, 15.0, 7});
  EXPECT_EQ(j["proxy_class"], expected.proxy_class);
  EXPECT_EQ(j["proxy_label"], expected.proxy_label);
  EXPECT_EQ(j["sci"].get<double>(), expected.sci.sci);
  EXPECT_EQ(j["sci_class"], expected.sci.label);
  EXPECT_EQ(j["sci_class_id"], expected.sci.sci_class);
  EXPECT_EQ(j["shap"].size(), 8u);
  EXPECT_EQ(j["contributions"].size(), 8u);
  EXPECT_EQ(j["weight_mode"], "raw");
  double sum = 0;
  for (const auto& [name, v] : j["shap"].items()) sum += v.get<double>();
  EXPECT_NEAR(sum, j["margin"].get<double>() - j["shap_baseline"].get<double>(),
              1e-9);
  EXPECT_FALSE(j.contains("shap_all"));

  const Json all = Body(service_.Scenario(ScenarioBody().dump(), true));
  EXPECT_EQ(all["shap_all"].size(),
            static_cast<size_t>(SharedBundle()->n_classes()));
}

TEST_F(ServiceTest, ScenarioValidation) {
  auto error = [&](const Json& body) {
    const HttpReply r = service_.Scenario(body.dump(), false);
    EXPECT_EQ(r.status, 400) << r.body;
    return Body(r)["error"];
  };
  Json body = ScenarioBody();
  body.erase("elevation");
  Json e = error(body);
  EXPECT_EQ(e["code"], "missing_field");
  EXPECT_EQ(e["field"], "elevation");
  EXPECT_NE(e["message"].get<std::string>().find("elevation"),
            std::string::npos);

  body = ScenarioBody();
  body["wind_speed"] = -1;
  EXPECT_EQ(error(body)["field"], "wind_speed");
  body = ScenarioBody();
  body["month"] = 13;
  EXPECT_EQ(error(body)["code"], "invalid_field");
  body = ScenarioBody();
  body["land_cover_class"] = 1.5;
  EXPECT_EQ(error(body)["field"], "land_cover_class");
  body = ScenarioBody();
  body["aod"] = "high";
  EXPECT_EQ(error(body)["field"], "aod");
  body = ScenarioBody();
  body["colour"] = 1;
  EXPECT_EQ(error(body)["code"], "unknown_field");
  EXPECT_EQ(error(Json::array())["code"], "invalid_body");

  const HttpReply bad = service_.Scenario("{not json", false);
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(Body(bad)["error"]["code"], "malformed_json");
}

TEST_F(ServiceTest, ImportanceIsSorted) {
  const HttpReply r = service_.Importance();
  ASSERT_EQ(r.status, 200);
  const Json f = Body(r)["features"];
  ASSERT_EQ(f.size(), 8u);
  for (size_t i = 1; i < f.size(); ++i) {
    EXPECT_GE(f[i - 1]["mean_abs_shap"].get<double>(),
              f[i]["mean_abs_shap"].get<double>());
  }
}

TEST_F(ServiceTest, MetaDescribesModel) {
  const Json j = Body(service_.Meta());
  EXPECT_EQ(j["format_version"], kBundleFormatVersion);
  EXPECT_EQ(j["dataset_fingerprint"],
            SharedBundle()->metadata.dataset_fingerprint);
  EXPECT_EQ(j["features"].size(), 8u);
  EXPECT_EQ(j["features"][0]["name"], "solar_irradiance");
  EXPECT_EQ(j["features"][5]["direction"], "cost");
  EXPECT_EQ(j["sci_labels"].size(), 5u);
  EXPECT_EQ(j["thresholds"].size(), 4u);
  EXPECT_EQ(j["n_classes"], SharedBundle()->n_classes());
  EXPECT_EQ(ParseConfig(j["config"].dump()).k_max, 5);
}

TEST_F(ServiceTest, RankAcceptsRecordsAndCsv) {
  const Dataset& d = testing::SmallDataset();
  const Json from_csv = Body(service_.Rank(Json{{"csv", WriteCsv(d)}}.dump()));
  ASSERT_TRUE(from_csv.contains("cities")) << from_csv.dump();
  EXPECT_EQ(from_csv["cities"].size(), 4u);
  const std::vector<CityRanking> expected = RankSites(d, *SharedBundle());
  EXPECT_EQ(from_csv["cities"][0]["city"], expected[0].city);

  Json records = Json::array();
  for (size_t i = 0; i < 6; ++i) {
    const SiteRecord& r = d.records()[i];
    Json rec = ScenarioBody();
    rec["city"] = r.city;
    rec["date"] = FormatIsoDate(r.date);
    rec["month"] = r.month;
    rec["aod"] = i == 2 ? Json(nullptr) : Json(0.3);
    records.push_back(rec);
  }
  const HttpReply ok = service_.Rank(Json{{"records", records}}.dump());
  ASSERT_EQ(ok.status, 200) << ok.body;
  EXPECT_EQ(Body(ok)["cities"][0]["records"], 6);

  records[1]["month"] = 9;
  const HttpReply wrong_month =
      service_.Rank(Json{{"records", records}}.dump());
  EXPECT_EQ(wrong_month.status, 400);
  EXPECT_EQ(Body(wrong_month)["error"]["field"], "records[1].month");

  const HttpReply bad_csv =
      service_.Rank(Json{{"csv", "city,date\nx,2023-01-01\n"}}.dump());
  EXPECT_EQ(bad_csv.status, 400);
  EXPECT_EQ(service_.Rank(R"({"records": []})").status, 400);
  EXPECT_EQ(service_.Rank(R"({"records": [], "csv": ""})").status, 400);
}

TEST_F(ServiceTest, Health) {
  EXPECT_EQ(Body(service_.Health())["status"], "ok");
}

class HttpTest : public ::testing::Test {
 protected:
  void SetUp() override {
    server_ = std::make_unique<HttpServer>(SharedBundle());
    port_ = server_->Start("127.0.0.1", 0);
  }
  void TearDown() override { server_->Stop(); }

  httplib::Client Client() const { return httplib::Client("127.0.0.1", port_); }

  std::unique_ptr<HttpServer> server_;
  int port_ = 0;
};

TEST_F(HttpTest, RoutesAndErrors) {
  httplib::Client c = Client();
  auto health = c.Get("/v1/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(health->get_header_value("Access-Control-Allow-Origin"), "*");

  auto scenario = c.Post("/v1/scenario?all_classes=true", ScenarioBody().dump(),
                         "application/json");
  ASSERT_TRUE(scenario);
  EXPECT_EQ(scenario->status, 200);
  EXPECT_TRUE(Json::parse(scenario->body).contains("shap_all"));

  Json missing = ScenarioBody();
  missing.erase("elevation");
  auto bad = c.Post("/v1/scenario", missing.dump(), "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  EXPECT_EQ(Json::parse(bad->body)["error"]["field"], "elevation");

  auto meta = c.Get("/v1/model/meta");
  ASSERT_TRUE(meta);
  EXPECT_EQ(meta->status, 200);
  auto importance = c.Get("/v1/importance");
  ASSERT_TRUE(importance);
  EXPECT_EQ(importance->status, 200);

  auto missing_route = c.Get("/v1/nothing");
  ASSERT_TRUE(missing_route);
  EXPECT_EQ(missing_route->status, 404);
  EXPECT_EQ(Json::parse(missing_route->body)["error"]["code"], "not_found");
}

TEST_F(HttpTest, ConcurrentRequestsAgree) {
  const std::string body = ScenarioBody().dump();
  const std::string expected =
      ScenarioService(SharedBundle()).Scenario(body, false).body;
  std::vector<std::string> replies(8);
  std::vector<std::thread> threads;
  for (size_t i = 0; i < replies.size(); ++i) {
    threads.emplace_back([&, i] {
      httplib::Client c = Client();
      for (int n = 0; n < 5; ++n) {
        auto r = c.Post("/v1/scenario", body, "application/json");
        replies[i] = r ? r->body : "";
        if (replies[i] != expected) return;
      }
    });
  }
  for (std::thread& t : threads) t.join();
  for (const std::string& r : replies) EXPECT_EQ(r, expected);
}

TEST(HttpServerStartup, PortInUseIsStartupError) {
  HttpServer first(SharedBundle());
  const int port = first.Start("127.0.0.1", 0);
  HttpServer second(SharedBundle());
  try {
    second.Start("127.0.0.1", port);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStartup);
  }
  first.Stop();
}

}  // namespace
}  // namespace hysite
