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

// JSON-over-HTTP scenario service.
//
//   POST /v1/scenario[?all_classes=true]  raw-unit features -> prediction,
//                                         Shapley values and SCI
//   GET  /v1/importance                   mean |SHAP| table, descending
//   GET  /v1/model/meta                   version, config, scaler ranges
//   POST /v1/rank                         records (JSON or CSV) -> cities
//   GET  /v1/health                       {"status":"ok"}
//
// Handlers only read the bundle. Client mistakes come back as 4xx with
// {"error":{"code":..., "message":..., "field":...}}.

#ifndef HYSITE_SERVICE_H_
#define HYSITE_SERVICE_H_

#include <memory>
#include <string>
#include <string_view>

#include "hysite/pipeline.h"

namespace hysite {

struct HttpReply {
  int status = 200;
  std::string body;  // JSON
};

// Transport-free handlers; the HTTP server is a thin shell around these.
class ScenarioService {
 public:
  explicit ScenarioService(std::shared_ptr<const ModelBundle> bundle);

  HttpReply Scenario(std::string_view body, bool all_classes) const;
  HttpReply Importance() const;
  HttpReply Meta() const;
  HttpReply Rank(std::string_view body) const;
  HttpReply Health() const;

  const ModelBundle& bundle() const { return *bundle_; }

 private:
  std::shared_ptr<const ModelBundle> bundle_;
};

class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<const ModelBundle> bundle);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and starts serving on a background thread. Port 0 picks a free
  // port. Returns the bound port; throws kStartup when binding fails.
  int Start(const std::string& host, int port);
  // Blocks until Stop() is called from another thread.
  void Wait();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hysite

#endif  // HYSITE_SERVICE_H_
