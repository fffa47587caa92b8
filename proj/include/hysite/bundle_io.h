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

// JSON persistence for configs, bundles and reports.
//
// Documents are canonical: object keys sorted, two-space indentation, doubles
// in their shortest round-trip form. Loading is strict; a structural problem
// raises kSchema with the JSON path of the offending value, and a bundle whose
// format_version is not understood raises kUnsupportedVersion.

#ifndef HYSITE_BUNDLE_IO_H_
#define HYSITE_BUNDLE_IO_H_

#include <string>
#include <string_view>

#include "hysite/pipeline.h"
#include "json.hpp"

namespace hysite {

using Json = nlohmann::json;

Json ConfigToJson(const PipelineConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
PipelineConfig ConfigFromJson(const Json& json);
PipelineConfig ParseConfig(std::string_view text);
// Throws kIo naming the path when it cannot be read.
PipelineConfig LoadConfigFile(const std::string& path);

Json BundleToJson(const ModelBundle& bundle);
ModelBundle BundleFromJson(const Json& json);
std::string SerializeBundle(const ModelBundle& bundle);
ModelBundle ParseBundle(std::string_view text);
void SaveBundle(const ModelBundle& bundle, const std::string& path);
ModelBundle LoadBundle(const std::string& path);

Json ReportsToJson(const PipelineReports& reports);
Json EvalReportToJson(const EvalReport& report);
Json ImportanceToJson(const ImportanceTable& table);
Json RankingToJson(const std::vector<CityRanking>& ranking);
Json EdaToJson(const EdaSummary& eda);

// Canonical text of any document.
std::string Dump(const Json& json);

// Whole-file helpers; both throw kIo naming the path.
std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, std::string_view contents);

}  // namespace hysite

#endif  // HYSITE_BUNDLE_IO_H_
