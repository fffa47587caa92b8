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

#include "hysite/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hysite/error.h"
#include "hysite/numeric_text.h"

namespace hysite {

namespace {

constexpr int kNumColumns = 10;

std::vector<std::string_view> HeaderColumns() {
  std::vector<std::string_view> out;
  std::string_view rest = kCsvHeader;
  while (true) {
    const size_t comma = rest.find(',');
    out.push_back(rest.substr(0, comma));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

// RFC 4180 field split for one line. Quoted fields may contain commas and
// doubled quotes; embedded newlines are not supported.
std::vector<std::string> SplitCsvLine(std::string_view line, int line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool in_quotes = false;
  bool was_quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"' && current.empty() && !was_quoted) {
      in_quotes = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
      was_quoted = false;
    } else {
      current.push_back(c);
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line_no) + ": unterminated quote");
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string QuoteIfNeeded(const std::string& text) {
  if (text.find_first_of(",\"") == std::string::npos) return text;
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

[[noreturn]] void CellError(int line_no, std::string_view column,
                            std::string_view value, std::string_view what) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                     ": column '" + std::string(column) +
                                     "': " + std::string(what) + " '" +
                                     std::string(value) + "'");
}

double ParseNumberCell(std::string_view cell, int line_no,
                       std::string_view column, bool non_negative) {
  const std::optional<double> v = ParseFiniteDouble(cell);
  if (!v) CellError(line_no, column, cell, "non-numeric value");
  if (non_negative && *v < 0)
    CellError(line_no, column, cell, "negative value");
  return *v;
}

int ParseIntCell(std::string_view cell, int line_no, std::string_view column) {
  int value = 0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    CellError(line_no, column, cell, "non-integer value");
  }
  return value;
}

}  // namespace

std::optional<Date> ParseIsoDate(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    return std::nullopt;
  }
  auto parse = [&](size_t pos, size_t len) -> std::optional<int> {
    int v = 0;
    const char* b = text.data() + pos;
    const auto [ptr, ec] = std::from_chars(b, b + len, v);
    if (ec != std::errc() || ptr != b + len) return std::nullopt;
    return v;
  };
  const auto y = parse(0, 4);
  const auto m = parse(5, 2);
  const auto d = parse(8, 2);
  if (!y || !m || !d) return std::nullopt;
  const Date date{std::chrono::year{*y},
                  std::chrono::month{static_cast<unsigned>(*m)},
                  std::chrono::day{static_cast<unsigned>(*d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string FormatIsoDate(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(date.year()),
                unsigned(date.month()), unsigned(date.day()));
  return buf;
}

FeatureRow SiteRecord::Features() const {
  if (!aod) {
    throw Error(
        ErrorCode::kParameter,
        "record " + city + " " + FormatIsoDate(date) + " has missing aod");
  }
  return {solar_irradiance,
          temperature,
          wind_speed,
          *aod,
          static_cast<double>(land_cover_class),
          water_proximity,
          elevation,
          static_cast<double>(month)};
}

Dataset Dataset::FromRecords(std::vector<SiteRecord> records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const SiteRecord& a, const SiteRecord& b) {
                     return std::tie(a.city, a.date) < std::tie(b.city, b.date);
                   });
  for (size_t i = 1; i < records.size(); ++i) {
    if (records[i].city == records[i - 1].city &&
        records[i].date == records[i - 1].date) {
      throw Error(ErrorCode::kDuplicateKey,
                  "duplicate record for (" + records[i].city + ", " +
                      FormatIsoDate(records[i].date) + ")");
    }
  }
  Dataset out;
  out.records_ = std::move(records);
  return out;
}

std::vector<std::string> Dataset::Cities() const {
  std::vector<std::string> cities;
  for (const SiteRecord& r : records_) {
    if (cities.empty() || cities.back() != r.city) cities.push_back(r.city);
  }
  return cities;
}

bool Dataset::HasMissingAod() const {
  return std::any_of(records_.begin(), records_.end(),
                     [](const SiteRecord& r) { return !r.aod.has_value(); });
}

Dataset LoadCsv(std::istream& source) {
  const std::vector<std::string_view> expected = HeaderColumns();
  std::string line;
  int line_no = 0;
  if (!std::getline(source, line)) {
    throw Error(ErrorCode::kSchema, "missing header row");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  // Tolerate a UTF-8 byte order mark.
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const std::vector<std::string> header = SplitCsvLine(line, line_no);
  for (size_t i = 0; i < std::max(header.size(), expected.size()); ++i) {
    if (i >= header.size()) {
      throw Error(ErrorCode::kSchema, "header is missing column '" +
                                          std::string(expected[i]) + "'");
    }
    if (i >= expected.size() || header[i] != expected[i]) {
      throw Error(ErrorCode::kSchema, "unexpected header column '" + header[i] +
                                          "' at position " +
                                          std::to_string(i + 1));
    }
  }

  std::vector<SiteRecord> records;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = SplitCsvLine(line, line_no);
    if (cells.size() != kNumColumns) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(kNumColumns) + " fields, got " +
                      std::to_string(cells.size()));
    }
    SiteRecord r;
    r.city = cells[0];
    if (r.city.empty()) CellError(line_no, "city", cells[0], "empty value");
    const std::optional<Date> date = ParseIsoDate(cells[1]);
    if (!date) CellError(line_no, "date", cells[1], "invalid date");
    r.date = *date;
    r.solar_irradiance =
        ParseNumberCell(cells[2], line_no, "solar_irradiance", true);
    r.temperature = ParseNumberCell(cells[3], line_no, "temperature", false);
    r.wind_speed = ParseNumberCell(cells[4], line_no, "wind_speed", true);
    if (!cells[5].empty()) {
      r.aod = ParseNumberCell(cells[5], line_no, "aod", true);
    }
    r.land_cover_class = ParseIntCell(cells[6], line_no, "land_cover_class");
    r.water_proximity =
        ParseNumberCell(cells[7], line_no, "water_proximity", true);
    r.elevation = ParseNumberCell(cells[8], line_no, "elevation", false);
    r.month = ParseIntCell(cells[9], line_no, "month");
    if (r.month != static_cast<int>(unsigned(r.date.month()))) {
      CellError(line_no, "month", cells[9], "month disagrees with date");
    }
    records.push_back(std::move(r));
  }
  return Dataset::FromRecords(std::move(records));
}

Dataset LoadCsvFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  try {
    return LoadCsv(in);
  } catch (const Error& e) {
    throw e.WithContext(path);
  }
}

std::string WriteCsv(const Dataset& dataset) {
  std::string out(kCsvHeader);
  out.push_back('\n');
  for (const SiteRecord& r : dataset.records()) {
    out += QuoteIfNeeded(r.city);
    out.push_back(',');
    out += FormatIsoDate(r.date);
    out.push_back(',');
    out += FormatDouble(r.solar_irradiance);
    out.push_back(',');
    out += FormatDouble(r.temperature);
    out.push_back(',');
    out += FormatDouble(r.wind_speed);
    out.push_back(',');
    if (r.aod) out += FormatDouble(*r.aod);
    out.push_back(',');
    out += std::to_string(r.land_cover_class);
    out.push_back(',');
    out += FormatDouble(r.water_proximity);
    out.push_back(',');
    out += FormatDouble(r.elevation);
    out.push_back(',');
    out += std::to_string(r.month);
    out.push_back('\n');
  }
  return out;
}

}  // namespace hysite
