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

#include <random>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "hysite/error.h"
#include "oracles/calendar.h"
#include "test_support.h"

namespace hysite {
namespace {

using testing::MakeDate;

Dataset Parse(const std::string& text) {
  std::istringstream in(text);
  return LoadCsv(in);
}

ErrorCode CodeOf(const std::string& text) {
  try {
    Parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ErrorCode::kIo;
}

std::string MessageOf(const std::string& text) {
  try {
    Parse(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

const std::string kHeader = std::string(kCsvHeader) + "\n";

TEST(IsoDate, ParsesAndFormats) {
  const auto d = ParseIsoDate("2024-02-29");
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(FormatIsoDate(*d), "2024-02-29");
  EXPECT_FALSE(ParseIsoDate("2023-02-29").has_value());
  EXPECT_FALSE(ParseIsoDate("2023-13-01").has_value());
  EXPECT_FALSE(ParseIsoDate("2023-1-01").has_value());
  EXPECT_FALSE(ParseIsoDate("2023/01/01").has_value());
  EXPECT_FALSE(ParseIsoDate("").has_value());
}

TEST(IsoDate, AgreesWithIndependentDayCount) {
  // Walk 2019..2025 one day at a time and compare successive sys_days.
  const auto first = std::chrono::sys_days{MakeDate(2019, 1, 1)};
  for (int y = 2019; y <= 2025; ++y) {
    for (unsigned m = 1; m <= 12; ++m) {
      const unsigned last = oracle::DaysInMonth(y, static_cast<int>(m));
      const Date d = MakeDate(y, m, last);
      ASSERT_TRUE(d.ok());
      EXPECT_FALSE(MakeDate(y, m, last + 1).ok());
      const long expected = oracle::InclusiveDayCount(
          2019, 1, 1, y, static_cast<int>(m), static_cast<int>(last));
      EXPECT_EQ((std::chrono::sys_days{d} - first).count() + 1, expected);
    }
  }
}

TEST(LoadCsv, ThreeRowsSorted) {
  const Dataset d = Parse(kHeader +
                          "Sur,2023-01-02,5.5,25,3,0.3,50,0.5,10,1\n"
                          "Muscat,2023-01-01,5.1,24,2,0.2,50,1,15,1\n"
                          "Sur,2023-01-01,5.0,24,3.5,0.31,50,0.5,10,1\n");
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d.records()[0].city, "Muscat");
  EXPECT_EQ(d.records()[1].city, "Sur");
  EXPECT_EQ(FormatIsoDate(d.records()[1].date), "2023-01-01");
  EXPECT_EQ(FormatIsoDate(d.records()[2].date), "2023-01-02");
  EXPECT_DOUBLE_EQ(d.records()[2].solar_irradiance, 5.5);
}

TEST(LoadCsv, HeaderErrorNamesColumn) {
  std::string header = kHeader;
  header.replace(header.find("aod"), 3, "AOD");
  EXPECT_EQ(CodeOf(header), ErrorCode::kSchema);
  EXPECT_NE(MessageOf(header).find("'AOD'"), std::string::npos);
  EXPECT_EQ(CodeOf("city,date\n"), ErrorCode::kSchema);
  EXPECT_NE(MessageOf("city,date\n").find("solar_irradiance"),
            std::string::npos);
  EXPECT_EQ(CodeOf(""), ErrorCode::kSchema);
}

TEST(LoadCsv, NonNumericCellReportsLine) {
  const std::string text = kHeader +
                           "Sur,2023-01-01,5.0,24,3.5,0.31,50,0.5,10,1\n"
                           "Sur,2023-01-02,abc,24,3.5,0.31,50,0.5,10,1\n";
  EXPECT_EQ(CodeOf(text), ErrorCode::kParse);
  const std::string msg = MessageOf(text);
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("solar_irradiance"), std::string::npos) << msg;
}

TEST(LoadCsv, RejectsBadCells) {
  const std::string ok = "Sur,2023-01-01,5.0,24,3.5,0.31,50,0.5,10,1\n";
  EXPECT_EQ(CodeOf(kHeader + "Sur,2023-01-01,5.0,24,3.5,0.31,50,0.5,10,2\n"),
            ErrorCode::kParse);  // month disagrees with date
  EXPECT_EQ(CodeOf(kHeader + "Sur,2023-01-01,-1,24,3.5,0.31,50,0.5,10,1\n"),
            ErrorCode::kParse);
  EXPECT_EQ(CodeOf(kHeader + "Sur,2023-01-01,5.0,24,3.5,0.31,5.5,0.5,10,1\n"),
            ErrorCode::kParse);
  EXPECT_EQ(CodeOf(kHeader + "Sur,2023-01-01,5.0,24,3.5,0.31,50,0.5\n"),
            ErrorCode::kParse);
  EXPECT_EQ(CodeOf(kHeader + "Sur,2023-02-30,5.0,24,3.5,0.31,50,0.5,10,2\n"),
            ErrorCode::kParse);
  EXPECT_EQ(CodeOf(kHeader + "Sur,2023-01-01,nan,24,3.5,0.31,50,0.5,10,1\n"),
            ErrorCode::kParse);
  EXPECT_EQ(CodeOf(kHeader + ok + ok), ErrorCode::kDuplicateKey);
}

TEST(LoadCsv, EmptyAodIsMissing) {
  const Dataset d = Parse(kHeader + "Sur,2023-01-01,5.0,24,3.5,,50,0.5,10,1\n");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_FALSE(d.records()[0].aod.has_value());
  EXPECT_TRUE(d.HasMissingAod());
  EXPECT_THROW(d.records()[0].Features(), Error);
}

TEST(LoadCsv, ToleratesCrlfBomAndQuotes) {
  const Dataset d = Parse("\xEF\xBB\xBF" + std::string(kCsvHeader) +
                          "\r\n\"Ras, Al \"\"Hadd\"\"\",2023-01-01,5,24,3,0.3,"
                          "50,0.5,10,1\r\n\r\n");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.records()[0].city, "Ras, Al \"Hadd\"");
  const Dataset again = Parse(WriteCsv(d));
  EXPECT_EQ(again, d);
}

TEST(WriteCsv, EmptyAndSingle) {
  EXPECT_EQ(WriteCsv(Dataset{}), kHeader);
  const Dataset one = Dataset::FromRecords({testing::MakeRecord(
      "Sur", MakeDate(2023, 1, 1), {5, 24, 3, 0.3, 50, 0.5, 10, 1})});
  const std::string text = WriteCsv(one);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(WriteCsv, RoundTripsRandomDatasets) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SiteRecord> records;
    const int n = 1 + trial * 3;
    for (int i = 0; i < n; ++i) {
      SiteRecord r = testing::MakeRecord(
          "City" + std::to_string(i % 4),
          MakeDate(2020, 1 + i % 12, 1 + i / 12),
          {std::abs(u(rng)), u(rng), std::abs(u(rng)), std::abs(u(rng)) * 1e-3,
           50, std::abs(u(rng)), u(rng), 1});
      if (i % 5 == 0) r.aod.reset();
      records.push_back(r);
    }
    const Dataset d = Dataset::FromRecords(records);
    EXPECT_EQ(Parse(WriteCsv(d)), d);
  }
}

TEST(Dataset, DuplicateKeyAndCities) {
  const SiteRecord a = testing::MakeRecord("A", MakeDate(2023, 1, 1), {});
  EXPECT_THROW(
      {
        try {
          Dataset::FromRecords({a, a});
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::kDuplicateKey);
          throw;
        }
      },
      Error);
  const SiteRecord b = testing::MakeRecord("B", MakeDate(2023, 1, 1), {});
  EXPECT_EQ(Dataset::FromRecords({b, a}).Cities(),
            (std::vector<std::string>{"A", "B"}));
}

TEST(LoadCsvFile, MissingFileIsIoError) {
  try {
    LoadCsvFile("/nonexistent/data.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/data.csv"),
              std::string::npos);
  }
}

}  // namespace
}  // namespace hysite
