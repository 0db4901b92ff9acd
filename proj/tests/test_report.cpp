/*
   Copyright 2026 The idcf Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <gtest/gtest.h>

#include <sstream>

#include "idcf/csv.hpp"
#include "idcf/refdist.hpp"
#include "idcf/report.hpp"

namespace idcf {
namespace {

std::vector<double> read(const std::string& text, std::size_t column = 1) {
  std::istringstream in(text);
  return read_numeric_column(in, column);
}

std::string error_of(const std::string& text, std::size_t column = 1) {
  try {
    read(text, column);
  } catch (const data_error& e) {
    return e.what();
  }
  return "";
}

TEST(Report, JsonRoundTrip) {
  TestConfig cfg;
  cfg.bootstrap_B = 99;
  cfg.statistics = {Statistic::t3, Statistic::t4, Statistic::tmom};
  cfg.m_hypothesis = 2;
  cfg.r_order = 0.75;
  const auto rep = run_test(sample(make_dist("triangular"), 300, 3), cfg);
  const std::string text = report_to_json(rep);
  const auto back = report_from_json(text);
  EXPECT_EQ(back, rep);
  EXPECT_EQ(report_to_json(back), text);
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j.at("schema"), 1);
  EXPECT_EQ(j.at("config").at("seed"), 42);
}

TEST(Report, RoundTripWithoutMHypothesis) {
  TestConfig cfg;
  cfg.bootstrap_B = 99;
  const auto rep = run_test(sample(make_dist("gaussian"), 100, 3), cfg);
  const auto back = report_from_json(report_to_json(rep));
  EXPECT_EQ(back, rep);
  EXPECT_FALSE(back.reject_m_divisible.has_value());
}

TEST(Report, RejectsUnknownSchema) {
  TestConfig cfg;
  cfg.bootstrap_B = 99;
  auto j = nlohmann::json::parse(report_to_json(run_test(sample(make_dist("gaussian"), 50, 1), cfg)));
  j["schema"] = 2;
  EXPECT_ANY_THROW(report_from_json(j.dump()));
}

TEST(Report, CsvHasOneRowPerStatistic) {
  TestConfig cfg;
  cfg.bootstrap_B = 99;
  const auto rep = run_test(sample(make_dist("gaussian"), 100, 3), cfg);
  std::ostringstream os;
  write_report_csv(os, rep);
  const std::string s = os.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 3);
  EXPECT_EQ(s.rfind("statistic,observed,p_value", 0), 0u);
}

TEST(Report, ShortestDoubleFormatting) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, HeaderAndDelimiters) {
  EXPECT_EQ(read("x\n1\n2.5\n-3\n"), (std::vector<double>{1, 2.5, -3}));
  EXPECT_EQ(read("1\n2\n"), (std::vector<double>{1, 2}));
  EXPECT_EQ(read("a,b\n1,10\n2,20\n", 2), (std::vector<double>{10, 20}));
  EXPECT_EQ(read("1 10\n2\t20\n", 2), (std::vector<double>{10, 20}));
  EXPECT_EQ(read("\"v\"\n\"1.5\"\n2\n"), (std::vector<double>{1.5, 2}));
  EXPECT_EQ(read("1\r\n\n2\r\n"), (std::vector<double>{1, 2}));
}

TEST(Csv, Diagnostics) {
  EXPECT_EQ(error_of("x\n1\nabc\n"), "row 3: non-numeric value 'abc' in column 1");
  EXPECT_EQ(error_of("1,2\n3\n"), "row 2: expected 2 field(s), found 1");
  EXPECT_NE(error_of("1\nnan\n").find("row 2"), std::string::npos);
  EXPECT_NE(error_of("1,2\n", 3).find("column 3"), std::string::npos);
  EXPECT_TRUE(read("").empty());
  EXPECT_TRUE(read("value\n").empty());
}

}  // namespace
}  // namespace idcf
