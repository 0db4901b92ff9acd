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

#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "idcf/idtest.hpp"

namespace idcf {

/// Shortest decimal string that parses back to the same double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline void to_json(nlohmann::json& j, const TestConfig& c) {
  std::vector<std::string> stats;
  for (auto s : c.statistics) stats.emplace_back(to_string(s));
  j = nlohmann::json{{"grid_max", c.grid_max},
                     {"grid_points", c.grid_points},
                     {"statistics", stats},
                     {"r", c.r_order},
                     {"B", c.bootstrap_B},
                     {"alpha", c.alpha},
                     {"seed", c.seed},
                     {"m", c.m_hypothesis ? nlohmann::json(*c.m_hypothesis) : nlohmann::json()},
                     {"symmetric", c.symmetric},
                     {"max_pairs", c.max_pairs},
                     {"support_radius", c.support_radius ? nlohmann::json(*c.support_radius)
                                                         : nlohmann::json()}};
}

inline void from_json(const nlohmann::json& j, TestConfig& c) {
  c.grid_max = j.at("grid_max").get<double>();
  c.grid_points = j.at("grid_points").get<std::size_t>();
  c.statistics.clear();
  for (const auto& s : j.at("statistics")) c.statistics.push_back(parse_statistic(s.get<std::string>()));
  c.r_order = j.at("r").get<double>();
  c.bootstrap_B = j.at("B").get<int>();
  c.alpha = j.at("alpha").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.m_hypothesis.reset();
  if (!j.at("m").is_null()) c.m_hypothesis = j.at("m").get<int>();
  c.symmetric = j.at("symmetric").get<bool>();
  c.max_pairs = j.at("max_pairs").get<std::size_t>();
  c.support_radius.reset();
  if (!j.at("support_radius").is_null()) c.support_radius = j.at("support_radius").get<double>();
}

inline void to_json(nlohmann::json& j, const StatisticResult& s) {
  j = nlohmann::json{{"name", s.name},
                     {"observed", s.observed},
                     {"p_value", s.p_value},
                     {"adjusted_p_value", s.adjusted_p_value},
                     {"critical_value", s.critical_value},
                     {"level", s.level},
                     {"argmax_t", s.argmax_t},
                     {"extras", s.extras},
                     {"diagnostics", {{"t", s.t}, {"deficits", s.deficits}}}};
}

inline void from_json(const nlohmann::json& j, StatisticResult& s) {
  s.name = j.at("name").get<std::string>();
  s.observed = j.at("observed").get<double>();
  s.p_value = j.at("p_value").get<double>();
  s.adjusted_p_value = j.at("adjusted_p_value").get<double>();
  s.critical_value = j.at("critical_value").get<double>();
  s.level = j.at("level").get<double>();
  s.argmax_t = j.at("argmax_t").get<double>();
  s.extras = j.at("extras").get<std::map<std::string, double>>();
  s.t = j.at("diagnostics").at("t").get<std::vector<double>>();
  s.deficits = j.at("diagnostics").at("deficits").get<std::vector<double>>();
}

inline void to_json(nlohmann::json& j, const TestReport& r) {
  j = nlohmann::json{
      {"schema", r.schema},
      {"config", r.config},
      {"n", r.n},
      {"sigma2_hat", r.sigma2_hat},
      {"grid", {{"t_max", r.grid_max}, {"size", r.grid_size}}},
      {"statistics", r.statistics},
      {"decision", to_string(r.decision)},
      {"conclusion", r.conclusion},
      {"reject_m_divisible",
       r.reject_m_divisible ? nlohmann::json(*r.reject_m_divisible) : nlohmann::json()},
      {"warnings", r.warnings}};
}

inline void from_json(const nlohmann::json& j, TestReport& r) {
  r.schema = j.at("schema").get<int>();
  if (r.schema != 1) throw invalid_argument("unsupported report schema");
  r.config = j.at("config").get<TestConfig>();
  r.n = j.at("n").get<std::size_t>();
  r.sigma2_hat = j.at("sigma2_hat").get<double>();
  r.grid_max = j.at("grid").at("t_max").get<double>();
  r.grid_size = j.at("grid").at("size").get<std::size_t>();
  r.statistics = j.at("statistics").get<std::vector<StatisticResult>>();
  const auto d = j.at("decision").get<std::string>();
  if (d == "REJECT_ID") {
    r.decision = Decision::reject_id;
  } else if (d == "NO_EVIDENCE_AGAINST_ID") {
    r.decision = Decision::no_evidence_against_id;
  } else {
    throw invalid_argument("unknown decision '" + d + "'");
  }
  r.conclusion = j.at("conclusion").get<std::string>();
  r.reject_m_divisible.reset();
  if (!j.at("reject_m_divisible").is_null()) {
    r.reject_m_divisible = j.at("reject_m_divisible").get<bool>();
  }
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
}

inline std::string report_to_json(const TestReport& r, int indent = 2) {
  return nlohmann::json(r).dump(indent) + "\n";
}

inline TestReport report_from_json(const std::string& text) {
  return nlohmann::json::parse(text).get<TestReport>();
}

/// One row per statistic.
inline void write_report_csv(std::ostream& os, const TestReport& r) {
  os << "statistic,observed,p_value,adjusted_p_value,critical_value,level,argmax_t,decision\n";
  for (const auto& s : r.statistics) {
    os << s.name << ',' << format_double(s.observed) << ',' << format_double(s.p_value) << ','
       << format_double(s.adjusted_p_value) << ',' << format_double(s.critical_value) << ','
       << format_double(s.level) << ',' << format_double(s.argmax_t) << ','
       << to_string(r.decision) << '\n';
  }
}

inline void write_power_csv(std::ostream& os, const std::vector<PowerRow>& rows) {
  os << "dist,n,statistic,reps,rejections,rate,se\n";
  for (const auto& r : rows) {
    os << r.dist << ',' << r.n << ',' << r.statistic << ',' << r.reps << ',' << r.rejections
       << ',' << format_double(r.rate) << ',' << format_double(r.se) << '\n';
  }
}

inline nlohmann::json power_to_json(const std::vector<PowerRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"dist", r.dist},
                   {"n", r.n},
                   {"statistic", r.statistic},
                   {"reps", r.reps},
                   {"rejections", r.rejections},
                   {"rate", r.rate},
                   {"se", r.se}});
  }
  return nlohmann::json{{"schema", 1}, {"rows", arr}};
}

}  // namespace idcf
