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
#include <cstddef>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace idcf {

/// Malformed input data. `row` is the 1-based physical line number.
class data_error : public std::runtime_error {
 public:
  data_error(std::size_t row, const std::string& what)
      : std::runtime_error(row > 0 ? "row " + std::to_string(row) + ": " + what : what),
        row_(row) {}
  [[nodiscard]] std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

/// Splits on commas, honoring double quotes ("" escapes a quote).
inline std::vector<std::string> split_comma(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.emplace_back(trim(cur));
  return out;
}

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<double> parse_number(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = trim(s.substr(1, s.size() - 2));
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Reads one numeric column (1-based `column`) from comma- or
/// whitespace-delimited text. The delimiter is fixed by the first non-blank
/// line, which is taken as a header when any of its fields is non-numeric.
/// Every row must have the same number of fields; blank lines are skipped.
inline std::vector<double> read_numeric_column(std::istream& in, std::size_t column = 1) {
  if (column < 1) throw data_error(0, "column numbers start at 1");
  std::vector<double> values;
  std::string line;
  std::size_t row = 0;
  std::optional<bool> comma;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++row;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    if (!comma) comma = body.find(',') != std::string_view::npos;
    const auto fields = *comma ? detail::split_comma(body) : detail::split_ws(body);
    if (first) {
      first = false;
      width = fields.size();
      if (column > width) {
        throw data_error(row, "column " + std::to_string(column) + " requested but rows have " +
                                  std::to_string(width) + " field(s)");
      }
      bool header = false;
      for (const auto& f : fields) header |= !detail::parse_number(f).has_value();
      if (header) continue;
    } else if (fields.size() != width) {
      throw data_error(row, "expected " + std::to_string(width) + " field(s), found " +
                                std::to_string(fields.size()));
    }
    const auto& cell = fields[column - 1];
    const auto v = detail::parse_number(cell);
    if (!v) throw data_error(row, "non-numeric value '" + cell + "' in column " + std::to_string(column));
    if (!std::isfinite(*v)) throw data_error(row, "non-finite value '" + cell + "'");
    values.push_back(*v);
  }
  if (in.bad()) throw data_error(0, "read error");
  return values;
}

}  // namespace idcf
