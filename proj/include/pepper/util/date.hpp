// Copyright 2026 The pepper Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "pepper/util/error.hpp"

namespace pepper {

// Calendar date without time zone. Stored as y/m/d; ordering is chronological.
struct Date {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  auto operator<=>(const Date&) const = default;

  std::chrono::year_month_day ymd() const {
    return std::chrono::year{year} / std::chrono::month{month} / std::chrono::day{day};
  }

  // Days since 1970-01-01.
  long days_since_epoch() const {
    return std::chrono::sys_days{ymd()}.time_since_epoch().count();
  }

  static Date from_days(long days) {
    std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
    return {int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day())};
  }

  // Calendar quarter 1..4.
  int quarter() const { return int((month - 1) / 3) + 1; }

  // Quarters elapsed since year 0, Q1; differences give quarter distances.
  long quarter_index() const { return long(year) * 4 + (quarter() - 1); }

  std::string str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
    return buf;
  }
};

// Parses strict YYYY-MM-DD. Returns nullopt for anything else, including
// impossible dates such as 2019-02-30.
inline std::optional<Date> parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto digits = [&](size_t pos, size_t n) -> std::optional<int> {
    int v = 0;
    for (size_t i = pos; i < pos + n; ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  auto y = digits(0, 4), m = digits(5, 2), d = digits(8, 2);
  if (!y || !m || !d) return std::nullopt;
  Date out{*y, unsigned(*m), unsigned(*d)};
  if (!out.ymd().ok()) return std::nullopt;
  return out;
}

inline Date parse_date_or_throw(std::string_view s) {
  auto d = parse_date(s);
  if (!d) throw ValidationError("invalid date '" + std::string(s) + "' (expected YYYY-MM-DD)");
  return *d;
}

// Label for a calendar quarter, e.g. "2018Q3".
inline std::string quarter_label(long quarter_index) {
  long y = quarter_index / 4;
  long q = quarter_index % 4 + 1;
  return std::to_string(y) + "Q" + std::to_string(q);
}

}  // namespace pepper
