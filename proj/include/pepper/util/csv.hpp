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

// Minimal RFC 4180 CSV reading and writing: quoted fields may hold commas,
// quotes ("" escape) and newlines.

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pepper/util/error.hpp"
#include "pepper/util/strings.hpp"

namespace pepper::csv {

using Row = std::vector<std::string>;

struct Record {
  Row fields;
  size_t line = 0;  // 1-based line where the record starts
};

inline std::vector<Record> parse(std::string_view text) {
  std::vector<Record> out;
  Record cur;
  std::string field;
  bool in_quotes = false, field_started = false;
  size_t line = 1;
  cur.line = 1;
  auto end_field = [&] {
    cur.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(cur.fields.size() == 1 && cur.fields[0].empty())) out.push_back(std::move(cur));
    cur = Record{};
    cur.line = line;
  };
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started) throw ValidationError("csv line " + std::to_string(line) + ": stray quote");
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) throw ValidationError("csv: unterminated quoted field");
  if (field_started || !cur.fields.empty()) end_record();
  return out;
}

inline std::string quote(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_row(std::ostream& os, const Row& row) {
  for (size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    os << quote(row[i]);
  }
  os << '\n';
}

// A parsed file with a header row; columns are looked up by name.
class Table {
 public:
  static Table parse(std::string_view text) {
    Table t;
    auto records = csv::parse(text);
    if (records.empty()) throw ValidationError("csv: missing header row");
    t.header_ = records.front().fields;
    for (size_t i = 0; i < t.header_.size(); ++i) t.index_[std::string(str::trim(t.header_[i]))] = i;
    t.rows_.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
    return t;
  }

  static Table load(const std::string& path) { return parse(str::read_file(path)); }

  bool has(const std::string& column) const { return index_.count(column) != 0; }

  size_t column(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ValidationError("csv: missing column '" + name + "'");
    return it->second;
  }

  const std::vector<Record>& rows() const { return rows_; }
  const Row& header() const { return header_; }

 private:
  Row header_;
  std::map<std::string, size_t> index_;
  std::vector<Record> rows_;
};

}  // namespace pepper::csv
