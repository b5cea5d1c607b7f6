// Copyright 2026 The driftlens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "driftlens/csv.hpp"

#include <fstream>
#include <sstream>

#include "driftlens/error.hpp"

namespace driftlens::csv {

Reader::Reader(std::string data) : data_(std::move(data)) {
  // UTF-8 byte order mark.
  if (data_.rfind("\xEF\xBB\xBF", 0) == 0) pos_ = 3;
}

bool Reader::next(Row& row) {
  row.clear();
  if (pos_ >= data_.size()) return false;
  record_line_ = line_;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  while (pos_ < data_.size()) {
    const char c = data_[pos_];
    if (in_quotes) {
      if (c == '"') {
        if (pos_ + 1 < data_.size() && data_[pos_ + 1] == '"') {
          field += '"';
          pos_ += 2;
          continue;
        }
        in_quotes = false;
        ++pos_;
        continue;
      }
      if (c == '\n') ++line_;
      field += c;
      ++pos_;
      continue;
    }
    if (c == '"' && field.empty() && !field_was_quoted) {
      in_quotes = true;
      field_was_quoted = true;
      ++pos_;
      continue;
    }
    if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
      ++pos_;
      continue;
    }
    if (c == '\r' && pos_ + 1 < data_.size() && data_[pos_ + 1] == '\n') {
      ++pos_;
      continue;
    }
    if (c == '\n') {
      ++line_;
      ++pos_;
      row.push_back(std::move(field));
      return true;
    }
    field += c;
    ++pos_;
  }
  if (in_quotes) {
    throw DataError("unterminated quoted field in record starting at line " +
                    std::to_string(record_line_));
  }
  row.push_back(std::move(field));
  return true;
}

std::vector<Row> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  Reader reader(ss.str());
  std::vector<Row> rows;
  Row row;
  while (reader.next(row)) rows.push_back(row);
  return rows;
}

std::string escape(std::string_view field) {
  const bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos ||
                     (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_row(const Row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += escape(row[i]);
  }
  out += '\n';
  return out;
}

}  // namespace driftlens::csv
