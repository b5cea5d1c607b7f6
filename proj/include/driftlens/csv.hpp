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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace driftlens::csv {

using Row = std::vector<std::string>;

// RFC 4180 reader: quoted fields may hold separators, doubled quotes and
// line breaks. CRLF and LF record terminators are both accepted; a CR
// inside a quoted field is kept.
class Reader {
 public:
  explicit Reader(std::string data);

  // Returns false at end of input. Throws DataError on an unterminated
  // quoted field.
  bool next(Row& row);

  // 1-based physical line on which the last returned record started.
  std::size_t record_line() const { return record_line_; }

 private:
  std::string data_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

std::vector<Row> read_file(const std::string& path);

std::string escape(std::string_view field);
std::string format_row(const Row& row);

}  // namespace driftlens::csv
