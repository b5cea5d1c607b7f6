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

#include "driftlens/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "driftlens/csv.hpp"
#include "driftlens/error.hpp"

namespace driftlens {

std::string_view label_name(Label l) {
  return l == Label::defective ? "Defective" : "Benign";
}

VersionSet::VersionSet(std::string dataset_name, std::string version_id,
                       std::vector<VersionedFile> files)
    : dataset_name_(std::move(dataset_name)),
      version_id_(std::move(version_id)),
      files_(std::move(files)) {
  std::vector<std::string> dups;
  for (std::size_t i = 0; i < files_.size(); ++i) {
    if (files_[i].path.empty()) {
      throw DataError("version " + version_id_ + ": file #" + std::to_string(i + 1) +
                      " has an empty path");
    }
    if (!index_.emplace(files_[i].path, i).second) dups.push_back(files_[i].path);
  }
  if (!dups.empty()) {
    std::sort(dups.begin(), dups.end());
    dups.erase(std::unique(dups.begin(), dups.end()), dups.end());
    std::string msg = "version " + version_id_ + ": duplicate paths:";
    for (const auto& d : dups) msg += " " + d;
    throw DataError(msg);
  }
}

const VersionedFile* VersionSet::find(std::string_view path) const {
  auto it = index_.find(std::string(path));
  return it == index_.end() ? nullptr : &files_[it->second];
}

double VersionSet::defective_fraction() const {
  if (files_.empty()) return 0.0;
  const auto n = std::count_if(files_.begin(), files_.end(),
                               [](const VersionedFile& f) { return f.label == Label::defective; });
  return static_cast<double>(n) / static_cast<double>(files_.size());
}

namespace {

std::size_t resolve_column(const csv::Row& header, const std::string& wanted,
                           std::string_view default_name, std::string_view fallback,
                           std::string_view origin) {
  auto find = [&](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (text::trim(header[i]) == name) return i;
    }
    return header.size();
  };
  std::size_t idx = find(wanted);
  if (idx == header.size() && wanted == default_name) idx = find(fallback);
  if (idx == header.size()) {
    std::string msg = std::string(origin) + ": missing column '" + wanted + "'";
    if (wanted == default_name) msg += " (also tried '" + std::string(fallback) + "')";
    throw ConfigError(msg);
  }
  return idx;
}

// Bug counts may be integers or decimals ("2", "0.0"); booleans are accepted too.
std::optional<Label> parse_bug_value(std::string_view raw) {
  const auto v = text::trim(raw);
  if (v.empty()) return std::nullopt;
  const auto lower = text::to_lower(v);
  if (lower == "true" || lower == "yes" || lower == "defective" || lower == "buggy") {
    return Label::defective;
  }
  if (lower == "false" || lower == "no" || lower == "benign" || lower == "clean") {
    return Label::benign;
  }
  double value = 0;
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value) || value < 0) {
    return std::nullopt;
  }
  return value > 0 ? Label::defective : Label::benign;
}

}  // namespace

VersionSet parse_version(std::string csv_text, const ColumnSpec& columns,
                         std::string dataset_name, std::string version_id,
                         std::string_view origin) {
  csv::Reader reader(std::move(csv_text));
  csv::Row header;
  if (!reader.next(header)) throw DataError(std::string(origin) + ": empty CSV");
  const std::size_t path_col = resolve_column(header, columns.path, kDefaultPathColumn, "File", origin);
  const std::size_t label_col = resolve_column(header, columns.label, kDefaultLabelColumn, "Bug", origin);
  const std::size_t src_col = resolve_column(header, columns.source, kDefaultSourceColumn, "SRC", origin);
  const std::size_t needed = std::max({path_col, label_col, src_col}) + 1;

  std::vector<VersionedFile> files;
  csv::Row row;
  std::size_t row_number = 0;
  while (reader.next(row)) {
    ++row_number;
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    if (row.size() < needed) {
      throw DataError(std::string(origin) + ": row " + std::to_string(row_number) +
                      " (line " + std::to_string(reader.record_line()) + ") has " +
                      std::to_string(row.size()) + " fields, expected at least " +
                      std::to_string(needed));
    }
    auto label = parse_bug_value(row[label_col]);
    if (!label) {
      throw DataError(std::string(origin) + ": row " + std::to_string(row_number) +
                      ": unparseable label '" + row[label_col] + "'");
    }
    VersionedFile f;
    f.path = text::sanitize_utf8(row[path_col]);
    f.source = text::sanitize_utf8(row[src_col]);
    f.label = *label;
    f.version_id = version_id;
    files.push_back(std::move(f));
  }
  if (files.empty()) throw DataError(std::string(origin) + ": no data rows");
  return VersionSet(std::move(dataset_name), std::move(version_id), std::move(files));
}

VersionSet load_version(const std::string& csv_path, const ColumnSpec& columns,
                        std::string dataset_name, std::optional<std::string> version_id) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw ConfigError("cannot open dataset file " + csv_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string vid = version_id ? *version_id : std::filesystem::path(csv_path).stem().string();
  return parse_version(ss.str(), columns, std::move(dataset_name), std::move(vid), csv_path);
}

std::string serialize_version(const VersionSet& set) {
  std::string out = csv::format_row({"name", "bug", "src"});
  for (const auto& f : set.files()) {
    out += csv::format_row({f.path, std::to_string(to_int(f.label)), f.source});
  }
  return out;
}

void save_version(const VersionSet& set, const std::string& csv_path) {
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + csv_path);
  out << serialize_version(set);
}

}  // namespace driftlens
