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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "driftlens/text.hpp"

namespace driftlens {

enum class Label : int { benign = 0, defective = 1 };

inline int to_int(Label l) { return static_cast<int>(l); }
inline Label label_from_int(int v) { return v > 0 ? Label::defective : Label::benign; }
// "Defective" / "Benign", the spelling used in prompts and reports.
std::string_view label_name(Label l);

struct VersionedFile {
  std::string path;
  std::string source;
  Label label = Label::benign;
  std::string version_id;
};

// One project version. Paths are unique; lookups are case-sensitive.
class VersionSet {
 public:
  VersionSet() = default;
  VersionSet(std::string dataset_name, std::string version_id,
             std::vector<VersionedFile> files);

  const std::string& dataset_name() const { return dataset_name_; }
  const std::string& version_id() const { return version_id_; }
  const std::vector<VersionedFile>& files() const { return files_; }
  std::size_t size() const { return files_.size(); }

  const VersionedFile* find(std::string_view path) const;
  double defective_fraction() const;

 private:
  std::string dataset_name_;
  std::string version_id_;
  std::vector<VersionedFile> files_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Column names for a PROMISE-style CSV. When a column is left at its
// default, the capitalized PROMISE spelling (File/Bug/SRC) is tried as a
// fallback.
struct ColumnSpec {
  std::string path = "name";
  std::string label = "bug";
  std::string source = "src";
};

inline constexpr std::string_view kDefaultPathColumn = "name";
inline constexpr std::string_view kDefaultLabelColumn = "bug";
inline constexpr std::string_view kDefaultSourceColumn = "src";

// Loads one CSV snapshot. Bug counts > 0 become defective. `version_id`
// defaults to the file stem.
VersionSet load_version(const std::string& csv_path,
                        const ColumnSpec& columns = {},
                        std::string dataset_name = {},
                        std::optional<std::string> version_id = std::nullopt);

// Parses CSV text already in memory. `origin` only feeds error messages.
VersionSet parse_version(std::string csv_text, const ColumnSpec& columns,
                         std::string dataset_name, std::string version_id,
                         std::string_view origin = "<memory>");

// Writes `name,bug,src` CSV that load_version reads back unchanged.
void save_version(const VersionSet& set, const std::string& csv_path);
std::string serialize_version(const VersionSet& set);

using text::normalize_lines;

}  // namespace driftlens
