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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "driftlens/corpus.hpp"

namespace driftlens {

struct MatchParams {
  double threshold = 0.7;       // minimum best similarity
  double gap_multiplier = 1.0;  // c in mu_g + c * sigma_g

  // Throws ConfigError when threshold is outside [0, 1] or the multiplier
  // is negative.
  void validate() const;
};

enum class MatchKind { path, similarity, none };

enum class Subset { B00, B10, D01, D11, unchanged_source, added };

std::string_view to_string(MatchKind k);
std::string_view to_string(Subset s);
std::optional<MatchKind> parse_match_kind(std::string_view s);
std::optional<Subset> parse_subset(std::string_view s);

// Subset code for a changed-source common file: first letter from the new
// label (B/D), digits (old, new).
Subset transition_subset(Label old_label, Label new_label);
bool is_transition(Subset s);

struct FileMatch {
  std::string new_path;
  std::optional<std::string> old_path;
  MatchKind kind = MatchKind::none;
  std::optional<double> similarity;
};

// Dice overlap of the distinct normalized lines (trailing whitespace
// trimmed, indentation kept). Two empty files score 1.
double dice_similarity(const VersionedFile& old_file,
                       const VersionedFile& new_file);
double dice_similarity(std::string_view old_source,
                       std::string_view new_source);

// Exact-path matches first, then the similarity-gap rule against old files
// that were not path-matched, with one-to-one assignment resolved greedily
// by descending similarity. Result follows new_set order.
std::vector<FileMatch> match_files(const VersionSet& old_set,
                                   const VersionSet& new_set,
                                   const MatchParams& params = {});

// Decision rule on an already-computed score list (any order). Returns the
// index of the accepted candidate. Exposed for the property suites.
std::optional<std::size_t> accept_best(const std::vector<double>& scores,
                                       const MatchParams& params);

struct EvolutionRecord {
  VersionedFile new_file;
  std::optional<VersionedFile> old_file;
  MatchKind match_kind = MatchKind::none;
  Subset subset = Subset::added;
  std::optional<double> similarity;

  const std::string& id() const { return new_file.path; }
  bool changed_source() const { return is_transition(subset); }
};

// Cell values for the file-evolution table. `union_basis` divides by
// removed + added + common (cells sum to 100); `new_version_basis` divides
// by the new-version file count, which is the usual layout of PROMISE
// partition tables (cells then sum to 100 + pct_removed).
struct PartitionPercentages {
  double removed = 0, added = 0, same_source = 0;
  double B00 = 0, B10 = 0, D11 = 0, D01 = 0;
  double sum() const { return removed + added + same_source + B00 + B10 + D11 + D01; }
};

struct PartitionStats {
  std::size_t removed = 0, added = 0, same_source = 0;
  std::size_t B00 = 0, B10 = 0, D11 = 0, D01 = 0;

  std::size_t common() const { return same_source + B00 + B10 + D11 + D01; }
  std::size_t events() const { return removed + added + common(); }
  PartitionPercentages union_basis() const;
  PartitionPercentages new_version_basis() const;
};

struct Partition {
  std::vector<EvolutionRecord> records;  // one per new-version file
  std::vector<std::string> removed_paths;
  PartitionStats stats;
};

Partition partition(const VersionSet& old_set, const VersionSet& new_set,
                    const std::vector<FileMatch>& matches);

// Aligned text rendering of one partition row (R, A, d=0, B00, B10, D11,
// D01), matching the column order of the evolution table.
std::string format_partition_table(std::string_view dataset,
                                   const PartitionPercentages& pct);

}  // namespace driftlens
