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
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace driftlens {

struct DiffLine {
  std::size_t line = 0;  // 1-based, in the old file for removals, new file for additions
  std::string text;
  bool operator==(const DiffLine&) const = default;
  auto operator<=>(const DiffLine&) const = default;
};

struct ChangeSet {
  std::vector<DiffLine> added;
  std::vector<DiffLine> removed;
  std::string unified;
  std::set<std::size_t> changed_new_lines;

  bool empty() const { return added.empty() && removed.empty(); }
};

struct DiffOptions {
  std::size_t context_lines = 3;
  std::string old_path = "file";
  std::string new_path = "file";
};

// Minimal (Myers) line diff of the raw '\n'-separated lines, rendered as a
// git-style unified diff with `a/`, `b/` headers. Identical inputs produce
// an empty ChangeSet and empty `unified`.
ChangeSet diff(std::string_view old_source, std::string_view new_source,
               const DiffOptions& options = {});

// "- <n>: <text>" for removals and "+ <n>: <text>" for additions, ordered
// by line number with removals first on ties, one entry per line.
std::string render_difference_list(const ChangeSet& cs);

struct Hunk {
  std::size_t old_start = 0, old_count = 0;
  std::size_t new_start = 0, new_count = 0;
  // Each entry keeps its ' ', '-' or '+' prefix.
  std::vector<std::string> lines;
  // Parallel to `lines`: a "\\ No newline at end of file" marker follows.
  std::vector<bool> no_newline;
};

struct ParsedPatch {
  std::string old_path;
  std::string new_path;
  std::vector<Hunk> hunks;
};

// Parses the output of diff(). Throws DataError on malformed hunks.
ParsedPatch parse_unified(std::string_view unified);

// Applies a parsed patch to `old_source`, checking every context and
// removal line. Throws DataError on mismatch.
std::string apply_patch(std::string_view old_source, const ParsedPatch& patch);

}  // namespace driftlens
