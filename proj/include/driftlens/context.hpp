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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "driftlens/diffing.hpp"

namespace driftlens {

struct MethodSpan {
  std::string name;
  std::string signature;  // first line of the declaration
  std::size_t start_line = 0;
  std::size_t end_line = 0;
  std::string body;  // source lines [start_line, end_line]
  std::size_t name_offset = 0;
  // Offset of the opening brace in the source; calls are searched after it.
  std::size_t body_offset = 0;
  std::size_t end_offset = 0;
};

// Replaces comments and string/char/text-block literal contents with
// spaces. Newlines and byte offsets are preserved.
std::string mask_java(std::string_view source);

// Heuristic Java method finder: modifiers/type tokens, an identifier and a
// parenthesized parameter list followed by a brace body. Never throws;
// malformed input yields fewer spans. Spans are in source order.
std::vector<MethodSpan> extract_methods(std::string_view source);

// Same-file, name-based call graph. Overloads share one node, so node
// identifiers are method names in order of first declaration.
class CallGraph {
 public:
  CallGraph() = default;
  CallGraph(std::vector<std::string> nodes,
            std::vector<std::pair<std::size_t, std::size_t>> edges);

  const std::vector<std::string>& nodes() const { return nodes_; }
  // Sorted, unique caller -> callee index pairs.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  const std::vector<std::size_t>& callees(std::size_t n) const { return callees_[n]; }
  const std::vector<std::size_t>& callers(std::size_t n) const { return callers_[n]; }

  std::size_t index_of(std::string_view name) const;  // npos when absent
  bool has_edge(std::string_view caller, std::string_view callee) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::string> nodes_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> callees_;
  std::vector<std::vector<std::size_t>> callers_;
};

// Edge m -> n when `n(` (optionally with spaces) appears as a whole word in
// the masked body of m. `source` must be the text the spans came from.
CallGraph build_call_graph(const std::vector<MethodSpan>& methods,
                           std::string_view source);

struct ContextBundle {
  std::string snippet;
  std::vector<std::string> included_methods;  // whose text survived truncation
  std::vector<std::string> visited_methods;   // full traversal, discovery order
  bool truncated = false;
  std::size_t depth_used = 0;
  std::size_t line_budget = 0;
};

inline constexpr std::size_t kDefaultContextDepth = 3;
inline constexpr std::size_t kDefaultMaxLines = 400;
inline constexpr std::size_t kBestMaxLines = 600;
inline constexpr std::size_t kRawWindowRadius = 3;

// Seeds with methods overlapping the changed new-file lines, expands over
// callers and callees one wave per depth unit, and concatenates signature
// plus body of every visited method, truncated to `max_lines` lines.
ContextBundle extract_context(const ChangeSet& cs, std::string_view source,
                              std::size_t depth = kDefaultContextDepth,
                              std::size_t max_lines = kDefaultMaxLines);

}  // namespace driftlens
