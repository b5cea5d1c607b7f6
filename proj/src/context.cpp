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

#include "driftlens/context.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "driftlens/text.hpp"

namespace driftlens {

std::string mask_java(std::string_view source) {
  std::string out(source);
  enum class State { code, line_comment, block_comment, string, chr, text_block };
  State st = State::code;
  const std::size_t n = source.size();
  auto blank = [&](std::size_t i) {
    if (out[i] != '\n' && out[i] != '\r') out[i] = ' ';
  };
  for (std::size_t i = 0; i < n; ++i) {
    const char c = source[i];
    switch (st) {
      case State::code:
        if (c == '/' && i + 1 < n && source[i + 1] == '/') {
          st = State::line_comment;
          blank(i);
        } else if (c == '/' && i + 1 < n && source[i + 1] == '*') {
          st = State::block_comment;
          blank(i);
          blank(++i);
        } else if (c == '"' && source.substr(i, 3) == "\"\"\"") {
          st = State::text_block;
          i += 2;
        } else if (c == '"') {
          st = State::string;
        } else if (c == '\'') {
          st = State::chr;
        }
        break;
      case State::line_comment:
        if (c == '\n') {
          st = State::code;
        } else {
          blank(i);
        }
        break;
      case State::block_comment:
        if (c == '*' && i + 1 < n && source[i + 1] == '/') {
          blank(i);
          blank(++i);
          st = State::code;
        } else {
          blank(i);
        }
        break;
      case State::string:
      case State::chr: {
        const char quote = st == State::string ? '"' : '\'';
        if (c == '\\' && i + 1 < n) {
          blank(i);
          blank(++i);
        } else if (c == quote) {
          st = State::code;
        } else if (c == '\n') {
          st = State::code;  // unterminated literal; recover at end of line
        } else {
          blank(i);
        }
        break;
      }
      case State::text_block:
        if (c == '\\' && i + 1 < n) {
          blank(i);
          blank(++i);
        } else if (c == '"' && source.substr(i, 3) == "\"\"\"") {
          i += 2;
          st = State::code;
        } else {
          blank(i);
        }
        break;
    }
  }
  return out;
}

namespace {

const std::unordered_set<std::string_view>& control_keywords() {
  static const std::unordered_set<std::string_view> k = {
      "if", "for", "while", "switch", "catch", "synchronized", "return", "new", "else",
      "try", "do", "throw", "case", "assert", "super", "this", "finally", "yield"};
  return k;
}

const std::unordered_set<std::string_view>& non_method_prefix_tokens() {
  static const std::unordered_set<std::string_view> k = {
      "new", "return", "throw", "else", "case", "class", "interface", "enum", "record",
      "if", "for", "while", "switch", "catch", "do", "try", "assert", "import", "package"};
  return k;
}

// Blanks annotations (with balanced argument lists) inside `h`.
void strip_annotations(std::string& h) {
  std::size_t i = 0;
  while ((i = h.find('@', i)) != std::string::npos) {
    std::size_t j = i + 1;
    while (j < h.size() && (text::is_ident_char(h[j]) || h[j] == '.')) ++j;
    if (j == i + 1) {
      ++i;
      continue;
    }
    std::size_t k = j;
    while (k < h.size() && (h[k] == ' ' || h[k] == '\t' || h[k] == '\n' || h[k] == '\r')) ++k;
    if (k < h.size() && h[k] == '(') {
      int depth = 0;
      for (; k < h.size(); ++k) {
        if (h[k] == '(') ++depth;
        if (h[k] == ')' && --depth == 0) break;
      }
      j = k < h.size() ? k + 1 : h.size();
    }
    for (std::size_t p = i; p < j; ++p) {
      if (h[p] != '\n') h[p] = ' ';
    }
    i = j;
  }
}

struct HeaderMatch {
  std::size_t name_begin;  // offsets relative to the header start
  std::size_t name_end;
  std::size_t decl_begin;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

std::vector<std::string_view> tokens_of(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (text::is_ident_char(s[i])) {
      std::size_t j = i;
      while (j < s.size() && text::is_ident_char(s[j])) ++j;
      out.push_back(s.substr(i, j - i));
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

// Recognizes `[modifiers] [type params] type name(params) [throws ...]`.
std::optional<HeaderMatch> match_method_header(std::string header) {
  strip_annotations(header);
  std::size_t end = header.size();
  while (end > 0 && is_space(header[end - 1])) --end;
  if (end == 0) return std::nullopt;

  // Optional throws clause after the parameter list.
  std::size_t close = header.rfind(')', end - 1);
  if (close == std::string::npos) return std::nullopt;
  {
    std::string_view tail(header.data() + close + 1, end - close - 1);
    auto t = text::trim(tail);
    if (!t.empty()) {
      // Legacy array dims `int f()[]` or a throws list.
      bool ok = false;
      if (t.rfind("throws", 0) == 0 && (t.size() == 6 || is_space(t[6]))) {
        ok = t.find_first_not_of(
                 "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_$., \t\r\n<>?") ==
             std::string_view::npos;
      } else {
        ok = t.find_first_not_of("[] \t") == std::string_view::npos;
      }
      if (!ok) return std::nullopt;
    }
  }
  // Matching open paren.
  int depth = 0;
  std::size_t open = std::string::npos;
  for (std::size_t i = close + 1; i-- > 0;) {
    if (header[i] == ')') ++depth;
    if (header[i] == '(' && --depth == 0) {
      open = i;
      break;
    }
  }
  if (open == std::string::npos) return std::nullopt;
  std::size_t ne = open;
  while (ne > 0 && is_space(header[ne - 1])) --ne;
  std::size_t nb = ne;
  while (nb > 0 && text::is_ident_char(header[nb - 1])) --nb;
  if (nb == ne) return std::nullopt;
  const std::string_view name(header.data() + nb, ne - nb);
  if (std::isdigit(static_cast<unsigned char>(name[0]))) return std::nullopt;
  if (control_keywords().count(name)) return std::nullopt;

  const std::string_view prefix(header.data(), nb);
  if (prefix.find_first_not_of(
          "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_$ \t\r\n<>[],.?&") !=
      std::string_view::npos) {
    return std::nullopt;
  }
  const auto toks = tokens_of(prefix);
  for (auto t : toks) {
    if (non_method_prefix_tokens().count(t)) return std::nullopt;
  }
  if (toks.empty() && !std::isupper(static_cast<unsigned char>(name[0]))) return std::nullopt;
  // A bare `.` right before the name means a qualified call, not a declaration.
  const auto ptrim = text::trim_right(prefix);
  if (!ptrim.empty() && (ptrim.back() == '.' || ptrim.back() == ',')) return std::nullopt;

  std::size_t decl = 0;
  while (decl < header.size() && is_space(header[decl])) ++decl;
  return HeaderMatch{nb, ne, decl};
}

std::vector<std::size_t> line_starts(std::string_view s) {
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\n') starts.push_back(i + 1);
  }
  return starts;
}

std::size_t line_of(const std::vector<std::size_t>& starts, std::size_t offset) {
  auto it = std::upper_bound(starts.begin(), starts.end(), offset);
  return static_cast<std::size_t>(it - starts.begin());  // 1-based
}

}  // namespace

std::vector<MethodSpan> extract_methods(std::string_view source) {
  std::vector<MethodSpan> spans;
  if (source.empty()) return spans;
  const std::string masked = mask_java(source);
  const auto starts = line_starts(source);
  const auto raw_lines = text::normalize_lines(source);

  // Matching braces in one pass.
  std::unordered_map<std::size_t, std::size_t> closing;
  {
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < masked.size(); ++i) {
      if (masked[i] == '{') {
        stack.push_back(i);
      } else if (masked[i] == '}' && !stack.empty()) {
        closing[stack.back()] = i;
        stack.pop_back();
      }
    }
  }

  std::size_t header_begin = 0;
  for (std::size_t i = 0; i < masked.size(); ++i) {
    const char c = masked[i];
    if (c == ';' || c == '}') {
      header_begin = i + 1;
      continue;
    }
    if (c != '{') continue;
    const std::size_t hb = header_begin;
    header_begin = i + 1;
    auto close = closing.find(i);
    if (close == closing.end()) continue;
    auto m = match_method_header(masked.substr(hb, i - hb));
    if (!m) continue;

    MethodSpan span;
    span.name = masked.substr(hb + m->name_begin, m->name_end - m->name_begin);
    span.name_offset = hb + m->name_begin;
    span.body_offset = i;
    span.end_offset = close->second;
    // First line of the declaration proper (annotations excluded).
    std::string cleaned = masked.substr(hb, i - hb);
    strip_annotations(cleaned);
    std::size_t first = 0;
    while (first < cleaned.size() && is_space(cleaned[first])) ++first;
    span.start_line = line_of(starts, hb + first);
    span.end_line = line_of(starts, close->second);
    if (span.start_line == 0 || span.start_line > raw_lines.size()) continue;
    span.signature = std::string(text::trim_right(raw_lines[span.start_line - 1]));
    std::vector<std::string> body(raw_lines.begin() + static_cast<long>(span.start_line - 1),
                                  raw_lines.begin() + static_cast<long>(span.end_line));
    span.body = text::join(body, "\n");

    bool conflict = false;
    for (const auto& other : spans) {
      const bool same = other.start_line == span.start_line && other.end_line == span.end_line;
      const bool nested = (span.start_line >= other.start_line && span.end_line <= other.end_line) ||
                          (other.start_line >= span.start_line && other.end_line <= span.end_line);
      const bool disjoint = span.start_line > other.end_line || span.end_line < other.start_line;
      if (same || (!nested && !disjoint)) {
        conflict = true;
        break;
      }
    }
    if (!conflict) spans.push_back(std::move(span));
  }
  return spans;
}

CallGraph::CallGraph(std::vector<std::string> nodes,
                     std::vector<std::pair<std::size_t, std::size_t>> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  edges_.erase(std::remove_if(edges_.begin(), edges_.end(),
                              [&](const auto& e) {
                                return e.first >= nodes_.size() || e.second >= nodes_.size();
                              }),
               edges_.end());
  callees_.assign(nodes_.size(), {});
  callers_.assign(nodes_.size(), {});
  for (const auto& [from, to] : edges_) {
    callees_[from].push_back(to);
    callers_[to].push_back(from);
  }
  for (auto& v : callers_) std::sort(v.begin(), v.end());
}

std::size_t CallGraph::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i] == name) return i;
  }
  return npos;
}

bool CallGraph::has_edge(std::string_view caller, std::string_view callee) const {
  const auto a = index_of(caller);
  const auto b = index_of(callee);
  if (a == npos || b == npos) return false;
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(a, b));
}

CallGraph build_call_graph(const std::vector<MethodSpan>& methods, std::string_view source) {
  std::vector<std::string> nodes;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& m : methods) {
    if (index.emplace(m.name, nodes.size()).second) nodes.push_back(m.name);
  }
  const std::string masked = mask_java(source);
  std::unordered_set<std::size_t> declaration_names;
  for (const auto& m : methods) declaration_names.insert(m.name_offset);

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& m : methods) {
    const std::size_t from = index.at(m.name);
    const std::size_t lo = std::min(m.body_offset + 1, masked.size());
    const std::size_t hi = std::min(m.end_offset, masked.size());
    std::size_t i = lo;
    while (i < hi) {
      if (!text::is_ident_char(masked[i]) || (i > 0 && text::is_ident_char(masked[i - 1]))) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < hi && text::is_ident_char(masked[j])) ++j;
      std::size_t k = j;
      while (k < hi && is_space(masked[k])) ++k;
      if (k < hi && masked[k] == '(' && !declaration_names.count(i)) {
        auto it = index.find(masked.substr(i, j - i));
        if (it != index.end()) edges.emplace_back(from, it->second);
      }
      i = j;
    }
  }
  return CallGraph(std::move(nodes), std::move(edges));
}

ContextBundle extract_context(const ChangeSet& cs, std::string_view source, std::size_t depth,
                              std::size_t max_lines) {
  ContextBundle bundle;
  bundle.line_budget = max_lines;
  const auto methods = extract_methods(source);
  const auto graph = build_call_graph(methods, source);
  const auto lines = text::normalize_lines(source);

  auto overlaps = [&](const MethodSpan& m) {
    auto it = cs.changed_new_lines.lower_bound(m.start_line);
    return it != cs.changed_new_lines.end() && *it <= m.end_line;
  };

  std::vector<std::size_t> seeds;
  for (const auto& m : methods) {
    if (!overlaps(m)) continue;
    const auto idx = graph.index_of(m.name);
    if (std::find(seeds.begin(), seeds.end(), idx) == seeds.end()) seeds.push_back(idx);
  }

  // Breadth-first waves; each wave consumes one unit of depth.
  std::vector<std::size_t> visited;
  std::vector<bool> seen(graph.nodes().size(), false);
  std::vector<bool> queued(graph.nodes().size(), false);
  std::vector<std::size_t> queue = seeds;
  for (auto s : seeds) queued[s] = true;
  long remaining = static_cast<long>(depth);
  std::size_t waves = 0;
  while (!queue.empty() && remaining >= 0) {
    std::vector<std::size_t> frontier;
    frontier.swap(queue);
    for (auto m : frontier) queued[m] = false;
    for (auto m : frontier) {
      if (!seen[m]) {
        seen[m] = true;
        visited.push_back(m);
      }
      auto enqueue = [&](std::size_t n) {
        if (!seen[n] && !queued[n]) {
          queued[n] = true;
          queue.push_back(n);
        }
      };
      for (auto n : graph.callers(m)) enqueue(n);
      for (auto n : graph.callees(m)) enqueue(n);
    }
    ++waves;
    --remaining;
  }
  bundle.depth_used = waves > 0 ? waves - 1 : 0;
  for (auto v : visited) bundle.visited_methods.push_back(graph.nodes()[v]);

  // Assemble blocks: raw windows for changes outside methods, then methods.
  std::vector<std::vector<std::string>> blocks;
  std::vector<std::string> block_owner;
  std::set<std::size_t> covered;

  std::vector<std::pair<std::size_t, std::size_t>> windows;
  for (auto l : cs.changed_new_lines) {
    const bool inside = std::any_of(methods.begin(), methods.end(), [&](const MethodSpan& m) {
      return l >= m.start_line && l <= m.end_line;
    });
    if (inside || l == 0 || l > lines.size()) continue;
    const std::size_t lo = l > kRawWindowRadius ? l - kRawWindowRadius : 1;
    const std::size_t hi = std::min(lines.size(), l + kRawWindowRadius);
    if (!windows.empty() && lo <= windows.back().second + 1) {
      windows.back().second = std::max(windows.back().second, hi);
    } else {
      windows.emplace_back(lo, hi);
    }
  }
  for (const auto& [lo, hi] : windows) {
    std::vector<std::string> b(lines.begin() + static_cast<long>(lo - 1),
                               lines.begin() + static_cast<long>(hi));
    for (auto k = lo; k <= hi; ++k) covered.insert(k);
    blocks.push_back(std::move(b));
    block_owner.emplace_back();
  }
  for (auto v : visited) {
    const auto& name = graph.nodes()[v];
    for (const auto& m : methods) {
      if (m.name != name) continue;
      bool all_covered = true;
      for (auto k = m.start_line; k <= m.end_line; ++k) {
        if (!covered.count(k)) {
          all_covered = false;
          break;
        }
      }
      if (all_covered) continue;
      std::vector<std::string> b(lines.begin() + static_cast<long>(m.start_line - 1),
                                 lines.begin() + static_cast<long>(m.end_line));
      for (auto k = m.start_line; k <= m.end_line; ++k) covered.insert(k);
      blocks.push_back(std::move(b));
      block_owner.push_back(name);
    }
  }

  std::vector<std::string> out;
  std::map<std::string, std::size_t> first_line_of;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (b) out.emplace_back();
    if (!block_owner[b].empty()) first_line_of.try_emplace(block_owner[b], out.size());
    out.insert(out.end(), blocks[b].begin(), blocks[b].end());
  }
  if (out.size() > max_lines) {
    out.resize(max_lines);
    bundle.truncated = true;
  }
  for (const auto& name : bundle.visited_methods) {
    auto it = first_line_of.find(name);
    if (it != first_line_of.end() && it->second < out.size()) {
      bundle.included_methods.push_back(name);
    }
  }
  bundle.snippet = text::join(out, "\n");
  return bundle;
}

}  // namespace driftlens
