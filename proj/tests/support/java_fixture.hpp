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

// Builds small Java classes from an explicit call adjacency and computes the
// expected context expansion from that adjacency alone (no parsing).

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace driftlens::testing {

struct FixtureSpec {
  std::string label;
  std::size_t methods = 0;
  std::vector<std::pair<std::size_t, std::size_t>> calls;  // caller -> callee
  std::vector<std::size_t> changed;                        // methods with an edited line
  bool field_change = false;                               // edit outside every method
};

struct JavaFixture {
  std::string old_source, new_source;
  std::vector<std::string> names;                            // declaration order
  std::vector<std::pair<std::size_t, std::size_t>> spans;    // 1-based [start, end]
  std::vector<std::string> new_lines;
  std::set<std::size_t> changed_lines;                       // in the new source
};

inline const std::vector<std::string>& fixture_name_pool() {
  static const std::vector<std::string> pool = {
      "load",  "store", "parse", "render", "check", "update", "reset", "flush",
      "apply", "merge", "split", "visit",  "close", "open",   "build", "scan"};
  return pool;
}

inline JavaFixture build_java_fixture(const FixtureSpec& spec) {
  JavaFixture fx;
  for (std::size_t i = 0; i < spec.methods; ++i) {
    const auto& pool = fixture_name_pool();
    fx.names.push_back(pool[i % pool.size()] + std::to_string(i));
  }
  std::map<std::size_t, std::vector<std::size_t>> callees;
  for (const auto& [a, b] : spec.calls) callees[a].push_back(b);
  const std::set<std::size_t> changed(spec.changed.begin(), spec.changed.end());

  std::vector<std::string> nl, ol;  // new and old lines, kept in lockstep
  auto both = [&](const std::string& s) {
    nl.push_back(s);
    ol.push_back(s);
  };
  both("package fx;");
  both("");
  both("import java.util.*;");
  both("");
  both("public class Fixture {");
  nl.push_back("    private int counter = 0;");
  ol.push_back(spec.field_change ? "    private int counter = 1;" : "    private int counter = 0;");
  if (spec.field_change) fx.changed_lines.insert(nl.size());
  both("    private static final String NAME = \"" + (fx.names.empty() ? "x" : fx.names[0]) +
       "() in a string\";");
  both("");
  both("    // " + (fx.names.empty() ? std::string("x") : fx.names.back()) +
       "() mentioned in a comment");
  both("");

  for (std::size_t i = 0; i < spec.methods; ++i) {
    const std::string& name = fx.names[i];
    std::size_t start = 0;
    switch (i % 6) {
      case 0:
        both("    public int " + name + "(int a, int b) {");
        start = nl.size();
        break;
      case 1:
        both("    private static void " + name + "(String s)");
        start = nl.size();
        both("            throws java.io.IOException {");
        break;
      case 2:
        both("    @Override");
        both("    public String " + name + "() {");
        start = nl.size();
        break;
      case 3:
        both("    protected final synchronized <T> List<T> " + name + "(List<T> xs, int n) {");
        start = nl.size();
        break;
      case 4:
        both("    int[] " + name + "(int[] xs) {");
        start = nl.size();
        break;
      default:
        both("    public static Map<String, List<Integer>> " + name + "(");
        start = nl.size();
        both("        Map<String, List<Integer>> in) {");
        break;
    }
    nl.push_back("        int x = 0;");
    ol.push_back(changed.count(i) ? "        int x = 1;" : "        int x = 0;");
    if (changed.count(i)) fx.changed_lines.insert(nl.size());
    std::size_t k = 0;
    for (auto callee : callees[i]) {
      const std::string call = fx.names[callee] + "(" + (k % 2 ? "x" : "") + ");";
      if (k % 3 == 1) {
        both("        if (x > " + std::to_string(k) + ") {");
        both("            " + call);
        both("        }");
      } else {
        both("        " + call);
      }
      ++k;
    }
    // Mentions that are not calls: a comment, a string and a field access.
    const std::string other = fx.names[(i + 1) % spec.methods];
    both("        // " + other + "() is not called from here");
    both("        String s = \"" + other + "()\";");
    both("        Runnable r = () -> { counter++; };");
    both("        for (int i = 0; i < 3; i++) {");
    both("            x += i;");
    both("        }");
    both("        return;");
    both("    }");
    fx.spans.emplace_back(start, nl.size());
    both("");
  }
  both("}");

  for (const auto& l : nl) fx.new_source += l + "\n";
  for (const auto& l : ol) fx.old_source += l + "\n";
  fx.new_lines = nl;
  return fx;
}

struct ContextOracle {
  std::vector<std::string> visited;   // discovery order
  std::vector<std::string> included;  // first line within budget
  std::vector<std::string> snippet_lines;
  bool truncated = false;
};

// FIFO breadth-first search over the undirected call relation, with
// neighbours visited callers-first then callees, each in declaration order.
inline ContextOracle context_oracle(const FixtureSpec& spec, const JavaFixture& fx,
                                    std::size_t depth, std::size_t max_lines) {
  const std::size_t n = spec.methods;
  std::vector<std::set<std::size_t>> callers(n), callees(n);
  for (const auto& [a, b] : spec.calls) {
    callees[a].insert(b);
    callers[b].insert(a);
  }
  std::vector<long> dist(n, -1);
  std::deque<std::size_t> q;
  std::vector<std::size_t> order;
  std::set<std::size_t> seeds(spec.changed.begin(), spec.changed.end());
  for (auto s : seeds) {
    dist[s] = 0;
    q.push_back(s);
  }
  while (!q.empty()) {
    const auto u = q.front();
    q.pop_front();
    order.push_back(u);
    if (dist[u] == static_cast<long>(depth)) continue;
    for (const auto* nb : {&callers[u], &callees[u]}) {
      for (auto v : *nb) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push_back(v);
        }
      }
    }
  }

  ContextOracle o;
  for (auto u : order) o.visited.push_back(fx.names[u]);

  std::vector<std::vector<std::string>> blocks;
  std::vector<std::string> owner;
  if (spec.field_change) {
    // Raw window of three lines either side of each out-of-method change.
    for (auto line : fx.changed_lines) {
      bool inside = false;
      for (const auto& [s, e] : fx.spans) inside = inside || (line >= s && line <= e);
      if (inside) continue;
      const std::size_t lo = line > 3 ? line - 3 : 1;
      const std::size_t hi = std::min(fx.new_lines.size(), line + 3);
      blocks.emplace_back(fx.new_lines.begin() + static_cast<long>(lo - 1),
                          fx.new_lines.begin() + static_cast<long>(hi));
      owner.emplace_back();
    }
  }
  for (auto u : order) {
    const auto [s, e] = fx.spans[u];
    blocks.emplace_back(fx.new_lines.begin() + static_cast<long>(s - 1),
                        fx.new_lines.begin() + static_cast<long>(e));
    owner.push_back(fx.names[u]);
  }
  std::vector<std::string> out;
  std::vector<std::pair<std::string, std::size_t>> first_line;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (b) out.emplace_back();
    if (!owner[b].empty()) first_line.emplace_back(owner[b], out.size());
    out.insert(out.end(), blocks[b].begin(), blocks[b].end());
  }
  if (out.size() > max_lines) {
    out.resize(max_lines);
    o.truncated = true;
  }
  for (const auto& [name, at] : first_line) {
    if (at < out.size()) o.included.push_back(name);
  }
  o.snippet_lines = std::move(out);
  return o;
}

}  // namespace driftlens::testing
