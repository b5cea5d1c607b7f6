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

// Seeded generators for synthetic corpora and an independent matching
// oracle built on std::set, shared by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "driftlens/corpus.hpp"
#include "driftlens/matching.hpp"

namespace driftlens::testing {

inline std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

// Distinct Java-looking lines; `tag` keeps generators from colliding.
class LineFactory {
 public:
  std::string fresh() {
    std::ostringstream os;
    os << "        int v" << next_ << " = compute(" << (next_ * 7919) % 1000 << ");";
    ++next_;
    return os.str();
  }

 private:
  std::uint64_t next_ = 0;
};

inline std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

struct MatchingTrial {
  VersionSet old_set;
  VersionSet new_set;
  std::string target_path;
  std::optional<std::string> predecessor_path;
};

// One new file whose predecessor (if kept) retains >= `retain` of its
// lines, plus up to 20 old decoys sharing <= 20% of their lines with it.
inline MatchingTrial make_matching_trial(std::mt19937_64& rng, bool with_predecessor,
                                         double retain = 0.7) {
  LineFactory lf;
  const std::size_t n = uniform(rng, 20, 80);
  std::vector<std::string> pred;
  for (std::size_t i = 0; i < n; ++i) pred.push_back(lf.fresh());

  const double rho = retain + (1.0 - retain) * static_cast<double>(rng() % 1001) / 1000.0;
  const auto kept = static_cast<std::size_t>(std::ceil(rho * static_cast<double>(n) - 1e-9));
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<bool> keep(n, false);
  for (std::size_t i = 0; i < kept; ++i) keep[idx[i]] = true;
  std::vector<std::string> target;
  for (std::size_t i = 0; i < n; ++i) target.push_back(keep[i] ? pred[i] : lf.fresh());

  std::vector<VersionedFile> olds;
  if (with_predecessor) {
    olds.push_back({"src/old/Target.java", join_lines(pred), Label::benign, "v1"});
  }
  const std::size_t decoys = uniform(rng, 0, 20);
  for (std::size_t d = 0; d < decoys; ++d) {
    const std::size_t m = uniform(rng, 20, 80);
    const std::size_t overlap = uniform(rng, 0, m / 5);
    std::vector<std::string> lines;
    std::vector<std::string> pool = target;
    std::shuffle(pool.begin(), pool.end(), rng);
    for (std::size_t i = 0; i < overlap && i < pool.size(); ++i) lines.push_back(pool[i]);
    while (lines.size() < m) lines.push_back(lf.fresh());
    std::shuffle(lines.begin(), lines.end(), rng);
    olds.push_back({"src/decoy/D" + std::to_string(d) + ".java", join_lines(lines),
                    Label::benign, "v1"});
  }
  MatchingTrial t;
  t.old_set = VersionSet("synthetic", "v1", std::move(olds));
  t.new_set = VersionSet("synthetic", "v2",
                         {{"src/new/Target.java", join_lines(target), Label::benign, "v2"}});
  t.target_path = "src/new/Target.java";
  if (with_predecessor) t.predecessor_path = "src/old/Target.java";
  return t;
}

// ---- Independent matching oracle -------------------------------------------

inline std::set<std::string> line_set(const std::string& src) {
  std::set<std::string> out;
  std::istringstream in(src);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
      line.pop_back();
    }
    out.insert(line);
  }
  return out;
}

inline double oracle_dice(const std::string& a, const std::string& b) {
  const auto x = line_set(a), y = line_set(b);
  if (x.empty() && y.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& l : x) common += y.count(l);
  return 2.0 * static_cast<double>(common) / static_cast<double>(x.size() + y.size());
}

// Accept rule evaluated from its definition on a descending score list.
inline bool oracle_accept(std::vector<double> s, double T, double c) {
  std::sort(s.rbegin(), s.rend());
  if (s.empty() || s[0] < T - 1e-12) return false;
  if (s.size() == 1) return true;
  std::vector<double> g;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) g.push_back(s[i] - s[i + 1]);
  double mu = 0;
  for (double x : g) mu += x;
  mu /= static_cast<double>(g.size());
  double var = 0;
  for (double x : g) var += (x - mu) * (x - mu);
  var /= static_cast<double>(g.size());
  return g[0] >= mu + c * std::sqrt(var) - 1e-12;
}

// Generic PROMISE-like corpus pair with known ground truth for each subset.
struct CorpusPair {
  VersionSet old_set, new_set;
  PartitionStats expected;
};

inline CorpusPair make_corpus_pair(std::mt19937_64& rng, std::size_t files) {
  LineFactory lf;
  std::vector<VersionedFile> olds, news;
  CorpusPair cp;
  for (std::size_t i = 0; i < files; ++i) {
    std::vector<std::string> lines;
    const std::size_t n = uniform(rng, 5, 30);
    for (std::size_t k = 0; k < n; ++k) lines.push_back(lf.fresh());
    const std::string path = "src/p/F" + std::to_string(i) + ".java";
    const Label old_label = rng() % 4 == 0 ? Label::defective : Label::benign;
    const std::size_t fate = uniform(rng, 0, 9);
    if (fate == 0) {  // removed
      olds.push_back({path, join_lines(lines), old_label, "v1"});
      ++cp.expected.removed;
      continue;
    }
    if (fate == 1) {  // added
      news.push_back({path, join_lines(lines), Label::benign, "v2"});
      ++cp.expected.added;
      continue;
    }
    olds.push_back({path, join_lines(lines), old_label, "v1"});
    const bool changed = fate >= 4;
    const Label new_label = rng() % 5 == 0 ? (old_label == Label::benign ? Label::defective
                                                                          : Label::benign)
                                           : old_label;
    auto new_lines = lines;
    if (changed) new_lines[uniform(rng, 0, new_lines.size() - 1)] = lf.fresh();
    news.push_back({path, join_lines(new_lines), changed ? new_label : old_label, "v2"});
    if (!changed) {
      ++cp.expected.same_source;
    } else {
      const bool o = old_label == Label::defective, n2 = new_label == Label::defective;
      if (!o && !n2) ++cp.expected.B00;
      if (o && !n2) ++cp.expected.B10;
      if (!o && n2) ++cp.expected.D01;
      if (o && n2) ++cp.expected.D11;
    }
  }
  cp.old_set = VersionSet("synthetic", "v1", std::move(olds));
  cp.new_set = VersionSet("synthetic", "v2", std::move(news));
  return cp;
}

}  // namespace driftlens::testing
