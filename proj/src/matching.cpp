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

#include "driftlens/matching.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "driftlens/error.hpp"

namespace driftlens {

void MatchParams::validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ConfigError("match threshold T must lie in [0, 1], got " + std::to_string(threshold));
  }
  if (!(gap_multiplier >= 0.0) || !std::isfinite(gap_multiplier)) {
    throw ConfigError("gap multiplier c must be >= 0, got " + std::to_string(gap_multiplier));
  }
}

std::string_view to_string(MatchKind k) {
  switch (k) {
    case MatchKind::path: return "path";
    case MatchKind::similarity: return "similarity";
    case MatchKind::none: return "none";
  }
  return "none";
}

std::string_view to_string(Subset s) {
  switch (s) {
    case Subset::B00: return "B00";
    case Subset::B10: return "B10";
    case Subset::D01: return "D01";
    case Subset::D11: return "D11";
    case Subset::unchanged_source: return "unchanged_source";
    case Subset::added: return "added";
  }
  return "added";
}

std::optional<MatchKind> parse_match_kind(std::string_view s) {
  for (auto k : {MatchKind::path, MatchKind::similarity, MatchKind::none}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::optional<Subset> parse_subset(std::string_view s) {
  for (auto k : {Subset::B00, Subset::B10, Subset::D01, Subset::D11,
                 Subset::unchanged_source, Subset::added}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

Subset transition_subset(Label old_label, Label new_label) {
  if (new_label == Label::benign) {
    return old_label == Label::benign ? Subset::B00 : Subset::B10;
  }
  return old_label == Label::benign ? Subset::D01 : Subset::D11;
}

bool is_transition(Subset s) {
  return s == Subset::B00 || s == Subset::B10 || s == Subset::D01 || s == Subset::D11;
}

namespace {

using LineIds = std::vector<int>;

class LineInterner {
 public:
  LineIds ids_for(std::string_view source) {
    LineIds ids;
    for (const auto& line : text::normalize_lines(source)) {
      auto key = std::string(text::trim_right(line));
      auto [it, inserted] = dict_.try_emplace(std::move(key), static_cast<int>(dict_.size()));
      ids.push_back(it->second);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
  }

 private:
  std::unordered_map<std::string, int> dict_;
};

double dice(const LineIds& a, const LineIds& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return 2.0 * static_cast<double>(common) / static_cast<double>(a.size() + b.size());
}

}  // namespace

double dice_similarity(std::string_view old_source, std::string_view new_source) {
  LineInterner interner;
  const auto a = interner.ids_for(old_source);
  const auto b = interner.ids_for(new_source);
  return dice(a, b);
}

double dice_similarity(const VersionedFile& old_file, const VersionedFile& new_file) {
  return dice_similarity(old_file.source, new_file.source);
}

std::optional<std::size_t> accept_best(const std::vector<double>& scores,
                                       const MatchParams& params) {
  const std::size_t m = scores.size();
  if (m == 0) return std::nullopt;
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const double s1 = scores[order[0]];
  constexpr double kEps = 1e-12;
  if (s1 + kEps < params.threshold) return std::nullopt;
  if (m == 1) return order[0];

  const std::size_t ngaps = m - 1;
  double mean = 0;
  for (std::size_t i = 0; i < ngaps; ++i) mean += scores[order[i]] - scores[order[i + 1]];
  mean /= static_cast<double>(ngaps);
  // Population deviation: a single gap gives 0, and a clean separation
  // (one large gap, the rest near zero) passes for every m.
  double ss = 0;
  for (std::size_t i = 0; i < ngaps; ++i) {
    const double d = (scores[order[i]] - scores[order[i + 1]]) - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(ngaps));
  const double top_gap = s1 - scores[order[1]];
  if (top_gap + kEps >= mean + params.gap_multiplier * sd) return order[0];
  return std::nullopt;
}

std::vector<FileMatch> match_files(const VersionSet& old_set, const VersionSet& new_set,
                                   const MatchParams& params) {
  params.validate();
  const auto& olds = old_set.files();
  const auto& news = new_set.files();

  std::vector<FileMatch> result(news.size());
  std::vector<bool> old_taken(olds.size(), false);
  std::unordered_map<std::string_view, std::size_t> old_index;
  for (std::size_t i = 0; i < olds.size(); ++i) old_index.emplace(olds[i].path, i);

  std::vector<std::size_t> pending;
  for (std::size_t j = 0; j < news.size(); ++j) {
    result[j].new_path = news[j].path;
    auto it = old_index.find(news[j].path);
    if (it != old_index.end()) {
      result[j].old_path = olds[it->second].path;
      result[j].kind = MatchKind::path;
      old_taken[it->second] = true;
    } else {
      pending.push_back(j);
    }
  }
  if (pending.empty()) return result;

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < olds.size(); ++i) {
    if (!old_taken[i]) candidates.push_back(i);
  }

  LineInterner interner;
  std::vector<LineIds> cand_ids;
  cand_ids.reserve(candidates.size());
  for (auto i : candidates) cand_ids.push_back(interner.ids_for(olds[i].source));

  struct Proposal {
    double score;
    std::size_t new_idx;
    std::size_t old_idx;
  };
  std::vector<Proposal> proposals;
  std::vector<double> scores(candidates.size());
  for (auto j : pending) {
    const auto ids = interner.ids_for(news[j].source);
    for (std::size_t k = 0; k < candidates.size(); ++k) scores[k] = dice(cand_ids[k], ids);
    if (auto best = accept_best(scores, params)) {
      proposals.push_back({scores[*best], j, candidates[*best]});
    }
  }

  std::sort(proposals.begin(), proposals.end(), [&](const Proposal& a, const Proposal& b) {
    if (a.score != b.score) return a.score > b.score;
    if (news[a.new_idx].path != news[b.new_idx].path) return news[a.new_idx].path < news[b.new_idx].path;
    return olds[a.old_idx].path < olds[b.old_idx].path;
  });
  for (const auto& p : proposals) {
    if (old_taken[p.old_idx]) continue;
    old_taken[p.old_idx] = true;
    auto& m = result[p.new_idx];
    m.old_path = olds[p.old_idx].path;
    m.kind = MatchKind::similarity;
    m.similarity = p.score;
  }
  return result;
}

PartitionPercentages PartitionStats::union_basis() const {
  PartitionPercentages p;
  const double n = static_cast<double>(events());
  if (n == 0) return p;
  p.removed = 100.0 * removed / n;
  p.added = 100.0 * added / n;
  p.same_source = 100.0 * same_source / n;
  p.B00 = 100.0 * B00 / n;
  p.B10 = 100.0 * B10 / n;
  p.D11 = 100.0 * D11 / n;
  p.D01 = 100.0 * D01 / n;
  return p;
}

PartitionPercentages PartitionStats::new_version_basis() const {
  PartitionPercentages p;
  const double n = static_cast<double>(added + common());
  if (n == 0) return p;
  p.removed = 100.0 * removed / n;
  p.added = 100.0 * added / n;
  p.same_source = 100.0 * same_source / n;
  p.B00 = 100.0 * B00 / n;
  p.B10 = 100.0 * B10 / n;
  p.D11 = 100.0 * D11 / n;
  p.D01 = 100.0 * D01 / n;
  return p;
}

Partition partition(const VersionSet& old_set, const VersionSet& new_set,
                    const std::vector<FileMatch>& matches) {
  Partition out;
  std::unordered_map<std::string_view, const FileMatch*> by_new;
  for (const auto& m : matches) by_new.emplace(m.new_path, &m);
  std::unordered_set<std::string> matched_old;

  for (const auto& nf : new_set.files()) {
    EvolutionRecord rec;
    rec.new_file = nf;
    auto it = by_new.find(nf.path);
    const VersionedFile* of = nullptr;
    if (it != by_new.end() && it->second->old_path) {
      of = old_set.find(*it->second->old_path);
      if (of && !matched_old.insert(of->path).second) {
        throw DataError("old file matched twice: " + of->path);
      }
    }
    if (of) {
      rec.old_file = *of;
      rec.match_kind = it->second->kind;
      rec.similarity = it->second->similarity;
      if (of->source == nf.source) {
        rec.subset = Subset::unchanged_source;
        ++out.stats.same_source;
      } else {
        rec.subset = transition_subset(of->label, nf.label);
        switch (rec.subset) {
          case Subset::B00: ++out.stats.B00; break;
          case Subset::B10: ++out.stats.B10; break;
          case Subset::D01: ++out.stats.D01; break;
          case Subset::D11: ++out.stats.D11; break;
          default: break;
        }
      }
    } else {
      rec.match_kind = MatchKind::none;
      rec.subset = Subset::added;
      ++out.stats.added;
    }
    out.records.push_back(std::move(rec));
  }
  for (const auto& of : old_set.files()) {
    if (!matched_old.count(of.path)) out.removed_paths.push_back(of.path);
  }
  out.stats.removed = out.removed_paths.size();
  return out;
}

std::string format_partition_table(std::string_view dataset, const PartitionPercentages& p) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "Dataset" << std::right;
  for (const char* h : {"R", "A", "d=0", "B00", "B10", "D11", "D01"}) os << std::setw(8) << h;
  os << "\n" << std::left << std::setw(10) << dataset << std::right << std::fixed
     << std::setprecision(2);
  for (double v : {p.removed, p.added, p.same_source, p.B00, p.B10, p.D11, p.D01}) {
    os << std::setw(8) << v;
  }
  os << "\n";
  return os.str();
}

}  // namespace driftlens
