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

#include "driftlens/diffing.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "driftlens/error.hpp"
#include "driftlens/text.hpp"

namespace driftlens {

namespace {

enum class Op : char { equal = ' ', del = '-', ins = '+' };

struct Edit {
  Op op;
  std::size_t old_idx;  // 0-based; valid for equal/del
  std::size_t new_idx;  // 0-based; valid for equal/ins
};

class Differ {
 public:
  Differ(const std::vector<int>& a, const std::vector<int>& b) : a_(a), b_(b) {}

  std::vector<Edit> run() {
    compute(0, a_.size(), 0, b_.size());
    return std::move(out_);
  }

 private:
  void emit_equal(std::size_t ai, std::size_t bi, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) out_.push_back({Op::equal, ai + k, bi + k});
  }
  void emit_del(std::size_t a0, std::size_t a1, std::size_t bpos) {
    for (std::size_t i = a0; i < a1; ++i) out_.push_back({Op::del, i, bpos});
  }
  void emit_ins(std::size_t b0, std::size_t b1, std::size_t apos) {
    for (std::size_t j = b0; j < b1; ++j) out_.push_back({Op::ins, apos, j});
  }

  void compute(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1) {
    std::size_t prefix = 0;
    while (a0 + prefix < a1 && b0 + prefix < b1 && a_[a0 + prefix] == b_[b0 + prefix]) ++prefix;
    emit_equal(a0, b0, prefix);
    a0 += prefix;
    b0 += prefix;
    std::size_t suffix = 0;
    while (a1 - suffix > a0 && b1 - suffix > b0 && a_[a1 - suffix - 1] == b_[b1 - suffix - 1]) ++suffix;
    a1 -= suffix;
    b1 -= suffix;

    if (a0 == a1) {
      emit_ins(b0, b1, a0);
    } else if (b0 == b1) {
      emit_del(a0, a1, b0);
    } else {
      bisect(a0, a1, b0, b1);
    }
    emit_equal(a1, b1, suffix);
  }

  // Myers middle-snake search; splits the problem and recurses. Linear space.
  void bisect(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1) {
    const long n = static_cast<long>(a1 - a0);
    const long m = static_cast<long>(b1 - b0);
    const long max_d = (n + m + 1) / 2;
    const long offset = max_d;
    const long vlen = 2 * max_d + 2;
    std::vector<long> v1(vlen, -1), v2(vlen, -1);
    v1[offset + 1] = 0;
    v2[offset + 1] = 0;
    const long delta = n - m;
    const bool front = (delta % 2) != 0;
    long k1start = 0, k1end = 0, k2start = 0, k2end = 0;
    auto A = [&](long i) { return a_[a0 + static_cast<std::size_t>(i)]; };
    auto B = [&](long j) { return b_[b0 + static_cast<std::size_t>(j)]; };

    for (long d = 0; d < max_d; ++d) {
      for (long k1 = -d + k1start; k1 <= d - k1end; k1 += 2) {
        const long k1o = offset + k1;
        long x1 = (k1 == -d || (k1 != d && v1[k1o - 1] < v1[k1o + 1])) ? v1[k1o + 1]
                                                                        : v1[k1o - 1] + 1;
        long y1 = x1 - k1;
        while (x1 < n && y1 < m && A(x1) == B(y1)) {
          ++x1;
          ++y1;
        }
        v1[k1o] = x1;
        if (x1 > n) {
          k1end += 2;
        } else if (y1 > m) {
          k1start += 2;
        } else if (front) {
          const long k2o = offset + delta - k1;
          if (k2o >= 0 && k2o < vlen && v2[k2o] != -1) {
            const long x2 = n - v2[k2o];
            if (x1 >= x2) return split(a0, a1, b0, b1, x1, y1);
          }
        }
      }
      for (long k2 = -d + k2start; k2 <= d - k2end; k2 += 2) {
        const long k2o = offset + k2;
        long x2 = (k2 == -d || (k2 != d && v2[k2o - 1] < v2[k2o + 1])) ? v2[k2o + 1]
                                                                        : v2[k2o - 1] + 1;
        long y2 = x2 - k2;
        while (x2 < n && y2 < m && A(n - x2 - 1) == B(m - y2 - 1)) {
          ++x2;
          ++y2;
        }
        v2[k2o] = x2;
        if (x2 > n) {
          k2end += 2;
        } else if (y2 > m) {
          k2start += 2;
        } else if (!front) {
          const long k1o = offset + delta - k2;
          if (k1o >= 0 && k1o < vlen && v1[k1o] != -1) {
            const long x1 = v1[k1o];
            const long y1 = offset + x1 - k1o;
            if (x1 >= n - x2) return split(a0, a1, b0, b1, x1, y1);
          }
        }
      }
    }
    emit_del(a0, a1, b0);
    emit_ins(b0, b1, a1);
  }

  void split(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1, long x, long y) {
    const auto ax = a0 + static_cast<std::size_t>(x);
    const auto by = b0 + static_cast<std::size_t>(y);
    compute(a0, ax, b0, by);
    compute(ax, a1, by, b1);
  }

  const std::vector<int>& a_;
  const std::vector<int>& b_;
  std::vector<Edit> out_;
};

// Within every run of non-equal edits, deletions come before insertions.
void group_changes(std::vector<Edit>& edits) {
  std::size_t i = 0;
  while (i < edits.size()) {
    if (edits[i].op == Op::equal) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < edits.size() && edits[j].op != Op::equal) ++j;
    std::stable_partition(edits.begin() + static_cast<long>(i), edits.begin() + static_cast<long>(j),
                          [](const Edit& e) { return e.op == Op::del; });
    i = j;
  }
}

struct Side {
  std::vector<std::string> lines;
  bool terminated = true;
  bool last_unterminated(std::size_t idx) const {
    return !terminated && idx + 1 == lines.size();
  }
};

std::string funcname_heading(const std::vector<std::string>& old_lines, std::size_t before) {
  for (std::size_t i = before; i-- > 0;) {
    const auto& l = old_lines[i];
    if (!l.empty() && (std::isalpha(static_cast<unsigned char>(l[0])) || l[0] == '_' || l[0] == '$')) {
      std::string h(text::trim_right(l));
      if (h.size() > 80) h.resize(80);
      return h;
    }
  }
  return {};
}

std::string range(std::size_t start, std::size_t count) {
  if (count == 1) return std::to_string(start);
  return std::to_string(start) + "," + std::to_string(count);
}

std::string render_unified(const std::vector<Edit>& edits, const Side& a, const Side& b,
                           const DiffOptions& opt) {
  std::vector<std::size_t> changes;
  for (std::size_t i = 0; i < edits.size(); ++i) {
    if (edits[i].op != Op::equal) changes.push_back(i);
  }
  if (changes.empty()) return {};

  std::string out = "--- a/" + opt.old_path + "\n+++ b/" + opt.new_path + "\n";
  const std::size_t ctx = opt.context_lines;
  std::size_t ci = 0;
  while (ci < changes.size()) {
    const std::size_t first = changes[ci];
    std::size_t last = first;
    ++ci;
    while (ci < changes.size() && changes[ci] - last - 1 <= 2 * ctx) {
      last = changes[ci];
      ++ci;
    }
    const std::size_t start = first >= ctx ? first - ctx : 0;
    const std::size_t end = std::min(edits.size(), last + ctx + 1);

    std::size_t old_before = 0, new_before = 0;
    for (std::size_t i = 0; i < start; ++i) {
      if (edits[i].op != Op::ins) ++old_before;
      if (edits[i].op != Op::del) ++new_before;
    }
    std::size_t oc = 0, nc = 0;
    for (std::size_t i = start; i < end; ++i) {
      if (edits[i].op != Op::ins) ++oc;
      if (edits[i].op != Op::del) ++nc;
    }
    out += "@@ -" + range(oc ? old_before + 1 : old_before, oc) + " +" +
           range(nc ? new_before + 1 : new_before, nc) + " @@";
    const auto heading = funcname_heading(a.lines, old_before);
    if (!heading.empty()) out += " " + heading;
    out += "\n";
    for (std::size_t i = start; i < end; ++i) {
      const auto& e = edits[i];
      const std::string& line = e.op == Op::ins ? b.lines[e.new_idx] : a.lines[e.old_idx];
      out += static_cast<char>(e.op);
      out += line;
      out += '\n';
      const bool noeol = e.op == Op::ins ? b.last_unterminated(e.new_idx)
                                         : a.last_unterminated(e.old_idx);
      if (noeol) out += "\\ No newline at end of file\n";
    }
  }
  return out;
}

}  // namespace

ChangeSet diff(std::string_view old_source, std::string_view new_source, const DiffOptions& options) {
  Side a, b;
  a.lines = text::split_raw_lines(old_source, &a.terminated);
  b.lines = text::split_raw_lines(new_source, &b.terminated);

  // Intern lines; an unterminated final line never equals a terminated one.
  auto keys_for = [](const Side& s) {
    std::vector<std::string> keys;
    keys.reserve(s.lines.size());
    for (std::size_t i = 0; i < s.lines.size(); ++i) {
      keys.push_back(s.lines[i]);
      if (s.last_unterminated(i)) keys.back() += std::string("\0noeol", 6);
    }
    return keys;
  };
  const auto ka = keys_for(a);
  const auto kb = keys_for(b);
  std::unordered_map<std::string, int> dict;
  auto ids_for = [&](const std::vector<std::string>& keys) {
    std::vector<int> ids;
    ids.reserve(keys.size());
    for (const auto& k : keys) {
      ids.push_back(dict.try_emplace(k, static_cast<int>(dict.size())).first->second);
    }
    return ids;
  };
  const auto ia = ids_for(ka);
  const auto ib = ids_for(kb);

  // The search always runs from the lexicographically smaller side, so
  // diff(b, a) is exactly the mirror of diff(a, b) even when several
  // minimal scripts exist.
  std::vector<Edit> edits;
  if (ka <= kb) {
    edits = Differ(ia, ib).run();
  } else {
    edits = Differ(ib, ia).run();
    for (auto& e : edits) {
      std::swap(e.old_idx, e.new_idx);
      if (e.op != Op::equal) e.op = e.op == Op::del ? Op::ins : Op::del;
    }
  }
  group_changes(edits);

  ChangeSet cs;
  for (const auto& e : edits) {
    if (e.op == Op::del) {
      cs.removed.push_back({e.old_idx + 1, a.lines[e.old_idx]});
    } else if (e.op == Op::ins) {
      cs.added.push_back({e.new_idx + 1, b.lines[e.new_idx]});
      cs.changed_new_lines.insert(e.new_idx + 1);
    }
  }
  cs.unified = render_unified(edits, a, b, options);
  return cs;
}

std::string render_difference_list(const ChangeSet& cs) {
  struct Entry {
    std::size_t line;
    int order;  // removals first
    const std::string* text;
  };
  std::vector<Entry> entries;
  for (const auto& r : cs.removed) entries.push_back({r.line, 0, &r.text});
  for (const auto& a : cs.added) entries.push_back({a.line, 1, &a.text});
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    if (x.line != y.line) return x.line < y.line;
    return x.order < y.order;
  });
  std::string out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out += '\n';
    out += entries[i].order == 0 ? "- " : "+ ";
    out += std::to_string(entries[i].line);
    out += ": ";
    out += *entries[i].text;
  }
  return out;
}

namespace {

std::size_t parse_number(std::string_view s, std::size_t& pos) {
  const std::size_t begin = pos;
  std::size_t v = 0;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    v = v * 10 + static_cast<std::size_t>(s[pos] - '0');
    ++pos;
  }
  if (pos == begin) throw DataError("malformed hunk header: " + std::string(s));
  return v;
}

void parse_range(std::string_view s, std::size_t& pos, std::size_t& start, std::size_t& count) {
  start = parse_number(s, pos);
  count = 1;
  if (pos < s.size() && s[pos] == ',') {
    ++pos;
    count = parse_number(s, pos);
  }
}

}  // namespace

ParsedPatch parse_unified(std::string_view unified) {
  ParsedPatch patch;
  bool terminated = true;
  const auto lines = text::split_raw_lines(unified, &terminated);
  std::size_t i = 0;
  if (lines.empty()) return patch;
  if (lines.size() < 2 || lines[0].rfind("--- ", 0) != 0 || lines[1].rfind("+++ ", 0) != 0) {
    throw DataError("unified diff must start with ---/+++ headers");
  }
  auto strip_prefix = [](std::string_view p, std::string_view pre) {
    return std::string(p.rfind(pre, 0) == 0 ? p.substr(pre.size()) : p);
  };
  patch.old_path = strip_prefix(std::string_view(lines[0]).substr(4), "a/");
  patch.new_path = strip_prefix(std::string_view(lines[1]).substr(4), "b/");
  i = 2;
  while (i < lines.size()) {
    const std::string_view h = lines[i];
    if (h.rfind("@@ -", 0) != 0) throw DataError("expected hunk header, got: " + std::string(h));
    Hunk hunk;
    std::size_t pos = 4;
    parse_range(h, pos, hunk.old_start, hunk.old_count);
    if (h.substr(pos, 2) != " +") throw DataError("malformed hunk header: " + std::string(h));
    pos += 2;
    parse_range(h, pos, hunk.new_start, hunk.new_count);
    if (h.substr(pos, 3) != " @@") throw DataError("malformed hunk header: " + std::string(h));
    ++i;
    std::size_t seen_old = 0, seen_new = 0;
    while (i < lines.size() && (seen_old < hunk.old_count || seen_new < hunk.new_count ||
                                (!lines[i].empty() && lines[i][0] == '\\'))) {
      const std::string& l = lines[i];
      if (l.empty()) throw DataError("empty line inside hunk");
      if (l[0] == '\\') {
        if (hunk.lines.empty()) throw DataError("no-newline marker without a line");
        hunk.no_newline.back() = true;
      } else if (l[0] == ' ' || l[0] == '-' || l[0] == '+') {
        if (l[0] != '+') ++seen_old;
        if (l[0] != '-') ++seen_new;
        hunk.lines.push_back(l);
        hunk.no_newline.push_back(false);
      } else {
        throw DataError("unexpected line inside hunk: " + l);
      }
      ++i;
    }
    if (seen_old != hunk.old_count || seen_new != hunk.new_count) {
      throw DataError("hunk line counts do not match its header");
    }
    patch.hunks.push_back(std::move(hunk));
  }
  return patch;
}

std::string apply_patch(std::string_view old_source, const ParsedPatch& patch) {
  bool old_terminated = true;
  const auto old_lines = text::split_raw_lines(old_source, &old_terminated);
  std::vector<std::string> out;
  bool out_terminated = true;
  std::size_t cursor = 0;  // next unconsumed old line, 0-based
  bool tail_from_old = true;

  for (const auto& h : patch.hunks) {
    const std::size_t first_old = h.old_count ? h.old_start - 1 : h.old_start;
    if (first_old < cursor || first_old > old_lines.size()) {
      throw DataError("hunk out of order or beyond end of file");
    }
    while (cursor < first_old) out.push_back(old_lines[cursor++]);
    for (std::size_t k = 0; k < h.lines.size(); ++k) {
      const char tag = h.lines[k][0];
      const std::string body = h.lines[k].substr(1);
      if (tag != '+') {
        if (cursor >= old_lines.size() || old_lines[cursor] != body) {
          throw DataError("patch does not apply at old line " + std::to_string(cursor + 1));
        }
        ++cursor;
      }
      if (tag != '-') {
        out.push_back(body);
        out_terminated = !h.no_newline[k];
        tail_from_old = false;
      }
    }
    if (cursor == old_lines.size() && !h.lines.empty()) {
      // The hunk reached the end of the old file; termination is decided by it.
      tail_from_old = false;
    }
  }
  if (cursor < old_lines.size()) {
    while (cursor < old_lines.size()) out.push_back(old_lines[cursor++]);
    tail_from_old = true;
  }
  if (tail_from_old) out_terminated = old_terminated;

  std::string result;
  for (std::size_t i = 0; i < out.size(); ++i) {
    result += out[i];
    if (i + 1 < out.size() || out_terminated) result += '\n';
  }
  return result;
}

}  // namespace driftlens
