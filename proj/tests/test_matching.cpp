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

#include <cstdlib>
#include <random>
#include <set>
#include <string>

#include "doctest.h"
#include "driftlens/error.hpp"
#include "driftlens/matching.hpp"
#include "support/synthetic.hpp"

using namespace driftlens;

namespace {

VersionedFile file(std::string path, std::string src, Label l = Label::benign) {
  return {std::move(path), std::move(src), l, ""};
}

std::string fixture(const std::string& name) {
  const char* dir = std::getenv("DRIFTLENS_FIXTURES");
  return std::string(dir ? dir : "tests/fixtures") + "/" + name;
}

}  // namespace

TEST_CASE("dice similarity on line sets") {
  CHECK(dice_similarity("a\nb\nc\n", "a\nb\nc\n") == 1.0);
  CHECK(dice_similarity("a\nb\nc\n", "b\nc\nd\n") == doctest::Approx(2.0 * 2 / 6));
  CHECK(dice_similarity("a\nb\n", "c\nd\n") == 0.0);
  CHECK(dice_similarity("", "") == 1.0);
  CHECK(dice_similarity("", "a\n") == 0.0);
  // Duplicates collapse; trailing whitespace is ignored, indentation is not.
  CHECK(dice_similarity("a\na\na\n", "a\n") == 1.0);
  CHECK(dice_similarity("x  \n", "x\n") == 1.0);
  CHECK(dice_similarity("  x\n", "x\n") == 0.0);
}

TEST_CASE("dice agrees with the set oracle on generated text") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    auto trial = testing::make_matching_trial(rng, true);
    for (const auto& of : trial.old_set.files()) {
      const auto& nf = trial.new_set.files()[0];
      CHECK(dice_similarity(of, nf) == doctest::Approx(testing::oracle_dice(of.source, nf.source)).epsilon(1e-12));
    }
  }
}

TEST_CASE("accept rule edge cases") {
  MatchParams p{0.7, 1.0};
  CHECK_FALSE(accept_best({}, p).has_value());
  CHECK(accept_best({0.8}, p) == 0u);
  CHECK_FALSE(accept_best({0.6}, p).has_value());
  // One gap: sigma is 0 and the gap equals its own mean.
  CHECK(accept_best({0.1, 0.9}, p) == 1u);
  // Clear separation among several candidates.
  CHECK(accept_best({0.05, 0.9, 0.1, 0.08}, p) == 1u);
  // Two near-equal leaders: the top gap is below the mean gap.
  CHECK_FALSE(accept_best({0.85, 0.84, 0.1, 0.0}, p).has_value());
}

TEST_CASE("accept rule agrees with the oracle on random score lists") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t m = 1 + rng() % 12;
    std::vector<double> s(m);
    for (auto& x : s) x = std::round(u(rng) * 100) / 100;
    const double T = (rng() % 11) / 10.0, c = (rng() % 4) * 0.5;
    const bool expect = testing::oracle_accept(s, T, c);
    const auto got = accept_best(s, {T, c});
    CHECK(got.has_value() == expect);
    if (got) CHECK(s[*got] == *std::max_element(s.begin(), s.end()));
  }
}

TEST_CASE("path matches win regardless of content") {
  VersionSet v1("d", "1", {file("A.java", "x\n"), file("B.java", "y\n")});
  VersionSet v2("d", "2", {file("A.java", "totally different\n")});
  const auto m = match_files(v1, v2);
  REQUIRE(m.size() == 1);
  CHECK(m[0].kind == MatchKind::path);
  CHECK(m[0].old_path == "A.java");
  CHECK_FALSE(m[0].similarity.has_value());
}

TEST_CASE("similarity candidates exclude path-matched old files") {
  const std::string body = "a\nb\nc\nd\ne\n";
  VersionSet v1("d", "1", {file("Keep.java", body)});
  VersionSet v2("d", "2", {file("Keep.java", body), file("Copy.java", body)});
  const auto m = match_files(v1, v2);
  CHECK(m[1].kind == MatchKind::none);
  CHECK_FALSE(m[1].old_path.has_value());
}

TEST_CASE("single candidate only needs the threshold") {
  VersionSet v1("d", "1", {file("old/A.java", "a\nb\nc\nd\n")});
  VersionSet v2("d", "2", {file("new/A.java", "a\nb\nc\nz\n")});
  auto m = match_files(v1, v2, {0.7, 1.0});
  CHECK(m[0].kind == MatchKind::similarity);
  CHECK(*m[0].similarity == doctest::Approx(0.75));
  m = match_files(v1, v2, {0.8, 1.0});
  CHECK(m[0].kind == MatchKind::none);
}

TEST_CASE("one-to-one assignment gives the old file to the closer new file") {
  VersionSet v1("d", "1", {file("old/A.java", "a\nb\nc\nd\ne\nf\ng\nh\ni\nj\n")});
  VersionSet v2("d", "2", {file("n/X.java", "a\nb\nc\nd\ne\nf\ng\nh\nq\nr\n"),
                           file("n/Y.java", "a\nb\nc\nd\ne\nf\ng\nh\ni\nr\n")});
  const auto m = match_files(v1, v2, {0.5, 1.0});
  CHECK(m[0].kind == MatchKind::none);
  CHECK(m[1].kind == MatchKind::similarity);
  CHECK(m[1].old_path == "old/A.java");
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((MatchParams{1.5, 1.0}.validate()), ConfigError);
  CHECK_THROWS_AS((MatchParams{0.5, -1.0}.validate()), ConfigError);
  CHECK_NOTHROW((MatchParams{0.0, 0.0}.validate()));
}

TEST_CASE("subset coding") {
  CHECK(transition_subset(Label::benign, Label::benign) == Subset::B00);
  CHECK(transition_subset(Label::defective, Label::benign) == Subset::B10);
  CHECK(transition_subset(Label::benign, Label::defective) == Subset::D01);
  CHECK(transition_subset(Label::defective, Label::defective) == Subset::D11);
  for (auto s : {Subset::B00, Subset::B10, Subset::D01, Subset::D11, Subset::unchanged_source,
                 Subset::added}) {
    CHECK(parse_subset(to_string(s)) == s);
  }
}

TEST_CASE("identical versions are all same-source") {
  std::mt19937_64 rng(3);
  auto cp = testing::make_corpus_pair(rng, 40);
  const auto p = partition(cp.old_set, cp.old_set, match_files(cp.old_set, cp.old_set));
  CHECK(p.stats.same_source == cp.old_set.size());
  CHECK(p.stats.events() == cp.old_set.size());
  const auto pct = p.stats.union_basis();
  CHECK(pct.same_source == doctest::Approx(100.0));
  CHECK(pct.sum() == doctest::Approx(100.0));
}

TEST_CASE("three-file toy corpus") {
  VersionSet v1("d", "1", {file("A.java", "a\n"), file("B.java", "b\n"), file("C.java", "c\n")});
  VersionSet v2("d", "2", {file("A.java", "a\n"), file("B.java", "b2\n", Label::defective)});
  const auto p = partition(v1, v2, match_files(v1, v2));
  CHECK(p.stats.D01 == 1);
  CHECK(p.stats.removed == 1);
  CHECK(p.stats.same_source == 1);
  CHECK(p.removed_paths == std::vector<std::string>{"C.java"});
}

TEST_CASE("toy fixture partition") {
  const auto v1 = load_version(fixture("toy-1.0.csv"), {}, "toy");
  const auto v2 = load_version(fixture("toy-1.1.csv"), {}, "toy");
  const auto p = partition(v1, v2, match_files(v1, v2));
  CHECK(p.stats.removed == 1);
  CHECK(p.stats.added == 1);
  CHECK(p.stats.same_source == 1);
  CHECK(p.stats.B00 == 1);
  CHECK(p.stats.B10 == 1);
  CHECK(p.stats.D01 == 1);
  CHECK(p.stats.D11 == 2);
}

TEST_CASE("partition properties on generated corpora") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 50; ++t) {
    auto cp = testing::make_corpus_pair(rng, 60);
    const auto p = partition(cp.old_set, cp.new_set, match_files(cp.old_set, cp.new_set));
    CHECK(p.records.size() == cp.new_set.size());
    std::set<std::string> olds;
    for (const auto& r : p.records) {
      CHECK((r.subset == Subset::added) == !r.old_file.has_value());
      if (r.old_file) {
        CHECK(olds.insert(r.old_file->path).second);
        if (is_transition(r.subset)) {
          CHECK(r.old_file->source != r.new_file.source);
          CHECK(r.subset == transition_subset(r.old_file->label, r.new_file.label));
        } else {
          CHECK(r.old_file->source == r.new_file.source);
        }
      }
    }
    CHECK(p.stats.removed == cp.expected.removed);
    CHECK(p.stats.added == cp.expected.added);
    CHECK(p.stats.same_source == cp.expected.same_source);
    CHECK(p.stats.B00 == cp.expected.B00);
    CHECK(p.stats.B10 == cp.expected.B10);
    CHECK(p.stats.D01 == cp.expected.D01);
    CHECK(p.stats.D11 == cp.expected.D11);
    CHECK(p.stats.union_basis().sum() == doctest::Approx(100.0).epsilon(1e-6));
  }
}

TEST_CASE("recovery and false-match rates on synthetic trials") {
  std::mt19937_64 rng(99);
  const MatchParams params{0.5, 1.0};
  int recovered = 0, false_matches = 0;
  const int trials = 300;
  for (int t = 0; t < trials; ++t) {
    auto with = testing::make_matching_trial(rng, true);
    auto m = match_files(with.old_set, with.new_set, params);
    recovered += m[0].old_path == with.predecessor_path;
    auto without = testing::make_matching_trial(rng, false);
    m = match_files(without.old_set, without.new_set, params);
    false_matches += m[0].old_path.has_value();
  }
  CHECK(recovered >= trials * 99 / 100);
  CHECK(false_matches <= trials / 100);
}

TEST_CASE("partition table layout") {
  PartitionStats s;
  s.same_source = 1;
  s.B00 = 3;
  const auto table = format_partition_table("toy", s.union_basis());
  CHECK(table.find("B00") != std::string::npos);
  CHECK(table.find("75.00") != std::string::npos);
  CHECK(table.find("25.00") != std::string::npos);
}
