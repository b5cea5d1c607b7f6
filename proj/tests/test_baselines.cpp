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

#include <cmath>
#include <random>

#include "doctest.h"
#include "driftlens/baselines.hpp"
#include "driftlens/metrics.hpp"

using namespace driftlens;

namespace {

EvolutionRecord common(const std::string& id, Label old_label, Label new_label) {
  EvolutionRecord r;
  r.new_file = {id, "new", new_label, "2"};
  r.old_file = VersionedFile{id, "old", old_label, "1"};
  r.match_kind = MatchKind::path;
  r.subset = transition_subset(old_label, new_label);
  return r;
}

EvolutionRecord added(const std::string& id, Label l) {
  EvolutionRecord r;
  r.new_file = {id, "new", l, "2"};
  return r;
}

}  // namespace

TEST_CASE("label persistence and constant benign") {
  const std::vector<EvolutionRecord> rs = {
      common("d11", Label::defective, Label::defective),
      common("b10", Label::defective, Label::benign),
      common("d01", Label::benign, Label::defective),
      added("new", Label::defective),
  };
  const auto lp = predict_naive(rs, BaselineKind::label_persistent);
  CHECK(lp.at("d11") == Label::defective);
  CHECK(lp.at("b10") == Label::defective);
  CHECK(lp.at("d01") == Label::benign);
  CHECK(lp.at("new") == Label::benign);
  for (const auto& [id, l] : predict_naive(rs, BaselineKind::all_benign)) {
    CHECK(l == Label::benign);
  }
}

TEST_CASE("persistence is right on stable subsets and wrong on transitions") {
  std::vector<EvolutionRecord> rs;
  for (int i = 0; i < 5; ++i) {
    rs.push_back(common("b00_" + std::to_string(i), Label::benign, Label::benign));
    rs.push_back(common("b10_" + std::to_string(i), Label::defective, Label::benign));
    rs.push_back(common("d01_" + std::to_string(i), Label::benign, Label::defective));
    rs.push_back(common("d11_" + std::to_string(i), Label::defective, Label::defective));
  }
  const auto report = evaluate(rs, predict_naive(rs, BaselineKind::label_persistent));
  CHECK(report.subset_accuracy.at(Subset::B00) == 1.0);
  CHECK(report.subset_accuracy.at(Subset::D11) == 1.0);
  CHECK(report.subset_accuracy.at(Subset::B10) == 0.0);
  CHECK(report.subset_accuracy.at(Subset::D01) == 0.0);
  CHECK(report.hmb == 0.0);
  CHECK(report.hmd == 0.0);
}

TEST_CASE("persistence accuracy tracks the flip probability") {
  for (double eps : {0.02, 0.1, 0.25}) {
    CAPTURE(eps);
    std::mt19937_64 rng(static_cast<std::uint64_t>(eps * 1000));
    std::bernoulli_distribution flip(eps), prior(0.2);
    std::vector<EvolutionRecord> rs;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
      const Label old_label = prior(rng) ? Label::defective : Label::benign;
      Label new_label = old_label;
      if (flip(rng)) new_label = old_label == Label::benign ? Label::defective : Label::benign;
      rs.push_back(common("f" + std::to_string(i), old_label, new_label));
    }
    const auto preds = predict_naive(rs, BaselineKind::label_persistent);
    int correct = 0;
    for (const auto& r : rs) correct += preds.at(r.id()) == r.new_file.label;
    const double acc = static_cast<double>(correct) / n;
    const double sigma = std::sqrt(eps * (1 - eps) / n);
    CHECK(acc >= 1 - eps - 3 * sigma);
  }
}

TEST_CASE("kind names") {
  CHECK(parse_baseline_kind("label-persistent") == BaselineKind::label_persistent);
  CHECK(parse_baseline_kind("all_benign") == BaselineKind::all_benign);
  CHECK_FALSE(parse_baseline_kind("random").has_value());
  CHECK(to_string(BaselineKind::all_benign) == "all-benign");
}
