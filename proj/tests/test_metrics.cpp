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
#include "driftlens/metrics.hpp"

using namespace driftlens;

namespace {

// Per-class counts straight from the vectors; no shared helpers.
double brute_f1_for(const std::vector<int>& y, const std::vector<int>& p, int cls, double* prec,
                    double* rec) {
  double hit = 0, predicted = 0, actual = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    hit += (y[i] == cls && p[i] == cls);
    predicted += (p[i] == cls);
    actual += (y[i] == cls);
  }
  *prec = predicted > 0 ? hit / predicted : 0;
  *rec = actual > 0 ? hit / actual : 0;
  return *prec + *rec > 0 ? 2 * *prec * *rec / (*prec + *rec) : 0;
}

double brute_auc(const std::vector<int>& y, const std::vector<double>& s) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[i] == 1 && y[j] == 0) {
        pairs += 1;
        wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
      }
    }
  }
  return pairs > 0 ? wins / pairs : 0.5;
}

EvolutionRecord rec(const std::string& id, Subset s) {
  EvolutionRecord r;
  const bool old_def = s == Subset::B10 || s == Subset::D11;
  const bool new_def = s == Subset::D01 || s == Subset::D11;
  r.new_file = {id, "n", new_def ? Label::defective : Label::benign, "2"};
  r.old_file = VersionedFile{id, "o", old_def ? Label::defective : Label::benign, "1"};
  r.subset = s;
  return r;
}

}  // namespace

TEST_CASE("macro scores from fixed counts") {
  ConfusionCounts c;
  c.tp = 2;
  c.fp = 1;
  c.fn = 1;
  c.tn = 6;
  CHECK(macro_prf(c).f1 == doctest::Approx((2.0 / 3 + 6.0 / 7) / 2));
  CHECK(macro_prf(c).f1 == doctest::Approx(0.7619).epsilon(1e-4));
  CHECK(fpr(c) == doctest::Approx(1.0 / 7));
  CHECK(mcc(c) == doctest::Approx((2.0 * 6 - 1) / std::sqrt(3.0 * 3 * 7 * 7)));
}

TEST_CASE("perfect predictions") {
  const std::vector<int> y = {0, 1, 0, 1};
  const auto prf = macro_prf(y, y);
  CHECK(prf.precision == 1.0);
  CHECK(prf.recall == 1.0);
  CHECK(prf.f1 == 1.0);
  const std::vector<double> s = {0.1, 0.9, 0.2, 0.8};
  CHECK(auc(y, s) == 1.0);
}

TEST_CASE("degenerate cases use the zero convention") {
  const std::vector<int> y = {0, 0, 0};
  const std::vector<int> p = {0, 0, 0};
  const auto prf = macro_prf(y, p);
  CHECK(prf.f1 == doctest::Approx(0.5));
  CHECK(mcc(confusion(y, p)) == 0.0);
  CHECK(auc(y, std::vector<double>{0, 0, 0}) == 0.5);
  CHECK(fpr(ConfusionCounts{}) == 0.0);
}

TEST_CASE("harmonic means of subset accuracies") {
  CHECK(harmonic_mean(0.71, 0.52) == doctest::Approx(0.6003).epsilon(1e-4));
  CHECK(harmonic_mean(0.18, 0.80) == doctest::Approx(0.2939).epsilon(1e-4));
  CHECK(harmonic_mean(0.9, 0.0) == 0.0);
  CHECK(harmonic_mean(0.0, 0.0) == 0.0);
  CHECK_FALSE(subset_harmonic(std::nullopt, std::nullopt).has_value());
  CHECK(subset_harmonic(0.8, std::nullopt) == 0.0);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng), b = u(rng);
    CHECK(harmonic_mean(a, b) == harmonic_mean(b, a));
    CHECK(harmonic_mean(a, b) <= 2 * std::min(a, b) + 1e-15);
  }
}

TEST_CASE("metrics agree with brute force on random vectors") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<int> y(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<int>(rng() % 2);
      p[i] = static_cast<int>(rng() % 2);
    }
    double p1, r1, p0, r0;
    const double f1 = brute_f1_for(y, p, 1, &p1, &r1);
    const double f0 = brute_f1_for(y, p, 0, &p0, &r0);
    const auto prf = macro_prf(y, p);
    CHECK(std::abs(prf.precision - (p1 + p0) / 2) <= 1e-12);
    CHECK(std::abs(prf.recall - (r1 + r0) / 2) <= 1e-12);
    CHECK(std::abs(prf.f1 - (f1 + f0) / 2) <= 1e-12);

    const std::vector<double> s(p.begin(), p.end());
    const double a = auc(y, s);
    CHECK(std::abs(a - brute_auc(y, s)) <= 1e-12);
    const bool both = std::count(y.begin(), y.end(), 1) > 0 && std::count(y.begin(), y.end(), 0) > 0;
    if (both) CHECK(std::abs(a - (r1 + r0) / 2) <= 1e-12);
  }
}

TEST_CASE("continuous scores with ties") {
  const std::vector<int> y = {1, 0, 1, 0, 1};
  const std::vector<double> s = {0.9, 0.9, 0.2, 0.1, 0.5};
  CHECK(auc(y, s) == doctest::Approx(brute_auc(y, s)));
}

TEST_CASE("evaluation report") {
  std::vector<EvolutionRecord> rs = {rec("a", Subset::B00), rec("b", Subset::B00),
                                     rec("c", Subset::D01), rec("d", Subset::D11),
                                     rec("e", Subset::B10), rec("f", Subset::unchanged_source)};
  std::map<std::string, Label> preds = {{"a", Label::benign},    {"b", Label::defective},
                                        {"c", Label::defective}, {"d", Label::defective},
                                        {"f", Label::benign}};
  const auto r = evaluate(rs, preds, "x");
  CHECK(r.method == "x");
  CHECK(r.excluded == 1);
  CHECK(r.evaluated == 5);
  CHECK(r.subset_accuracy.at(Subset::B00) == 0.5);
  CHECK(r.subset_accuracy.at(Subset::D01) == 1.0);
  CHECK(r.subset_accuracy.at(Subset::D11) == 1.0);
  CHECK_FALSE(r.subset_accuracy.at(Subset::B10).has_value());
  CHECK(r.subset_counts.at(Subset::B10) == 0);
  CHECK(*r.hmb == doctest::Approx(2 * 0.5 * 1.0 / 1.5));
  CHECK(*r.hmd == doctest::Approx(0.0));
  REQUIRE(r.changed.has_value());
  CHECK(r.changed->n == 1);
  REQUIRE(r.unchanged.has_value());
  CHECK(r.unchanged->n == 3);

  const auto table = format_report_table({r});
  CHECK(table.find("HMB") != std::string::npos);
  CHECK(table.find("0.67") != std::string::npos);
  const auto csv = format_report_csv({r});
  CHECK(csv.rfind("method,precision", 0) == 0);
  CHECK(csv.find("\nx,") != std::string::npos);
}

TEST_CASE("reported values stay within the unit interval") {
  std::mt19937_64 rng(4);
  const Subset subsets[] = {Subset::B00, Subset::B10, Subset::D01, Subset::D11};
  for (int t = 0; t < 100; ++t) {
    std::vector<EvolutionRecord> rs;
    std::map<std::string, Label> preds;
    for (int i = 0; i < 30; ++i) {
      const auto id = std::to_string(i);
      rs.push_back(rec(id, subsets[rng() % 4]));
      if (rng() % 10) preds[id] = rng() % 2 ? Label::defective : Label::benign;
    }
    const auto r = evaluate(rs, preds);
    for (double v : {r.total.prf.precision, r.total.prf.recall, r.total.prf.f1, r.total.auc,
                     r.total.fpr}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(r.total.mcc >= -1.0);
    CHECK(r.total.mcc <= 1.0);
    CHECK(r.evaluated + r.excluded == rs.size());
  }
}
