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

#include "driftlens/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "driftlens/error.hpp"

namespace driftlens {

ConfusionCounts confusion(std::span<const int> labels, std::span<const int> preds) {
  if (labels.size() != preds.size()) {
    throw DataError("label and prediction vectors differ in length");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool y = labels[i] != 0;
    const bool p = preds[i] != 0;
    if (y && p) ++c.tp;
    if (!y && p) ++c.fp;
    if (!y && !p) ++c.tn;
    if (y && !p) ++c.fn;
  }
  return c;
}

namespace {

double ratio(double num, double den) { return den == 0 ? 0.0 : num / den; }

PRF class_prf(double tp, double fp, double fn) {
  PRF r;
  r.precision = ratio(tp, tp + fp);
  r.recall = ratio(tp, tp + fn);
  r.f1 = ratio(2 * r.precision * r.recall, r.precision + r.recall);
  return r;
}

}  // namespace

PRF macro_prf(const ConfusionCounts& c) {
  const PRF pos = class_prf(c.tp, c.fp, c.fn);
  const PRF neg = class_prf(c.tn, c.fn, c.fp);
  return {(pos.precision + neg.precision) / 2, (pos.recall + neg.recall) / 2,
          (pos.f1 + neg.f1) / 2};
}

PRF macro_prf(std::span<const int> labels, std::span<const int> preds) {
  return macro_prf(confusion(labels, preds));
}

double auc(std::span<const int> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) throw DataError("label and score vectors differ in length");
  const std::size_t n = labels.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Average ranks over tie groups, then Mann-Whitney U.
  double pos_rank_sum = 0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] != 0) {
        pos_rank_sum += avg_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return 0.5;
  const double u = pos_rank_sum - static_cast<double>(n_pos) * (n_pos + 1) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double fpr(const ConfusionCounts& c) { return ratio(c.fp, c.fp + c.tn); }

double mcc(const ConfusionCounts& c) {
  const double tp = c.tp, fp = c.fp, tn = c.tn, fn = c.fn;
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (den == 0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(den);
}

Standard standard_metrics(std::span<const int> labels, std::span<const int> preds) {
  Standard s;
  const auto c = confusion(labels, preds);
  s.prf = macro_prf(c);
  std::vector<double> scores(preds.begin(), preds.end());
  s.auc = auc(labels, scores);
  s.fpr = fpr(c);
  s.mcc = mcc(c);
  s.n = labels.size();
  return s;
}

double harmonic_mean(double a, double b) { return a + b == 0 ? 0.0 : 2 * a * b / (a + b); }

std::optional<double> subset_harmonic(std::optional<double> a, std::optional<double> b) {
  if (!a && !b) return std::nullopt;
  return harmonic_mean(a.value_or(0.0), b.value_or(0.0));
}

EvaluationReport evaluate(const std::vector<EvolutionRecord>& records,
                          const std::map<std::string, Label>& preds, std::string method) {
  EvaluationReport rep;
  rep.method = std::move(method);
  std::vector<int> y_all, p_all, y_ch, p_ch, y_un, p_un;
  std::map<Subset, std::size_t> correct;
  for (auto s : kTransitionSubsets) rep.subset_counts[s] = 0;
  for (const auto& r : records) {
    auto it = preds.find(r.id());
    if (it == preds.end()) {
      ++rep.excluded;
      continue;
    }
    const int y = to_int(r.new_file.label);
    const int p = to_int(it->second);
    y_all.push_back(y);
    p_all.push_back(p);
    if (!is_transition(r.subset)) continue;
    ++rep.subset_counts[r.subset];
    if (y == p) ++correct[r.subset];
    if (r.subset == Subset::B10 || r.subset == Subset::D01) {
      y_ch.push_back(y);
      p_ch.push_back(p);
    } else {
      y_un.push_back(y);
      p_un.push_back(p);
    }
  }
  rep.evaluated = y_all.size();
  for (auto s : kTransitionSubsets) {
    const auto n = rep.subset_counts[s];
    rep.subset_accuracy[s] =
        n == 0 ? std::nullopt
               : std::optional<double>(static_cast<double>(correct[s]) / static_cast<double>(n));
  }
  rep.hmb = subset_harmonic(rep.subset_accuracy[Subset::B00], rep.subset_accuracy[Subset::D01]);
  rep.hmd = subset_harmonic(rep.subset_accuracy[Subset::B10], rep.subset_accuracy[Subset::D11]);
  if (!y_all.empty()) rep.total = standard_metrics(y_all, p_all);
  if (!y_ch.empty()) rep.changed = standard_metrics(y_ch, p_ch);
  if (!y_un.empty()) rep.unchanged = standard_metrics(y_un, p_un);
  return rep;
}

namespace {

std::string fmt(std::optional<double> v) {
  if (!v) return "-";
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << *v;
  return os.str();
}

std::string fmt4(std::optional<double> v) {
  if (!v) return "";
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << *v;
  return os.str();
}

std::optional<double> f1_of(const std::optional<Standard>& s) {
  return s ? std::optional<double>(s->prf.f1) : std::nullopt;
}

}  // namespace

std::string format_report_table(const std::vector<EvaluationReport>& rows) {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.method.size());
  std::ostringstream os;
  const char* cols[] = {"Prec", "Rec", "F1",  "AUC",   "Unch-F1", "Ch-F1", "B00",
                        "D01",  "D11", "B10", "HMB",   "HMD",     "n",     "excl"};
  os << std::left << std::setw(static_cast<int>(width)) << "Method";
  for (const char* c : cols) os << std::right << std::setw(8) << c;
  os << "\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(static_cast<int>(width)) << r.method << std::right;
    for (auto v : {std::optional<double>(r.total.prf.precision),
                   std::optional<double>(r.total.prf.recall),
                   std::optional<double>(r.total.prf.f1), std::optional<double>(r.total.auc),
                   f1_of(r.unchanged), f1_of(r.changed), r.subset_accuracy.at(Subset::B00),
                   r.subset_accuracy.at(Subset::D01), r.subset_accuracy.at(Subset::D11),
                   r.subset_accuracy.at(Subset::B10), r.hmb, r.hmd}) {
      os << std::setw(8) << fmt(v);
    }
    os << std::setw(8) << r.evaluated << std::setw(8) << r.excluded << "\n";
  }
  return os.str();
}

std::string format_report_csv(const std::vector<EvaluationReport>& rows) {
  std::ostringstream os;
  os << "method,precision,recall,f1,auc,fpr,mcc,unchanged_f1,changed_f1,"
        "acc_B00,acc_D01,acc_D11,acc_B10,n_B00,n_D01,n_D11,n_B10,hmb,hmd,"
        "evaluated,excluded,elapsed_seconds\n";
  for (const auto& r : rows) {
    os << r.method << ',' << fmt4(r.total.prf.precision) << ',' << fmt4(r.total.prf.recall)
       << ',' << fmt4(r.total.prf.f1) << ',' << fmt4(r.total.auc) << ',' << fmt4(r.total.fpr)
       << ',' << fmt4(r.total.mcc) << ',' << fmt4(f1_of(r.unchanged)) << ','
       << fmt4(f1_of(r.changed));
    for (auto s : {Subset::B00, Subset::D01, Subset::D11, Subset::B10}) {
      os << ',' << fmt4(r.subset_accuracy.at(s));
    }
    for (auto s : {Subset::B00, Subset::D01, Subset::D11, Subset::B10}) {
      os << ',' << r.subset_counts.at(s);
    }
    os << ',' << fmt4(r.hmb) << ',' << fmt4(r.hmd) << ',' << r.evaluated << ',' << r.excluded
       << ',' << fmt4(r.elapsed_seconds) << "\n";
  }
  return os.str();
}

}  // namespace driftlens
