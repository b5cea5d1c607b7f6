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

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "driftlens/matching.hpp"

namespace driftlens {

// Positive class = defective.
struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t total() const { return tp + fp + tn + fn; }
};

ConfusionCounts confusion(std::span<const int> labels, std::span<const int> preds);

struct PRF {
  double precision = 0, recall = 0, f1 = 0;
};

// Per-class P/R/F1 (0/0 -> 0) averaged over defective and benign.
PRF macro_prf(std::span<const int> labels, std::span<const int> preds);
PRF macro_prf(const ConfusionCounts& c);

// Rank AUC with ties counted half; 0.5 when only one class is present.
double auc(std::span<const int> labels, std::span<const double> scores);
double fpr(const ConfusionCounts& c);  // fp / (fp + tn), 0 when empty
double mcc(const ConfusionCounts& c);  // 0 on a zero denominator

struct Standard {
  PRF prf;
  double auc = 0, fpr = 0, mcc = 0;
  std::size_t n = 0;
};

Standard standard_metrics(std::span<const int> labels, std::span<const int> preds);

// 2ab / (a + b); 0 when a + b == 0.
double harmonic_mean(double a, double b);

// Harmonic mean over optional subset accuracies: absent when both are
// absent, an absent side counts as 0 when its partner exists.
std::optional<double> subset_harmonic(std::optional<double> a, std::optional<double> b);

inline constexpr std::array<Subset, 4> kTransitionSubsets = {
    Subset::B00, Subset::B10, Subset::D01, Subset::D11};

struct EvaluationReport {
  std::string method;
  std::map<Subset, std::optional<double>> subset_accuracy;
  std::map<Subset, std::size_t> subset_counts;
  std::optional<double> hmb, hmd;
  Standard total;
  std::optional<Standard> changed;    // B10 u D01
  std::optional<Standard> unchanged;  // B00 u D11
  std::size_t excluded = 0;           // failed parses
  std::size_t evaluated = 0;
  double elapsed_seconds = 0;
};

// `preds` maps record id -> label; records without an entry count as
// excluded. All records passed in are the evaluated population.
EvaluationReport evaluate(const std::vector<EvolutionRecord>& records,
                          const std::map<std::string, Label>& preds,
                          std::string method = {});

// Aligned table in the layout of the change-aware comparison tables.
std::string format_report_table(const std::vector<EvaluationReport>& rows);
std::string format_report_csv(const std::vector<EvaluationReport>& rows);

}  // namespace driftlens
