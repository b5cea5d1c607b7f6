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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "driftlens/llm_client.hpp"
#include "driftlens/matching.hpp"

namespace driftlens {

// matches.csv: new_path,old_path,match_kind,similarity,subset
std::string format_matches_csv(const std::vector<EvolutionRecord>& records);

// records.csv: the matches columns plus old_label,new_label. Reading it
// back yields records without source text, enough for evaluation.
std::string format_records_csv(const std::vector<EvolutionRecord>& records);
std::vector<EvolutionRecord> parse_records_csv(const std::string& csv_text);

struct PredictionRow {
  std::string record_id;
  ParsedPrediction prediction;
};

// predictions.csv: record_id,prediction,confidence,parse_path
// (prediction empty when parsing failed).
std::string format_predictions_csv(const std::vector<PredictionRow>& rows);
std::vector<PredictionRow> parse_predictions_csv(const std::string& csv_text);

// Successful predictions only; failed rows are left out (excluded).
std::map<std::string, Label> prediction_map(const std::vector<PredictionRow>& rows);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace driftlens
