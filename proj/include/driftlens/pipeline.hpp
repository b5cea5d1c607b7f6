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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "driftlens/artifacts.hpp"
#include "driftlens/baselines.hpp"
#include "driftlens/corpus.hpp"
#include "driftlens/debate.hpp"
#include "driftlens/llm_client.hpp"
#include "driftlens/matching.hpp"
#include "driftlens/metrics.hpp"
#include "driftlens/prompting.hpp"

namespace driftlens {

struct RunConfig {
  std::string dataset;
  std::string old_csv;
  std::string new_csv;
  ColumnSpec columns;
  MatchParams match;
  std::size_t diff_context = 3;
  std::size_t depth = kDefaultContextDepth;
  std::size_t max_lines = kBestMaxLines;

  // Exactly one selector is active.
  std::optional<BaselineKind> baseline;
  std::optional<PromptMethod> method;
  bool debate = false;
  DebateConfig debate_config;

  std::string model = "gpt-5-mini";  // single-shot methods
  std::string base_url;  // empty: environment, then the default endpoint
  std::size_t max_in_flight = 4;
  bool stub = false;
  std::string stub_reply;   // default canned reply in stub mode
  std::string stub_script;  // optional JSON script file

  std::map<Subset, std::size_t> sample_caps;  // per-subset record cap
  std::size_t max_records = 0;                // 0 = no limit
  std::size_t exemplar_count = 3;
  std::uint64_t seed = 42;
  std::string out_dir = "driftlens_out";

  void validate() const;  // ConfigError
};

// Flat `key = value` text; '#' starts a comment. Unknown keys are errors.
RunConfig parse_run_config(const std::string& text, RunConfig base = {});
void apply_config_value(RunConfig& cfg, const std::string& key,
                        const std::string& value);
// Inverse of parse_run_config; secrets are never written.
std::string format_run_config(const RunConfig& cfg);

// Seeded per-subset sampling; order of the surviving records is preserved.
std::vector<EvolutionRecord> sample_records(std::vector<EvolutionRecord> records,
                                            const std::map<Subset, std::size_t>& caps,
                                            std::uint64_t seed);

// Deterministic exemplar snippets drawn from defective old-version files.
std::vector<std::string> select_exemplars(const VersionSet& old_set,
                                          std::string_view exclude_path,
                                          std::size_t count, std::uint64_t seed);

// Diff, context and exemplars for one record, as the prompt builders need them.
struct RecordMaterials {
  ChangeSet changes;
  std::optional<ContextBundle> context;
  std::vector<std::string> exemplars;
};

RecordMaterials prepare_materials(const EvolutionRecord& record, const VersionSet& old_set,
                                  const RunConfig& cfg, bool with_context,
                                  bool with_exemplars);

struct RunResult {
  EvaluationReport report;
  std::vector<EvolutionRecord> evaluated;
  std::vector<PredictionRow> predictions;
  std::vector<DebateTranscript> transcripts;
  PartitionStats stats;
};

// Stage error carrying the stage name.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Full pipeline. Writes manifest.txt, matches.csv, records.csv,
// predictions.csv, report.txt, report.csv and transcripts/ under out_dir.
// `client` overrides the client built from the config (tests).
RunResult run(const RunConfig& cfg, std::shared_ptr<ChatClient> client = nullptr);

std::shared_ptr<ChatClient> make_client(const RunConfig& cfg);

}  // namespace driftlens
