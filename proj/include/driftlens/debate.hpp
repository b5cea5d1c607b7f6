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
#include <string>
#include <vector>

#include "driftlens/context.hpp"
#include "driftlens/diffing.hpp"
#include "driftlens/error.hpp"
#include "driftlens/llm_client.hpp"
#include "driftlens/matching.hpp"
#include "driftlens/prompting.hpp"

namespace driftlens {

struct DebateConfig {
  int rounds = 1;
  std::map<Role, std::string> role_models = {
      {Role::analyzer, "gemini-2.5-flash-lite"},
      {Role::proposer, "gpt-5-mini"},
      {Role::skeptic, "codestral-2501"},
      {Role::judge, "deepseek-v3.1"},
  };
  std::size_t depth = kDefaultContextDepth;
  std::size_t max_lines = kBestMaxLines;
  double temperature = 0.0;

  void validate() const;  // ConfigError
};

// "analyzer=a,proposer=b,..." -> role map; unknown roles are ConfigError.
std::map<Role, std::string> parse_role_models(std::string_view spec);

struct DebateTranscript {
  std::string record_id;
  std::vector<DebateMessage> messages;
  ParsedPrediction verdict;
  DebateConfig config;
  // Judge reply that failed to parse before the re-ask, if any.
  std::optional<std::string> failed_judge_reply;
};

// Transport failure mid-debate; carries the messages produced so far.
class DebateError : public TransportError {
 public:
  DebateError(const TransportError& cause, DebateTranscript partial)
      : TransportError(cause.what(), cause.status()), partial_(std::move(partial)) {}
  const DebateTranscript& partial() const { return partial_; }

 private:
  DebateTranscript partial_;
};

// analyzer@0, (proposer@r, skeptic@r) for r = 1..R, judge@R.
std::vector<std::pair<Role, int>> debate_schedule(int rounds);

DebateTranscript run_debate(const EvolutionRecord& record, const ChangeSet& cs,
                            const ContextBundle& ctx, const DebateConfig& cfg,
                            ChatClient& client);

// Self-describing JSON document; write/read round-trip.
std::string transcript_to_json(const DebateTranscript& t);
DebateTranscript transcript_from_json(const std::string& json);
// File name derived from the record id (path separators replaced).
std::string transcript_file_name(const std::string& record_id);

}  // namespace driftlens
