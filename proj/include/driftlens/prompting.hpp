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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "driftlens/context.hpp"
#include "driftlens/diffing.hpp"
#include "driftlens/matching.hpp"

namespace driftlens {

enum class PromptMethod { M0, M1, M2, M3, M4, M5, M6, M7, M8 };

enum class InputBlock {
  src1,
  src2,
  differences,
  unified,
  local_context,
  exemplars,
  prev_label
};

std::string_view to_string(PromptMethod m);
std::string_view to_string(InputBlock b);
std::optional<PromptMethod> parse_method(std::string_view s);
// Heading used for the block inside prompts, e.g. "[Defective Examples]".
std::string_view block_heading(InputBlock b);

const std::set<InputBlock>& required_inputs(PromptMethod m);
const std::vector<PromptMethod>& all_methods();

enum class Role { analyzer, proposer, skeptic, judge };
std::string_view to_string(Role r);
std::optional<Role> parse_role(std::string_view s);

struct DebateMessage {
  Role role = Role::analyzer;
  int round = 0;
  std::string text;
  bool operator==(const DebateMessage&) const = default;
};

struct PromptBundle {
  std::string system;
  std::string user;
  std::string tag;  // "M5", "analyzer", ...
};

// Shared system prompt for every bundle, verbatim.
extern const std::string_view kSystemPrompt;
// Output contract appended to M0-M8 prompts.
extern const std::string_view kJsonInstruction;
// Output contract appended to the judge prompt.
extern const std::string_view kJudgeContract;

struct PromptInputs {
  const EvolutionRecord* record = nullptr;
  const ChangeSet* changes = nullptr;
  const ContextBundle* context = nullptr;
  const std::vector<std::string>* exemplars = nullptr;
};

// Renders the single-shot template for `method`. The literal "Defective"
// in the template text is replaced by the record's previous label.
// Throws ConfigError naming the block when a required input is missing.
PromptBundle build_method_prompt(PromptMethod method, const PromptInputs& in);

// Debate role prompts. `round` is 0 for the analyzer, 1..R for
// proposer/skeptic and R for the judge; `history` holds every earlier
// message in schedule order. Throws OrchestrationError on a mismatch.
PromptBundle build_role_prompt(Role role, const PromptInputs& in,
                               const std::vector<DebateMessage>& history,
                               int round);

// Reminder sent with the failed reply when the judge output is unparseable.
extern const std::string_view kJudgeReaskReminder;

// Placeholder substitution over `{{name}}` markers. Throws ConfigError on
// an unknown or unterminated marker so no placeholder survives rendering.
std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& values);

}  // namespace driftlens
