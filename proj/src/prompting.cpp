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

#include "driftlens/prompting.hpp"

#include <array>

#include "driftlens/error.hpp"
#include "templates.hpp"

namespace driftlens {

namespace {

using Set = std::set<InputBlock>;
using IB = InputBlock;

std::string_view method_template(PromptMethod m) {
  switch (m) {
    case PromptMethod::M0: return templates::kM0;
    case PromptMethod::M1: return templates::kM1;
    case PromptMethod::M2: return templates::kM2;
    case PromptMethod::M3: return templates::kM3;
    case PromptMethod::M4: return templates::kM4;
    case PromptMethod::M5: return templates::kM5;
    case PromptMethod::M6: return templates::kM6;
    case PromptMethod::M7: return templates::kM7;
    case PromptMethod::M8: return templates::kM8;
  }
  return {};
}

[[noreturn]] void missing(InputBlock b, std::string_view who) {
  throw ConfigError(std::string(who) + ": missing required input " +
                    std::string(block_heading(b)));
}

std::string exemplar_text(const std::vector<std::string>& ex) {
  std::string out;
  for (std::size_t i = 0; i < ex.size(); ++i) {
    if (i) out += "\n\n";
    out += ex[i];
  }
  return out;
}

// Value for `b`, or nullopt when the inputs do not carry it.
std::optional<std::string> block_value(InputBlock b, const PromptInputs& in) {
  switch (b) {
    case IB::src1:
      if (in.record && in.record->old_file) return in.record->old_file->source;
      return std::nullopt;
    case IB::src2:
      if (in.record) return in.record->new_file.source;
      return std::nullopt;
    case IB::differences:
      if (in.changes) return render_difference_list(*in.changes);
      return std::nullopt;
    case IB::unified:
      if (in.changes) return in.changes->unified;
      return std::nullopt;
    case IB::local_context:
      if (in.context) return in.context->snippet;
      return std::nullopt;
    case IB::exemplars:
      if (in.exemplars && !in.exemplars->empty()) return exemplar_text(*in.exemplars);
      return std::nullopt;
    case IB::prev_label:
      if (in.record && in.record->old_file) {
        return std::string(label_name(in.record->old_file->label));
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::string placeholder_of(InputBlock b) {
  return b == IB::prev_label ? "prev" : std::string(to_string(b));
}

std::string render_history(const std::vector<DebateMessage>& history) {
  std::string out;
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (i) out += "\n\n";
    auto role = std::string(to_string(history[i].role));
    role[0] = static_cast<char>(role[0] - 'a' + 'A');
    out += "[" + role + ", round " + std::to_string(history[i].round) + "]\n";
    out += history[i].text;
  }
  return out;
}

// Checks that `history` is a prefix of the debate schedule.
void check_schedule_prefix(const std::vector<DebateMessage>& history) {
  for (std::size_t i = 0; i < history.size(); ++i) {
    Role want = Role::analyzer;
    int round = 0;
    if (i > 0) {
      want = i % 2 == 1 ? Role::proposer : Role::skeptic;
      round = static_cast<int>((i + 1) / 2);
    }
    if (history[i].role != want || history[i].round != round) {
      throw OrchestrationError("history message " + std::to_string(i) + " is " +
                               std::string(to_string(history[i].role)) + "@" +
                               std::to_string(history[i].round) + ", expected " +
                               std::string(to_string(want)) + "@" + std::to_string(round));
    }
  }
}

}  // namespace

std::string_view to_string(PromptMethod m) {
  static constexpr std::array<std::string_view, 9> names = {"M0", "M1", "M2", "M3", "M4",
                                                            "M5", "M6", "M7", "M8"};
  return names[static_cast<std::size_t>(m)];
}

std::string_view to_string(InputBlock b) {
  switch (b) {
    case IB::src1: return "src1";
    case IB::src2: return "src2";
    case IB::differences: return "differences";
    case IB::unified: return "unified";
    case IB::local_context: return "local_context";
    case IB::exemplars: return "exemplars";
    case IB::prev_label: return "prev_label";
  }
  return "";
}

std::optional<PromptMethod> parse_method(std::string_view s) {
  for (auto m : all_methods()) {
    if (to_string(m) == s) return m;
  }
  if (s.size() == 2 && s[0] == 'm') return parse_method(std::string("M") + s[1]);
  return std::nullopt;
}

std::string_view block_heading(InputBlock b) {
  switch (b) {
    case IB::src1: return "[SRC1]";
    case IB::src2: return "[SRC2]";
    case IB::differences: return "[Differences]";
    case IB::unified: return "[Unified diff]";
    case IB::local_context: return "[Local Context]";
    case IB::exemplars: return "[Defective Examples]";
    case IB::prev_label: return "[SRC1 status]";
  }
  return "";
}

const std::set<InputBlock>& required_inputs(PromptMethod m) {
  static const std::array<Set, 9> req = {
      Set{IB::src2},
      Set{IB::src1, IB::src2, IB::prev_label},
      Set{IB::src1, IB::src2, IB::differences, IB::prev_label},
      Set{IB::src1, IB::src2, IB::differences, IB::unified, IB::prev_label},
      Set{IB::src1, IB::differences, IB::unified, IB::prev_label},
      Set{IB::differences, IB::unified, IB::prev_label},
      Set{IB::local_context, IB::differences, IB::prev_label},
      Set{IB::differences, IB::unified, IB::exemplars, IB::prev_label},
      Set{IB::differences, IB::unified, IB::prev_label},
  };
  return req[static_cast<std::size_t>(m)];
}

const std::vector<PromptMethod>& all_methods() {
  static const std::vector<PromptMethod> all = {
      PromptMethod::M0, PromptMethod::M1, PromptMethod::M2, PromptMethod::M3, PromptMethod::M4,
      PromptMethod::M5, PromptMethod::M6, PromptMethod::M7, PromptMethod::M8};
  return all;
}

std::string_view to_string(Role r) {
  switch (r) {
    case Role::analyzer: return "analyzer";
    case Role::proposer: return "proposer";
    case Role::skeptic: return "skeptic";
    case Role::judge: return "judge";
  }
  return "";
}

std::optional<Role> parse_role(std::string_view s) {
  for (auto r : {Role::analyzer, Role::proposer, Role::skeptic, Role::judge}) {
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const auto open = tmpl.find("{{", i);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(i));
      break;
    }
    out.append(tmpl.substr(i, open - i));
    const auto close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) {
      throw ConfigError("unterminated placeholder in template");
    }
    const std::string key(tmpl.substr(open + 2, close - open - 2));
    auto it = values.find(key);
    if (it == values.end()) throw ConfigError("no value for placeholder {{" + key + "}}");
    out += it->second;
    i = close + 2;
  }
  return out;
}

PromptBundle build_method_prompt(PromptMethod method, const PromptInputs& in) {
  std::map<std::string, std::string> values;
  for (auto b : required_inputs(method)) {
    auto v = block_value(b, in);
    if (!v) missing(b, to_string(method));
    values[placeholder_of(b)] = std::move(*v);
  }
  PromptBundle bundle;
  bundle.system = std::string(kSystemPrompt);
  bundle.user = render_template(method_template(method), values);
  bundle.user += "\n\n";
  bundle.user += kJsonInstruction;
  bundle.tag = std::string(to_string(method));
  return bundle;
}

PromptBundle build_role_prompt(Role role, const PromptInputs& in,
                               const std::vector<DebateMessage>& history, int round) {
  check_schedule_prefix(history);
  const auto n = static_cast<long>(history.size());
  switch (role) {
    case Role::analyzer:
      if (round != 0 || n != 0) {
        throw OrchestrationError("analyzer runs at round 0 with empty history");
      }
      break;
    case Role::proposer:
      if (round < 1 || n != 2L * round - 1) {
        throw OrchestrationError("proposer@" + std::to_string(round) + " needs " +
                                 std::to_string(2L * round - 1) + " prior messages, got " +
                                 std::to_string(n));
      }
      break;
    case Role::skeptic:
      if (round < 1 || n != 2L * round) {
        throw OrchestrationError("skeptic@" + std::to_string(round) + " needs " +
                                 std::to_string(2L * round) + " prior messages, got " +
                                 std::to_string(n));
      }
      break;
    case Role::judge:
      if (round < 1 || n != 2L * round + 1) {
        throw OrchestrationError("judge after " + std::to_string(round) + " round(s) needs " +
                                 std::to_string(2L * round + 1) + " prior messages, got " +
                                 std::to_string(n));
      }
      break;
  }

  const std::string who(to_string(role));
  std::map<std::string, std::string> values;
  auto need = [&](InputBlock b) {
    auto v = block_value(b, in);
    if (!v) missing(b, who);
    values[placeholder_of(b)] = std::move(*v);
  };
  need(IB::differences);
  std::string_view tmpl;
  switch (role) {
    case Role::analyzer:
      need(IB::unified);
      values["local_context"] = in.context ? in.context->snippet : std::string();
      tmpl = templates::kAnalyzer;
      break;
    case Role::proposer:
      tmpl = templates::kProposer;
      break;
    case Role::skeptic:
      tmpl = templates::kSkeptic;
      break;
    case Role::judge:
      need(IB::prev_label);
      tmpl = templates::kJudge;
      break;
  }
  values["round"] = std::to_string(round);
  values["history"] = render_history(history);

  PromptBundle bundle;
  bundle.system = std::string(kSystemPrompt);
  bundle.user = render_template(tmpl, values);
  if (role == Role::judge) {
    bundle.user += "\n\n";
    bundle.user += kJudgeContract;
  }
  bundle.tag = who;
  return bundle;
}

}  // namespace driftlens
