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

#include <string>

#include "doctest.h"
#include "driftlens/error.hpp"
#include "driftlens/prompting.hpp"

using namespace driftlens;

namespace {

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

struct Materials {
  EvolutionRecord record;
  ChangeSet changes;
  ContextBundle context;
  std::vector<std::string> exemplars;

  explicit Materials(Label prev, Label now = Label::benign) {
    std::string a, b;
    for (int i = 0; i < 12; ++i) {
      a += "    int keep" + std::to_string(i) + " = " + std::to_string(i) + ";\n";
    }
    b = a;
    b.replace(b.find("keep6 = 6"), 9, "keep6 = 7");
    record.old_file = VersionedFile{"src/K.java", a, prev, "1"};
    record.new_file = VersionedFile{"src/K.java", b, now, "2"};
    record.subset = transition_subset(prev, now);
    changes = diff(a, b, {3, "src/K.java", "src/K.java"});
    context.snippet = "    void ctxMethod() {\n    }";
    exemplars = {"// src/Bad.java\nint x = y / 0;"};
  }

  PromptInputs inputs(bool with_ctx = true, bool with_ex = true) const {
    return {&record, &changes, with_ctx ? &context : nullptr, with_ex ? &exemplars : nullptr};
  }
};

}  // namespace

TEST_CASE("required inputs per method") {
  using IB = InputBlock;
  CHECK(required_inputs(PromptMethod::M0) == std::set<IB>{IB::src2});
  CHECK(required_inputs(PromptMethod::M5) == std::set<IB>{IB::differences, IB::unified, IB::prev_label});
  CHECK_FALSE(required_inputs(PromptMethod::M4).count(IB::src2));
  CHECK(required_inputs(PromptMethod::M6).count(IB::local_context));
  CHECK(required_inputs(PromptMethod::M7).count(IB::exemplars));
}

TEST_CASE("each method carries exactly its blocks") {
  const Materials m(Label::defective);
  const std::map<InputBlock, std::string> body = {
      {InputBlock::src1, "[SRC1]\n" + m.record.old_file->source},
      {InputBlock::src2, "[SRC2]\n" + m.record.new_file.source},
      {InputBlock::differences, "[Differences]\n" + render_difference_list(m.changes)},
      {InputBlock::unified, "[Unified diff]\n" + m.changes.unified},
      {InputBlock::local_context, "[Local Context]\n" + m.context.snippet},
      {InputBlock::exemplars, "[Defective Examples]\n" + m.exemplars[0]},
  };
  for (auto method : all_methods()) {
    CAPTURE(to_string(method));
    const auto p = build_method_prompt(method, m.inputs());
    CHECK(p.system == kSystemPrompt);
    CHECK(p.tag == to_string(method));
    const auto& req = required_inputs(method);
    for (const auto& [block, text] : body) {
      CAPTURE(to_string(block));
      CHECK((p.user.find(text) != std::string::npos) == (req.count(block) > 0));
    }
    CHECK((p.user.find("[SRC1] → ") != std::string::npos) == (req.count(InputBlock::prev_label) > 0));
    // No unfilled markers and the JSON output instruction at the end.
    CHECK(p.user.find("{{") == std::string::npos);
    CHECK(p.user.find("\\textless") == std::string::npos);
    CHECK(p.user.size() >= kJsonInstruction.size());
    CHECK(p.user.substr(p.user.size() - kJsonInstruction.size()) == kJsonInstruction);
    CHECK(build_method_prompt(method, m.inputs()).user == p.user);
  }
}

TEST_CASE("M0 shows only the new source and the status question") {
  const Materials m(Label::defective);
  const auto p = build_method_prompt(PromptMethod::M0, m.inputs());
  CHECK(p.user.find("What is the status of this file?") != std::string::npos);
  CHECK(p.user.find("[SRC1]") == std::string::npos);
  CHECK(p.user.find("[Differences]") == std::string::npos);
}

TEST_CASE("M5 substitutes a benign previous label") {
  const Materials m(Label::benign);
  const auto p = build_method_prompt(PromptMethod::M5, m.inputs());
  CHECK(p.user.find("[SRC1] → Benign\n") != std::string::npos);
  CHECK(p.user.find("[SRC1] → Defective") == std::string::npos);
  CHECK(p.user.find(m.record.new_file.source) == std::string::npos);
  CHECK(p.user.find(m.record.old_file->source) == std::string::npos);
}

TEST_CASE("M4 hides the new source") {
  const Materials m(Label::defective);
  const auto p = build_method_prompt(PromptMethod::M4, m.inputs());
  CHECK(p.user.find(m.record.new_file.source) == std::string::npos);
  CHECK(p.user.find("[SRC1] → [Defective]") != std::string::npos);
}

TEST_CASE("missing inputs are configuration errors naming the block") {
  const Materials m(Label::benign);
  try {
    build_method_prompt(PromptMethod::M7, m.inputs(true, false));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("[Defective Examples]") != std::string::npos);
  }
  std::vector<std::string> none;
  PromptInputs empty_ex{&m.record, &m.changes, &m.context, &none};
  CHECK_THROWS_AS(build_method_prompt(PromptMethod::M7, empty_ex), ConfigError);
  try {
    build_method_prompt(PromptMethod::M6, m.inputs(false, true));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("[Local Context]") != std::string::npos);
  }
  EvolutionRecord added;
  added.new_file = m.record.new_file;
  CHECK_NOTHROW(build_method_prompt(PromptMethod::M0, {&added, nullptr, nullptr, nullptr}));
  CHECK_THROWS_AS(build_method_prompt(PromptMethod::M1, {&added, nullptr, nullptr, nullptr}),
                  ConfigError);
}

TEST_CASE("role prompts respect information access") {
  for (auto prev : {Label::benign, Label::defective}) {
    const Materials m(prev);
    const std::string label(label_name(prev));
    std::vector<DebateMessage> h;
    const auto analyzer = build_role_prompt(Role::analyzer, m.inputs(), h, 0);
    CHECK(analyzer.user.find(label) == std::string::npos);
    CHECK(analyzer.user.find("plausible benign and defective interpretations") != std::string::npos);
    CHECK(analyzer.user.find(m.context.snippet) != std::string::npos);
    CHECK(analyzer.system == kSystemPrompt);
    h.push_back({Role::analyzer, 0, "analysis text"});

    const auto proposer = build_role_prompt(Role::proposer, m.inputs(), h, 1);
    CHECK(proposer.user.find("analysis text") != std::string::npos);
    h.push_back({Role::proposer, 1, "proposal text"});

    const auto skeptic = build_role_prompt(Role::skeptic, m.inputs(), h, 1);
    CHECK(skeptic.user.find("proposal text") != std::string::npos);
    CHECK(skeptic.user.find(label) == std::string::npos);
    h.push_back({Role::skeptic, 1, "rebuttal text"});

    const auto judge = build_role_prompt(Role::judge, m.inputs(), h, 1);
    CHECK(count_of(judge.user, label) == 1);
    CHECK(judge.user.find("Previous label: " + label) != std::string::npos);
    const auto a = judge.user.find("analysis text");
    const auto p = judge.user.find("proposal text");
    const auto s = judge.user.find("rebuttal text");
    CHECK(a < p);
    CHECK(p < s);
    CHECK(s != std::string::npos);
    CHECK(judge.user.find("### Final Prediction") != std::string::npos);
    CHECK(judge.user.find(kJsonInstruction) == std::string::npos);
  }
}

TEST_CASE("role schedule mismatches are orchestration errors") {
  const Materials m(Label::benign);
  std::vector<DebateMessage> none;
  CHECK_THROWS_AS(build_role_prompt(Role::judge, m.inputs(), none, 1), OrchestrationError);
  CHECK_THROWS_AS(build_role_prompt(Role::proposer, m.inputs(), none, 1), OrchestrationError);
  CHECK_THROWS_AS(build_role_prompt(Role::analyzer, m.inputs(), none, 1), OrchestrationError);
  std::vector<DebateMessage> wrong = {{Role::skeptic, 0, "x"}};
  CHECK_THROWS_AS(build_role_prompt(Role::proposer, m.inputs(), wrong, 1), OrchestrationError);
}

TEST_CASE("template rendering") {
  CHECK(render_template("a {{x}} b", {{"x", "{{y}}"}}) == "a {{y}} b");
  CHECK_THROWS_AS(render_template("{{missing}}", {}), ConfigError);
  CHECK_THROWS_AS(render_template("{{open", {}), ConfigError);
}

TEST_CASE("method and role names round trip") {
  for (auto m : all_methods()) CHECK(parse_method(to_string(m)) == m);
  CHECK(parse_method("m5") == PromptMethod::M5);
  CHECK_FALSE(parse_method("M9").has_value());
  for (auto r : {Role::analyzer, Role::proposer, Role::skeptic, Role::judge}) {
    CHECK(parse_role(to_string(r)) == r);
  }
}
