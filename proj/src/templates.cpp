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

// Prompt text resources. `{{name}}` markers are filled by render_template;
// `{{prev}}` is the previous label of the record ("Defective" or "Benign").

#include "templates.hpp"

namespace driftlens {

const std::string_view kSystemPrompt =
    "You are an expert software engineer and code reviewer.\n"
    "Your task is to analyze source code and code changes to determine whether a file is "
    "Defective or Benign.\n"
    "Carefully reason about correctness, logic, and potential defects based only on the "
    "provided information.\n"
    "Do not assume missing context or speculate beyond the given input.\n"
    "Return only the final classification when asked.";

const std::string_view kJsonInstruction =
    "Return your answer as a JSON object with exactly these fields:\n"
    "{\n"
    "  \"explanation\": \"Explanation in English\",\n"
    "  \"prediction\": \"Defective\" or \"Benign\"\n"
    "}";

const std::string_view kJudgeContract =
    "Finish your response with these two lines:\n"
    "### Final Prediction: <BENIGN or DEFECTIVE>\n"
    "### Confidence: <confidence_percentage>";

const std::string_view kJudgeReaskReminder =
    "Your reply did not follow the required format. Answer again and end with exactly two "
    "lines:\n"
    "### Final Prediction: BENIGN or DEFECTIVE\n"
    "### Confidence: a percentage between 0 and 100";

namespace templates {

const std::string_view kM0 =
    "You are given a source code file without any previous version. Decide if it is "
    "Defective or Benign.\n"
    "\n"
    "[SRC2]\n"
    "{{src2}}\n"
    "\n"
    "Question: What is the status of this file? (Defective or Benign)";

const std::string_view kM1 =
    "You are given SRC1 (known to be {{prev}}) and SRC2 code. Compare the two versions and "
    "decide if SRC2 is Defective or Benign.\n"
    "\n"
    "[SRC1] → [{{prev}}]\n"
    "[SRC2] → [???]\n"
    "\n"
    "[SRC1]\n"
    "{{src1}}\n"
    "\n"
    "[SRC2]\n"
    "{{src2}}\n"
    "\n"
    "Think step by step and decide whether SRC2 is Defective or Benign.";

const std::string_view kM2 =
    "You are given SRC1 (known to be {{prev}}) and SRC2, along with the exact differences "
    "(added/removed/changed lines). Use these to decide the status of SRC2.\n"
    "\n"
    "[SRC1] → [{{prev}}]\n"
    "[SRC2] → [???]\n"
    "\n"
    "[SRC1]\n"
    "{{src1}}\n"
    "\n"
    "[SRC2]\n"
    "{{src2}}\n"
    "\n"
    "[Differences]\n"
    "{{differences}}\n"
    "\n"
    "Review the differences and reason carefully. Is SRC2 Defective or Benign?";

const std::string_view kM3 =
    "You are given SRC1 (known to be {{prev}}), SRC2, the differences, and a unified diff "
    "(like a patch). Use all this information to determine if SRC2 is Defective or Benign.\n"
    "\n"
    "[SRC1] → [{{prev}}]\n"
    "[SRC2] → [???]\n"
    "\n"
    "[SRC1]\n"
    "{{src1}}\n"
    "\n"
    "[SRC2]\n"
    "{{src2}}\n"
    "\n"
    "[Differences]\n"
    "{{differences}}\n"
    "\n"
    "[Unified diff]\n"
    "{{unified}}\n"
    "\n"
    "Use all provided information to conclude whether SRC2 is Defective or Benign.";

const std::string_view kM4 =
    "You are only given SRC1 (known to be {{prev}}) and the differences/unified diff. Based "
    "on how the code has changed, predict if the new SRC2 is Defective or Benign, even though "
    "SRC2 code is hidden.\n"
    "\n"
    "[SRC1] → [{{prev}}]\n"
    "[SRC2] → [???]\n"
    "\n"
    "[SRC1]\n"
    "{{src1}}\n"
    "\n"
    "[Differences]\n"
    "{{differences}}\n"
    "\n"
    "[Unified diff]\n"
    "{{unified}}\n"
    "\n"
    "Based only on the observed changes, predict whether the unseen SRC2 would be Defective "
    "or Benign.";

const std::string_view kM5 =
    "You are given only the differences and the unified diff. You also know that SRC1 was "
    "{{prev}}. Determine if SRC2 remains {{prev}} or changes status.\n"
    "\n"
    "[SRC1] → {{prev}}\n"
    "[SRC2] → ???\n"
    "\n"
    "[Differences]\n"
    "{{differences}}\n"
    "\n"
    "[Unified diff]\n"
    "{{unified}}\n"
    "\n"
    "Use this information to infer the status of SRC2.";

const std::string_view kM6 =
    "You are given only the locally relevant code changes with a few lines of context around "
    "them. SRC1 is known to be {{prev}}. Based only on these local modifications, predict "
    "whether the updated SRC2 is Defective or Benign.\n"
    "\n"
    "[SRC1] → [{{prev}}]\n"
    "[SRC2] → [???]\n"
    "\n"
    "[Local Context]\n"
    "{{local_context}}\n"
    "\n"
    "[Differences]\n"
    "{{differences}}\n"
    "\n"
    "Considering only the local code context and changes, predict if SRC2 is Defective or "
    "Benign.";

const std::string_view kM7 =
    "You are given the differences and unified diff. SRC1 was {{prev}}. Judge whether these "
    "changes are likely to change SRC2's status or keep it {{prev}}. Some example defective "
    "code lines are also provided.\n"
    "\n"
    "[SRC1] → [{{prev}}]\n"
    "[SRC2] → [???]\n"
    "\n"
    "[Differences]\n"
    "{{differences}}\n"
    "\n"
    "[Unified diff]\n"
    "{{unified}}\n"
    "\n"
    "[Defective Examples]\n"
    "{{exemplars}}\n"
    "\n"
    "Compare the diffs and examples of defective code. Does SRC2 appear Defective or Benign?";

const std::string_view kM8 =
    "You are given the differences, unified diff, and status of SRC1 (known to be {{prev}}). "
    "Analyze the changes and determine whether SRC2 is Defective or Benign:\n"
    "- Do the modifications fix an existing defect?\n"
    "- Do they introduce a new defect?\n"
    "- Or leave the code unchanged?\n"
    "\n"
    "[SRC1] → [{{prev}}]\n"
    "[SRC2] → [???]\n"
    "\n"
    "[Differences]\n"
    "{{differences}}\n"
    "\n"
    "[Unified diff]\n"
    "{{unified}}\n"
    "\n"
    "Think step by step and decide the final status of SRC2.";

// Role prompts use lowercase status words so that the capitalized previous
// label appears only where the judge is given it.

const std::string_view kAnalyzer =
    "Role: analyzer\n"
    "Read the change below. Summarize what it does, then list plausible benign and defective "
    "interpretations of it, citing the lines involved. Do not assign a label and do not give "
    "a verdict.\n"
    "\n"
    "[Differences]\n"
    "{{differences}}\n"
    "\n"
    "[Unified diff]\n"
    "{{unified}}\n"
    "\n"
    "[Local Context]\n"
    "{{local_context}}";

const std::string_view kProposer =
    "Role: proposer, round {{round}}\n"
    "Building on the analysis and the discussion so far, state a hypothesis: does the change "
    "introduce a defect, resolve one, or leave the file's defect status as it was? Back it "
    "with concrete evidence from the change and answer open objections.\n"
    "\n"
    "[Differences]\n"
    "{{differences}}\n"
    "\n"
    "[Discussion]\n"
    "{{history}}";

const std::string_view kSkeptic =
    "Role: skeptic, round {{round}}\n"
    "Challenge the latest hypothesis. Point out weak or missing evidence, alternative "
    "explanations of the change, and cases the argument overlooks.\n"
    "\n"
    "[Differences]\n"
    "{{differences}}\n"
    "\n"
    "[Discussion]\n"
    "{{history}}";

const std::string_view kJudge =
    "Role: judge\n"
    "Weigh the arguments below and decide the defect status of the file after the change.\n"
    "\n"
    "Previous label: {{prev}}\n"
    "\n"
    "[Differences]\n"
    "{{differences}}\n"
    "\n"
    "[Discussion]\n"
    "{{history}}";

}  // namespace templates
}  // namespace driftlens
