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

#include "driftlens/baselines.hpp"

namespace driftlens {

std::string_view to_string(BaselineKind k) {
  return k == BaselineKind::label_persistent ? "label-persistent" : "all-benign";
}

std::optional<BaselineKind> parse_baseline_kind(std::string_view s) {
  if (s == "label-persistent" || s == "label_persistent") return BaselineKind::label_persistent;
  if (s == "all-benign" || s == "all_benign") return BaselineKind::all_benign;
  return std::nullopt;
}

std::map<std::string, Label> predict_naive(const std::vector<EvolutionRecord>& records,
                                           BaselineKind kind) {
  std::map<std::string, Label> out;
  for (const auto& r : records) {
    Label l = Label::benign;
    if (kind == BaselineKind::label_persistent && r.old_file) l = r.old_file->label;
    out[r.id()] = l;
  }
  return out;
}

}  // namespace driftlens
