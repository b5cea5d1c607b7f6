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
#include <string_view>
#include <vector>

#include "driftlens/matching.hpp"

namespace driftlens {

enum class BaselineKind { label_persistent, all_benign };

std::string_view to_string(BaselineKind k);
std::optional<BaselineKind> parse_baseline_kind(std::string_view s);

// label_persistent: common files keep their previous label, added files are
// benign. all_benign: everything benign.
std::map<std::string, Label> predict_naive(
    const std::vector<EvolutionRecord>& records, BaselineKind kind);

}  // namespace driftlens
