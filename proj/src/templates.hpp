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

#include <string_view>

#include "driftlens/prompting.hpp"

namespace driftlens::templates {

extern const std::string_view kM0;
extern const std::string_view kM1;
extern const std::string_view kM2;
extern const std::string_view kM3;
extern const std::string_view kM4;
extern const std::string_view kM5;
extern const std::string_view kM6;
extern const std::string_view kM7;
extern const std::string_view kM8;

extern const std::string_view kAnalyzer;
extern const std::string_view kProposer;
extern const std::string_view kSkeptic;
extern const std::string_view kJudge;

}  // namespace driftlens::templates
