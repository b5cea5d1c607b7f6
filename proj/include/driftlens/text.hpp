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

#include <string>
#include <string_view>
#include <vector>

namespace driftlens::text {

// Replaces every invalid UTF-8 sequence with U+FFFD. Valid input is
// returned unchanged.
std::string sanitize_utf8(std::string_view bytes);

// Splits on '\n' and strips one trailing '\r' per line. A trailing
// newline does not produce an extra empty line; "" yields {}.
std::vector<std::string> normalize_lines(std::string_view source);

// Raw '\n' split that keeps '\r'. `terminated` reports whether the last
// line ended with '\n'.
std::vector<std::string> split_raw_lines(std::string_view source,
                                         bool* terminated = nullptr);

std::string_view trim_right(std::string_view s);
std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool starts_with_ci(std::string_view s, std::string_view prefix);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

inline bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '$';
}

}  // namespace driftlens::text
