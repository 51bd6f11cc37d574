// Copyright 2026 The REI Toolkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
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

namespace rei::text {

// ASCII whitespace only; multi-byte UTF-8 sequences never contain these bytes.
constexpr bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Collapses every whitespace run to one space and trims both ends.
std::string normalize_whitespace(std::string_view s);

std::string_view trim(std::string_view s) noexcept;

// Maximal non-whitespace runs, in order.
std::vector<std::string_view> split_words(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool is_canonical_number(std::string_view digits) noexcept;

// Parses a canonical decimal (no sign, no leading zeros); false on overflow.
bool parse_number(std::string_view digits, std::size_t& out) noexcept;

}  // namespace rei::text
