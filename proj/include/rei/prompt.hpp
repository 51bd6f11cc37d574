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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rei/expression.hpp"

namespace rei {

struct Demonstration {
  // Rendered document.
  std::string input;
  // Model-side target: `<expression> ... </expression>` with labels.
  std::string output;
  bool operator==(const Demonstration&) const = default;
};

inline constexpr std::size_t kDefaultShots = 8;

// Stop sequence that ends the query object's output string.
inline constexpr std::string_view kCompletionStop = "\"}";

// Demonstration for `doc` whose realization is `reference`.
Demonstration make_demonstration(const Document& doc,
                                 std::string_view reference);

// Pool in JSONL form, one {"input", "output"} object per line.
std::vector<Demonstration> parse_demonstrations(std::string_view jsonl);

// The first `shots` demos, in pool order, whose input has the query's
// structure signature. Unparseable inputs are skipped. Throws
// kNotEnoughDemos when fewer match.
std::vector<Demonstration> select_demonstrations(
    const Document& query, const std::vector<Demonstration>& pool,
    std::size_t shots);

// One `{"input": ..., "output": ...}` line per selected demo, then the
// query line cut right after `"output": "`. Lines are joined by '\n'.
std::string build_fewshot_prompt(const Document& query,
                                 const std::vector<Demonstration>& pool,
                                 std::size_t shots = kDefaultShots);

// `{"input": <json>, "output": <json>}`.
std::string demonstration_line(const Demonstration& demo);

// Decodes the completion of the query line up to the first unescaped `"`
// followed by `}`; anything after the terminator is discarded. Throws
// kUnterminatedCompletion when no terminator exists.
std::string parse_completion(std::string_view raw);

// JSON string literal body (no surrounding quotes).
std::string json_escape(std::string_view s);

}  // namespace rei
