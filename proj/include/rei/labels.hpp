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

#include "rei/expression.hpp"

namespace rei {

// First word label value. Table-style outputs number words from 1 so the last
// label equals the length constraint; kZero is the compatibility variant.
enum class LabelBase : int { kZero = 0, kOne = 1 };

enum class LabelScheme { kWordLabels, kSerialLabels, kBoth };

struct LabeledText {
  std::string text;
  LabelScheme scheme = LabelScheme::kWordLabels;
  LabelBase base = LabelBase::kOne;
};

// Appends `_i` to the i-th whitespace token, keeping the original spacing.
// Throws kAlreadyLabeled if some token already carries its own label.
LabeledText add_word_labels(std::string_view text,
                            LabelBase base = LabelBase::kOne);

// Removes `_i` from a token only when i is that token's position, so
// unlabeled tokens such as `var_2` elsewhere pass through.
std::string strip_word_labels(std::string_view text,
                              LabelBase base = LabelBase::kOne);
inline std::string strip_word_labels(const LabeledText& t) {
  return strip_word_labels(t.text, t.base);
}

// `surface(i)` -> `surface` for the i-th lexicon surface. The surface must
// start a word (no letter or digit directly before it).
std::string strip_serial_labels(std::string_view text,
                                const std::vector<std::string>& lexicon);

// Appends `(i)` to the first not-yet-labeled occurrence of each surface.
std::string add_serial_labels(std::string_view text,
                              const std::vector<std::string>& lexicon);

enum class ExtractMode {
  // Use the `<expression>` span when present, the whole output otherwise.
  kAuto,
  // The span is required.
  kTagged,
};

// Clean realization from raw model output: the expression span (if any)
// with word and serial labels stripped and whitespace trimmed.
std::string extract_realization(std::string_view model_output,
                                const Expression& expr,
                                ExtractMode mode = ExtractMode::kAuto,
                                LabelBase base = LabelBase::kOne);

// The fine-tuning output format: `<expression> w_1 w_2 ... </expression>`
// with serial labels on lexicon words and word labels when the expression
// has a length constraint.
std::string format_model_output(std::string_view realization,
                                const Expression& expr,
                                LabelBase base = LabelBase::kOne);

}  // namespace rei
