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

#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "rei/error.hpp"
#include "rei/expression.hpp"
#include "rei/labels.hpp"
#include "support/fixtures.hpp"

using namespace rei;

TEST_CASE("word labels are 1-based by default") {
  CHECK(add_word_labels("The player stood").text == "The_1 player_2 stood_3");
  CHECK(add_word_labels("The player", LabelBase::kZero).text == "The_0 player_1");
  CHECK(strip_word_labels("The_1 player_2 stood_3") == "The player stood");
  CHECK(strip_word_labels("The_0 player_1", LabelBase::kZero) == "The player");
}

TEST_CASE("labels are stripped only at their own position") {
  CHECK(strip_word_labels("snake_case_1 var_9") == "snake_case var_9");
  CHECK(strip_word_labels("x_2 y_2") == "x_2 y");
  CHECK(strip_word_labels("  a_1\n\tb_2 ") == "  a\n\tb ");
}

TEST_CASE("labeling labeled text is an error") {
  try {
    add_word_labels("ok_1 fine");
    FAIL("expected AlreadyLabeled");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAlreadyLabeled);
    CHECK(e.offset() == std::optional<std::size_t>(0));
  }
}

TEST_CASE("strip after add is the identity on label-free text") {
  const std::vector<std::string> vocab{"the", "dog", "ran", "home", "x_y",
                                       "42",  "(0)", "a.b", "quite", "_"};
  const std::string gaps[] = {" ", "  ", "\t", "\n", " \n "};
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    std::string s;
    const std::size_t n = rng() % 12;
    if (rng() % 4 == 0) s += gaps[rng() % 5];
    for (std::size_t w = 0; w < n; ++w) {
      if (w) s += gaps[rng() % 5];
      s += vocab[rng() % vocab.size()];
    }
    const LabelBase base = (i % 2) ? LabelBase::kOne : LabelBase::kZero;
    CAPTURE(s);
    CHECK(strip_word_labels(add_word_labels(s, base)) == s);
  }
}

TEST_CASE("serial labels") {
  const std::vector<std::string> lex{"stood", "field", "looking"};
  CHECK(strip_serial_labels("He stood(0) in the field(1) looking(2).", lex) ==
        "He stood in the field looking.");
  CHECK(add_serial_labels("He stood in the field looking.", lex) ==
        "He stood(0) in the field(1) looking(2).");
}

TEST_CASE("serial strip leaves other parentheses alone") {
  const std::vector<std::string> lex{"all", "stage", "x"};
  // Inside a longer word.
  CHECK(strip_serial_labels("call(0) me", lex) == "call(0) me");
  // Separated from the surface by a space.
  CHECK(strip_serial_labels("all (0) of it", lex) == "all (0) of it");
  // Another item's number.
  CHECK(strip_serial_labels("stage(0) left", lex) == "stage(0) left");
  // A bare number and a non-lexicon word.
  CHECK(strip_serial_labels("see (1) and f(2)", lex) == "see (1) and f(2)");
  // A real label next to a lookalike.
  CHECK(strip_serial_labels("all(0) but ball(0)", lex) == "all but ball(0)");
  CHECK(strip_serial_labels("(x(2))", lex) == "(x)");
}

TEST_CASE("extracting the realization from model outputs") {
  for (const auto& row : fixtures::core_examples()) {
    CAPTURE(row.name);
    const Expression e = parse_document(row.input).expr;
    CHECK(extract_realization(row.output, e) == row.realization);
  }
  for (const auto& row : fixtures::model_outputs()) {
    CAPTURE(row.name);
    const Expression e = parse_document(row.input).expr;
    CHECK(extract_realization(row.output, e) == row.realization);
  }
}

TEST_CASE("tagged extraction requires the span") {
  const Expression e = parse_document("<expression> <mask_0> </expression>").expr;
  CHECK_THROWS_AS(extract_realization("plain", e, ExtractMode::kTagged), Error);
  CHECK(extract_realization("plain", e, ExtractMode::kAuto) == "plain");
  CHECK_THROWS_AS(extract_realization("<expression> open", e), Error);
}

TEST_CASE("format_model_output reproduces the reference output markup") {
  const auto& row = fixtures::kLexiconLength;
  const Expression e = parse_document(row.input).expr;
  CHECK(format_model_output(row.realization, e) == row.output);
  const auto& position = fixtures::kPositionLexicon;
  CHECK(format_model_output(position.realization, parse_document(position.input).expr) ==
        position.output);
}
