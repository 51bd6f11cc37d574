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
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rei/error.hpp"
#include "rei/expression.hpp"
#include "rei/prompt.hpp"
#include "support/fixtures.hpp"

using namespace rei;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<Demonstration> commongen_pool(std::size_t n) {
  const std::vector<std::vector<std::string>> concepts{
      {"dog", "frisbee", "catch"}, {"boy", "ball", "kick"},
      {"cook", "pan", "stir"},     {"girl", "kite", "fly"},
      {"man", "car", "wash"},      {"cat", "sofa", "sleep"},
      {"child", "book", "read"},   {"woman", "bike", "ride"},
      {"team", "goal", "score"},   {"bird", "tree", "sing"}};
  std::vector<Demonstration> pool;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = concepts[i % concepts.size()];
    const Document d = parse_document("<expression> <mask_0> " + c[0] +
                                      "(0) <mask_1> " + c[1] + "(1) <mask_2> " +
                                      c[2] + "(2) <mask_3> </expression>");
    pool.push_back(make_demonstration(
        d, "The " + c[0] + " and the " + c[1] + " " + c[2] + " today."));
  }
  return pool;
}

}  // namespace

TEST_CASE("eight shots give nine JSON lines") {
  auto pool = commongen_pool(10);
  // A structurally different demo must be skipped.
  pool.insert(pool.begin() + 2,
              make_demonstration(parse_document("<expression> <mask_0> </expression>"),
                                 "anything"));
  const Document q = parse_document(fixtures::task_templates()[3].input);
  const std::string prompt = build_fewshot_prompt(q, pool, 8);
  const auto lines = lines_of(prompt);
  REQUIRE(lines.size() == 9);
  for (std::size_t i = 0; i < 8; ++i) {
    CAPTURE(lines[i]);
    const auto j = nlohmann::json::parse(lines[i]);
    CHECK(j.is_object());
    CHECK(j.size() == 2);
    CHECK(j.at("input").get<std::string>().find("<mask_3>") != std::string::npos);
  }
  const std::string tail = "\"output\": \"";
  CHECK(lines[8].size() >= tail.size());
  CHECK(lines[8].compare(lines[8].size() - tail.size(), tail.size(), tail) == 0);
  const auto last = nlohmann::json::parse(lines[8] + "\"}");
  CHECK(last.at("input") == render_document(q));
}

TEST_CASE("demonstrations are taken in pool order") {
  const auto pool = commongen_pool(10);
  const Document q = parse_document(fixtures::task_templates()[3].input);
  const auto picked = select_demonstrations(q, pool, 3);
  REQUIRE(picked.size() == 3);
  CHECK(picked[0] == pool[0]);
  CHECK(picked[2] == pool[2]);
}

TEST_CASE("too few matching demonstrations") {
  const Document q = parse_document(fixtures::task_templates()[3].input);
  try {
    build_fewshot_prompt(q, commongen_pool(5), 8);
    FAIL("expected NotEnoughDemos");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotEnoughDemos);
  }
}

TEST_CASE("demonstration lines use the documented layout") {
  const Demonstration d{"in \"q\"", "out"};
  CHECK(demonstration_line(d) == "{\"input\": \"in \\\"q\\\"\", \"output\": \"out\"}");
  const auto pool = parse_demonstrations(demonstration_line(d) + "\n\n");
  REQUIRE(pool.size() == 1);
  CHECK(pool[0] == d);
  CHECK_THROWS_AS(parse_demonstrations("{\"input\": 1}"), Error);
}

TEST_CASE("make_demonstration labels the reference") {
  const Document d = parse_document(fixtures::kLexiconLength.input);
  const Demonstration demo = make_demonstration(d, fixtures::kLexiconLength.realization);
  CHECK(demo.input == fixtures::kLexiconLength.input);
  CHECK(demo.output == fixtures::kLexiconLength.output);
}

TEST_CASE("parse_completion") {
  CHECK(parse_completion("<expression> a b </expression>\"}") ==
        "<expression> a b </expression>");
  CHECK(parse_completion("say \\\"hi\\\"\\nnow\"} trailing") == "say \"hi\"\nnow");
  CHECK(parse_completion("caf\\u00e9 \\ud83d\\ude00\"}") == "caf\xc3\xa9 \xf0\x9f\x98\x80");
  try {
    parse_completion("no terminator");
    FAIL("expected UnterminatedCompletion");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnterminatedCompletion);
  }
}

TEST_CASE("escape then parse_completion round-trips random strings") {
  const std::string alphabet = "ab \"{}\n\\/\t:,";
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    std::string s;
    const std::size_t n = rng() % 40;
    for (std::size_t k = 0; k < n; ++k) s += alphabet[rng() % alphabet.size()];
    CAPTURE(s);
    // nlohmann's encoder stands in for the model's JSON output.
    const std::string encoded = nlohmann::json(s).dump();
    const std::string body = encoded.substr(1, encoded.size() - 2);
    CHECK(parse_completion(body + "\"}") == s);
    CHECK(json_escape(s) == body);
  }
}
