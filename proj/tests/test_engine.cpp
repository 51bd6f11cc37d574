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

#include <atomic>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "rei/engine.hpp"
#include "rei/error.hpp"
#include "rei/expression.hpp"
#include "rei/pattern.hpp"
#include "support/fixtures.hpp"

using namespace rei;

namespace {

// Independent derivation of the mock's uniform stream.
double expected_uniform(std::uint64_t seed, std::size_t call) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(call)};
  std::mt19937_64 rng(seq);
  return static_cast<double>(rng() >> 11) / 9007199254740992.0;
}

class RecordingBackend : public GeneratorBackend {
 public:
  explicit RecordingBackend(GeneratorBackend& inner, bool beam = true)
      : inner_(inner), beam_(beam) {}
  BackendCapabilities capabilities() const override { return {beam_, true}; }
  std::string produce(const GenerationRequest& r) override {
    std::lock_guard<std::mutex> lock(mu_);
    prompts.emplace_back(r.prompt);
    beams.push_back(r.use_beam);
    calls.push_back(r.call_index);
    return inner_.produce(r);
  }
  std::vector<std::string> prompts;
  std::vector<bool> beams;
  std::vector<std::size_t> calls;

 private:
  GeneratorBackend& inner_;
  bool beam_;
  std::mutex mu_;
};

// Fails the test if two calls overlap.
class SingleCallerBackend : public GeneratorBackend {
 public:
  BackendCapabilities capabilities() const override { return {false, false}; }
  std::string produce(const GenerationRequest& r) override {
    if (busy_.exchange(true)) overlapped = true;
    std::this_thread::sleep_for(std::chrono::microseconds(200));
    std::string out = oracle_.produce(r);
    busy_ = false;
    return out;
  }
  std::atomic<bool> overlapped{false};

 private:
  std::atomic<bool> busy_{false};
  OracleBackend oracle_;
};

class ThrowingBackend : public GeneratorBackend {
 public:
  BackendCapabilities capabilities() const override { return {}; }
  std::string produce(const GenerationRequest&) override {
    throw BackendFailure("boom", ErrorCode::kHttpError, 503);
  }
};

GenerationConfig cfg_k(std::size_t k) {
  GenerationConfig c;
  c.max_tries = k;
  return c;
}

const std::string kEndingChoice0 =
    "<expression> We had a blast. My friends decided to keep inviting me out "
    "as I am so much fun. </expression>";
const std::string kEndingChoice1 =
    "<expression> I danced terribly and broke a friend's toe. The next "
    "weekend, I was asked to please stay home. </expression>";

}  // namespace

TEST_CASE("stable_hash is 64-bit FNV-1a") {
  CHECK(stable_hash("") == 0xcbf29ce484222325ULL);
  CHECK(stable_hash("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(stable_hash("foobar") == 0x85944171f73967e8ULL);
  CHECK(instance_seed(5, "a") == (5ULL ^ 0xaf63dc4c8601ec8cULL));
}

TEST_CASE("config presets and checks") {
  CHECK(GenerationConfig::local_model().max_tries == 512);
  CHECK(GenerationConfig::local_model().beam_first);
  CHECK(GenerationConfig::api().max_tries == 8);
  CHECK_FALSE(GenerationConfig::api().beam_first);
  GenerationConfig bad;
  bad.max_tries = 0;
  CHECK_THROWS_AS(bad.check(), Error);
  bad = {};
  bad.top_p = 0.0;
  CHECK_THROWS_AS(bad.check(), Error);
}

TEST_CASE("oracle fill spreads spare words over the masks") {
  const Document d = parse_document(fixtures::kLexiconLength.input);
  const std::string out = oracle_fill(d);
  CHECK(out == "the small stood group went field out together looking after");
  CHECK(validate_output(d.expr, out).verdict);

  const Document free = parse_document(
      "<expression> <mask_0> knocked(0) <mask_1> </expression>");
  CHECK(oracle_fill(free) == "the knocked small");
}

TEST_CASE("oracle fill honours hints") {
  const Document d = parse_document(fixtures::kAlternativeEnding.input);
  OracleHint hint{1, {"I", "fell."}};
  const std::string out = oracle_fill(d, &hint);
  CHECK(out == "I The next weekend, I was asked to please stay home.");
  CHECK(validate_output(d.expr, out).verdict);
}

TEST_CASE("infeasible lengths") {
  CHECK_THROWS_AS(
      oracle_fill(parse_document(
          "<expression> <mask_0> a(0) b(1) c(2) <length=2> </expression>")),
      Error);
  try {
    oracle_fill(parse_document("<expression> two words <length=3> </expression>"));
    FAIL("expected InfeasibleLength");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInfeasibleLength);
  }
}

TEST_CASE("mock uniform stream matches an independent derivation") {
  for (std::uint64_t seed : {0ULL, 7ULL, 0x123456789abcdefULL})
    for (std::size_t call = 0; call < 20; ++call)
      CHECK(mock_uniform(seed, call) == expected_uniform(seed, call));
}

TEST_CASE("mock candidates are valid exactly when the draw is below p") {
  const std::vector<std::string> docs{
      fixtures::kLexiconLength.input, fixtures::kPositionLexicon.input,
      fixtures::model_outputs()[2].input, fixtures::task_templates()[1].input};
  for (const auto& raw : docs) {
    const Document d = parse_document(raw);
    for (std::size_t call = 0; call < 50; ++call) {
      const std::string out = mock_generate(d, 0.5, 99, call);
      CAPTURE(raw);
      CAPTURE(out);
      CHECK(validate_output(d.expr, out).verdict ==
            (expected_uniform(99, call) < 0.5));
      CHECK(mock_generate(d, 0.5, 99, call) == out);
    }
  }
}

TEST_CASE("rejection loop against the mock (seed 7, p = 0.5)") {
  const Document d = parse_document(fixtures::kLexiconLength.input);
  MockBackend mock(0.5);
  for (std::size_t k : {1u, 3u, 8u}) {
    GenerationContext ctx{"lexicon", 7, 0};
    const TrialLog log = generate_with_rejection(d, mock, cfg_k(k), ctx);
    std::size_t want = k;
    bool accepted = false;
    for (std::size_t i = 0; i < k; ++i)
      if (expected_uniform(7, i) < 0.5) {
        want = i + 1;
        accepted = true;
        break;
      }
    CAPTURE(k);
    CHECK(log.tries_used() == want);
    CHECK(log.accepted.has_value() == accepted);
    CHECK(ctx.calls == want);
    CHECK(log.first_try_success() == (expected_uniform(7, 0) < 0.5));
    for (std::size_t i = 0; i < log.attempts.size(); ++i)
      CHECK(log.attempts[i].report.verdict == (expected_uniform(7, i) < 0.5));
  }
}

TEST_CASE("beam search only on the first attempt, and only when enabled") {
  const Document d = parse_document(fixtures::kLexiconLength.input);
  MockBackend never(0.0);
  RecordingBackend rec(never, true);
  GenerationContext ctx{"x", 1, 0};
  const TrialLog log = generate_with_rejection(d, rec, cfg_k(4), ctx);
  CHECK_FALSE(log.accepted);
  CHECK(rec.beams == std::vector<bool>{true, false, false, false});

  RecordingBackend api(never, true);
  GenerationContext ctx2{"x", 1, 0};
  generate_with_rejection(d, api, GenerationConfig::api(), ctx2);
  CHECK(api.beams == std::vector<bool>(8, false));
}

TEST_CASE("oracle backend always succeeds on the first try") {
  OracleBackend oracle;
  std::vector<fixtures::Row> rows = fixtures::core_examples();
  for (const auto& r : fixtures::task_templates()) rows.push_back(r);
  for (const auto& r : fixtures::model_outputs()) rows.push_back(r);
  for (const auto& row : rows) {
    CAPTURE(row.name);
    GenerationContext ctx{row.name, 0, 0};
    const TrialLog log =
        generate_with_rejection(parse_document(row.input), oracle, {}, ctx);
    CHECK(log.tries_used() == 1);
    CHECK(log.first_try_success());
  }
}

TEST_CASE("scripted backend replays by call index") {
  ScriptedBackend s = ScriptedBackend::from_jsonl(
      "{\"id\": \"a\", \"candidates\": [\"x\", \"<expression> knocked </expression>\"]}\n");
  const Document d = parse_document(
      "<expression> <mask_0> knocked(0) <mask_1> </expression>");
  GenerationContext ctx{"a", 0, 0};
  const TrialLog log = generate_with_rejection(d, s, cfg_k(5), ctx);
  CHECK(log.tries_used() == 2);
  CHECK(log.accepted == std::optional<std::string>("knocked"));
  GenerationContext missing{"b", 0, 0};
  CHECK_THROWS_AS(generate_with_rejection(d, s, cfg_k(5), missing),
                  BackendFailure);
}

TEST_CASE("recursive decoding reproduces the alternative-ending row") {
  ScriptedBackend s({{"ending", {kEndingChoice0, kEndingChoice1, kEndingChoice1}}});
  const Document d = parse_document(fixtures::kAlternativeEnding.input);
  GenerationContext ctx{"ending", 0, 0};
  const DecodeResult r = recursive_decode(d, s, cfg_k(4), ctx);
  REQUIRE(r.output.has_value());
  CHECK(*r.output == fixtures::kAlternativeEnding.realization);
  REQUIRE(r.steps.size() == 3);
  CHECK(r.steps[0].step == "choice0/generate");
  CHECK(r.steps[1].step == "choice1/generate");
  CHECK(r.steps[2].step == "select");
  CHECK(r.choices == std::vector<std::optional<std::size_t>>{1});
  CHECK_FALSE(r.failed_step);
}

TEST_CASE("sub-expressions carry the document context") {
  OracleBackend oracle;
  RecordingBackend rec(oracle);
  const Document d = parse_document(fixtures::kAlternativeEnding.input);
  GenerationContext ctx{"ending", 0, 0};
  recursive_decode(d, rec, {}, ctx);
  REQUIRE(rec.prompts.size() == 3);
  CHECK(rec.prompts[0] ==
        fixtures::kStoryContext +
            " <expression> <mask_0> My friends decided to keep inviting me "
            "out as I am so much fun. </expression>");
  CHECK(rec.prompts[1] ==
        fixtures::kStoryContext +
            " <expression> <mask_0> The next weekend, I was asked to please "
            "stay home. </expression>");
  CHECK(rec.prompts[2].rfind(fixtures::kStoryContext +
                                 " <expression> <options> <choice_0> the My",
                             0) == 0);
  CHECK(rec.calls == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("without options, recursive decoding equals plain generation") {
  std::vector<fixtures::Row> rows = fixtures::core_examples();
  for (const auto& r : fixtures::model_outputs()) rows.push_back(r);
  MockBackend mock(0.3);
  for (const auto& row : rows) {
    const Document d = parse_document(row.input);
    if (options_count(d.expr) != 0) continue;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      GenerationContext a{row.name, seed, 0};
      GenerationContext b{row.name, seed, 0};
      const TrialLog plain = generate_with_rejection(d, mock, cfg_k(8), a);
      const DecodeResult rec = recursive_decode(d, mock, cfg_k(8), b);
      CHECK(plain.accepted == rec.output);
      REQUIRE(rec.steps.size() == 1);
      CHECK(rec.steps[0].step == "generate");
      CHECK(rec.steps[0].log.tries_used() == plain.tries_used());
    }
  }
}

TEST_CASE("remainder handling") {
  const Document d = parse_document(
      "<expression> <options> <choice_0> one </choice_0> <choice_1> two "
      "</choice_1> </options> <mask_0> <options> <choice_0> red </choice_0> "
      "<choice_1> blue </choice_1> </options> </expression>");
  OracleBackend oracle;

  SUBCASE("recursive by default") {
    GenerationContext ctx{"x", 0, 0};
    const DecodeResult r = recursive_decode(d, oracle, {}, ctx);
    REQUIRE(r.output);
    CHECK(validate_output(d.expr, *r.output).verdict);
    std::vector<std::string> names;
    for (const auto& s : r.steps) names.push_back(s.step);
    CHECK(names == std::vector<std::string>{"select", "remainder/choice0/generate",
                                            "remainder/choice1/generate",
                                            "remainder/select"});
    CHECK(r.choices.size() == 2);
  }
  SUBCASE("strict-literal mode generates the remainder in one loop") {
    GenerationContext ctx{"x", 0, 0};
    RecursiveOptions opt;
    opt.strict_literal = true;
    const DecodeResult r = recursive_decode(d, oracle, {}, ctx, opt);
    REQUIRE(r.output);
    CHECK(validate_output(d.expr, *r.output).verdict);
    REQUIRE(r.steps.size() == 2);
    CHECK(r.steps[1].step == "remainder/generate");
  }
  SUBCASE("remainder context") {
    RecordingBackend rec(oracle);
    GenerationContext ctx{"x", 0, 0};
    RecursiveOptions opt;
    opt.remainder_context = true;
    recursive_decode(d, rec, {}, ctx, opt);
    REQUIRE(rec.prompts.size() >= 2);
    CHECK(rec.prompts[1].rfind("one <expression>", 0) == 0);
  }
}

TEST_CASE("exhausted budget names the failed step") {
  ScriptedBackend s({{"ending", {"junk", "junk", "junk"}}});
  GenerationContext ctx{"ending", 0, 0};
  const DecodeResult r = recursive_decode(
      parse_document(fixtures::kAlternativeEnding.input), s, cfg_k(2), ctx);
  CHECK_FALSE(r.output);
  CHECK(r.failed_step == std::optional<std::string>("choice0/generate"));
}

TEST_CASE("batches are ordered and independent of the worker count") {
  std::vector<BatchItem> items;
  for (int i = 0; i < 60; ++i) {
    const auto& row = fixtures::model_outputs()[static_cast<std::size_t>(i) % 9];
    items.push_back({"inst-" + std::to_string(i), parse_document(row.input)});
  }
  MockBackend mock(0.4);
  BatchOptions one;
  one.seed = 3;
  BatchOptions many = one;
  many.jobs = 6;
  const auto a = run_batch(items, mock, cfg_k(8), one);
  const auto b = run_batch(items, mock, cfg_k(8), many);
  REQUIRE(a.size() == items.size());
  REQUIRE(b.size() == items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    CHECK(a[i].id == items[i].id);
    CHECK(b[i].id == items[i].id);
    CHECK(a[i].result.output == b[i].result.output);
    CHECK(a[i].result.steps.at(0).log.tries_used() ==
          b[i].result.steps.at(0).log.tries_used());
  }
}

TEST_CASE("single-caller backends are serialized") {
  std::vector<BatchItem> items;
  for (int i = 0; i < 24; ++i)
    items.push_back({std::to_string(i),
                     parse_document(fixtures::kLexiconLength.input)});
  SingleCallerBackend single;
  BatchOptions opt;
  opt.jobs = 8;
  const auto r = run_batch(items, single, {}, opt);
  CHECK_FALSE(single.overlapped.load());
  for (const auto& x : r) CHECK(x.result.output.has_value());
}

TEST_CASE("backend failures are recorded per instance") {
  ThrowingBackend bad;
  const auto r = run_batch(
      {{"a", parse_document("<expression> <mask_0> </expression>")}}, bad, {}, {});
  REQUIRE(r.size() == 1);
  CHECK_FALSE(r[0].result.output);
  REQUIRE(r[0].backend_error);
  CHECK(r[0].backend_error->find("boom") != std::string::npos);
}
