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
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rei/expression.hpp"
#include "rei/labels.hpp"
#include "rei/pattern.hpp"

namespace rei {

struct GenerationConfig {
  std::size_t max_tries = 512;
  double temperature = 0.7;
  double top_p = 0.95;
  std::size_t beam_size = 4;
  // Try beam search on the first attempt when the backend supports it.
  bool beam_first = true;
  LabelBase label_base = LabelBase::kOne;

  // Local fine-tuned model: k = 512, beam search first.
  static GenerationConfig local_model() { return {}; }
  // Hosted API: k = 8, sampling only.
  static GenerationConfig api() {
    GenerationConfig c;
    c.max_tries = 8;
    c.beam_first = false;
    return c;
  }

  // Throws kInvalidArgument when a field is out of range.
  void check() const;
};

struct BackendCapabilities {
  bool supports_beam = false;
  // False when produce() must not run on two threads at once; the engine
  // then serializes calls.
  bool concurrent = true;
};

struct GenerationRequest {
  // The rendered document.
  std::string_view prompt;
  const GenerationConfig* config = nullptr;
  std::string_view instance_id;
  std::uint64_t seed = 0;
  // Backend calls already made for this instance, across sub-expressions.
  std::size_t call_index = 0;
  // Attempt number within the current rejection loop, from 0.
  std::size_t attempt = 0;
  bool use_beam = false;
};

class GeneratorBackend {
 public:
  virtual ~GeneratorBackend() = default;
  virtual BackendCapabilities capabilities() const = 0;
  // Raw model output; may carry `<expression>` tags and labels. Throws
  // BackendFailure on transport problems.
  virtual std::string produce(const GenerationRequest& request) = 0;
};

struct Attempt {
  std::string candidate;
  std::string realization;
  ValidationReport report;
};

struct TrialLog {
  std::vector<Attempt> attempts;
  std::optional<std::string> accepted;

  std::size_t tries_used() const { return attempts.size(); }
  bool first_try_success() const {
    return !attempts.empty() && attempts.front().report.verdict;
  }
};

// Per-instance state threaded through every backend call.
struct GenerationContext {
  std::string instance_id;
  std::uint64_t seed = 0;
  std::size_t calls = 0;
};

// Samples until a realization passes validate_output, at most
// cfg.max_tries times. Exhausting the budget is reported through an empty
// `accepted`; only backend failures throw.
TrialLog generate_with_rejection(const Document& doc, GeneratorBackend& backend,
                                 const GenerationConfig& cfg,
                                 GenerationContext& ctx);

struct OracleHint {
  std::optional<std::size_t> choice;
  // Used in order for mask filler before the built-in words.
  std::vector<std::string> infill_words;
};

// Always-valid realization. Options resolve to the hinted choice (else 0);
// with `<length=n>` the n - fixed spare words are spread over the masks as
// evenly as possible, earlier masks taking the remainder; without it every
// mask gets one word. Throws kInfeasibleLength when n is below the fixed
// word count or spare words have no mask to go to.
std::string oracle_fill(const Document& doc, const OracleHint* hint = nullptr);

// With probability p_valid the oracle realization, otherwise a corrupted
// one (a lexicon word dropped, or one extra word under a length
// constraint). Reproducible from (seed, call_index).
std::string mock_generate(const Document& doc, double p_valid,
                          std::uint64_t seed, std::size_t call_index = 0);

// The uniform draw mock_generate compares against p_valid.
double mock_uniform(std::uint64_t seed, std::size_t call_index);

class OracleBackend : public GeneratorBackend {
 public:
  OracleBackend() = default;
  explicit OracleBackend(std::map<std::string, OracleHint> hints)
      : hints_(std::move(hints)) {}

  BackendCapabilities capabilities() const override { return {true, true}; }
  std::string produce(const GenerationRequest& request) override;

 private:
  std::map<std::string, OracleHint> hints_;
};

class MockBackend : public GeneratorBackend {
 public:
  explicit MockBackend(double p_valid, bool supports_beam = false);

  BackendCapabilities capabilities() const override {
    return {supports_beam_, true};
  }
  std::string produce(const GenerationRequest& request) override;

 private:
  double p_valid_;
  bool supports_beam_;
};

// Replays a transcript: the n-th call for an instance returns its n-th
// candidate.
class ScriptedBackend : public GeneratorBackend {
 public:
  explicit ScriptedBackend(
      std::map<std::string, std::vector<std::string>> transcript)
      : transcript_(std::move(transcript)) {}

  // One JSON object per line: {"id": ..., "candidates": [...]}.
  static ScriptedBackend from_jsonl(std::string_view jsonl);

  BackendCapabilities capabilities() const override { return {false, true}; }
  std::string produce(const GenerationRequest& request) override;

 private:
  std::map<std::string, std::vector<std::string>> transcript_;
};

// Wraps a single-caller backend so concurrent workers take turns.
class SerializedBackend : public GeneratorBackend {
 public:
  explicit SerializedBackend(GeneratorBackend& inner) : inner_(inner) {}
  BackendCapabilities capabilities() const override {
    auto caps = inner_.capabilities();
    caps.concurrent = true;
    return caps;
  }
  std::string produce(const GenerationRequest& request) override {
    std::lock_guard<std::mutex> lock(mu_);
    return inner_.produce(request);
  }

 private:
  GeneratorBackend& inner_;
  std::mutex mu_;
};

struct RecursiveOptions {
  // Generate the part after the first options group in one rejection loop
  // instead of recursing into it.
  bool strict_literal = false;
  // Prepend the selected choice to the remainder's prefix.
  bool remainder_context = false;
};

struct DecodeStep {
  // "generate", or a path such as "group0/choice1", "group0/select",
  // "remainder/generate".
  std::string step;
  TrialLog log;
};

struct DecodeResult {
  std::optional<std::string> output;
  std::vector<DecodeStep> steps;
  // Chosen choice per resolved options group, left to right.
  std::vector<std::optional<std::size_t>> choices;
  // Step whose rejection loop ran out of tries.
  std::optional<std::string> failed_step;
};

// Solves each choice of the first options group as (prefix + choice),
// lets the backend pick among the realized alternatives, then resolves the
// rest left to right and concatenates.
DecodeResult recursive_decode(const Document& doc, GeneratorBackend& backend,
                              const GenerationConfig& cfg,
                              GenerationContext& ctx,
                              const RecursiveOptions& options = {});

// Stable 64-bit FNV-1a.
std::uint64_t stable_hash(std::string_view s) noexcept;

inline std::uint64_t instance_seed(std::uint64_t run_seed,
                                   std::string_view instance_id) noexcept {
  return run_seed ^ stable_hash(instance_id);
}

struct BatchItem {
  std::string id;
  Document doc;
};

struct BatchOptions {
  bool recursive = false;
  RecursiveOptions recursion;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

struct BatchResult {
  std::string id;
  DecodeResult result;
  // Backend failure message; the instance has no output.
  std::optional<std::string> backend_error;
};

// Runs every item on a worker pool. Results come back in input order and do
// not depend on scheduling.
std::vector<BatchResult> run_batch(const std::vector<BatchItem>& items,
                                   GeneratorBackend& backend,
                                   const GenerationConfig& cfg,
                                   const BatchOptions& options);

}  // namespace rei
