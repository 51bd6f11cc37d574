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
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "rei/expression.hpp"

namespace rei {

// Matcher for the regex subset emitted by compile(): `^`/`$` at the ends,
// escaped literals, `.`, `*`, and grouped alternation. `.` matches any byte,
// line breaks included. Runs as a Pike VM, so matching is linear in the
// candidate length.
class Regex {
 public:
  // Throws rei::Error(kInvalidArgument) on syntax outside the subset.
  explicit Regex(std::string_view source);
  ~Regex();
  Regex(Regex&&) noexcept;
  Regex& operator=(Regex&&) noexcept;

  // Whole-input match; the pattern is treated as anchored at both ends.
  bool full_match(std::string_view input) const;

  std::size_t program_size() const;

 private:
  struct Program;
  std::unique_ptr<Program> prog_;
};

class CompiledPattern {
 public:
  CompiledPattern(std::string regex_source,
                  std::optional<std::size_t> required_word_count);

  const std::string& regex_source() const { return source_; }
  const std::optional<std::size_t>& required_word_count() const {
    return words_;
  }
  const Regex& regex() const { return *regex_; }

 private:
  std::string source_;
  std::optional<std::size_t> words_;
  std::shared_ptr<const Regex> regex_;
};

struct ValidationReport {
  bool regex_ok = false;
  // Vacuously true without a length constraint.
  bool length_ok = true;
  std::size_t word_count = 0;
  bool verdict = false;
};

// Escapes regex metacharacters so `s` matches itself.
std::string regex_escape(std::string_view s);

// Masks become `.*`, literals and lexicon items their escaped text, options
// groups one `(a|b)` group. Adjacent fixed siblings (literal, lexicon, or
// options group) are separated by one space. The length constraint is
// carried separately and never encoded in the pattern.
CompiledPattern compile(const Expression& expr);

// Normalizes whitespace in `candidate`, then matches the whole of it.
bool full_match(const CompiledPattern& pattern, std::string_view candidate);

// Number of maximal non-whitespace runs.
std::size_t count_words(std::string_view candidate);

ValidationReport validate_output(const CompiledPattern& pattern,
                                 std::string_view candidate);
ValidationReport validate_output(const Expression& expr,
                                 std::string_view candidate);

}  // namespace rei
