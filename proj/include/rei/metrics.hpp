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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rei/expression.hpp"

namespace rei {

struct TrialLog;

// Rule-based English lemmatizer: an exception table for irregular forms,
// then ordered suffix rules (ies, sses, es, s, eed, ing, ed), re-applied
// until nothing changes so the result is a fixed point.
class Lemmatizer {
 public:
  // Ships with the built-in irregular table.
  Lemmatizer();

  // Lowercases, strips edge punctuation, applies the rules.
  std::string lemmatize(std::string_view token) const;

  void add_exception(std::string form, std::string lemma);
  const std::map<std::string, std::string, std::less<>>& exceptions() const {
    return exceptions_;
  }

 private:
  std::map<std::string, std::string, std::less<>> exceptions_;
};

const Lemmatizer& default_lemmatizer();

inline std::string lemmatize(std::string_view token) {
  return default_lemmatizer().lemmatize(token);
}

// Lowercased token with leading/trailing ASCII punctuation removed.
std::string strip_token(std::string_view token);

// Mean validate_output verdict. Throws kEmptyEvalSet on an empty list.
double success_rate(
    const std::vector<std::pair<Expression, std::string>>& pairs);

// Fraction of concepts whose lemma appears among the lemmatized output
// tokens, averaged over instances.
double concept_coverage(const std::vector<std::vector<std::string>>& concepts,
                        const std::vector<std::string>& outputs);

// Index of the choice whose realized text `output` ends with (longest match
// wins), or nullopt.
std::optional<std::size_t> recover_choice(
    std::string_view output, const std::vector<std::string>& realized_choices);

// Exact-match fraction; unrecovered choices count as wrong.
double choice_accuracy(const std::vector<std::optional<std::size_t>>& chosen,
                       const std::vector<std::size_t>& gold);

struct TryStats {
  // Mean tries over instances that produced an accepted output; absent when
  // none did.
  std::optional<double> avg_try;
  double first_sr = 0.0;
};

// k bounds tries_used per log; 0 skips the check.
TryStats try_stats(const std::vector<TrialLog>& logs, std::size_t k);

struct EvalSummary {
  double success_rate = 0.0;
  std::optional<double> coverage;
  std::optional<double> accuracy;
  std::optional<double> avg_try;
  double first_sr = 0.0;
  std::size_t n_instances = 0;
  std::size_t max_tries = 0;
};

std::string summary_to_json(const EvalSummary& s);
// Plain-text table with SuR., Cov., Acc., Avg. Try and First SR. columns.
std::string summary_to_table(const EvalSummary& s);

}  // namespace rei
