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

#include "rei/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>

#include <nlohmann/json.hpp>

#include "rei/engine.hpp"
#include "rei/error.hpp"
#include "rei/pattern.hpp"
#include "rei/text.hpp"

namespace rei {

namespace {

// Irregular forms seen in CommonGen-style concept sets.
constexpr std::pair<std::string_view, std::string_view> kIrregular[] = {
    {"am", "be"},          {"are", "be"},        {"is", "be"},
    {"was", "be"},         {"were", "be"},       {"been", "be"},
    {"being", "be"},       {"has", "have"},      {"had", "have"},
    {"having", "have"},    {"did", "do"},        {"does", "do"},
    {"done", "do"},        {"goes", "go"},       {"went", "go"},
    {"gone", "go"},        {"stood", "stand"},   {"sat", "sit"},
    {"ran", "run"},        {"ate", "eat"},       {"eaten", "eat"},
    {"saw", "see"},        {"seen", "see"},      {"made", "make"},
    {"took", "take"},      {"taken", "take"},    {"gave", "give"},
    {"given", "give"},     {"got", "get"},       {"gotten", "get"},
    {"held", "hold"},      {"threw", "throw"},   {"thrown", "throw"},
    {"drew", "draw"},      {"drawn", "draw"},    {"rode", "ride"},
    {"ridden", "ride"},    {"wore", "wear"},     {"worn", "wear"},
    {"sang", "sing"},      {"sung", "sing"},     {"swam", "swim"},
    {"began", "begin"},    {"begun", "begin"},   {"brought", "bring"},
    {"bought", "buy"},     {"caught", "catch"},  {"taught", "teach"},
    {"thought", "think"},  {"fought", "fight"},  {"found", "find"},
    {"led", "lead"},       {"met", "meet"},      {"paid", "pay"},
    {"said", "say"},       {"sold", "sell"},     {"sent", "send"},
    {"spent", "spend"},    {"told", "tell"},     {"won", "win"},
    {"wrote", "write"},    {"written", "write"}, {"fell", "fall"},
    {"fallen", "fall"},    {"flew", "fly"},      {"flown", "fly"},
    {"grew", "grow"},      {"grown", "grow"},    {"knew", "know"},
    {"known", "know"},     {"broke", "break"},   {"broken", "break"},
    {"chose", "choose"},   {"chosen", "choose"}, {"drove", "drive"},
    {"driven", "drive"},   {"spoke", "speak"},   {"spoken", "speak"},
    {"hung", "hang"},      {"dug", "dig"},       {"shot", "shoot"},
    {"slept", "sleep"},    {"kept", "keep"},     {"felt", "feel"},
    {"left", "leave"},     {"lay", "lie"},       {"lain", "lie"},
    {"built", "build"},    {"blew", "blow"},
    {"blown", "blow"},     {"children", "child"}, {"men", "man"},
    {"women", "woman"},    {"people", "person"}, {"feet", "foot"},
    {"teeth", "tooth"},    {"mice", "mouse"},    {"geese", "goose"},
    {"knives", "knife"},   {"wives", "wife"},    {"leaves", "leaf"},
    {"shelves", "shelf"},  {"wolves", "wolf"},   {"halves", "half"},
    {"dying", "die"},      {"lying", "lie"},     {"tying", "tie"},
    {"died", "die"},       {"lied", "lie"},      {"tied", "tie"},
};

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool has_vowel(std::string_view s) {
  return std::any_of(s.begin(), s.end(), is_vowel);
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

// Stem left after removing -ing/-ed: undouble a final consonant pair, or
// restore a dropped final e.
std::string repair_stem(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) &&
      std::string_view("lsz").find(stem[n - 1]) == std::string_view::npos) {
    stem.pop_back();
    return stem;
  }
  const char last = stem.back();
  // English words rarely end in c or v; danc -> dance, serv -> serve.
  if (last == 'c' || last == 'v') return stem + 'e';
  // Vowel + s or z: caus -> cause, amaz -> amaze; focus stays.
  if ((last == 's' || last == 'z') && n >= 3 && is_vowel(stem[n - 2]) &&
      !(n >= 5 && ends_with(stem, "us")))
    return stem + 'e';
  // Short consonant-vowel-consonant stems: mak -> make, us -> use.
  const bool cvc = n == 3 && !is_vowel(stem[0]) && is_vowel(stem[1]) &&
                   !is_vowel(stem[2]) &&
                   std::string_view("wxy").find(stem[2]) == std::string_view::npos;
  const bool vc = n == 2 && is_vowel(stem[0]) && !is_vowel(stem[1]) &&
                  std::string_view("wxy").find(stem[1]) == std::string_view::npos;
  if (cvc || vc) return stem + 'e';
  return stem;
}

// One pass: the first applicable rule, or the input unchanged.
std::string apply_rules(const std::string& w) {
  if (w.size() > 4 && ends_with(w, "ies")) return w.substr(0, w.size() - 3) + "y";
  if (w.size() > 4 && ends_with(w, "ied")) return w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "sses")) return w.substr(0, w.size() - 2);
  if (w.size() > 3 && ends_with(w, "es")) {
    std::string_view stem = std::string_view(w).substr(0, w.size() - 2);
    if (ends_with(stem, "ss") || ends_with(stem, "x") || ends_with(stem, "z") ||
        ends_with(stem, "ch") || ends_with(stem, "sh"))
      return std::string(stem);
    return w.substr(0, w.size() - 1);
  }
  if (w.size() > 3 && ends_with(w, "s") && !ends_with(w, "ss") &&
      !ends_with(w, "us") && !ends_with(w, "is"))
    return w.substr(0, w.size() - 1);
  if (ends_with(w, "eed")) {
    std::string_view stem = std::string_view(w).substr(0, w.size() - 3);
    return has_vowel(stem) ? w.substr(0, w.size() - 1) : w;
  }
  if (ends_with(w, "ing")) {
    std::string stem = w.substr(0, w.size() - 3);
    if (stem.size() >= 2 && has_vowel(stem)) return repair_stem(stem);
    return w;
  }
  if (ends_with(w, "ed")) {
    std::string stem = w.substr(0, w.size() - 2);
    if (stem.size() >= 2 && has_vowel(stem)) return repair_stem(stem);
    return w;
  }
  return w;
}

bool is_edge_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

std::set<std::string> lemma_set(std::string_view output) {
  std::set<std::string> lemmas;
  for (std::string_view tok : text::split_words(output)) {
    std::string l = lemmatize(tok);
    if (!l.empty()) lemmas.insert(std::move(l));
  }
  return lemmas;
}

}  // namespace

std::string strip_token(std::string_view token) {
  std::size_t b = 0;
  std::size_t e = token.size();
  while (b < e && is_edge_punct(token[b])) ++b;
  while (e > b && is_edge_punct(token[e - 1])) --e;
  std::string out(token.substr(b, e - b));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Lemmatizer::Lemmatizer() {
  for (const auto& [form, lemma] : kIrregular)
    exceptions_.emplace(std::string(form), std::string(lemma));
}

void Lemmatizer::add_exception(std::string form, std::string lemma) {
  exceptions_[std::move(form)] = std::move(lemma);
}

std::string Lemmatizer::lemmatize(std::string_view token) const {
  std::string word = strip_token(token);
  // Every rule pass shortens the word, so this converges well within the bound.
  for (std::size_t pass = 0, limit = word.size() + 8; pass < limit; ++pass) {
    if (auto it = exceptions_.find(word); it != exceptions_.end()) {
      if (it->second == word) return word;
      word = it->second;
      continue;
    }
    std::string next = apply_rules(word);
    if (next == word) return word;
    word = std::move(next);
  }
  return word;
}

const Lemmatizer& default_lemmatizer() {
  static const Lemmatizer instance;
  return instance;
}

double success_rate(
    const std::vector<std::pair<Expression, std::string>>& pairs) {
  if (pairs.empty())
    throw Error(ErrorCode::kEmptyEvalSet, "no outputs to score");
  std::size_t ok = 0;
  for (const auto& [expr, output] : pairs)
    if (validate_output(expr, output).verdict) ++ok;
  return static_cast<double>(ok) / static_cast<double>(pairs.size());
}

double concept_coverage(const std::vector<std::vector<std::string>>& concepts,
                        const std::vector<std::string>& outputs) {
  if (concepts.empty())
    throw Error(ErrorCode::kEmptyEvalSet, "no instances to score");
  if (concepts.size() != outputs.size())
    throw Error(ErrorCode::kLengthMismatch,
                "concept lists and outputs differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    if (concepts[i].empty())
      throw Error(ErrorCode::kInvalidArgument,
                  "instance " + std::to_string(i) + " has no concepts");
    const std::set<std::string> present = lemma_set(outputs[i]);
    std::size_t hit = 0;
    for (const std::string& c : concepts[i])
      if (present.count(lemmatize(c))) ++hit;
    total += static_cast<double>(hit) / static_cast<double>(concepts[i].size());
  }
  return total / static_cast<double>(concepts.size());
}

std::optional<std::size_t> recover_choice(
    std::string_view output, const std::vector<std::string>& realized_choices) {
  const std::string norm = text::normalize_whitespace(output);
  std::optional<std::size_t> best;
  std::size_t best_len = 0;
  for (std::size_t i = 0; i < realized_choices.size(); ++i) {
    const std::string choice = text::normalize_whitespace(realized_choices[i]);
    if (choice.empty() || !ends_with(norm, choice)) continue;
    if (!best || choice.size() > best_len) {
      best = i;
      best_len = choice.size();
    }
  }
  return best;
}

double choice_accuracy(const std::vector<std::optional<std::size_t>>& chosen,
                       const std::vector<std::size_t>& gold) {
  if (chosen.size() != gold.size())
    throw Error(ErrorCode::kLengthMismatch,
                "chosen and gold index lists differ in length");
  if (chosen.empty())
    throw Error(ErrorCode::kEmptyEvalSet, "no choices to score");
  std::size_t ok = 0;
  for (std::size_t i = 0; i < chosen.size(); ++i)
    if (chosen[i] && *chosen[i] == gold[i]) ++ok;
  return static_cast<double>(ok) / static_cast<double>(chosen.size());
}

TryStats try_stats(const std::vector<TrialLog>& logs, std::size_t k) {
  if (logs.empty())
    throw Error(ErrorCode::kEmptyEvalSet, "no trial logs");
  TryStats stats;
  std::size_t tries = 0;
  std::size_t successes = 0;
  std::size_t first = 0;
  for (const TrialLog& log : logs) {
    if (k != 0 && log.tries_used() > k)
      throw Error(ErrorCode::kInvalidArgument,
                  "trial log uses more than k=" + std::to_string(k) + " tries");
    if (log.first_try_success()) ++first;
    if (log.accepted) {
      ++successes;
      tries += log.tries_used();
    }
  }
  if (successes)
    stats.avg_try = static_cast<double>(tries) / static_cast<double>(successes);
  stats.first_sr = static_cast<double>(first) / static_cast<double>(logs.size());
  return stats;
}

std::string summary_to_json(const EvalSummary& s) {
  nlohmann::ordered_json j;
  j["n_instances"] = s.n_instances;
  j["max_tries"] = s.max_tries;
  j["success_rate"] = s.success_rate;
  j["coverage"] = s.coverage ? nlohmann::ordered_json(*s.coverage) : nullptr;
  j["accuracy"] = s.accuracy ? nlohmann::ordered_json(*s.accuracy) : nullptr;
  j["avg_try"] = s.avg_try ? nlohmann::ordered_json(*s.avg_try) : nullptr;
  j["first_sr"] = s.first_sr;
  // Quality metrics are computed by external tooling.
  j["external"] = {{"bleu", nullptr},  {"cider", nullptr},
                   {"spice", nullptr}, {"rouge", nullptr},
                   {"bertscore", nullptr}, {"term", nullptr}};
  return j.dump(2);
}

std::string summary_to_table(const EvalSummary& s) {
  auto pct = [](std::optional<double> v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *v * 100.0);
    return std::string(buf);
  };
  char avg[32] = "-";
  if (s.avg_try) std::snprintf(avg, sizeof avg, "%.2f", *s.avg_try);
  char line[256];
  std::string out;
  std::snprintf(line, sizeof line, "%-8s %-7s %-7s %-7s %-9s %-9s\n", "N",
                "SuR.", "Cov.", "Acc.", "Avg. Try", "First SR.");
  out += line;
  std::snprintf(line, sizeof line, "%-8zu %-7s %-7s %-7s %-9s %-9s\n",
                s.n_instances, pct(s.success_rate).c_str(),
                pct(s.coverage).c_str(), pct(s.accuracy).c_str(), avg,
                pct(s.first_sr).c_str());
  out += line;
  return out;
}

}  // namespace rei
