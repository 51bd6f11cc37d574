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

// Reference implementations used only by tests. They interpret the AST
// directly and share no code with the library's matcher or counters.

#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rei/expression.hpp"

namespace rei::oracle {

inline bool is_ws(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Trim and collapse whitespace runs to one space.
inline std::string squeeze(const std::string& s) {
  std::string out;
  bool gap = false;
  for (char c : s) {
    if (is_ws(c)) {
      gap = !out.empty();
    } else {
      if (gap) out += ' ';
      gap = false;
      out += c;
    }
  }
  return out;
}

inline std::size_t word_count(const std::string& s) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : s) {
    if (is_ws(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++n;
    }
  }
  return n;
}

inline bool is_fixed(const Node& n) { return !std::holds_alternative<Mask>(n); }

// End positions reachable after matching nodes[k..] from `pos` in `s`.
inline std::set<std::size_t> ends(const std::vector<Node>& nodes, std::size_t k,
                                  std::size_t pos, const std::string& s) {
  if (k == nodes.size()) return {pos};
  std::set<std::size_t> starts;
  // Fixed siblings are separated by exactly one space.
  if (k > 0 && is_fixed(nodes[k - 1]) && is_fixed(nodes[k])) {
    if (pos < s.size() && s[pos] == ' ') starts.insert(pos + 1);
  } else {
    starts.insert(pos);
  }
  std::set<std::size_t> out;
  for (std::size_t p : starts) {
    std::set<std::size_t> after;
    const Node& node = nodes[k];
    if (std::holds_alternative<Mask>(node)) {
      for (std::size_t e = p; e <= s.size(); ++e) after.insert(e);
    } else if (const auto* l = std::get_if<Literal>(&node)) {
      if (s.compare(p, l->text.size(), l->text) == 0 &&
          p + l->text.size() <= s.size())
        after.insert(p + l->text.size());
    } else if (const auto* x = std::get_if<Lexicon>(&node)) {
      if (s.compare(p, x->surface.size(), x->surface) == 0 &&
          p + x->surface.size() <= s.size())
        after.insert(p + x->surface.size());
    } else {
      for (const Choice& c : std::get<Options>(node).choices) {
        auto e = ends(c.body, 0, p, s);
        after.insert(e.begin(), e.end());
      }
    }
    for (std::size_t e : after) {
      auto rest = ends(nodes, k + 1, e, s);
      out.insert(rest.begin(), rest.end());
    }
  }
  return out;
}

inline bool matches(const Expression& expr, const std::string& candidate) {
  const std::string s = squeeze(candidate);
  return ends(expr.items, 0, 0, s).count(s.size()) > 0;
}

inline bool verdict(const Expression& expr, const std::string& candidate) {
  if (!matches(expr, candidate)) return false;
  return !expr.length || word_count(candidate) == *expr.length;
}

inline std::vector<std::string> all_strings(const std::string& alphabet,
                                            std::size_t max_len) {
  std::vector<std::string> out{""};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (char c : alphabet) out.push_back(out[i] + c);
    begin = end;
  }
  return out;
}

// Random valid expression over {a, b, space} with at most `max_nodes`
// nodes, counting the nodes inside choices.
class ExpressionGen {
 public:
  explicit ExpressionGen(std::uint64_t seed) : rng_(seed) {}

  Expression next(std::size_t max_nodes) {
    Expression e;
    mask_ = serial_ = 0;
    std::size_t budget = 1 + pick(max_nodes);
    fill(e.items, budget, true);
    return e;
  }

 private:
  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  std::string word() {
    std::string w;
    const std::size_t len = 1 + pick(2);
    for (std::size_t i = 0; i < len; ++i) w += "ab"[pick(2)];
    return w;
  }

  void fill(std::vector<Node>& out, std::size_t& budget, bool top) {
    const std::size_t target = top ? budget : 1 + pick(2);
    for (std::size_t i = 0; i < target && budget > 0; ++i) {
      const bool prev_literal =
          !out.empty() && std::holds_alternative<Literal>(out.back());
      std::size_t kind = pick(top && budget >= 3 ? 4 : 3);
      if (kind == 2 && prev_literal) kind = 0;
      --budget;
      switch (kind) {
        case 0:
          out.emplace_back(Mask{mask_++});
          break;
        case 1:
          out.emplace_back(Lexicon{word(), serial_++});
          break;
        case 2: {
          std::string t = word();
          if (pick(2) == 0) t += " " + word();
          out.emplace_back(Literal{t});
          break;
        }
        default: {
          Options g;
          const std::size_t n = 2 + (budget >= 3 ? pick(2) : 0);
          for (std::size_t c = 0; c < n && budget > 0; ++c) {
            Choice ch{c, {}};
            fill(ch.body, budget, false);
            if (ch.body.empty()) break;
            g.choices.push_back(std::move(ch));
          }
          if (g.choices.empty())
            out.emplace_back(Mask{mask_++});
          else
            out.emplace_back(std::move(g));
        }
      }
    }
  }

  std::mt19937_64 rng_;
  std::size_t mask_ = 0;
  std::size_t serial_ = 0;
};

// Rejection sampling with per-try success p and budget k.
struct RejectionClosedForm {
  double first_sr;
  double success;
  // E[T | T <= k] for geometric T.
  double avg_try;
};

inline RejectionClosedForm rejection_closed_form(double p, std::size_t k) {
  const double q = 1.0 - p;
  double success = 0.0;
  double weighted = 0.0;
  for (std::size_t t = 1; t <= k; ++t) {
    const double pt = std::pow(q, static_cast<double>(t - 1)) * p;
    success += pt;
    weighted += static_cast<double>(t) * pt;
  }
  return {p, success, weighted / success};
}

}  // namespace rei::oracle
