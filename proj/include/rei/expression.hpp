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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rei {

// `<mask_N>`: zero or more generated words.
struct Mask {
  std::size_t id = 0;
  bool operator==(const Mask&) const = default;
};

// A run of fixed text between labels, whitespace-normalized.
struct Literal {
  std::string text;
  bool operator==(const Literal&) const = default;
};

// A required keyword carrying its serial label, rendered `surface(serial)`.
// Surfaces are single whitespace-free tokens.
struct Lexicon {
  std::string surface;
  std::size_t serial = 0;
  bool operator==(const Lexicon&) const = default;
};

struct Choice;

// `<options>`: exactly one of the choices is realized.
struct Options {
  std::vector<Choice> choices;
  bool operator==(const Options& other) const;
};

using Node = std::variant<Mask, Literal, Lexicon, Options>;

struct Choice {
  std::size_t id = 0;
  std::vector<Node> body;
  bool operator==(const Choice&) const = default;
};

inline bool Options::operator==(const Options& other) const {
  return choices == other.choices;
}

struct Expression {
  std::vector<Node> items;
  // `<length=n>`: required word count of the realization.
  std::optional<std::size_t> length;
  bool operator==(const Expression&) const = default;
};

// Text around exactly one expression. Prefix and suffix are kept verbatim.
struct Document {
  std::string prefix;
  Expression expr;
  std::string suffix;
  bool operator==(const Document&) const = default;
};

// Node-kind skeleton used to pick demonstrations of the same shape. Tokens
// are `mask`, `lex`, `lit`, `len` and `opt(c)`; an options group is followed
// by its choice bodies delimited by `{`, `|` and `}`.
struct StructureSignature {
  std::vector<std::string> tokens;
  std::string str() const;
  bool operator==(const StructureSignature&) const = default;
};

Document parse_document(std::string_view raw);

std::string render_expression(const Expression& expr);
std::string render_document(const Document& doc);

StructureSignature signature(const Expression& expr);
inline StructureSignature signature(const Document& doc) {
  return signature(doc.expr);
}

// Throws rei::Error when `expr` violates an AST invariant, i.e. when it is
// not something parse_document could have produced.
void check_expression(const Expression& expr);

// Renumbers masks and serials in reading order and merges adjacent
// literals. Used when splicing sub-expressions together.
Expression canonicalize(Expression expr);

std::size_t mask_count(const Expression& expr);
std::size_t options_count(const Expression& expr);
// More than one sibling options group: only recursive decoding resolves
// these group by group.
inline bool is_extended(const Expression& expr) {
  return options_count(expr) > 1;
}
// Any mask or options group left to resolve.
bool contains_nonterminal(const Expression& expr);
// Lexicon surfaces in serial order.
std::vector<std::string> lexicon_surfaces(const Expression& expr);

// The fixed text of a node sequence without masks, e.g. the realized form of
// a choice body whose masks are empty.
std::string fixed_text(const std::vector<Node>& nodes);

// True when `word` would be read back as a Lexicon with `serial`.
bool looks_like_serial_token(std::string_view word, std::size_t serial);

}  // namespace rei
