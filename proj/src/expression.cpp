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

#include "rei/expression.hpp"

#include <array>

#include "rei/error.hpp"
#include "rei/text.hpp"

namespace rei {

namespace {

constexpr std::string_view kOpenExpr = "<expression>";
constexpr std::string_view kCloseExpr = "</expression>";

enum class LabelKind {
  kMask,
  kOptionsOpen,
  kOptionsClose,
  kChoiceOpen,
  kChoiceClose,
  kLength,
  kExpressionOpen,
  kExpressionClose,
};

struct LabelSpec {
  std::string_view head;
  LabelKind kind;
  bool numbered;
};

// Longest heads first so `</choice_` is not read as text.
constexpr std::array<LabelSpec, 8> kLabels{{
    {"</expression>", LabelKind::kExpressionClose, false},
    {"<expression>", LabelKind::kExpressionOpen, false},
    {"</options>", LabelKind::kOptionsClose, false},
    {"<options>", LabelKind::kOptionsOpen, false},
    {"</choice_", LabelKind::kChoiceClose, true},
    {"<choice_", LabelKind::kChoiceOpen, true},
    {"<length=", LabelKind::kLength, true},
    {"<mask_", LabelKind::kMask, true},
}};

struct Token {
  bool is_label = false;
  LabelKind kind{};
  std::size_t number = 0;
  std::string_view word;
  std::size_t offset = 0;
};

const LabelSpec* label_at(std::string_view s, std::size_t i) {
  for (const auto& spec : kLabels)
    if (s.substr(i, spec.head.size()) == spec.head) return &spec;
  return nullptr;
}

// Splits an expression body into labels and whitespace-delimited words.
// `base` is the absolute offset of `body` in the raw document.
std::vector<Token> lex_body(std::string_view body, std::size_t base) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < body.size()) {
    if (text::is_space(body[i])) {
      ++i;
      continue;
    }
    if (const LabelSpec* spec = label_at(body, i)) {
      Token tok;
      tok.is_label = true;
      tok.kind = spec->kind;
      tok.offset = base + i;
      std::size_t j = i + spec->head.size();
      if (spec->numbered) {
        std::size_t k = j;
        while (k < body.size() && body[k] >= '0' && body[k] <= '9') ++k;
        if (k >= body.size() || body[k] != '>' ||
            !text::parse_number(body.substr(j, k - j), tok.number)) {
          throw Error(ErrorCode::kMalformedLabel,
                      "expected a decimal number without leading zeros and "
                      "'>' after '" + std::string(spec->head) + "'",
                      tok.offset);
        }
        j = k + 1;
      }
      tokens.push_back(tok);
      i = j;
      continue;
    }
    std::size_t start = i;
    while (i < body.size() && !text::is_space(body[i]) &&
           !(body[i] == '<' && label_at(body, i)))
      ++i;
    Token tok;
    tok.word = body.substr(start, i - start);
    tok.offset = base + start;
    tokens.push_back(tok);
  }
  return tokens;
}

// `surface(N)` split; nullopt when the word has no serial-shaped suffix.
std::optional<std::pair<std::string_view, std::size_t>> split_serial(
    std::string_view word) {
  if (word.size() < 4 || word.back() != ')') return std::nullopt;
  std::size_t open = word.rfind('(');
  if (open == std::string_view::npos || open == 0) return std::nullopt;
  std::size_t n = 0;
  if (!text::parse_number(word.substr(open + 1, word.size() - open - 2), n))
    return std::nullopt;
  return std::pair{word.substr(0, open), n};
}

class BodyParser {
 public:
  Expression parse(const std::vector<Token>& tokens) {
    for (const Token& tok : tokens) {
      if (length_offset_) {
        if (tok.is_label && tok.kind == LabelKind::kLength)
          throw Error(ErrorCode::kDuplicateLengthLabel,
                      "expression already has a length label", tok.offset);
        throw Error(ErrorCode::kMisplacedLengthLabel,
                    "the length label must be the last item of the expression",
                    *length_offset_);
      }
      if (tok.is_label)
        on_label(tok);
      else
        on_word(tok);
    }
    flush_literal();
    if (in_options_)
      throw Error(ErrorCode::kUnbalancedTags, "unclosed <options>",
                  options_offset_);
    return std::move(expr_);
  }

 private:
  std::vector<Node>& target() {
    return in_choice_ ? group_.choices.back().body : expr_.items;
  }

  void flush_literal() {
    if (pending_.empty()) return;
    target().push_back(Literal{text::join(pending_, " ")});
    pending_.clear();
  }

  void require_sequence_position(const Token& tok) {
    if (in_options_ && !in_choice_)
      throw Error(ErrorCode::kMalformedLabel,
                  "content inside <options> must be wrapped in a choice",
                  tok.offset);
  }

  void on_word(const Token& tok) {
    require_sequence_position(tok);
    if (auto s = split_serial(tok.word); s && s->second == next_serial_) {
      flush_literal();
      target().push_back(Lexicon{std::string(s->first), next_serial_++});
      return;
    }
    pending_.emplace_back(tok.word);
  }

  void on_label(const Token& tok) {
    switch (tok.kind) {
      case LabelKind::kExpressionOpen:
      case LabelKind::kExpressionClose:
        throw Error(ErrorCode::kUnbalancedTags,
                    "expression labels cannot nest", tok.offset);
      case LabelKind::kMask:
        require_sequence_position(tok);
        if (tok.number != next_mask_)
          throw Error(ErrorCode::kNonSequentialMaskIds,
                      "expected <mask_" + std::to_string(next_mask_) + ">",
                      tok.offset);
        flush_literal();
        target().push_back(Mask{next_mask_++});
        return;
      case LabelKind::kOptionsOpen:
        if (in_options_)
          throw Error(ErrorCode::kNestedOptions,
                      "options groups cannot be nested", tok.offset);
        flush_literal();
        in_options_ = true;
        options_offset_ = tok.offset;
        group_ = Options{};
        return;
      case LabelKind::kOptionsClose:
        if (!in_options_ || in_choice_)
          throw Error(ErrorCode::kUnbalancedTags, "unexpected </options>",
                      tok.offset);
        if (group_.choices.empty())
          throw Error(ErrorCode::kMalformedLabel,
                      "an options group needs at least one choice",
                      tok.offset);
        in_options_ = false;
        expr_.items.push_back(std::move(group_));
        group_ = Options{};
        return;
      case LabelKind::kChoiceOpen:
        if (!in_options_)
          throw Error(ErrorCode::kMalformedLabel,
                      "<choice_N> outside an options group", tok.offset);
        if (in_choice_)
          throw Error(ErrorCode::kUnbalancedTags,
                      "choice opened before the previous one was closed",
                      tok.offset);
        if (tok.number != group_.choices.size())
          throw Error(ErrorCode::kNonSequentialChoiceIds,
                      "expected <choice_" +
                          std::to_string(group_.choices.size()) + ">",
                      tok.offset);
        in_choice_ = true;
        choice_offset_ = tok.offset;
        group_.choices.push_back(Choice{tok.number, {}});
        return;
      case LabelKind::kChoiceClose:
        if (!in_choice_ || tok.number != group_.choices.back().id)
          throw Error(ErrorCode::kUnbalancedTags,
                      "closing label does not match the open choice",
                      tok.offset);
        flush_literal();
        if (group_.choices.back().body.empty())
          throw Error(ErrorCode::kMalformedLabel, "empty choice body",
                      choice_offset_);
        in_choice_ = false;
        return;
      case LabelKind::kLength:
        if (in_options_)
          throw Error(ErrorCode::kMisplacedLengthLabel,
                      "length label inside an options group", tok.offset);
        if (tok.number == 0)
          throw Error(ErrorCode::kMalformedLabel,
                      "length must be a positive integer", tok.offset);
        flush_literal();
        expr_.length = tok.number;
        length_offset_ = tok.offset;
        return;
    }
  }

  Expression expr_;
  Options group_;
  std::vector<std::string> pending_;
  bool in_options_ = false;
  bool in_choice_ = false;
  std::size_t options_offset_ = 0;
  std::size_t choice_offset_ = 0;
  std::size_t next_mask_ = 0;
  std::size_t next_serial_ = 0;
  std::optional<std::size_t> length_offset_;
};

std::size_t count_occurrences(std::string_view s, std::string_view needle,
                              std::size_t& second) {
  std::size_t count = 0;
  for (std::size_t pos = s.find(needle); pos != std::string_view::npos;
       pos = s.find(needle, pos + 1)) {
    if (++count == 2) second = pos;
  }
  return count;
}

void render_nodes(const std::vector<Node>& nodes, std::vector<std::string>& out);

void render_node(const Node& node, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Mask>) {
          out.push_back("<mask_" + std::to_string(n.id) + ">");
        } else if constexpr (std::is_same_v<T, Literal>) {
          out.push_back(n.text);
        } else if constexpr (std::is_same_v<T, Lexicon>) {
          out.push_back(n.surface + "(" + std::to_string(n.serial) + ")");
        } else {
          out.emplace_back("<options>");
          for (const Choice& c : n.choices) {
            const std::string id = std::to_string(c.id);
            out.push_back("<choice_" + id + ">");
            render_nodes(c.body, out);
            out.push_back("</choice_" + id + ">");
          }
          out.emplace_back("</options>");
        }
      },
      node);
}

void render_nodes(const std::vector<Node>& nodes,
                  std::vector<std::string>& out) {
  for (const Node& n : nodes) render_node(n, out);
}

void sign_nodes(const std::vector<Node>& nodes, std::vector<std::string>& out) {
  for (const Node& node : nodes) {
    if (std::holds_alternative<Mask>(node)) {
      out.emplace_back("mask");
    } else if (std::holds_alternative<Literal>(node)) {
      out.emplace_back("lit");
    } else if (std::holds_alternative<Lexicon>(node)) {
      out.emplace_back("lex");
    } else {
      const auto& group = std::get<Options>(node);
      out.push_back("opt(" + std::to_string(group.choices.size()) + ")");
      out.emplace_back("{");
      for (std::size_t i = 0; i < group.choices.size(); ++i) {
        if (i) out.emplace_back("|");
        sign_nodes(group.choices[i].body, out);
      }
      out.emplace_back("}");
    }
  }
}

struct Counters {
  std::size_t mask = 0;
  std::size_t serial = 0;
};

void check_text(std::string_view s, std::string_view what) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == '<' && label_at(s, i))
      throw Error(ErrorCode::kMalformedLabel,
                  std::string(what) + " contains a markup label");
}

void check_nodes(const std::vector<Node>& nodes, bool inside_choice,
                 Counters& counters) {
  bool prev_literal = false;
  for (const Node& node : nodes) {
    bool is_literal = false;
    if (const auto* m = std::get_if<Mask>(&node)) {
      if (m->id != counters.mask)
        throw Error(ErrorCode::kNonSequentialMaskIds,
                    "expected mask id " + std::to_string(counters.mask));
      ++counters.mask;
    } else if (const auto* l = std::get_if<Literal>(&node)) {
      if (l->text.empty() || l->text != text::normalize_whitespace(l->text))
        throw Error(ErrorCode::kInvalidArgument,
                    "literal text must be non-empty and whitespace-normalized");
      if (prev_literal)
        throw Error(ErrorCode::kInvalidArgument, "adjacent literals");
      check_text(l->text, "literal");
      for (std::string_view w : text::split_words(l->text))
        if (looks_like_serial_token(w, counters.serial))
          throw Error(ErrorCode::kInvalidArgument,
                      "literal word '" + std::string(w) +
                          "' would read back as a lexicon item");
      is_literal = true;
    } else if (const auto* x = std::get_if<Lexicon>(&node)) {
      if (x->surface.empty())
        throw Error(ErrorCode::kInvalidArgument, "empty lexicon surface");
      for (char c : x->surface)
        if (text::is_space(c))
          throw Error(ErrorCode::kInvalidArgument,
                      "lexicon surfaces are single tokens");
      check_text(x->surface, "lexicon surface");
      if (x->serial != counters.serial)
        throw Error(ErrorCode::kNonSequentialSerials,
                    "expected serial " + std::to_string(counters.serial));
      ++counters.serial;
    } else {
      if (inside_choice)
        throw Error(ErrorCode::kNestedOptions,
                    "options groups cannot be nested");
      const auto& group = std::get<Options>(node);
      if (group.choices.empty())
        throw Error(ErrorCode::kMalformedLabel,
                    "an options group needs at least one choice");
      for (std::size_t i = 0; i < group.choices.size(); ++i) {
        if (group.choices[i].id != i)
          throw Error(ErrorCode::kNonSequentialChoiceIds,
                      "expected choice id " + std::to_string(i));
        if (group.choices[i].body.empty())
          throw Error(ErrorCode::kMalformedLabel, "empty choice body");
        check_nodes(group.choices[i].body, true, counters);
      }
    }
    prev_literal = is_literal;
  }
}

void canonicalize_nodes(std::vector<Node>& nodes, Counters& counters) {
  std::vector<Node> out;
  out.reserve(nodes.size());
  for (Node& node : nodes) {
    if (auto* m = std::get_if<Mask>(&node)) {
      m->id = counters.mask++;
    } else if (auto* x = std::get_if<Lexicon>(&node)) {
      x->serial = counters.serial++;
    } else if (auto* l = std::get_if<Literal>(&node)) {
      l->text = text::normalize_whitespace(l->text);
      if (l->text.empty()) continue;
      if (!out.empty())
        if (auto* prev = std::get_if<Literal>(&out.back())) {
          prev->text += " " + l->text;
          continue;
        }
    } else {
      auto& group = std::get<Options>(node);
      for (std::size_t i = 0; i < group.choices.size(); ++i) {
        group.choices[i].id = i;
        canonicalize_nodes(group.choices[i].body, counters);
      }
    }
    out.push_back(std::move(node));
  }
  nodes = std::move(out);
}

void collect_surfaces(const std::vector<Node>& nodes,
                      std::vector<std::string>& out) {
  for (const Node& node : nodes) {
    if (const auto* x = std::get_if<Lexicon>(&node)) {
      out.push_back(x->surface);
    } else if (const auto* g = std::get_if<Options>(&node)) {
      for (const Choice& c : g->choices) collect_surfaces(c.body, out);
    }
  }
}

std::size_t count_masks(const std::vector<Node>& nodes) {
  std::size_t n = 0;
  for (const Node& node : nodes) {
    if (std::holds_alternative<Mask>(node)) {
      ++n;
    } else if (const auto* g = std::get_if<Options>(&node)) {
      for (const Choice& c : g->choices) n += count_masks(c.body);
    }
  }
  return n;
}

}  // namespace

std::string StructureSignature::str() const { return text::join(tokens, " "); }

bool looks_like_serial_token(std::string_view word, std::size_t serial) {
  auto s = split_serial(word);
  return s && s->second == serial;
}

Document parse_document(std::string_view raw) {
  std::size_t second = 0;
  const std::size_t opens = count_occurrences(raw, kOpenExpr, second);
  if (opens != 1)
    throw Error(ErrorCode::kUnbalancedTags,
                opens == 0 ? "no <expression> label"
                           : "more than one <expression> label",
                opens == 0 ? 0 : second);
  const std::size_t closes = count_occurrences(raw, kCloseExpr, second);
  if (closes != 1)
    throw Error(ErrorCode::kUnbalancedTags,
                closes == 0 ? "no </expression> label"
                            : "more than one </expression> label",
                closes == 0 ? raw.size() : second);
  const std::size_t open = raw.find(kOpenExpr);
  const std::size_t close = raw.find(kCloseExpr);
  if (close < open)
    throw Error(ErrorCode::kUnbalancedTags,
                "</expression> precedes <expression>", close);

  const std::size_t body_start = open + kOpenExpr.size();
  std::string_view body = raw.substr(body_start, close - body_start);
  Document doc;
  doc.prefix = std::string(raw.substr(0, open));
  doc.suffix = std::string(raw.substr(close + kCloseExpr.size()));
  doc.expr = BodyParser().parse(lex_body(body, body_start));
  return doc;
}

std::string render_expression(const Expression& expr) {
  std::vector<std::string> parts;
  parts.emplace_back(kOpenExpr);
  render_nodes(expr.items, parts);
  if (expr.length) parts.push_back("<length=" + std::to_string(*expr.length) + ">");
  parts.emplace_back(kCloseExpr);
  return text::join(parts, " ");
}

std::string render_document(const Document& doc) {
  return doc.prefix + render_expression(doc.expr) + doc.suffix;
}

StructureSignature signature(const Expression& expr) {
  StructureSignature sig;
  sign_nodes(expr.items, sig.tokens);
  if (expr.length) sig.tokens.emplace_back("len");
  return sig;
}

void check_expression(const Expression& expr) {
  Counters counters;
  check_nodes(expr.items, false, counters);
  if (expr.length && *expr.length == 0)
    throw Error(ErrorCode::kMalformedLabel, "length must be positive");
}

Expression canonicalize(Expression expr) {
  Counters counters;
  canonicalize_nodes(expr.items, counters);
  return expr;
}

std::size_t mask_count(const Expression& expr) { return count_masks(expr.items); }

std::size_t options_count(const Expression& expr) {
  std::size_t n = 0;
  for (const Node& node : expr.items)
    if (std::holds_alternative<Options>(node)) ++n;
  return n;
}

bool contains_nonterminal(const Expression& expr) {
  return options_count(expr) > 0 || mask_count(expr) > 0;
}

std::vector<std::string> lexicon_surfaces(const Expression& expr) {
  std::vector<std::string> out;
  collect_surfaces(expr.items, out);
  return out;
}

std::string fixed_text(const std::vector<Node>& nodes) {
  std::vector<std::string> parts;
  for (const Node& node : nodes) {
    if (const auto* l = std::get_if<Literal>(&node)) {
      parts.push_back(l->text);
    } else if (const auto* x = std::get_if<Lexicon>(&node)) {
      parts.push_back(x->surface);
    }
  }
  return text::join(parts, " ");
}

}  // namespace rei
