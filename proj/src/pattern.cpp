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

#include "rei/pattern.hpp"

#include <variant>
#include <vector>

#include "rei/error.hpp"
#include "rei/text.hpp"

namespace rei {

namespace {

constexpr std::string_view kMeta = "\\^$.|?*+()[]{}";

enum class Op : unsigned char { kByte, kAny, kSplit, kJmp, kMatch };

struct Inst {
  Op op;
  unsigned char byte = 0;
  std::size_t x = 0;
  std::size_t y = 0;
};

// Recursive-descent front end that emits Pike VM code directly.
class RegexCompiler {
 public:
  explicit RegexCompiler(std::string_view src) : src_(src) {}

  std::vector<Inst> run() {
    if (pos_ < src_.size() && src_[pos_] == '^') ++pos_;
    alternation();
    if (pos_ < src_.size() && src_[pos_] == '$') ++pos_;
    if (pos_ != src_.size()) fail("unexpected character");
    code_.push_back({Op::kMatch});
    return std::move(code_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kInvalidArgument,
                "unsupported pattern syntax: " + what, pos_);
  }

  bool at_end_of_alternative() const {
    if (pos_ >= src_.size()) return true;
    char c = src_[pos_];
    return c == '|' || c == ')' || (c == '$' && pos_ + 1 == src_.size());
  }

  std::size_t emit(Inst inst) {
    code_.push_back(inst);
    return code_.size() - 1;
  }

  void alternation() {
    std::vector<std::size_t> jumps;
    std::size_t split = emit({Op::kSplit});
    code_[split].x = code_.size();
    concatenation();
    while (pos_ < src_.size() && src_[pos_] == '|') {
      ++pos_;
      jumps.push_back(emit({Op::kJmp}));
      std::size_t next = emit({Op::kSplit});
      code_[split].y = next;
      split = next;
      code_[split].x = code_.size();
      concatenation();
    }
    // Last split has a single live branch.
    code_[split].y = code_[split].x;
    for (std::size_t j : jumps) code_[j].x = code_.size();
  }

  void concatenation() {
    while (!at_end_of_alternative()) repetition();
  }

  void repetition() {
    const std::size_t start = code_.size();
    atom();
    if (pos_ < src_.size() && src_[pos_] == '*') {
      ++pos_;
      // start: split body, out ; body ; jmp start
      code_.insert(code_.begin() + static_cast<std::ptrdiff_t>(start),
                   Inst{Op::kSplit});
      for (std::size_t i = start + 1; i < code_.size(); ++i) {
        Inst& in = code_[i];
        if (in.op == Op::kSplit || in.op == Op::kJmp) {
          ++in.x;
          if (in.op == Op::kSplit) ++in.y;
        }
      }
      emit({Op::kJmp, 0, start});
      code_[start].x = start + 1;
      code_[start].y = code_.size();
    }
  }

  void atom() {
    char c = src_[pos_];
    switch (c) {
      case '.':
        ++pos_;
        emit({Op::kAny});
        return;
      case '(':
        ++pos_;
        if (src_.substr(pos_, 2) == "?:") pos_ += 2;
        alternation();
        if (pos_ >= src_.size() || src_[pos_] != ')') fail("unclosed group");
        ++pos_;
        return;
      case '\\':
        if (pos_ + 1 >= src_.size()) fail("dangling escape");
        if (kMeta.find(src_[pos_ + 1]) == std::string_view::npos)
          fail("escape of a non-metacharacter");
        emit({Op::kByte, static_cast<unsigned char>(src_[pos_ + 1])});
        pos_ += 2;
        return;
      case '*':
      case '+':
      case '?':
      case '[':
      case ']':
      case '{':
      case '}':
      case '^':
      case '$':
        fail(std::string("'") + c + "'");
      default:
        ++pos_;
        emit({Op::kByte, static_cast<unsigned char>(c)});
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<Inst> code_;
};

}  // namespace

struct Regex::Program {
  std::vector<Inst> code;
};

Regex::Regex(std::string_view source)
    : prog_(std::make_unique<Program>(Program{RegexCompiler(source).run()})) {}
Regex::~Regex() = default;
Regex::Regex(Regex&&) noexcept = default;
Regex& Regex::operator=(Regex&&) noexcept = default;

std::size_t Regex::program_size() const { return prog_->code.size(); }

bool Regex::full_match(std::string_view input) const {
  const std::vector<Inst>& code = prog_->code;
  const std::size_t n = code.size();
  std::vector<std::size_t> clist, nlist, stack;
  std::vector<std::size_t> mark(n, static_cast<std::size_t>(-1));
  clist.reserve(n);
  nlist.reserve(n);

  // Follows epsilon edges from `pc`, recording consuming states in `list`.
  auto add = [&](std::vector<std::size_t>& list, std::size_t pc,
                 std::size_t gen) {
    stack.clear();
    stack.push_back(pc);
    while (!stack.empty()) {
      std::size_t p = stack.back();
      stack.pop_back();
      if (mark[p] == gen) continue;
      mark[p] = gen;
      const Inst& in = code[p];
      if (in.op == Op::kJmp) {
        stack.push_back(in.x);
      } else if (in.op == Op::kSplit) {
        stack.push_back(in.y);
        stack.push_back(in.x);
      } else {
        list.push_back(p);
      }
    }
  };

  add(clist, 0, 0);
  for (std::size_t i = 0; i < input.size(); ++i) {
    const auto b = static_cast<unsigned char>(input[i]);
    nlist.clear();
    for (std::size_t pc : clist) {
      const Inst& in = code[pc];
      if (in.op == Op::kAny || (in.op == Op::kByte && in.byte == b))
        add(nlist, pc + 1, i + 1);
    }
    std::swap(clist, nlist);
    if (clist.empty()) return false;
  }
  for (std::size_t pc : clist)
    if (code[pc].op == Op::kMatch) return true;
  return false;
}

CompiledPattern::CompiledPattern(std::string regex_source,
                                 std::optional<std::size_t> required_word_count)
    : source_(std::move(regex_source)),
      words_(required_word_count),
      regex_(std::make_shared<const Regex>(source_)) {}

std::string regex_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (kMeta.find(c) != std::string_view::npos) out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

namespace {

void compile_sequence(const std::vector<Node>& nodes, std::string& out) {
  bool prev_fixed = false;
  for (const Node& node : nodes) {
    if (std::holds_alternative<Mask>(node)) {
      out += ".*";
      prev_fixed = false;
      continue;
    }
    if (prev_fixed) out += ' ';
    if (const auto* l = std::get_if<Literal>(&node)) {
      out += regex_escape(text::normalize_whitespace(l->text));
    } else if (const auto* x = std::get_if<Lexicon>(&node)) {
      out += regex_escape(x->surface);
    } else {
      const auto& group = std::get<Options>(node);
      out += '(';
      for (std::size_t i = 0; i < group.choices.size(); ++i) {
        if (i) out += '|';
        compile_sequence(group.choices[i].body, out);
      }
      out += ')';
    }
    prev_fixed = true;
  }
}

}  // namespace

CompiledPattern compile(const Expression& expr) {
  std::string source = "^";
  compile_sequence(expr.items, source);
  source += '$';
  return CompiledPattern(std::move(source), expr.length);
}

bool full_match(const CompiledPattern& pattern, std::string_view candidate) {
  return pattern.regex().full_match(text::normalize_whitespace(candidate));
}

std::size_t count_words(std::string_view candidate) {
  return text::split_words(candidate).size();
}

ValidationReport validate_output(const CompiledPattern& pattern,
                                 std::string_view candidate) {
  ValidationReport report;
  report.regex_ok = full_match(pattern, candidate);
  report.word_count = count_words(candidate);
  report.length_ok = !pattern.required_word_count() ||
                     *pattern.required_word_count() == report.word_count;
  report.verdict = report.regex_ok && report.length_ok;
  return report;
}

ValidationReport validate_output(const Expression& expr,
                                 std::string_view candidate) {
  return validate_output(compile(expr), candidate);
}

}  // namespace rei
