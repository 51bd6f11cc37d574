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

#include "rei/labels.hpp"

#include <cctype>

#include "rei/error.hpp"
#include "rei/text.hpp"

namespace rei {

namespace {

// Length of a trailing `_<n>` suffix on `word` when n == expected, else 0.
std::size_t word_label_length(std::string_view word, std::size_t expected) {
  const std::string suffix = "_" + std::to_string(expected);
  if (word.size() <= suffix.size()) return 0;
  if (word.substr(word.size() - suffix.size()) != suffix) return 0;
  return suffix.size();
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

constexpr std::string_view kOpen = "<expression>";
constexpr std::string_view kClose = "</expression>";

}  // namespace

LabeledText add_word_labels(std::string_view text, LabelBase base) {
  LabeledText out;
  out.base = base;
  out.scheme = LabelScheme::kWordLabels;
  std::size_t index = static_cast<std::size_t>(base);
  std::size_t i = 0;
  while (i < text.size()) {
    if (text::is_space(text[i])) {
      out.text.push_back(text[i++]);
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && !text::is_space(text[i])) ++i;
    std::string_view word = text.substr(start, i - start);
    if (word_label_length(word, index) != 0)
      throw Error(ErrorCode::kAlreadyLabeled,
                  "token '" + std::string(word) + "' already carries a label",
                  start);
    out.text += word;
    out.text += "_" + std::to_string(index++);
  }
  return out;
}

std::string strip_word_labels(std::string_view text, LabelBase base) {
  std::string out;
  out.reserve(text.size());
  std::size_t index = static_cast<std::size_t>(base);
  std::size_t i = 0;
  while (i < text.size()) {
    if (text::is_space(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && !text::is_space(text[i])) ++i;
    std::string_view word = text.substr(start, i - start);
    out += word.substr(0, word.size() - word_label_length(word, index++));
  }
  return out;
}

std::string strip_serial_labels(std::string_view text,
                                const std::vector<std::string>& lexicon) {
  std::string out(text);
  for (std::size_t serial = 0; serial < lexicon.size(); ++serial) {
    const std::string& surface = lexicon[serial];
    if (surface.empty()) continue;
    const std::string label = "(" + std::to_string(serial) + ")";
    const std::string needle = surface + label;
    std::size_t pos = 0;
    while ((pos = out.find(needle, pos)) != std::string::npos) {
      if (pos > 0 && is_word_char(out[pos - 1]) && is_word_char(surface[0])) {
        pos += needle.size();
        continue;
      }
      out.erase(pos + surface.size(), label.size());
      pos += surface.size();
    }
  }
  return out;
}

std::string add_serial_labels(std::string_view text,
                              const std::vector<std::string>& lexicon) {
  std::string out(text);
  std::size_t from = 0;
  for (std::size_t serial = 0; serial < lexicon.size(); ++serial) {
    const std::string& surface = lexicon[serial];
    std::size_t pos = from;
    while ((pos = out.find(surface, pos)) != std::string::npos) {
      if (pos > 0 && is_word_char(out[pos - 1]) && is_word_char(surface[0])) {
        ++pos;
        continue;
      }
      break;
    }
    if (pos == std::string::npos) continue;
    const std::string label = "(" + std::to_string(serial) + ")";
    out.insert(pos + surface.size(), label);
    from = pos + surface.size() + label.size();
  }
  return out;
}

std::string extract_realization(std::string_view model_output,
                                const Expression& expr, ExtractMode mode,
                                LabelBase base) {
  std::string_view inner = model_output;
  const std::size_t open = model_output.find(kOpen);
  if (open != std::string_view::npos) {
    const std::size_t start = open + kOpen.size();
    const std::size_t close = model_output.find(kClose, start);
    if (close == std::string_view::npos)
      throw Error(ErrorCode::kMissingExpressionSpan,
                  "output has <expression> without </expression>", open);
    inner = model_output.substr(start, close - start);
  } else if (mode == ExtractMode::kTagged) {
    throw Error(ErrorCode::kMissingExpressionSpan,
                "output has no <expression> span");
  }
  std::string clean = strip_word_labels(text::trim(inner), base);
  clean = strip_serial_labels(clean, lexicon_surfaces(expr));
  return std::string(text::trim(clean));
}

std::string format_model_output(std::string_view realization,
                                const Expression& expr, LabelBase base) {
  std::string body = text::normalize_whitespace(realization);
  body = add_serial_labels(body, lexicon_surfaces(expr));
  if (expr.length) body = add_word_labels(body, base).text;
  std::string out(kOpen);
  out += ' ';
  if (!body.empty()) {
    out += body;
    out += ' ';
  }
  out += kClose;
  return out;
}

}  // namespace rei
