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

#include "rei/prompt.hpp"

#include <nlohmann/json.hpp>

#include "rei/error.hpp"
#include "rei/labels.hpp"
#include "rei/text.hpp"

namespace rei {

namespace {

std::string json_quoted(std::string_view s) {
  return nlohmann::json(std::string(s))
      .dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool read_hex4(std::string_view s, std::size_t pos, unsigned& out) {
  if (pos + 4 > s.size()) return false;
  out = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    int v = hex_value(s[pos + i]);
    if (v < 0) return false;
    out = out * 16 + static_cast<unsigned>(v);
  }
  return true;
}

void append_utf8(std::string& out, unsigned cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace

std::string json_escape(std::string_view s) {
  std::string q = json_quoted(s);
  return q.substr(1, q.size() - 2);
}

Demonstration make_demonstration(const Document& doc,
                                 std::string_view reference) {
  return {render_document(doc), format_model_output(reference, doc.expr)};
}

std::vector<Demonstration> parse_demonstrations(std::string_view jsonl) {
  std::vector<Demonstration> pool;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start <= jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = text::trim(jsonl.substr(start, end - start));
    ++line_no;
    if (!line.empty()) {
      try {
        auto j = nlohmann::json::parse(line);
        pool.push_back({j.at("input").get<std::string>(),
                        j.at("output").get<std::string>()});
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kInvalidArgument,
                    "demonstration line " + std::to_string(line_no) + ": " +
                        e.what(),
                    start);
      }
    }
    start = end + 1;
  }
  return pool;
}

std::vector<Demonstration> select_demonstrations(
    const Document& query, const std::vector<Demonstration>& pool,
    std::size_t shots) {
  const StructureSignature want = signature(query);
  std::vector<Demonstration> picked;
  for (const Demonstration& d : pool) {
    if (picked.size() == shots) break;
    try {
      if (signature(parse_document(d.input)) == want) picked.push_back(d);
    } catch (const Error&) {
      // Not a REI document; cannot match any structure.
    }
  }
  if (picked.size() < shots)
    throw Error(ErrorCode::kNotEnoughDemos,
                "need " + std::to_string(shots) + " demonstrations with "
                "structure '" + want.str() + "', found " +
                    std::to_string(picked.size()));
  return picked;
}

std::string demonstration_line(const Demonstration& demo) {
  return "{\"input\": " + json_quoted(demo.input) + ", \"output\": " +
         json_quoted(demo.output) + "}";
}

std::string build_fewshot_prompt(const Document& query,
                                 const std::vector<Demonstration>& pool,
                                 std::size_t shots) {
  std::string prompt;
  for (const Demonstration& d : select_demonstrations(query, pool, shots)) {
    prompt += demonstration_line(d);
    prompt += '\n';
  }
  prompt += "{\"input\": " + json_quoted(render_document(query)) + ", \"output\": \"";
  return prompt;
}

std::string parse_completion(std::string_view raw) {
  std::string out;
  std::size_t i = 0;
  while (i < raw.size()) {
    char c = raw[i];
    if (c == '"') {
      if (i + 1 < raw.size() && raw[i + 1] == '}') return out;
      out.push_back(c);
      ++i;
      continue;
    }
    if (c != '\\' || i + 1 >= raw.size()) {
      out.push_back(c);
      ++i;
      continue;
    }
    char e = raw[i + 1];
    switch (e) {
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      case '/': out.push_back('/'); break;
      case 'b': out.push_back('\b'); break;
      case 'f': out.push_back('\f'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 't': out.push_back('\t'); break;
      case 'u': {
        unsigned cp = 0;
        if (!read_hex4(raw, i + 2, cp)) {
          out.push_back('\\');
          ++i;
          continue;
        }
        std::size_t used = 6;
        unsigned lo = 0;
        if (cp >= 0xD800 && cp < 0xDC00 && raw.substr(i + 6, 2) == "\\u" &&
            read_hex4(raw, i + 8, lo) && lo >= 0xDC00 && lo < 0xE000) {
          cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
          used = 12;
        }
        append_utf8(out, cp);
        i += used;
        continue;
      }
      default:
        // Not a JSON escape; keep the backslash.
        out.push_back('\\');
        ++i;
        continue;
    }
    i += 2;
  }
  throw Error(ErrorCode::kUnterminatedCompletion,
              "completion has no closing \"} terminator", raw.size());
}

}  // namespace rei
