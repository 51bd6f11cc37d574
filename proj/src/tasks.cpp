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

#include "rei/tasks.hpp"

#include <algorithm>
#include <cctype>

#include "rei/error.hpp"
#include "rei/metrics.hpp"
#include "rei/pattern.hpp"
#include "rei/text.hpp"

namespace rei {

namespace {

constexpr std::pair<TaskKind, std::string_view> kKindNames[] = {
    {TaskKind::kAnlg, "anlg"},
    {TaskKind::kAnlgLength, "anlg_length"},
    {TaskKind::kAnlgLexicon, "anlg_lexicon"},
    {TaskKind::kAnlgLengthLexicon, "anlg_length_lexicon"},
    {TaskKind::kAnli, "anli"},
    {TaskKind::kCommongen, "commongen"},
    {TaskKind::kCommongenLength, "commongen_length"},
    {TaskKind::kStoryclozeInfill, "storycloze_infill"},
    {TaskKind::kGigawordLength, "gigaword_length"},
    {TaskKind::kMtTerms, "mt_terms"},
};

class Row {
 public:
  Row(TaskKind kind, const nlohmann::json& j) : kind_(kind), j_(j) {
    if (!j_.is_object())
      throw Error(ErrorCode::kInvalidArgument, "row is not a JSON object");
  }

  bool has(const char* name) const {
    return j_.contains(name) && !j_.at(name).is_null();
  }

  [[noreturn]] void missing(const char* name) const {
    throw Error(ErrorCode::kMissingField,
                std::string(task_kind_name(kind_)) + " row needs field '" +
                    name + "'");
  }

  std::string str(const char* name) const {
    if (!has(name)) missing(name);
    const auto& v = j_.at(name);
    if (!v.is_string())
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
  }

  std::string str_or(const char* name, std::string fallback) const {
    return has(name) ? str(name) : std::move(fallback);
  }

  std::vector<std::string> list(const char* name) const {
    if (!has(name)) missing(name);
    const auto& v = j_.at(name);
    if (!v.is_array())
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("field '") + name + "' must be an array");
    std::vector<std::string> out;
    for (const auto& e : v) out.push_back(e.get<std::string>());
    return out;
  }

  std::optional<std::size_t> index(const char* name) const {
    if (!has(name)) return std::nullopt;
    const auto& v = j_.at(name);
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("field '") + name +
                      "' must be a non-negative integer");
    return v.get<std::size_t>();
  }

  std::vector<std::string> references() const {
    if (has("references")) return list("references");
    if (has("reference")) return {str("reference")};
    return {};
  }

 private:
  TaskKind kind_;
  const nlohmann::json& j_;
};

std::string expression_text(const std::vector<std::string>& parts) {
  return "<expression> " + text::join(parts, " ") + " </expression>";
}

std::string around(const std::string& before, const std::string& expr,
                   const std::string& after) {
  std::string out;
  if (!before.empty()) out += before + " ";
  out += expr;
  if (!after.empty()) out += " " + after;
  return out;
}

// `<mask_0> s0(0) <mask_1> ... sk(k) <mask_k+1>`, plus an optional length.
std::vector<std::string> interleave(const std::vector<std::string>& surfaces,
                                    std::optional<std::size_t> length) {
  std::vector<std::string> parts{"<mask_0>"};
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    parts.push_back(surfaces[i] + "(" + std::to_string(i) + ")");
    parts.push_back("<mask_" + std::to_string(i + 1) + ">");
  }
  if (length) parts.push_back("<length=" + std::to_string(*length) + ">");
  return parts;
}

std::size_t length_field(const Row& row, const std::vector<std::string>& refs) {
  if (auto n = row.index("length")) {
    if (*n == 0)
      throw Error(ErrorCode::kInvalidArgument, "length must be positive");
    return *n;
  }
  if (!refs.empty()) return count_words(refs.front());
  row.missing("length");
}

bool uses_length(TaskKind k) {
  return k == TaskKind::kAnlgLength || k == TaskKind::kAnlgLengthLexicon ||
         k == TaskKind::kCommongenLength || k == TaskKind::kGigawordLength;
}

}  // namespace

std::string_view task_kind_name(TaskKind kind) noexcept {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<TaskKind> parse_task_kind(std::string_view name) noexcept {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  return std::nullopt;
}

std::vector<std::string> align_concepts(const std::vector<std::string>& lemmas,
                                        std::string_view reference) {
  const auto words = text::split_words(reference);
  std::vector<std::string> token_lemmas;
  token_lemmas.reserve(words.size());
  for (std::string_view w : words) token_lemmas.push_back(lemmatize(w));

  std::vector<bool> used(words.size(), false);
  std::vector<std::size_t> positions;
  for (const std::string& lemma : lemmas) {
    const std::string want = lemmatize(lemma);
    std::size_t found = words.size();
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (!used[i] && !want.empty() && token_lemmas[i] == want) {
        found = i;
        break;
      }
    }
    if (found == words.size())
      throw Error(ErrorCode::kConceptNotFound,
                  "concept '" + lemma + "' does not occur in the reference");
    used[found] = true;
    positions.push_back(found);
  }
  std::sort(positions.begin(), positions.end());
  std::vector<std::string> surfaces;
  for (std::size_t pos : positions) {
    std::string_view w = words[pos];
    std::size_t b = 0;
    std::size_t e = w.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(w[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(w[e - 1]))) --e;
    surfaces.emplace_back(w.substr(b, e - b));
  }
  return surfaces;
}

std::optional<std::string> heuristic_keyword(std::string_view reference) {
  for (std::string_view w : text::split_words(reference)) {
    std::string t = strip_token(w);
    for (std::string_view suffix : {"ed", "ing"}) {
      if (t.size() > suffix.size() + 2 &&
          t.compare(t.size() - suffix.size(), suffix.size(), suffix) == 0) {
        std::size_t b = 0;
        while (b < w.size() && std::ispunct(static_cast<unsigned char>(w[b]))) ++b;
        std::size_t e = w.size();
        while (e > b && std::ispunct(static_cast<unsigned char>(w[e - 1]))) --e;
        return std::string(w.substr(b, e - b));
      }
    }
  }
  return std::nullopt;
}

TaskInstance build_instance(TaskKind kind, const nlohmann::json& j) {
  Row row(kind, j);
  TaskInstance inst;
  inst.kind = kind;
  inst.id = row.str("id");
  inst.references = row.references();
  if (uses_length(kind)) inst.length = length_field(row, inst.references);

  std::string raw;
  switch (kind) {
    case TaskKind::kAnlg:
    case TaskKind::kAnlgLength:
    case TaskKind::kAnlgLexicon:
    case TaskKind::kAnlgLengthLexicon: {
      const std::string o1 = row.str("obs1");
      const std::string o2 = row.str("obs2");
      inst.contexts = {{"obs1", o1}, {"obs2", o2}};
      std::vector<std::string> parts;
      if (kind == TaskKind::kAnlgLexicon ||
          kind == TaskKind::kAnlgLengthLexicon) {
        std::optional<std::string> w;
        if (row.has("keyword"))
          w = row.str("keyword");
        else if (!inst.references.empty())
          w = heuristic_keyword(inst.references.front());
        if (!w) row.missing("keyword");
        inst.keyword = *w;
        parts = interleave({*w}, inst.length);
      } else {
        parts = {"<mask_0>"};
        if (inst.length)
          parts.push_back("<length=" + std::to_string(*inst.length) + ">");
      }
      raw = around(o1, expression_text(parts), o2);
      break;
    }
    case TaskKind::kAnli: {
      const std::string o1 = row.str("obs1");
      const std::string h1 = row.str("hyp1");
      const std::string h2 = row.str("hyp2");
      const std::string o2 = row.str("obs2");
      inst.contexts = {{"obs1", o1}, {"hyp1", h1}, {"hyp2", h2}, {"obs2", o2}};
      inst.gold_choice = row.index("gold_choice");
      raw = around(o1,
                   expression_text({"<options>", "<choice_0>", h1,
                                    "</choice_0>", "<choice_1>", h2,
                                    "</choice_1>", "</options>"}),
                   o2);
      break;
    }
    case TaskKind::kCommongen:
    case TaskKind::kCommongenLength: {
      std::vector<std::string> surfaces;
      if (row.has("surfaces")) {
        surfaces = row.list("surfaces");
      } else {
        const auto lemmas = row.list("concepts");
        if (inst.references.empty()) row.missing("reference");
        surfaces = align_concepts(lemmas, inst.references.front());
      }
      inst.concepts = surfaces;
      raw = expression_text(interleave(surfaces, inst.length));
      break;
    }
    case TaskKind::kStoryclozeInfill: {
      std::string context;
      if (row.has("sentences"))
        context = text::join(row.list("sentences"), " ");
      else
        context = row.str("context");
      const std::string e1 = row.str("ending1");
      const std::string e2 = row.str("ending2");
      inst.contexts = {{"context", context}, {"ending1", e1}, {"ending2", e2}};
      inst.gold_choice = row.index("gold_choice");
      raw = around(context,
                   expression_text({"<mask_0>", "<options>", "<choice_0>", e1,
                                    "</choice_0>", "<choice_1>", e2,
                                    "</choice_1>", "</options>"}),
                   "");
      break;
    }
    case TaskKind::kGigawordLength: {
      const std::string body = row.str("text");
      inst.contexts = {{"text", body}};
      raw = body + "\n Summarize the aforementioned text in a single phrase.\n " +
            expression_text({"<mask_0>",
                             "<length=" + std::to_string(*inst.length) + ">"});
      break;
    }
    case TaskKind::kMtTerms: {
      const std::string body = row.str("text");
      const std::string src = row.str_or("source_lang", "English");
      const std::string tgt = row.str_or("target_lang", "German");
      inst.terms = row.list("terms");
      inst.contexts = {{"text", body}, {"source_lang", src}, {"target_lang", tgt}};
      raw = "Translate from " + src + " to " + tgt + ":\n\n " + src + ": " +
            body + " \n " + tgt + ": " +
            expression_text(interleave(*inst.terms, std::nullopt));
      break;
    }
  }
  inst.doc = parse_document(raw);
  return inst;
}

nlohmann::ordered_json instance_to_json(const TaskInstance& inst) {
  nlohmann::ordered_json j;
  j["id"] = inst.id;
  j["kind"] = std::string(task_kind_name(inst.kind));
  j["document"] = render_document(inst.doc);
  j["references"] = inst.references;
  j["gold_choice"] = inst.gold_choice ? nlohmann::ordered_json(*inst.gold_choice)
                                      : nullptr;
  j["concepts"] =
      inst.concepts ? nlohmann::ordered_json(*inst.concepts) : nullptr;
  j["keyword"] = inst.keyword ? nlohmann::ordered_json(*inst.keyword) : nullptr;
  j["terms"] = inst.terms ? nlohmann::ordered_json(*inst.terms) : nullptr;
  j["length"] = inst.length ? nlohmann::ordered_json(*inst.length) : nullptr;
  j["contexts"] = inst.contexts;
  return j;
}

TaskInstance instance_from_json(const nlohmann::json& j) {
  auto opt_list = [&](const char* name)
      -> std::optional<std::vector<std::string>> {
    if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
    return j.at(name).get<std::vector<std::string>>();
  };
  TaskInstance inst;
  try {
    inst.id = j.at("id").get<std::string>();
    if (j.contains("kind") && !j.at("kind").is_null()) {
      auto kind = parse_task_kind(j.at("kind").get<std::string>());
      if (!kind)
        throw Error(ErrorCode::kInvalidArgument,
                    "unknown task kind '" + j.at("kind").get<std::string>() + "'");
      inst.kind = *kind;
    }
    inst.doc = parse_document(j.at("document").get<std::string>());
    if (j.contains("references") && j.at("references").is_array())
      inst.references = j.at("references").get<std::vector<std::string>>();
    if (j.contains("gold_choice") && !j.at("gold_choice").is_null())
      inst.gold_choice = j.at("gold_choice").get<std::size_t>();
    inst.concepts = opt_list("concepts");
    inst.terms = opt_list("terms");
    if (j.contains("keyword") && !j.at("keyword").is_null())
      inst.keyword = j.at("keyword").get<std::string>();
    if (j.contains("length") && !j.at("length").is_null())
      inst.length = j.at("length").get<std::size_t>();
    if (j.contains("contexts") && j.at("contexts").is_object())
      inst.contexts = j.at("contexts").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("malformed instance record: ") + e.what());
  }
  return inst;
}

}  // namespace rei
