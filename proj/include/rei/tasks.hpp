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
#include <vector>

#include <nlohmann/json.hpp>

#include "rei/expression.hpp"

namespace rei {

enum class TaskKind {
  kAnlg,
  kAnlgLength,
  kAnlgLexicon,
  kAnlgLengthLexicon,
  kAnli,
  kCommongen,
  kCommongenLength,
  kStoryclozeInfill,
  kGigawordLength,
  kMtTerms,
};

inline constexpr TaskKind kAllTaskKinds[] = {
    TaskKind::kAnlg,           TaskKind::kAnlgLength,
    TaskKind::kAnlgLexicon,    TaskKind::kAnlgLengthLexicon,
    TaskKind::kAnli,           TaskKind::kCommongen,
    TaskKind::kCommongenLength, TaskKind::kStoryclozeInfill,
    TaskKind::kGigawordLength, TaskKind::kMtTerms,
};

std::string_view task_kind_name(TaskKind kind) noexcept;
std::optional<TaskKind> parse_task_kind(std::string_view name) noexcept;

struct TaskInstance {
  std::string id;
  TaskKind kind = TaskKind::kAnlg;
  Document doc;
  std::vector<std::string> references;
  std::optional<std::size_t> gold_choice;
  // Surfaces in expression order, serial i at index i.
  std::optional<std::vector<std::string>> concepts;
  std::optional<std::string> keyword;
  std::optional<std::vector<std::string>> terms;
  std::optional<std::size_t> length;
  // Raw context fields: obs1, obs2, hyp1, hyp2, context, ending1, ending2,
  // text.
  std::map<std::string, std::string> contexts;
};

// Builds the document for one raw row. Field names per kind:
//   all:            id, reference | references
//   anlg*:          obs1, obs2; length (else reference word count);
//                   keyword (else heuristic_keyword(reference))
//   anli:           obs1, hyp1, hyp2, obs2, gold_choice
//   commongen*:     concepts (lemmas) and a reference, or surfaces; length
//   storycloze_infill: context | sentences, ending1, ending2, gold_choice
//   gigaword_length: text, length
//   mt_terms:       text, terms, source_lang, target_lang
// Throws kMissingField or kConceptNotFound.
TaskInstance build_instance(TaskKind kind, const nlohmann::json& row);

// Reference surfaces for each concept lemma, in first-occurrence order.
// Each lemma takes the earliest token not yet used by another concept.
std::vector<std::string> align_concepts(const std::vector<std::string>& lemmas,
                                        std::string_view reference);

// Heuristic only: the first reference token that changes when an -ed/-ing
// ending is stripped, as a stand-in for "the first verb".
std::optional<std::string> heuristic_keyword(std::string_view reference);

nlohmann::ordered_json instance_to_json(const TaskInstance& inst);
TaskInstance instance_from_json(const nlohmann::json& j);

}  // namespace rei
