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

#include "rei/records.hpp"

#include "rei/error.hpp"
#include "rei/text.hpp"

namespace rei {

nlohmann::ordered_json trial_log_to_json(const TrialLog& log) {
  nlohmann::ordered_json j;
  j["tries_used"] = log.tries_used();
  j["first_try_success"] = log.first_try_success();
  j["accepted"] = log.accepted ? nlohmann::ordered_json(*log.accepted) : nullptr;
  auto& attempts = j["attempts"] = nlohmann::ordered_json::array();
  for (const Attempt& a : log.attempts) {
    attempts.push_back({{"candidate", a.candidate},
                        {"realization", a.realization},
                        {"regex_ok", a.report.regex_ok},
                        {"length_ok", a.report.length_ok},
                        {"word_count", a.report.word_count},
                        {"verdict", a.report.verdict}});
  }
  return j;
}

TrialLog trial_log_from_json(const nlohmann::json& j) {
  TrialLog log;
  for (const auto& a : j.at("attempts")) {
    Attempt at;
    at.candidate = a.at("candidate").get<std::string>();
    at.realization = a.at("realization").get<std::string>();
    at.report.regex_ok = a.at("regex_ok").get<bool>();
    at.report.length_ok = a.at("length_ok").get<bool>();
    at.report.word_count = a.at("word_count").get<std::size_t>();
    at.report.verdict = a.at("verdict").get<bool>();
    log.attempts.push_back(std::move(at));
  }
  if (j.contains("accepted") && !j.at("accepted").is_null())
    log.accepted = j.at("accepted").get<std::string>();
  return log;
}

nlohmann::ordered_json output_record(const TaskInstance& inst,
                                     const BatchResult& result) {
  const DecodeResult& r = result.result;
  nlohmann::ordered_json j;
  j["id"] = inst.id;
  j["kind"] = std::string(task_kind_name(inst.kind));
  j["document"] = render_document(inst.doc);
  j["output"] = r.output ? nlohmann::ordered_json(*r.output) : nullptr;
  j["accepted"] = r.output.has_value();
  j["failed_step"] = r.failed_step ? nlohmann::ordered_json(*r.failed_step) : nullptr;
  j["backend_error"] =
      result.backend_error ? nlohmann::ordered_json(*result.backend_error) : nullptr;
  auto& choices = j["chosen_choices"] = nlohmann::ordered_json::array();
  for (const auto& c : r.choices)
    choices.push_back(c ? nlohmann::ordered_json(*c) : nullptr);
  j["references"] = inst.references;
  j["gold_choice"] = inst.gold_choice ? nlohmann::ordered_json(*inst.gold_choice)
                                      : nullptr;
  j["concepts"] = inst.concepts ? nlohmann::ordered_json(*inst.concepts) : nullptr;
  auto& steps = j["steps"] = nlohmann::ordered_json::array();
  for (const DecodeStep& s : r.steps) {
    auto step = trial_log_to_json(s.log);
    step["step"] = s.step;
    steps.push_back(std::move(step));
  }
  return j;
}

EvalSummary evaluate_records(const std::vector<nlohmann::json>& records,
                             std::size_t max_tries) {
  if (records.empty())
    throw Error(ErrorCode::kEmptyEvalSet, "no output records");
  EvalSummary s;
  s.n_instances = records.size();
  s.max_tries = max_tries;

  std::vector<std::pair<Expression, std::string>> pairs;
  std::vector<std::vector<std::string>> concepts;
  std::vector<std::string> concept_outputs;
  std::vector<std::optional<std::size_t>> chosen;
  std::vector<std::size_t> gold;
  std::vector<TrialLog> logs;

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    std::string id = rec.value("id", std::string("#") + std::to_string(i + 1));
    try {
      const Document doc = parse_document(rec.at("document").get<std::string>());
      std::string output;
      if (rec.contains("output") && rec.at("output").is_string()) {
        output = rec.at("output").get<std::string>();
      } else if (rec.contains("steps") && !rec.at("steps").empty()) {
        // Failed instances are scored on their last candidate.
        const auto& attempts = rec.at("steps").back().at("attempts");
        if (!attempts.empty())
          output = attempts.back().at("realization").get<std::string>();
      }
      pairs.emplace_back(doc.expr, output);

      if (rec.contains("steps"))
        for (const auto& step : rec.at("steps"))
          logs.push_back(trial_log_from_json(step));

      if (rec.contains("concepts") && rec.at("concepts").is_array() &&
          !rec.at("concepts").empty()) {
        concepts.push_back(rec.at("concepts").get<std::vector<std::string>>());
        concept_outputs.push_back(output);
      }
      if (rec.contains("gold_choice") && rec.at("gold_choice").is_number_integer()) {
        std::vector<std::string> realized;
        for (const Node& node : doc.expr.items)
          if (const auto* g = std::get_if<Options>(&node)) {
            for (const Choice& c : g->choices) realized.push_back(fixed_text(c.body));
            break;
          }
        chosen.push_back(recover_choice(output, realized));
        gold.push_back(rec.at("gold_choice").get<std::size_t>());
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument,
                  "record '" + id + "': " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), "record '" + id + "': " + e.message(), e.offset());
    }
  }

  s.success_rate = success_rate(pairs);
  if (!concepts.empty()) s.coverage = concept_coverage(concepts, concept_outputs);
  if (!gold.empty()) s.accuracy = choice_accuracy(chosen, gold);
  if (!logs.empty()) {
    TryStats t = try_stats(logs, max_tries);
    s.avg_try = t.avg_try;
    s.first_sr = t.first_sr;
  }
  return s;
}

std::vector<nlohmann::json> parse_jsonl(std::string_view jsonl) {
  std::vector<nlohmann::json> out;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start <= jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = text::trim(jsonl.substr(start, end - start));
    ++line_no;
    if (!line.empty()) {
      try {
        out.push_back(nlohmann::json::parse(line));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kInvalidArgument,
                    "line " + std::to_string(line_no) + ": " + e.what(), start);
      }
    }
    start = end + 1;
  }
  return out;
}

}  // namespace rei
