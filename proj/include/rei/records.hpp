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
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rei/engine.hpp"
#include "rei/metrics.hpp"
#include "rei/tasks.hpp"

namespace rei {

nlohmann::ordered_json trial_log_to_json(const TrialLog& log);
TrialLog trial_log_from_json(const nlohmann::json& j);

// One line of `generate` / `decode-recursive` output: the instance fields
// evaluation needs, the realization (null on failure) and every step's
// trial log.
nlohmann::ordered_json output_record(const TaskInstance& inst,
                                     const BatchResult& result);

// Summary over output records (see output_record).
EvalSummary evaluate_records(const std::vector<nlohmann::json>& records,
                             std::size_t max_tries);

// Splits JSONL into parsed objects; blank lines are skipped. Errors name the
// 1-based line and its byte offset.
std::vector<nlohmann::json> parse_jsonl(std::string_view jsonl);

}  // namespace rei
