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

#include "rei/rei.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "rei/engine.hpp"
#include "rei/error.hpp"
#include "rei/expression.hpp"
#include "rei/http_backend.hpp"
#include "rei/labels.hpp"
#include "rei/metrics.hpp"
#include "rei/pattern.hpp"
#include "rei/prompt.hpp"
#include "rei/records.hpp"
#include "rei/tasks.hpp"

struct rei_document {
  rei::Document doc;
};

struct rei_pattern {
  rei::CompiledPattern pattern;
};

struct rei_backend {
  std::unique_ptr<rei::GeneratorBackend> impl;
};

namespace {

thread_local std::string g_last_message;
thread_local std::int64_t g_last_offset = -1;

void clear_error() {
  g_last_message.clear();
  g_last_offset = -1;
}

rei_status fail(rei_status status, std::string message,
                std::int64_t offset = -1) {
  g_last_message = std::move(message);
  g_last_offset = offset;
  return status;
}

// Runs `fn` and converts every exception into a status code.
template <typename Fn>
rei_status guarded(Fn&& fn) noexcept {
  clear_error();
  try {
    fn();
    return REI_OK;
  } catch (const rei::Error& e) {
    return fail(static_cast<rei_status>(e.code()), e.what(),
                e.offset() ? static_cast<std::int64_t>(*e.offset()) : -1);
  } catch (const nlohmann::json::exception& e) {
    return fail(REI_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(REI_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(REI_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(REI_ERR_INTERNAL, "unknown exception");
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr)
    throw rei::Error(rei::ErrorCode::kInvalidArgument,
                     std::string(name) + " is null");
}

std::string_view view(const char* s, std::size_t len) {
  return s == nullptr ? std::string_view() : std::string_view(s, len);
}

char* dup(std::string_view s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size());
  p[s.size()] = '\0';
  return p;
}

void put(char** out, std::string_view s) {
  require(out, "out");
  *out = dup(s);
}

rei::LabelBase label_base(int base) {
  if (base != 0 && base != 1)
    throw rei::Error(rei::ErrorCode::kInvalidArgument,
                     "label base must be 0 or 1");
  return base == 0 ? rei::LabelBase::kZero : rei::LabelBase::kOne;
}

rei::GenerationConfig to_config(const rei_generation_config* c) {
  rei::GenerationConfig cfg;
  if (c != nullptr) {
    cfg.max_tries = c->max_tries;
    cfg.temperature = c->temperature;
    cfg.top_p = c->top_p;
    cfg.beam_size = c->beam_size;
    cfg.beam_first = c->beam_first != 0;
    cfg.label_base = label_base(c->label_base);
  }
  cfg.check();
  return cfg;
}

nlohmann::ordered_json node_json(const rei::Node& node);

nlohmann::ordered_json nodes_json(const std::vector<rei::Node>& nodes) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& n : nodes) arr.push_back(node_json(n));
  return arr;
}

nlohmann::ordered_json node_json(const rei::Node& node) {
  nlohmann::ordered_json j;
  if (const auto* m = std::get_if<rei::Mask>(&node)) {
    j["type"] = "mask";
    j["id"] = m->id;
  } else if (const auto* l = std::get_if<rei::Literal>(&node)) {
    j["type"] = "literal";
    j["text"] = l->text;
  } else if (const auto* x = std::get_if<rei::Lexicon>(&node)) {
    j["type"] = "lexicon";
    j["surface"] = x->surface;
    j["serial"] = x->serial;
  } else {
    const auto& o = std::get<rei::Options>(node);
    j["type"] = "options";
    auto& choices = j["choices"] = nlohmann::ordered_json::array();
    for (const auto& c : o.choices)
      choices.push_back({{"id", c.id}, {"body", nodes_json(c.body)}});
  }
  return j;
}

std::map<std::string, rei::OracleHint> parse_hints(std::string_view jsonl) {
  std::map<std::string, rei::OracleHint> hints;
  for (const auto& row : rei::parse_jsonl(jsonl)) {
    rei::OracleHint h;
    if (row.contains("choice") && !row.at("choice").is_null())
      h.choice = row.at("choice").get<std::size_t>();
    if (row.contains("infill_words"))
      h.infill_words = row.at("infill_words").get<std::vector<std::string>>();
    hints[row.at("id").get<std::string>()] = std::move(h);
  }
  return hints;
}

rei::ApiConfig parse_api_config(const char* json) {
  rei::ApiConfig api;
  if (json == nullptr || *json == '\0') return api;
  const auto j = nlohmann::json::parse(json);
  api.base_url = j.value("base_url", api.base_url);
  api.path = j.value("path", api.path);
  api.model_name = j.value("model_name", api.model_name);
  api.auth_token_env = j.value("auth_token_env", api.auth_token_env);
  api.request_timeout_s = j.value("request_timeout_s", api.request_timeout_s);
  api.transport_retries = j.value("transport_retries", api.transport_retries);
  api.backoff_initial_s = j.value("backoff_initial_s", api.backoff_initial_s);
  api.tokens_per_word = j.value("tokens_per_word", api.tokens_per_word);
  api.max_tokens_cap = j.value("max_tokens_cap", api.max_tokens_cap);
  api.max_in_flight = j.value("max_in_flight", api.max_in_flight);
  return api;
}

}  // namespace

extern "C" {

void rei_string_free(char* s) { std::free(s); }

const char* rei_version(void) { return "0.1.0"; }

const char* rei_status_name(rei_status status) {
  if (status == REI_OK) return "Ok";
  if (status == REI_ERR_INTERNAL) return "Internal";
  if (status < REI_ERR_INVALID_ARGUMENT || status > REI_ERR_IO)
    return "Unknown";
  return rei::error_code_name(static_cast<rei::ErrorCode>(status)).data();
}

const char* rei_last_error_message(void) { return g_last_message.c_str(); }

int64_t rei_last_error_offset(void) { return g_last_offset; }

rei_status rei_document_parse(const char* text, size_t len,
                              rei_document** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = nullptr;
    auto doc = std::make_unique<rei_document>();
    doc->doc = rei::parse_document(view(text, len));
    *out = doc.release();
  });
}

void rei_document_free(rei_document* doc) { delete doc; }

rei_status rei_document_render(const rei_document* doc, char** out) {
  return guarded([&] {
    require(doc, "doc");
    put(out, rei::render_document(doc->doc));
  });
}

rei_status rei_document_to_json(const rei_document* doc, char** out) {
  return guarded([&] {
    require(doc, "doc");
    nlohmann::ordered_json j;
    j["prefix"] = doc->doc.prefix;
    j["suffix"] = doc->doc.suffix;
    j["length"] = doc->doc.expr.length
                      ? nlohmann::ordered_json(*doc->doc.expr.length)
                      : nullptr;
    j["items"] = nodes_json(doc->doc.expr.items);
    put(out, j.dump());
  });
}

rei_status rei_document_signature(const rei_document* doc, char** out) {
  return guarded([&] {
    require(doc, "doc");
    put(out, rei::signature(doc->doc).str());
  });
}

int rei_document_is_extended(const rei_document* doc) {
  return doc != nullptr && rei::is_extended(doc->doc.expr) ? 1 : 0;
}

rei_status rei_pattern_compile(const rei_document* doc, rei_pattern** out) {
  return guarded([&] {
    require(doc, "doc");
    require(out, "out");
    *out = nullptr;
    *out = new rei_pattern{rei::compile(doc->doc.expr)};
  });
}

void rei_pattern_free(rei_pattern* pattern) { delete pattern; }

const char* rei_pattern_source(const rei_pattern* pattern) {
  return pattern == nullptr ? "" : pattern->pattern.regex_source().c_str();
}

int64_t rei_pattern_required_words(const rei_pattern* pattern) {
  if (pattern == nullptr || !pattern->pattern.required_word_count()) return -1;
  return static_cast<int64_t>(*pattern->pattern.required_word_count());
}

rei_status rei_pattern_full_match(const rei_pattern* pattern,
                                  const char* candidate, size_t len,
                                  int* matched) {
  return guarded([&] {
    require(pattern, "pattern");
    require(matched, "matched");
    *matched = rei::full_match(pattern->pattern, view(candidate, len)) ? 1 : 0;
  });
}

size_t rei_count_words(const char* text, size_t len) {
  return rei::count_words(view(text, len));
}

rei_status rei_validate(const rei_document* doc, const char* candidate,
                        size_t len, rei_validation* out) {
  return guarded([&] {
    require(doc, "doc");
    require(out, "out");
    const auto r = rei::validate_output(doc->doc.expr, view(candidate, len));
    out->regex_ok = r.regex_ok;
    out->length_ok = r.length_ok;
    out->word_count = r.word_count;
    out->verdict = r.verdict;
  });
}

rei_status rei_add_word_labels(const char* text, size_t len, int base,
                               char** out) {
  return guarded([&] {
    put(out, rei::add_word_labels(view(text, len), label_base(base)).text);
  });
}

rei_status rei_strip_word_labels(const char* text, size_t len, int base,
                                 char** out) {
  return guarded([&] {
    put(out, rei::strip_word_labels(view(text, len), label_base(base)));
  });
}

rei_status rei_strip_serial_labels(const rei_document* doc, const char* text,
                                   size_t len, char** out) {
  return guarded([&] {
    require(doc, "doc");
    put(out, rei::strip_serial_labels(view(text, len),
                                      rei::lexicon_surfaces(doc->doc.expr)));
  });
}

rei_status rei_extract_realization(const rei_document* doc, const char* output,
                                   size_t len, int base, int tagged,
                                   char** out) {
  return guarded([&] {
    require(doc, "doc");
    put(out, rei::extract_realization(
                 view(output, len), doc->doc.expr,
                 tagged ? rei::ExtractMode::kTagged : rei::ExtractMode::kAuto,
                 label_base(base)));
  });
}

rei_status rei_build_fewshot_prompt(const rei_document* query,
                                    const char* demos_jsonl, size_t shots,
                                    char** out) {
  return guarded([&] {
    require(query, "query");
    require(demos_jsonl, "demos_jsonl");
    const auto pool = rei::parse_demonstrations(demos_jsonl);
    put(out, rei::build_fewshot_prompt(query->doc, pool, shots));
  });
}

rei_status rei_parse_completion(const char* raw, size_t len, char** out) {
  return guarded([&] { put(out, rei::parse_completion(view(raw, len))); });
}

rei_status rei_convert_row(const char* kind, const char* row_json,
                           char** instance_json) {
  return guarded([&] {
    require(kind, "kind");
    require(row_json, "row_json");
    const auto k = rei::parse_task_kind(kind);
    if (!k)
      throw rei::Error(rei::ErrorCode::kInvalidArgument,
                       std::string("unknown task kind '") + kind + "'");
    const auto inst = rei::build_instance(*k, nlohmann::json::parse(row_json));
    put(instance_json, rei::instance_to_json(inst).dump());
  });
}

rei_status rei_instance_demonstration(const char* instance_json,
                                      char** demo_json) {
  return guarded([&] {
    require(instance_json, "instance_json");
    const auto inst =
        rei::instance_from_json(nlohmann::json::parse(instance_json));
    if (inst.references.empty())
      throw rei::Error(rei::ErrorCode::kMissingField,
                       "instance '" + inst.id + "' has no reference");
    const auto demo = rei::make_demonstration(inst.doc, inst.references.front());
    nlohmann::ordered_json j;
    j["input"] = demo.input;
    j["output"] = demo.output;
    put(demo_json, j.dump());
  });
}

void rei_generation_config_default(int api_mode, rei_generation_config* out) {
  if (out == nullptr) return;
  const auto cfg = api_mode ? rei::GenerationConfig::api()
                            : rei::GenerationConfig::local_model();
  out->max_tries = static_cast<uint32_t>(cfg.max_tries);
  out->temperature = cfg.temperature;
  out->top_p = cfg.top_p;
  out->beam_size = static_cast<uint32_t>(cfg.beam_size);
  out->beam_first = cfg.beam_first;
  out->label_base = static_cast<int>(cfg.label_base);
}

rei_status rei_backend_oracle(const char* hints_jsonl, rei_backend** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    auto b = std::make_unique<rei_backend>();
    if (hints_jsonl != nullptr)
      b->impl = std::make_unique<rei::OracleBackend>(parse_hints(hints_jsonl));
    else
      b->impl = std::make_unique<rei::OracleBackend>();
    *out = b.release();
  });
}

rei_status rei_backend_mock(double p_valid, int supports_beam,
                            rei_backend** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    auto b = std::make_unique<rei_backend>();
    b->impl = std::make_unique<rei::MockBackend>(p_valid, supports_beam != 0);
    *out = b.release();
  });
}

rei_status rei_backend_scripted(const char* transcript_jsonl,
                                rei_backend** out) {
  return guarded([&] {
    require(transcript_jsonl, "transcript_jsonl");
    require(out, "out");
    *out = nullptr;
    auto b = std::make_unique<rei_backend>();
    b->impl = std::make_unique<rei::ScriptedBackend>(
        rei::ScriptedBackend::from_jsonl(transcript_jsonl));
    *out = b.release();
  });
}

rei_status rei_backend_http(const char* api_config_json,
                            const char* demos_jsonl, size_t shots,
                            rei_backend** out) {
  return guarded([&] {
    require(demos_jsonl, "demos_jsonl");
    require(out, "out");
    *out = nullptr;
    auto b = std::make_unique<rei_backend>();
    b->impl = std::make_unique<rei::HttpBackend>(
        parse_api_config(api_config_json),
        rei::parse_demonstrations(demos_jsonl), shots);
    *out = b.release();
  });
}

void rei_backend_free(rei_backend* backend) { delete backend; }

rei_status rei_generate(const rei_document* doc, rei_backend* backend,
                        const rei_generation_config* cfg,
                        const char* instance_id, uint64_t seed,
                        char** trial_log_json) {
  return guarded([&] {
    require(doc, "doc");
    require(backend, "backend");
    const auto config = to_config(cfg);
    rei::GenerationContext ctx;
    ctx.instance_id = instance_id ? instance_id : "";
    ctx.seed = rei::instance_seed(seed, ctx.instance_id);
    const auto log =
        rei::generate_with_rejection(doc->doc, *backend->impl, config, ctx);
    put(trial_log_json, rei::trial_log_to_json(log).dump());
  });
}

rei_status rei_run_batch(const char* instances_jsonl, rei_backend* backend,
                         const rei_generation_config* cfg,
                         const rei_batch_options* options, char** out) {
  bool backend_failed = false;
  std::string first_error;
  const rei_status st = guarded([&] {
    require(instances_jsonl, "instances_jsonl");
    require(backend, "backend");
    require(out, "out");
    *out = nullptr;
    const auto config = to_config(cfg);
    rei::BatchOptions opts;
    if (options != nullptr) {
      opts.recursive = options->recursive != 0;
      opts.recursion.strict_literal = options->strict_literal != 0;
      opts.recursion.remainder_context = options->remainder_context != 0;
      opts.seed = options->seed;
      opts.jobs = options->jobs == 0 ? 1 : options->jobs;
    }
    std::vector<rei::TaskInstance> instances;
    std::vector<rei::BatchItem> items;
    for (const auto& row : rei::parse_jsonl(instances_jsonl)) {
      instances.push_back(rei::instance_from_json(row));
      items.push_back({instances.back().id, instances.back().doc});
    }
    const auto results = rei::run_batch(items, *backend->impl, config, opts);
    std::string buf;
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i].backend_error && !backend_failed) {
        backend_failed = true;
        first_error = "instance '" + results[i].id + "': " +
                      *results[i].backend_error;
      }
      buf += rei::output_record(instances[i], results[i]).dump();
      buf += '\n';
    }
    *out = dup(buf);
  });
  if (st == REI_OK && backend_failed)
    return fail(REI_ERR_BACKEND_FAILURE, first_error);
  return st;
}

rei_status rei_lemmatize(const char* token, size_t len, char** out) {
  return guarded([&] { put(out, rei::lemmatize(view(token, len))); });
}

rei_status rei_evaluate(const char* outputs_jsonl, uint32_t max_tries,
                        char** report_json, char** table) {
  return guarded([&] {
    require(outputs_jsonl, "outputs_jsonl");
    const auto summary =
        rei::evaluate_records(rei::parse_jsonl(outputs_jsonl), max_tries);
    std::string json = rei::summary_to_json(summary);
    std::string text = rei::summary_to_table(summary);
    char* j = report_json ? dup(json) : nullptr;
    if (table != nullptr) {
      try {
        *table = dup(text);
      } catch (...) {
        std::free(j);
        throw;
      }
    }
    if (report_json != nullptr) *report_json = j;
  });
}

}  // extern "C"
