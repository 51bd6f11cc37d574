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

#ifndef REI_REI_H_
#define REI_REI_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(REI_BUILDING_LIBRARY)
#define REI_API __declspec(dllexport)
#else
#define REI_API __declspec(dllimport)
#endif
#else
#define REI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values match rei::ErrorCode. */
typedef enum rei_status {
  REI_OK = 0,
  REI_ERR_INVALID_ARGUMENT = 1,
  REI_ERR_UNBALANCED_TAGS = 2,
  REI_ERR_NON_SEQUENTIAL_MASK_IDS = 3,
  REI_ERR_NON_SEQUENTIAL_SERIALS = 4,
  REI_ERR_NON_SEQUENTIAL_CHOICE_IDS = 5,
  REI_ERR_DUPLICATE_LENGTH_LABEL = 6,
  REI_ERR_MISPLACED_LENGTH_LABEL = 7,
  REI_ERR_NESTED_OPTIONS = 8,
  REI_ERR_MALFORMED_LABEL = 9,
  REI_ERR_ALREADY_LABELED = 10,
  REI_ERR_MISSING_EXPRESSION_SPAN = 11,
  REI_ERR_INFEASIBLE_LENGTH = 12,
  REI_ERR_NOT_ENOUGH_DEMOS = 13,
  REI_ERR_UNTERMINATED_COMPLETION = 14,
  REI_ERR_MISSING_FIELD = 15,
  REI_ERR_CONCEPT_NOT_FOUND = 16,
  REI_ERR_EMPTY_EVAL_SET = 17,
  REI_ERR_LENGTH_MISMATCH = 18,
  REI_ERR_BACKEND_FAILURE = 19,
  REI_ERR_AUTH_MISSING = 20,
  REI_ERR_HTTP_ERROR = 21,
  REI_ERR_TIMEOUT = 22,
  REI_ERR_IO = 23,
  REI_ERR_INTERNAL = 99
} rei_status;

/* Opaque handles. */
typedef struct rei_document rei_document;
typedef struct rei_pattern rei_pattern;
typedef struct rei_backend rei_backend;

/* Strings returned through `char** out` are NUL-terminated, allocated by
 * the library and released with rei_string_free. */
REI_API void rei_string_free(char* s);

REI_API const char* rei_version(void);
REI_API const char* rei_status_name(rei_status status);

/* Details of the last failure on the calling thread. The message stays
 * valid until the next failing call on that thread. The offset is -1 when
 * no byte offset applies. */
REI_API const char* rei_last_error_message(void);
REI_API int64_t rei_last_error_offset(void);

/* ---- Documents ---------------------------------------------------------- */

REI_API rei_status rei_document_parse(const char* text, size_t len,
                                      rei_document** out);
REI_API void rei_document_free(rei_document* doc);
REI_API rei_status rei_document_render(const rei_document* doc, char** out);
/* AST as JSON: {"prefix", "suffix", "length", "items": [...]}. */
REI_API rei_status rei_document_to_json(const rei_document* doc, char** out);
/* Space-separated structure signature, e.g. "mask lex mask len". */
REI_API rei_status rei_document_signature(const rei_document* doc, char** out);
/* 1 when the expression has more than one options group. */
REI_API int rei_document_is_extended(const rei_document* doc);

/* ---- Patterns and validation -------------------------------------------- */

REI_API rei_status rei_pattern_compile(const rei_document* doc,
                                       rei_pattern** out);
REI_API void rei_pattern_free(rei_pattern* pattern);
REI_API const char* rei_pattern_source(const rei_pattern* pattern);
/* Required word count, or -1 without a length constraint. */
REI_API int64_t rei_pattern_required_words(const rei_pattern* pattern);
REI_API rei_status rei_pattern_full_match(const rei_pattern* pattern,
                                          const char* candidate, size_t len,
                                          int* matched);

typedef struct rei_validation {
  int regex_ok;
  int length_ok;
  size_t word_count;
  int verdict;
} rei_validation;

REI_API size_t rei_count_words(const char* text, size_t len);
REI_API rei_status rei_validate(const rei_document* doc, const char* candidate,
                                size_t len, rei_validation* out);

/* ---- Labels --------------------------------------------------------------- */

/* `base` is 0 or 1 (the first word label). */
REI_API rei_status rei_add_word_labels(const char* text, size_t len, int base,
                                       char** out);
REI_API rei_status rei_strip_word_labels(const char* text, size_t len, int base,
                                         char** out);
REI_API rei_status rei_strip_serial_labels(const rei_document* doc,
                                           const char* text, size_t len,
                                           char** out);
/* `tagged` != 0 requires an <expression> span in `output`. */
REI_API rei_status rei_extract_realization(const rei_document* doc,
                                           const char* output, size_t len,
                                           int base, int tagged, char** out);

/* ---- Prompts -------------------------------------------------------------- */

REI_API rei_status rei_build_fewshot_prompt(const rei_document* query,
                                            const char* demos_jsonl,
                                            size_t shots, char** out);
REI_API rei_status rei_parse_completion(const char* raw, size_t len,
                                        char** out);

/* ---- Task conversion ------------------------------------------------------ */

/* One raw row (JSON object) to one instance record (JSON object). */
REI_API rei_status rei_convert_row(const char* kind, const char* row_json,
                                   char** instance_json);
/* Demonstration line built from an instance record's first reference. */
REI_API rei_status rei_instance_demonstration(const char* instance_json,
                                              char** demo_json);

/* ---- Generation ----------------------------------------------------------- */

typedef struct rei_generation_config {
  uint32_t max_tries;
  double temperature;
  double top_p;
  uint32_t beam_size;
  int beam_first;
  int label_base; /* 0 or 1 */
} rei_generation_config;

/* `api_mode` != 0 selects the hosted-API defaults (k = 8). */
REI_API void rei_generation_config_default(int api_mode,
                                           rei_generation_config* out);

/* `hints_jsonl` may be NULL; lines are {"id", "choice", "infill_words"}. */
REI_API rei_status rei_backend_oracle(const char* hints_jsonl,
                                      rei_backend** out);
REI_API rei_status rei_backend_mock(double p_valid, int supports_beam,
                                    rei_backend** out);
REI_API rei_status rei_backend_scripted(const char* transcript_jsonl,
                                        rei_backend** out);
/* `api_config_json` keys mirror rei::ApiConfig (base_url, path, model_name,
 * auth_token_env, request_timeout_s, transport_retries, tokens_per_word,
 * max_tokens_cap, max_in_flight); missing keys keep their defaults. */
REI_API rei_status rei_backend_http(const char* api_config_json,
                                    const char* demos_jsonl, size_t shots,
                                    rei_backend** out);
REI_API void rei_backend_free(rei_backend* backend);

/* Trial log JSON for one document. */
REI_API rei_status rei_generate(const rei_document* doc, rei_backend* backend,
                                const rei_generation_config* cfg,
                                const char* instance_id, uint64_t seed,
                                char** trial_log_json);

typedef struct rei_batch_options {
  int recursive;
  int strict_literal;
  int remainder_context;
  uint64_t seed;
  uint32_t jobs;
} rei_batch_options;

/* Instance JSONL in, output-record JSONL out (input order). Returns
 * REI_ERR_BACKEND_FAILURE if any instance hit a backend failure; `out` is
 * still filled in that case. */
REI_API rei_status rei_run_batch(const char* instances_jsonl,
                                 rei_backend* backend,
                                 const rei_generation_config* cfg,
                                 const rei_batch_options* options, char** out);

/* ---- Evaluation ----------------------------------------------------------- */

REI_API rei_status rei_lemmatize(const char* token, size_t len, char** out);
/* Output-record JSONL in; JSON report and plain-text table out (either
 * out-pointer may be NULL). */
REI_API rei_status rei_evaluate(const char* outputs_jsonl, uint32_t max_tries,
                                char** report_json, char** table);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* REI_REI_H_ */
