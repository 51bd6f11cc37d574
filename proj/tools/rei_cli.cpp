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

// Command-line driver. Talks to the library only through rei.h.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rei/rei.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitBackend = 2;

struct CliError : std::runtime_error {
  CliError(int code, const std::string& msg)
      : std::runtime_error(msg), exit_code(code) {}
  int exit_code;
};

bool is_backend_status(rei_status s) {
  return s == REI_ERR_BACKEND_FAILURE || s == REI_ERR_AUTH_MISSING ||
         s == REI_ERR_HTTP_ERROR || s == REI_ERR_TIMEOUT;
}

[[noreturn]] void raise(rei_status s, const std::string& context = "") {
  std::string msg = rei_last_error_message();
  if (!context.empty()) msg = context + ": " + msg;
  throw CliError(is_backend_status(s) ? kExitBackend : kExitInput, msg);
}

void check(rei_status s, const std::string& context = "") {
  if (s != REI_OK) raise(s, context);
}

// Owns a library-allocated string.
class CStr {
 public:
  CStr() = default;
  ~CStr() { rei_string_free(p_); }
  CStr(const CStr&) = delete;
  CStr& operator=(const CStr&) = delete;
  char** out() { return &p_; }
  std::string str() const { return p_ ? std::string(p_) : std::string(); }

 private:
  char* p_ = nullptr;
};

struct DocHandle {
  rei_document* p = nullptr;
  ~DocHandle() { rei_document_free(p); }
};

struct BackendHandle {
  rei_backend* p = nullptr;
  ~BackendHandle() { rei_backend_free(p); }
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kExitInput, "cannot read '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError(kExitInput, "cannot write '" + path + "'");
  out << data;
}

// Expression text from --expr, else from the input file.
std::string expression_text(const std::string& expr, const std::string& file) {
  if (!expr.empty()) return expr;
  if (!file.empty()) return read_file(file);
  throw CliError(kExitInput, "an expression (--expr or a file) is required");
}

void parse_doc(const std::string& text, DocHandle& doc) {
  check(rei_document_parse(text.data(), text.size(), &doc.p));
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

struct RunFlags {
  std::string task;
  std::string backend = "oracle";
  std::optional<std::uint32_t> max_tries;
  std::optional<double> temperature;
  std::optional<double> top_p;
  std::size_t shots = 8;
  std::uint64_t seed = 0;
  std::uint32_t jobs = 1;
  bool strict_literal = false;
  bool remainder_context = false;
  bool zero_based = false;
  double mock_p = 0.5;
  bool mock_beam = false;
  std::string instances;
  std::string output;
  std::string manifest;
  std::string transcript;
  std::string hints;
  std::string demos;
  std::string api_config;
  std::string base_url;
  std::string model;
  std::string token_env;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("instances", f.instances, "Instance JSONL ('-' for stdin)")
      ->required();
  cmd->add_option("-o,--output", f.output, "Output JSONL (default stdout)");
  cmd->add_option("--manifest", f.manifest, "Write the run manifest here");
  cmd->add_option("--task", f.task, "Only run instances of this task kind");
  cmd->add_option("--backend", f.backend, "oracle | mock | scripted | http")
      ->check(CLI::IsMember({"oracle", "mock", "scripted", "http"}));
  cmd->add_option("--max-tries", f.max_tries,
                  "Rejection budget k (default 512, http 8)");
  cmd->add_option("--temperature", f.temperature, "Sampling temperature");
  cmd->add_option("--top-p", f.top_p, "Nucleus sampling mass");
  cmd->add_option("--shots", f.shots, "Demonstrations per prompt (http)");
  cmd->add_option("--seed", f.seed, "Run seed");
  cmd->add_option("--jobs", f.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--zero-based-labels", f.zero_based,
                "Word labels start at _0");
  cmd->add_option("--mock-p", f.mock_p, "Mock backend validity probability")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_flag("--mock-beam", f.mock_beam, "Mock backend claims beam search");
  cmd->add_option("--transcript", f.transcript,
                  "Scripted backend transcript JSONL");
  cmd->add_option("--hints", f.hints, "Oracle hint JSONL");
  cmd->add_option("--demos", f.demos, "Demonstration pool JSONL (http)");
  cmd->add_option("--api-config", f.api_config, "API config JSON file (http)");
  cmd->add_option("--base-url", f.base_url, "API base URL (http)");
  cmd->add_option("--model", f.model, "Model name (http)");
  cmd->add_option("--token-env", f.token_env,
                  "Environment variable holding the API token (http)");
}

rei_generation_config make_config(const RunFlags& f) {
  rei_generation_config cfg;
  rei_generation_config_default(f.backend == "http", &cfg);
  if (f.max_tries) cfg.max_tries = *f.max_tries;
  if (f.temperature) cfg.temperature = *f.temperature;
  if (f.top_p) cfg.top_p = *f.top_p;
  cfg.label_base = f.zero_based ? 0 : 1;
  return cfg;
}

void make_backend(const RunFlags& f, BackendHandle& b) {
  if (f.backend == "oracle") {
    std::string hints = f.hints.empty() ? "" : read_file(f.hints);
    check(rei_backend_oracle(f.hints.empty() ? nullptr : hints.c_str(), &b.p),
          "oracle backend");
  } else if (f.backend == "mock") {
    check(rei_backend_mock(f.mock_p, f.mock_beam, &b.p), "mock backend");
  } else if (f.backend == "scripted") {
    if (f.transcript.empty())
      throw CliError(kExitInput, "--backend scripted needs --transcript");
    check(rei_backend_scripted(read_file(f.transcript).c_str(), &b.p),
          "transcript '" + f.transcript + "'");
  } else {
    if (f.demos.empty())
      throw CliError(kExitInput, "--backend http needs --demos");
    nlohmann::json api = nlohmann::json::object();
    if (!f.api_config.empty()) {
      try {
        api = nlohmann::json::parse(read_file(f.api_config));
      } catch (const nlohmann::json::exception& e) {
        throw CliError(kExitInput, "api config: " + std::string(e.what()));
      }
    }
    if (!f.base_url.empty()) api["base_url"] = f.base_url;
    if (!f.model.empty()) api["model_name"] = f.model;
    if (!f.token_env.empty()) api["auth_token_env"] = f.token_env;
    check(rei_backend_http(api.dump().c_str(), read_file(f.demos).c_str(),
                           f.shots, &b.p),
          "http backend");
  }
}

std::string filter_task(const std::string& jsonl, const std::string& task) {
  if (task.empty()) return jsonl;
  std::string out;
  std::size_t n = 0;
  for (const auto& line : split_lines(jsonl)) {
    ++n;
    if (blank(line)) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw CliError(kExitInput, "line " + std::to_string(n) + ": " + e.what());
    }
    if (row.value("kind", std::string()) == task) out += line + "\n";
  }
  return out;
}

void write_manifest(const RunFlags& f, const rei_generation_config& cfg,
                    const std::string& command) {
  if (f.manifest.empty()) return;
  nlohmann::ordered_json m;
  m["command"] = command;
  m["task"] = f.task.empty() ? nlohmann::ordered_json(nullptr)
                             : nlohmann::ordered_json(f.task);
  m["instances"] = f.instances;
  m["backend"] = f.backend;
  m["config"] = {{"max_tries", cfg.max_tries},
                 {"temperature", cfg.temperature},
                 {"top_p", cfg.top_p},
                 {"beam_size", cfg.beam_size},
                 {"beam_first", cfg.beam_first != 0},
                 {"label_base", cfg.label_base}};
  m["recursive"] = {{"strict_literal", f.strict_literal},
                    {"remainder_context", f.remainder_context}};
  m["seed"] = f.seed;
  m["jobs"] = f.jobs;
  m["output"] = f.output.empty() ? "-" : f.output;
  if (f.backend == "mock") m["mock_p"] = f.mock_p;
  if (f.backend == "scripted") m["transcript"] = f.transcript;
  if (f.backend == "oracle" && !f.hints.empty()) m["hints"] = f.hints;
  if (f.backend == "http") {
    m["demos"] = f.demos;
    m["shots"] = f.shots;
  }
  write_file(f.manifest, m.dump(2) + "\n");
}

int run_batch_command(const RunFlags& f, bool recursive,
                      const std::string& command) {
  const rei_generation_config cfg = make_config(f);
  BackendHandle backend;
  make_backend(f, backend);
  const std::string instances = filter_task(read_file(f.instances), f.task);
  rei_batch_options opts{};
  opts.recursive = recursive;
  opts.strict_literal = f.strict_literal;
  opts.remainder_context = f.remainder_context;
  opts.seed = f.seed;
  opts.jobs = f.jobs;
  CStr out;
  const rei_status s =
      rei_run_batch(instances.c_str(), backend.p, &cfg, &opts, out.out());
  if (s != REI_OK && s != REI_ERR_BACKEND_FAILURE) raise(s, f.instances);
  write_file(f.output, out.str());
  write_manifest(f, cfg, command);
  if (s == REI_ERR_BACKEND_FAILURE) raise(s);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"REI toolkit: parse, validate and generate from REI expressions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rei_version()));

  // parse
  std::string expr, expr_file;
  auto* parse = app.add_subcommand("parse", "Print the AST of an expression");
  parse->add_option("--expr", expr, "Expression text");
  parse->add_option("file", expr_file, "File holding the expression");

  // compile
  auto* compile = app.add_subcommand("compile", "Print the compiled pattern");
  compile->add_option("--expr", expr, "Expression text");
  compile->add_option("file", expr_file, "File holding the expression");

  // validate
  std::string candidate;
  bool zero_based_validate = false;
  auto* validate =
      app.add_subcommand("validate", "Check a candidate against an expression");
  validate->add_option("--expr", expr, "Expression text");
  validate->add_option("file", expr_file, "File holding the expression");
  validate->add_option("--candidate", candidate, "Candidate output")->required();
  validate->add_flag("--zero-based-labels", zero_based_validate,
                     "Word labels start at _0");

  // convert
  std::string convert_task, convert_in, convert_out, convert_demos;
  auto* convert =
      app.add_subcommand("convert", "Convert raw dataset rows to instances");
  convert->add_option("--task", convert_task, "Task kind")->required();
  convert->add_option("input", convert_in, "Raw row JSONL ('-' for stdin)")
      ->required();
  convert->add_option("-o,--output", convert_out, "Instance JSONL");
  convert->add_option("--demos-output", convert_demos,
                      "Also write demonstrations built from the references");

  // prompt
  std::string prompt_demos;
  std::size_t prompt_shots = 8;
  auto* prompt = app.add_subcommand("prompt", "Build a few-shot prompt");
  prompt->add_option("--expr", expr, "Query expression text");
  prompt->add_option("file", expr_file, "File holding the query expression");
  prompt->add_option("--demos", prompt_demos, "Demonstration pool JSONL")
      ->required();
  prompt->add_option("--shots", prompt_shots, "Number of demonstrations");

  // generate / decode-recursive
  RunFlags gen_flags;
  auto* generate = app.add_subcommand(
      "generate", "Generate with rejection sampling over an instance file");
  add_run_flags(generate, gen_flags);

  RunFlags rec_flags;
  auto* decode = app.add_subcommand(
      "decode-recursive", "Generate with recursive decoding of options");
  add_run_flags(decode, rec_flags);
  decode->add_flag("--strict-literal-alg1", rec_flags.strict_literal,
                   "Generate the remainder in one pass instead of recursing");
  decode->add_flag("--remainder-context", rec_flags.remainder_context,
                   "Prepend the chosen prefix to the remainder's context");

  // eval
  std::string eval_in, eval_report;
  std::uint32_t eval_k = 0;
  auto* eval = app.add_subcommand("eval", "Summarize output records");
  eval->add_option("outputs", eval_in, "Output JSONL ('-' for stdin)")
      ->required();
  eval->add_option("--max-tries", eval_k, "k the run used (reported only)");
  eval->add_option("--report", eval_report, "Write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*parse) {
      DocHandle doc;
      parse_doc(expression_text(expr, expr_file), doc);
      CStr json, sig;
      check(rei_document_to_json(doc.p, json.out()));
      check(rei_document_signature(doc.p, sig.out()));
      nlohmann::ordered_json j = nlohmann::ordered_json::parse(json.str());
      j["signature"] = sig.str();
      j["extended"] = rei_document_is_extended(doc.p) != 0;
      std::cout << j.dump(2) << "\n";
    } else if (*compile) {
      DocHandle doc;
      parse_doc(expression_text(expr, expr_file), doc);
      rei_pattern* pat = nullptr;
      check(rei_pattern_compile(doc.p, &pat));
      nlohmann::ordered_json j;
      j["pattern"] = rei_pattern_source(pat);
      const std::int64_t words = rei_pattern_required_words(pat);
      j["required_words"] =
          words < 0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(words);
      rei_pattern_free(pat);
      std::cout << j.dump(2) << "\n";
    } else if (*validate) {
      DocHandle doc;
      parse_doc(expression_text(expr, expr_file), doc);
      CStr realization;
      check(rei_extract_realization(doc.p, candidate.data(), candidate.size(),
                                    zero_based_validate ? 0 : 1, 0,
                                    realization.out()));
      const std::string r = realization.str();
      rei_validation v{};
      check(rei_validate(doc.p, r.data(), r.size(), &v));
      nlohmann::ordered_json j;
      j["realization"] = r;
      j["regex_ok"] = v.regex_ok != 0;
      j["length_ok"] = v.length_ok != 0;
      j["word_count"] = v.word_count;
      j["verdict"] = v.verdict != 0;
      std::cout << j.dump(2) << "\n";
    } else if (*convert) {
      std::string out, demos;
      std::size_t n = 0, skipped = 0;
      for (const auto& line : split_lines(read_file(convert_in))) {
        ++n;
        if (blank(line)) continue;
        std::string where = "line " + std::to_string(n);
        try {
          const auto row = nlohmann::json::parse(line);
          if (row.contains("id") && row["id"].is_string())
            where += " (id '" + row["id"].get<std::string>() + "')";
        } catch (const nlohmann::json::exception&) {
        }
        CStr inst;
        const rei_status st =
            rei_convert_row(convert_task.c_str(), line.c_str(), inst.out());
        if (st == REI_ERR_CONCEPT_NOT_FOUND) {
          std::cerr << "rei: warning: " << where << ": skipped: "
                    << rei_last_error_message() << "\n";
          ++skipped;
          continue;
        }
        check(st, where);
        out += inst.str() + "\n";
        if (!convert_demos.empty()) {
          CStr demo;
          check(rei_instance_demonstration(inst.str().c_str(), demo.out()),
                where);
          demos += demo.str() + "\n";
        }
      }
      write_file(convert_out, out);
      if (!convert_demos.empty()) write_file(convert_demos, demos);
      if (skipped)
        std::cerr << "rei: " << skipped << " row(s) skipped\n";
    } else if (*prompt) {
      DocHandle doc;
      parse_doc(expression_text(expr, expr_file), doc);
      CStr text;
      check(rei_build_fewshot_prompt(doc.p, read_file(prompt_demos).c_str(),
                                     prompt_shots, text.out()));
      std::cout << text.str() << "\n";
    } else if (*generate) {
      return run_batch_command(gen_flags, false, "generate");
    } else if (*decode) {
      return run_batch_command(rec_flags, true, "decode-recursive");
    } else if (*eval) {
      CStr report, table;
      check(rei_evaluate(read_file(eval_in).c_str(), eval_k, report.out(),
                         table.out()),
            eval_in);
      if (!eval_report.empty()) write_file(eval_report, report.str() + "\n");
      std::cout << table.str();
    }
  } catch (const CliError& e) {
    std::cerr << "rei: " << e.what() << "\n";
    return e.exit_code;
  }
  return kExitOk;
}
