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

#include "rei/engine.hpp"

#include <atomic>
#include <algorithm>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "rei/error.hpp"
#include "rei/text.hpp"

namespace rei {

namespace {

constexpr std::string_view kFiller[] = {
    "the",  "small", "group", "went",  "out",  "together", "after", "that",
    "one",  "day",   "with",  "some",  "good", "friends",  "and",   "then",
};

enum class PieceKind { kMask, kFixed, kLexicon };

struct Piece {
  PieceKind kind;
  std::vector<std::string> words;
};

// Mask and fixed pieces along the path that resolves every options group to
// `choice` (falling back to 0 when out of range).
void flatten(const std::vector<Node>& nodes, std::size_t choice,
             std::vector<Piece>& out) {
  for (const Node& node : nodes) {
    if (std::holds_alternative<Mask>(node)) {
      out.push_back({PieceKind::kMask, {}});
    } else if (const auto* l = std::get_if<Literal>(&node)) {
      Piece p{PieceKind::kFixed, {}};
      for (std::string_view w : text::split_words(l->text)) p.words.emplace_back(w);
      out.push_back(std::move(p));
    } else if (const auto* x = std::get_if<Lexicon>(&node)) {
      out.push_back({PieceKind::kLexicon, {x->surface}});
    } else {
      const auto& group = std::get<Options>(node);
      const std::size_t pick = choice < group.choices.size() ? choice : 0;
      flatten(group.choices[pick].body, choice, out);
    }
  }
}

class FillerStream {
 public:
  explicit FillerStream(const OracleHint* hint) : hint_(hint) {}
  std::string next() {
    if (hint_ && used_ < hint_->infill_words.size())
      return hint_->infill_words[used_++];
    return std::string(kFiller[cycle_++ % std::size(kFiller)]);
  }

 private:
  const OracleHint* hint_;
  std::size_t used_ = 0;
  std::size_t cycle_ = 0;
};

std::vector<Piece> oracle_pieces(const Document& doc, const OracleHint* hint) {
  std::vector<Piece> pieces;
  flatten(doc.expr.items, hint && hint->choice ? *hint->choice : 0, pieces);
  std::size_t fixed = 0;
  std::size_t masks = 0;
  for (const Piece& p : pieces) {
    if (p.kind == PieceKind::kMask)
      ++masks;
    else
      fixed += p.words.size();
  }
  std::vector<std::size_t> budget(masks, 1);
  if (const auto& n = doc.expr.length) {
    if (*n < fixed)
      throw Error(ErrorCode::kInfeasibleLength,
                  "length " + std::to_string(*n) + " is below the " +
                      std::to_string(fixed) + " fixed words");
    const std::size_t spare = *n - fixed;
    if (spare > 0 && masks == 0)
      throw Error(ErrorCode::kInfeasibleLength,
                  "no mask can take the " + std::to_string(spare) +
                      " spare words");
    for (std::size_t j = 0; j < masks; ++j)
      budget[j] = spare / masks + (j < spare % masks ? 1 : 0);
  }
  FillerStream filler(hint);
  std::size_t j = 0;
  for (Piece& p : pieces) {
    if (p.kind != PieceKind::kMask) continue;
    for (std::size_t w = 0; w < budget[j]; ++w) p.words.push_back(filler.next());
    ++j;
  }
  return pieces;
}

std::string join_pieces(const std::vector<Piece>& pieces) {
  std::vector<std::string> words;
  for (const Piece& p : pieces)
    for (const std::string& w : p.words) words.push_back(w);
  return text::join(words, " ");
}

std::mt19937_64 mock_rng(std::uint64_t seed, std::size_t call_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(call_index)};
  return std::mt19937_64(seq);
}

double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace

void GenerationConfig::check() const {
  if (max_tries == 0)
    throw Error(ErrorCode::kInvalidArgument, "max_tries must be positive");
  if (!(temperature >= 0.0))
    throw Error(ErrorCode::kInvalidArgument, "temperature must be >= 0");
  if (!(top_p > 0.0 && top_p <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "top_p must lie in (0, 1]");
  if (beam_size == 0)
    throw Error(ErrorCode::kInvalidArgument, "beam_size must be positive");
}

std::uint64_t stable_hash(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

TrialLog generate_with_rejection(const Document& doc, GeneratorBackend& backend,
                                 const GenerationConfig& cfg,
                                 GenerationContext& ctx) {
  cfg.check();
  const CompiledPattern pattern = compile(doc.expr);
  const std::string prompt = render_document(doc);
  const bool beam = cfg.beam_first && backend.capabilities().supports_beam;

  TrialLog log;
  for (std::size_t attempt = 0; attempt < cfg.max_tries; ++attempt) {
    GenerationRequest req;
    req.prompt = prompt;
    req.config = &cfg;
    req.instance_id = ctx.instance_id;
    req.seed = ctx.seed;
    req.call_index = ctx.calls++;
    req.attempt = attempt;
    req.use_beam = beam && attempt == 0;

    Attempt a;
    try {
      a.candidate = backend.produce(req);
    } catch (const BackendFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw BackendFailure(e.what());
    }
    try {
      a.realization = extract_realization(a.candidate, doc.expr,
                                          ExtractMode::kAuto, cfg.label_base);
      a.report = validate_output(pattern, a.realization);
    } catch (const Error&) {
      a.report = ValidationReport{false, false, 0, false};
    }
    const bool ok = a.report.verdict;
    log.attempts.push_back(std::move(a));
    if (ok) {
      log.accepted = log.attempts.back().realization;
      break;
    }
  }
  return log;
}

std::string oracle_fill(const Document& doc, const OracleHint* hint) {
  return join_pieces(oracle_pieces(doc, hint));
}

double mock_uniform(std::uint64_t seed, std::size_t call_index) {
  auto rng = mock_rng(seed, call_index);
  return to_unit(rng());
}

std::string mock_generate(const Document& doc, double p_valid,
                          std::uint64_t seed, std::size_t call_index) {
  auto rng = mock_rng(seed, call_index);
  std::vector<Piece> pieces = oracle_pieces(doc, nullptr);
  if (to_unit(rng()) < p_valid) return join_pieces(pieces);

  const CompiledPattern pattern = compile(doc.expr);
  auto invalid = [&](const std::vector<Piece>& ps) {
    return !validate_output(pattern, join_pieces(ps)).verdict;
  };

  std::vector<std::size_t> lexicon_at;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    if (pieces[i].kind == PieceKind::kLexicon) lexicon_at.push_back(i);

  auto drop_lexicon = [&]() -> std::optional<std::vector<Piece>> {
    if (lexicon_at.empty()) return std::nullopt;
    auto ps = pieces;
    ps[lexicon_at[rng() % lexicon_at.size()]].words.clear();
    return ps;
  };
  auto add_word = [&]() -> std::optional<std::vector<Piece>> {
    if (!doc.expr.length) return std::nullopt;
    auto ps = pieces;
    auto it = std::find_if(ps.begin(), ps.end(), [](const Piece& p) {
      return p.kind == PieceKind::kMask;
    });
    if (it == ps.end()) it = std::prev(ps.end());
    it->words.emplace_back("extra");
    return ps;
  };
  auto drop_fixed = [&]() -> std::optional<std::vector<Piece>> {
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (pieces[i].kind == PieceKind::kFixed && !pieces[i].words.empty()) {
        auto ps = pieces;
        ps[i].words.erase(ps[i].words.begin());
        return ps;
      }
    return std::nullopt;
  };

  const bool lexicon_first = lexicon_at.empty() || !doc.expr.length ||
                             (rng() & 1) == 0;
  auto first = lexicon_first ? drop_lexicon() : add_word();
  if (first && invalid(*first)) return join_pieces(*first);
  auto second = lexicon_first ? add_word() : drop_lexicon();
  if (second && invalid(*second)) return join_pieces(*second);
  if (auto third = drop_fixed(); third && invalid(*third))
    return join_pieces(*third);
  // Nothing to corrupt, e.g. a bare mask.
  return join_pieces(pieces);
}

std::string OracleBackend::produce(const GenerationRequest& request) {
  const Document doc = parse_document(request.prompt);
  const OracleHint* hint = nullptr;
  if (auto it = hints_.find(std::string(request.instance_id)); it != hints_.end())
    hint = &it->second;
  const LabelBase base =
      request.config ? request.config->label_base : LabelBase::kOne;
  return format_model_output(oracle_fill(doc, hint), doc.expr, base);
}

MockBackend::MockBackend(double p_valid, bool supports_beam)
    : p_valid_(p_valid), supports_beam_(supports_beam) {
  if (!(p_valid >= 0.0 && p_valid <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "p_valid must lie in [0, 1]");
}

std::string MockBackend::produce(const GenerationRequest& request) {
  const Document doc = parse_document(request.prompt);
  const LabelBase base =
      request.config ? request.config->label_base : LabelBase::kOne;
  return format_model_output(
      mock_generate(doc, p_valid_, request.seed, request.call_index), doc.expr,
      base);
}

ScriptedBackend ScriptedBackend::from_jsonl(std::string_view jsonl) {
  std::map<std::string, std::vector<std::string>> transcript;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = text::trim(jsonl.substr(start, end - start));
    ++line_no;
    if (!line.empty()) {
      try {
        auto j = nlohmann::json::parse(line);
        transcript[j.at("id").get<std::string>()] =
            j.at("candidates").get<std::vector<std::string>>();
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kInvalidArgument,
                    "transcript line " + std::to_string(line_no) + ": " +
                        e.what(),
                    start);
      }
    }
    start = end + 1;
  }
  return ScriptedBackend(std::move(transcript));
}

std::string ScriptedBackend::produce(const GenerationRequest& request) {
  auto it = transcript_.find(std::string(request.instance_id));
  if (it == transcript_.end())
    throw BackendFailure("no transcript for instance '" +
                         std::string(request.instance_id) + "'");
  if (request.call_index >= it->second.size())
    throw BackendFailure("transcript for '" + std::string(request.instance_id) +
                         "' has no candidate #" +
                         std::to_string(request.call_index));
  return it->second[request.call_index];
}

namespace {

class Decoder {
 public:
  Decoder(GeneratorBackend& backend, const GenerationConfig& cfg,
          GenerationContext& ctx, const RecursiveOptions& options,
          DecodeResult& result)
      : backend_(backend), cfg_(cfg), ctx_(ctx), opt_(options), result_(result) {}

  // Realized text for `doc`, or nullopt after recording the failed step.
  std::optional<std::string> decode(const Document& doc,
                                    const std::string& path) {
    if (!contains_nonterminal(doc.expr)) return fixed_text(doc.expr.items);
    if (options_count(doc.expr) == 0) return generate(doc, join(path, "generate"));

    const auto& items = doc.expr.items;
    std::size_t g = 0;
    while (!std::holds_alternative<Options>(items[g])) ++g;
    const auto& group = std::get<Options>(items[g]);
    const std::vector<Node> before(items.begin(), items.begin() + g);
    const std::vector<Node> after(items.begin() + g + 1, items.end());

    std::vector<std::string> realized;
    for (const Choice& choice : group.choices) {
      Document sub{doc.prefix, {}, doc.suffix};
      sub.expr.items = before;
      sub.expr.items.insert(sub.expr.items.end(), choice.body.begin(),
                            choice.body.end());
      // A length constraint only applies when the choice ends the output.
      if (after.empty()) sub.expr.length = doc.expr.length;
      sub.expr = canonicalize(std::move(sub.expr));
      auto text = decode(sub, join(path, "choice" + std::to_string(choice.id)));
      if (!text) return std::nullopt;
      realized.push_back(std::move(*text));
    }

    Document select{doc.prefix, {}, doc.suffix};
    Options alternatives;
    for (std::size_t i = 0; i < realized.size(); ++i) {
      if (realized[i].empty())
        throw Error(ErrorCode::kInvalidArgument,
                    "choice " + std::to_string(i) +
                        " realized as empty text and cannot be selected");
      alternatives.choices.push_back(Choice{i, {Literal{realized[i]}}});
    }
    select.expr.items.emplace_back(std::move(alternatives));
    select.expr = canonicalize(std::move(select.expr));
    auto best = generate(select, join(path, "select"));
    if (!best) return std::nullopt;
    std::optional<std::size_t> chosen;
    const std::string norm = text::normalize_whitespace(*best);
    for (std::size_t i = 0; i < realized.size() && !chosen; ++i)
      if (text::normalize_whitespace(realized[i]) == norm) chosen = i;
    result_.choices.push_back(chosen);

    std::string rest;
    if (!after.empty()) {
      Document remainder{doc.prefix, {}, doc.suffix};
      if (opt_.remainder_context) remainder.prefix += *best + " ";
      remainder.expr.items = after;
      remainder.expr = canonicalize(std::move(remainder.expr));
      const std::string rpath = path.empty() ? "remainder" : path + "/remainder";
      std::optional<std::string> r;
      if (opt_.strict_literal && contains_nonterminal(remainder.expr))
        r = generate(remainder, rpath + "/generate");
      else
        r = decode(remainder, rpath);
      if (!r) return std::nullopt;
      rest = std::move(*r);
    }
    if (rest.empty()) return best;
    if (best->empty()) return rest;
    return *best + " " + rest;
  }

 private:
  static std::string join(const std::string& path, const std::string& leaf) {
    return path.empty() ? leaf : path + "/" + leaf;
  }

  std::optional<std::string> generate(const Document& doc,
                                      const std::string& step) {
    TrialLog log = generate_with_rejection(doc, backend_, cfg_, ctx_);
    std::optional<std::string> out = log.accepted;
    result_.steps.push_back({step, std::move(log)});
    if (!out) result_.failed_step = step;
    return out;
  }

  GeneratorBackend& backend_;
  const GenerationConfig& cfg_;
  GenerationContext& ctx_;
  const RecursiveOptions& opt_;
  DecodeResult& result_;
};

}  // namespace

DecodeResult recursive_decode(const Document& doc, GeneratorBackend& backend,
                              const GenerationConfig& cfg,
                              GenerationContext& ctx,
                              const RecursiveOptions& options) {
  DecodeResult result;
  Decoder decoder(backend, cfg, ctx, options, result);
  result.output = decoder.decode(doc, "");
  return result;
}

std::vector<BatchResult> run_batch(const std::vector<BatchItem>& items,
                                   GeneratorBackend& backend,
                                   const GenerationConfig& cfg,
                                   const BatchOptions& options) {
  cfg.check();
  std::unique_ptr<SerializedBackend> serialized;
  GeneratorBackend* target = &backend;
  if (!backend.capabilities().concurrent) {
    serialized = std::make_unique<SerializedBackend>(backend);
    target = serialized.get();
  }

  std::vector<BatchResult> results(items.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      const BatchItem& item = items[i];
      BatchResult& out = results[i];
      out.id = item.id;
      GenerationContext ctx{item.id, instance_seed(options.seed, item.id), 0};
      try {
        if (options.recursive) {
          out.result = recursive_decode(item.doc, *target, cfg, ctx,
                                        options.recursion);
        } else {
          TrialLog log = generate_with_rejection(item.doc, *target, cfg, ctx);
          out.result.output = log.accepted;
          if (!log.accepted) out.result.failed_step = "generate";
          out.result.steps.push_back({"generate", std::move(log)});
        }
      } catch (const std::exception& e) {
        out.result = DecodeResult{};
        out.backend_error = e.what();
      }
    }
  };

  const std::size_t jobs = std::max<std::size_t>(
      1, std::min(options.jobs, std::max<std::size_t>(items.size(), 1)));
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(work);
  }
  return results;
}

}  // namespace rei
