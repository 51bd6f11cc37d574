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

#include "rei/http_backend.hpp"

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "rei/error.hpp"

namespace rei {

namespace {

bool retryable(int status) { return status == 429 || status >= 500; }

void set_timeouts(httplib::Client& client, double seconds) {
  const auto whole = static_cast<time_t>(seconds);
  const auto micros =
      static_cast<time_t>((seconds - static_cast<double>(whole)) * 1e6);
  client.set_connection_timeout(whole, micros);
  client.set_read_timeout(whole, micros);
  client.set_write_timeout(whole, micros);
}

}  // namespace

std::size_t max_tokens_for(std::optional<std::size_t> length,
                           const ApiConfig& api) {
  if (!length) return api.max_tokens_cap;
  return static_cast<std::size_t>(
      std::ceil(static_cast<double>(*length) * api.tokens_per_word));
}

std::string completion_request_body(std::string_view prompt,
                                    const GenerationConfig& cfg,
                                    const ApiConfig& api,
                                    std::size_t max_tokens) {
  nlohmann::ordered_json body;
  body["model"] = api.model_name;
  body["prompt"] = std::string(prompt);
  body["max_tokens"] = max_tokens;
  body["temperature"] = cfg.temperature;
  body["top_p"] = cfg.top_p;
  body["stop"] = {std::string(kCompletionStop)};
  return body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

Completion complete_prompt(std::string_view prompt, const GenerationConfig& cfg,
                           const ApiConfig& api,
                           std::optional<std::size_t> length) {
  const char* token = std::getenv(api.auth_token_env.c_str());
  if (!token || !*token)
    throw BackendFailure("environment variable " + api.auth_token_env +
                             " is not set",
                         ErrorCode::kAuthMissing);

  const std::string body =
      completion_request_body(prompt, cfg, api, max_tokens_for(length, api));
  httplib::Client client(api.base_url);
  set_timeouts(client, api.request_timeout_s);
  client.set_bearer_token_auth(token);

  double delay = api.backoff_initial_s;
  for (std::size_t attempt = 0;; ++attempt) {
    const bool last = attempt >= api.transport_retries;
    auto res = client.Post(api.path, body, "application/json");
    if (!res) {
      const auto err = res.error();
      if (last) {
        if (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout)
          throw BackendFailure("request timed out", ErrorCode::kTimeout);
        throw BackendFailure("transport error: " + httplib::to_string(err),
                             ErrorCode::kHttpError);
      }
    } else if (res->status == 200) {
      try {
        auto j = nlohmann::json::parse(res->body);
        const auto& choice = j.at("choices").at(0);
        Completion c;
        c.text = choice.at("text").get<std::string>();
        if (choice.contains("finish_reason") && choice.at("finish_reason").is_string())
          c.finish_reason = choice.at("finish_reason").get<std::string>();
        return c;
      } catch (const nlohmann::json::exception& e) {
        throw BackendFailure(std::string("malformed completion response: ") +
                                 e.what(),
                             ErrorCode::kHttpError, res->status);
      }
    } else if (last || !retryable(res->status)) {
      throw BackendFailure("HTTP status " + std::to_string(res->status),
                           ErrorCode::kHttpError, res->status);
    }
    std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    delay *= 2.0;
  }
}

// Caps concurrent requests at max_in_flight.
struct HttpBackend::Gate {
  explicit Gate(std::size_t limit) : free(limit ? limit : 1) {}
  void acquire() {
    std::unique_lock<std::mutex> lock(mu);
    cv.wait(lock, [&] { return free > 0; });
    --free;
  }
  void release() {
    {
      std::lock_guard<std::mutex> lock(mu);
      ++free;
    }
    cv.notify_one();
  }
  std::mutex mu;
  std::condition_variable cv;
  std::size_t free;
};

HttpBackend::HttpBackend(ApiConfig api, std::vector<Demonstration> demos,
                         std::size_t shots)
    : api_(std::move(api)),
      demos_(std::move(demos)),
      shots_(shots),
      gate_(std::make_unique<Gate>(api_.max_in_flight)) {}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::produce(const GenerationRequest& request) {
  const Document query = parse_document(request.prompt);
  const std::string prompt = build_fewshot_prompt(query, demos_, shots_);
  const GenerationConfig cfg =
      request.config ? *request.config : GenerationConfig::api();

  gate_->acquire();
  Completion c;
  try {
    c = complete_prompt(prompt, cfg, api_, query.expr.length);
  } catch (...) {
    gate_->release();
    throw;
  }
  gate_->release();

  // The endpoint strips the stop sequence from the returned text.
  std::string text = std::move(c.text);
  if (c.finish_reason == "stop" && text.find(kCompletionStop) == std::string::npos)
    text += kCompletionStop;
  try {
    return parse_completion(text);
  } catch (const Error&) {
    // Truncated output; the engine's validation rejects it.
    return text;
  }
}

}  // namespace rei
