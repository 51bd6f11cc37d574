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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rei/engine.hpp"
#include "rei/prompt.hpp"

namespace rei {

struct ApiConfig {
  // scheme://host[:port]; https needs a build with OpenSSL.
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/completions";
  std::string model_name = "gpt-3.5-turbo-instruct";
  // Name of the environment variable holding the bearer token.
  std::string auth_token_env = "OPENAI_API_KEY";
  double request_timeout_s = 60.0;
  // Extra attempts after a 429/5xx/transport error. Independent of k.
  std::size_t transport_retries = 2;
  double backoff_initial_s = 0.5;
  double tokens_per_word = 3.0;
  std::size_t max_tokens_cap = 256;
  std::size_t max_in_flight = 4;
};

// max_tokens for a request: length * tokens_per_word when the expression
// has a length constraint, else the cap.
std::size_t max_tokens_for(std::optional<std::size_t> length,
                           const ApiConfig& api);

// Request body, byte-stable: model, prompt, max_tokens, temperature, top_p,
// stop (in that order).
std::string completion_request_body(std::string_view prompt,
                                    const GenerationConfig& cfg,
                                    const ApiConfig& api,
                                    std::size_t max_tokens);

struct Completion {
  std::string text;
  std::string finish_reason;
};

// One completion, retried on 429/5xx/transport errors with exponential
// backoff. Throws BackendFailure with kAuthMissing (before any request),
// kHttpError or kTimeout.
Completion complete_prompt(std::string_view prompt, const GenerationConfig& cfg,
                           const ApiConfig& api,
                           std::optional<std::size_t> length = std::nullopt);

// Few-shot REI prompting against a completion endpoint.
class HttpBackend : public GeneratorBackend {
 public:
  HttpBackend(ApiConfig api, std::vector<Demonstration> demos,
              std::size_t shots = kDefaultShots);
  ~HttpBackend() override;

  BackendCapabilities capabilities() const override { return {false, true}; }
  std::string produce(const GenerationRequest& request) override;

 private:
  struct Gate;
  ApiConfig api_;
  std::vector<Demonstration> demos_;
  std::size_t shots_;
  std::unique_ptr<Gate> gate_;
};

}  // namespace rei
