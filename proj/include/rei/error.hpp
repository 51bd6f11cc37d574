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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rei {

// Every failure the toolkit reports. The numeric values are part of the C
// API (see rei.h) and must stay stable.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kUnbalancedTags = 2,
  kNonSequentialMaskIds = 3,
  kNonSequentialSerials = 4,
  kNonSequentialChoiceIds = 5,
  kDuplicateLengthLabel = 6,
  kMisplacedLengthLabel = 7,
  kNestedOptions = 8,
  kMalformedLabel = 9,
  kAlreadyLabeled = 10,
  kMissingExpressionSpan = 11,
  kInfeasibleLength = 12,
  kNotEnoughDemos = 13,
  kUnterminatedCompletion = 14,
  kMissingField = 15,
  kConceptNotFound = 16,
  kEmptyEvalSet = 17,
  kLengthMismatch = 18,
  kBackendFailure = 19,
  kAuthMissing = 20,
  kHttpError = 21,
  kTimeout = 22,
  kIo = 23,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message,
        std::optional<std::size_t> offset = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  // Message without the code/offset decoration of what().
  const std::string& message() const noexcept { return message_; }
  // Byte offset into the offending input, when one applies.
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::optional<std::size_t> offset_;
};

// Transport or backend exception, as opposed to a constraint failure. The
// HTTP cause is carried in `code()`.
class BackendFailure : public Error {
 public:
  explicit BackendFailure(std::string message,
                          ErrorCode code = ErrorCode::kBackendFailure,
                          int http_status = 0)
      : Error(code, std::move(message)), http_status_(http_status) {}

  int http_status() const noexcept { return http_status_; }

 private:
  int http_status_;
};

}  // namespace rei
