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

#include "rei/error.hpp"

namespace rei {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnbalancedTags: return "UnbalancedTags";
    case ErrorCode::kNonSequentialMaskIds: return "NonSequentialMaskIds";
    case ErrorCode::kNonSequentialSerials: return "NonSequentialSerials";
    case ErrorCode::kNonSequentialChoiceIds: return "NonSequentialChoiceIds";
    case ErrorCode::kDuplicateLengthLabel: return "DuplicateLengthLabel";
    case ErrorCode::kMisplacedLengthLabel: return "MisplacedLengthLabel";
    case ErrorCode::kNestedOptions: return "NestedOptions";
    case ErrorCode::kMalformedLabel: return "MalformedLabel";
    case ErrorCode::kAlreadyLabeled: return "AlreadyLabeled";
    case ErrorCode::kMissingExpressionSpan: return "MissingExpressionSpan";
    case ErrorCode::kInfeasibleLength: return "InfeasibleLength";
    case ErrorCode::kNotEnoughDemos: return "NotEnoughDemos";
    case ErrorCode::kUnterminatedCompletion: return "UnterminatedCompletion";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kConceptNotFound: return "ConceptNotFound";
    case ErrorCode::kEmptyEvalSet: return "EmptyEvalSet";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kBackendFailure: return "BackendFailure";
    case ErrorCode::kAuthMissing: return "AuthMissing";
    case ErrorCode::kHttpError: return "HttpError";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace {

std::string with_offset(ErrorCode code, const std::string& message,
                        std::optional<std::size_t> offset) {
  std::string out(error_code_name(code));
  if (offset) out += " at byte " + std::to_string(*offset);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message,
             std::optional<std::size_t> offset)
    : std::runtime_error(with_offset(code, message, offset)),
      code_(code),
      message_(std::move(message)),
      offset_(offset) {}

}  // namespace rei
