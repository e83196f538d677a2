// Copyright 2026 The arahope Authors
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

#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace arahope {

enum class ErrorCode {
  InvalidSeverity,
  InvalidConfig,
  InvalidAnnotation,
  UnknownReference,
  DuplicateId,
  DuplicateRevision,
  StaleRevision,
  InvalidTree,
  MismatchedSegment,
  WrongResponseKind,
  SessionComplete,
  SessionIncomplete,
  NoAnnotations,
  MissingAnnotations,
  LengthMismatch,
  LevelOutOfRange,
  EmptyMatrix,
  NeedExactlyTwoAnnotators,
  NoSharedItems,
  BadHeader,
  BadSeverityCell,
  GatingViolation,
  EncodingError,
  UnknownSystem,
  UnknownAnnotator,
  VersionMismatch,
  CorruptFile,
  IoError,
  NotFound,
  Conflict,
  BadRequest,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported as Error. context() carries
// machine-readable details (row numbers, uncovered segments, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        nlohmann::json context = nlohmann::json::object());

  ErrorCode code() const { return code_; }
  const nlohmann::json& context() const { return context_; }

  // {"error": "<code>", "message": "...", ...context}
  nlohmann::json to_json() const;

 private:
  ErrorCode code_;
  nlohmann::json context_;
};

}  // namespace arahope
