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

#include "arahope/error.hpp"

namespace arahope {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSeverity: return "InvalidSeverity";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidAnnotation: return "InvalidAnnotation";
    case ErrorCode::UnknownReference: return "UnknownReference";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::DuplicateRevision: return "DuplicateRevision";
    case ErrorCode::StaleRevision: return "StaleRevision";
    case ErrorCode::InvalidTree: return "InvalidTree";
    case ErrorCode::MismatchedSegment: return "MismatchedSegment";
    case ErrorCode::WrongResponseKind: return "WrongResponseKind";
    case ErrorCode::SessionComplete: return "SessionComplete";
    case ErrorCode::SessionIncomplete: return "SessionIncomplete";
    case ErrorCode::NoAnnotations: return "NoAnnotations";
    case ErrorCode::MissingAnnotations: return "MissingAnnotations";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::NeedExactlyTwoAnnotators: return "NeedExactlyTwoAnnotators";
    case ErrorCode::NoSharedItems: return "NoSharedItems";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::BadSeverityCell: return "BadSeverityCell";
    case ErrorCode::GatingViolation: return "GatingViolation";
    case ErrorCode::EncodingError: return "EncodingError";
    case ErrorCode::UnknownSystem: return "UnknownSystem";
    case ErrorCode::UnknownAnnotator: return "UnknownAnnotator";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Conflict: return "Conflict";
    case ErrorCode::BadRequest: return "BadRequest";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, nlohmann::json context)
    : std::runtime_error(message), code_(code), context_(std::move(context)) {}

nlohmann::json Error::to_json() const {
  nlohmann::json out = nlohmann::json::object();
  out["error"] = std::string(to_string(code_));
  out["message"] = what();
  if (context_.is_object()) {
    for (auto it = context_.begin(); it != context_.end(); ++it) out[it.key()] = it.value();
  }
  return out;
}

}  // namespace arahope
