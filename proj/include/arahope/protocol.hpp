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

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "arahope/model.hpp"
#include "arahope/tree.hpp"

namespace arahope {

enum class Answer : std::uint8_t { No, Yes };

// Yes/No for question nodes, a Severity for severity prompts.
using Response = std::variant<Answer, Severity>;

std::string response_to_string(const Response& r);  // "yes", "no", "1", "2"
std::optional<Response> parse_response(std::string_view text);

struct TrailEntry {
  std::string node_id;
  Response response;

  bool operator==(const TrailEntry&) const = default;
};

// One annotator's walk through the tree for one (segment, system) item.
// States are values; answer() returns a new state.
class ProtocolState {
 public:
  const std::string& segment_id() const { return segment_id_; }
  const std::string& system_id() const { return system_id_; }
  const std::string& annotator_id() const { return annotator_id_; }
  const DecisionTree& tree() const { return *tree_; }

  bool done() const { return !cursor_.has_value(); }
  // Node awaiting a response; nullopt when the walk is complete.
  const std::optional<std::string>& cursor() const { return cursor_; }
  const SeverityMap& partial() const { return partial_; }
  const std::vector<TrailEntry>& trail() const { return trail_; }
  // Guarded questions the walk skipped, in order.
  const std::vector<std::string>& skipped() const { return skipped_; }

  bool operator==(const ProtocolState& other) const;

 private:
  friend ProtocolState start_session(const DecisionTree&, const Segment&, const SystemOutput&,
                                     std::string);
  friend ProtocolState answer(const ProtocolState&, const Response&);
  friend class Walker;

  ProtocolState() = default;

  struct Frame {
    std::string sequence_id;
    std::size_t next_child = 0;
    bool operator==(const Frame&) const = default;
  };

  std::shared_ptr<const DecisionTree> tree_;
  std::string segment_id_;
  std::string system_id_;
  std::string annotator_id_;
  std::optional<std::string> cursor_;
  SeverityMap partial_;
  std::vector<TrailEntry> trail_;
  std::vector<std::string> skipped_;
  std::vector<Frame> pending_;
};

// Throws Error(MismatchedSegment) when the output belongs to another segment.
ProtocolState start_session(const DecisionTree& tree, const Segment& segment,
                            const SystemOutput& output, std::string annotator_id);

// Throws WrongResponseKind (Yes/No at a prompt, a severity at a question,
// severity 0 at a prompt) or SessionComplete.
ProtocolState answer(const ProtocolState& state, const Response& response);

// Re-applies a recorded trail from a fresh session.
ProtocolState replay(const DecisionTree& tree, const Segment& segment, const SystemOutput& output,
                     std::string annotator_id, std::span<const TrailEntry> trail);

// Throws Error(SessionIncomplete) before the walk is done.
Annotation finalize(const ProtocolState& state, std::int64_t revision = 1);

// Valid responses at the current cursor (empty when done).
std::vector<Response> allowed_responses(const ProtocolState& state);

nlohmann::json trail_to_json(std::span<const TrailEntry> trail);
std::vector<TrailEntry> trail_from_json(const nlohmann::json& doc);

// Cursor, question text, partial severities and trail for clients.
nlohmann::json state_to_json(const ProtocolState& state);

}  // namespace arahope
