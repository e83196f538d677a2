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

#include "arahope/protocol.hpp"

#include <algorithm>

#include "arahope/error.hpp"

namespace arahope {

std::string response_to_string(const Response& r) {
  if (const auto* a = std::get_if<Answer>(&r)) return *a == Answer::Yes ? "yes" : "no";
  return std::to_string(std::get<Severity>(r).level());
}

std::optional<Response> parse_response(std::string_view text) {
  if (text == "yes") return Response(Answer::Yes);
  if (text == "no") return Response(Answer::No);
  if (text.size() == 1 && text[0] >= '0' && text[0] <= '2') {
    return Response(*Severity::from_level(text[0] - '0'));
  }
  return std::nullopt;
}

bool ProtocolState::operator==(const ProtocolState& other) const {
  return *tree_ == *other.tree_ && segment_id_ == other.segment_id_ &&
         system_id_ == other.system_id_ && annotator_id_ == other.annotator_id_ &&
         cursor_ == other.cursor_ && partial_ == other.partial_ && trail_ == other.trail_ &&
         skipped_ == other.skipped_ && pending_ == other.pending_;
}

// Moves the cursor forward from `target` to the next node that needs an
// answer, entering sequences, resuming enclosing sequences after leaves and
// skipping guarded questions whose guard fires.
class Walker {
 public:
  static void settle(ProtocolState& state, std::string target) {
    const DecisionTree& tree = *state.tree_;
    while (true) {
      if (target == kEndOfBranch) {
        bool resumed = false;
        while (!state.pending_.empty()) {
          auto& frame = state.pending_.back();
          const auto& children = tree.node(frame.sequence_id).children;
          if (frame.next_child < children.size()) {
            target = children[frame.next_child++];
            resumed = true;
            break;
          }
          state.pending_.pop_back();
        }
        if (!resumed) {
          state.cursor_.reset();
          return;
        }
        continue;
      }
      const Node& node = tree.node(target);
      if (node.kind == NodeKind::Sequence) {
        state.pending_.push_back({node.id, 0});
        target = std::string(kEndOfBranch);
        continue;
      }
      if (node.kind == NodeKind::Question && node.guard == Guard::NoMeaningTransferError &&
          state.partial_.has_meaning_transfer_error()) {
        state.skipped_.push_back(node.id);
        target = node.no_branch;
        continue;
      }
      state.cursor_ = node.id;
      return;
    }
  }
};

ProtocolState start_session(const DecisionTree& tree, const Segment& segment,
                            const SystemOutput& output, std::string annotator_id) {
  if (output.segment_id != segment.id) {
    throw Error(ErrorCode::MismatchedSegment,
                "output belongs to segment '" + output.segment_id + "', not '" + segment.id + "'",
                {{"segment_id", segment.id}, {"output_segment_id", output.segment_id}});
  }
  ProtocolState state;
  state.tree_ = std::make_shared<const DecisionTree>(tree);
  state.segment_id_ = segment.id;
  state.system_id_ = output.system_id;
  state.annotator_id_ = std::move(annotator_id);
  Walker::settle(state, tree.root());
  return state;
}

ProtocolState answer(const ProtocolState& state, const Response& response) {
  if (state.done()) throw Error(ErrorCode::SessionComplete, "the walk is already complete");
  const Node& node = state.tree().node(*state.cursor_);
  ProtocolState next = state;
  std::string target;
  if (node.kind == NodeKind::Question) {
    const auto* a = std::get_if<Answer>(&response);
    if (!a) {
      throw Error(ErrorCode::WrongResponseKind,
                  "node '" + node.id + "' is a yes/no question, got a severity",
                  {{"node_id", node.id}});
    }
    target = *a == Answer::Yes ? node.yes_branch : node.no_branch;
  } else {
    const auto* s = std::get_if<Severity>(&response);
    if (!s || !s->is_error()) {
      throw Error(ErrorCode::WrongResponseKind,
                  "node '" + node.id + "' asks for severity 1 (minor) or 2 (major)",
                  {{"node_id", node.id}});
    }
    // One score per category: repeated hits keep the most severe.
    next.partial_.set(*node.category, std::max(next.partial_[*node.category], *s));
    target = std::string(kEndOfBranch);
  }
  next.trail_.push_back({node.id, response});
  Walker::settle(next, std::move(target));
  return next;
}

ProtocolState replay(const DecisionTree& tree, const Segment& segment, const SystemOutput& output,
                     std::string annotator_id, std::span<const TrailEntry> trail) {
  ProtocolState state = start_session(tree, segment, output, std::move(annotator_id));
  for (const auto& entry : trail) {
    if (state.cursor() != entry.node_id) {
      throw Error(ErrorCode::WrongResponseKind,
                  "trail expects node '" + entry.node_id + "' but the walk is at '" +
                      state.cursor().value_or("done") + "'",
                  {{"node_id", entry.node_id}});
    }
    state = answer(state, entry.response);
  }
  return state;
}

Annotation finalize(const ProtocolState& state, std::int64_t revision) {
  if (!state.done()) {
    throw Error(ErrorCode::SessionIncomplete,
                "the walk is still waiting at node '" + *state.cursor() + "'",
                {{"node_id", *state.cursor()}});
  }
  Annotation a;
  a.annotator_id = state.annotator_id();
  a.segment_id = state.segment_id();
  a.system_id = state.system_id();
  a.severities = state.partial();
  a.adp_applicable = !state.partial().has_meaning_transfer_error();
  a.revision = revision;
  return a;
}

std::vector<Response> allowed_responses(const ProtocolState& state) {
  if (state.done()) return {};
  const Node& node = state.tree().node(*state.cursor());
  if (node.kind == NodeKind::Question) return {Answer::Yes, Answer::No};
  return {Severity::minor(), Severity::major()};
}

nlohmann::json trail_to_json(std::span<const TrailEntry> trail) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : trail) {
    out.push_back({{"node", e.node_id}, {"response", response_to_string(e.response)}});
  }
  return out;
}

std::vector<TrailEntry> trail_from_json(const nlohmann::json& doc) {
  std::vector<TrailEntry> trail;
  if (!doc.is_array()) throw Error(ErrorCode::BadRequest, "trail must be an array");
  for (const auto& j : doc) {
    if (!j.is_object() || !j.contains("node") || !j.contains("response") ||
        !j["node"].is_string() || !j["response"].is_string()) {
      throw Error(ErrorCode::BadRequest, "trail entries need string fields node and response");
    }
    auto r = parse_response(j["response"].get<std::string>());
    if (!r) throw Error(ErrorCode::BadRequest, "bad trail response");
    trail.push_back({j["node"].get<std::string>(), *r});
  }
  return trail;
}

nlohmann::json state_to_json(const ProtocolState& state) {
  nlohmann::json partial = nlohmann::json::object();
  for (ErrorCategory c : kCategories) partial[std::string(to_string(c))] = state.partial()[c].level();
  nlohmann::json out = {
      {"segment_id", state.segment_id()},
      {"system_id", state.system_id()},
      {"annotator_id", state.annotator_id()},
      {"done", state.done()},
      {"partial", partial},
      {"trail", trail_to_json(state.trail())},
      {"skipped", state.skipped()},
  };
  if (state.done()) {
    out["cursor"] = nullptr;
  } else {
    const Node& node = state.tree().node(*state.cursor());
    nlohmann::json cursor = {{"node", node.id}, {"text", node.text}};
    cursor["kind"] = node.kind == NodeKind::Question ? "question" : "severity";
    if (node.category) cursor["category"] = std::string(to_string(*node.category));
    nlohmann::json allowed = nlohmann::json::array();
    for (const auto& r : allowed_responses(state)) allowed.push_back(response_to_string(r));
    cursor["allowed"] = allowed;
    out["cursor"] = cursor;
  }
  return out;
}

}  // namespace arahope
