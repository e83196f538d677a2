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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "arahope/model.hpp"

namespace arahope {

// Branch target naming the Terminal leaf: the current subtree is complete.
inline constexpr std::string_view kEndOfBranch = "end";

enum class NodeKind : std::uint8_t {
  Sequence,        // visits its children in order; carries a heading only
  Question,        // yes/no question with one branch per answer
  SeverityPrompt,  // leaf: ask for the severity of one category
};

enum class Guard : std::uint8_t {
  None,
  // Skip (answer "no" on the annotator's behalf) once PRN, TRM or GSMIS
  // has been recorded with a non-zero severity.
  NoMeaningTransferError,
};

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Question;
  std::string text;
  std::vector<std::string> children;  // Sequence
  std::string yes_branch;             // Question: node id or "end"
  std::string no_branch;              // Question: node id or "end"
  std::optional<ErrorCategory> category;  // SeverityPrompt
  Guard guard = Guard::None;

  bool operator==(const Node&) const = default;
};

// The annotation protocol as data. Construction validates the structure,
// so every DecisionTree value is a rooted tree whose walks cannot record
// ADP after a meaning-transfer error.
class DecisionTree {
 public:
  // Throws Error(InvalidTree) listing every structural problem.
  DecisionTree(std::string version, std::string description, std::string root,
               std::vector<Node> nodes);

  const std::string& version() const { return version_; }
  const std::string& description() const { return description_; }
  const std::string& root() const { return root_; }
  const std::vector<Node>& nodes() const { return nodes_; }

  // Throws Error(UnknownReference) for unknown ids.
  const Node& node(std::string_view id) const;
  bool contains(std::string_view id) const;

  bool operator==(const DecisionTree& other) const {
    return version_ == other.version_ && description_ == other.description_ &&
           root_ == other.root_ && nodes_ == other.nodes_;
  }

  // Problems that would make construction fail; empty when valid.
  static std::vector<std::string> structural_problems(const std::string& root,
                                                      const std::vector<Node>& nodes);

 private:
  std::string version_;
  std::string description_;
  std::string root_;
  std::vector<Node> nodes_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// The built-in tree: Fluency, then Meaning Transfer (PRN, TRM, GSMIS), then
// Adaptation guarded by NoMeaningTransferError. Question wording is
// editable and not canonical.
const DecisionTree& default_tree();

nlohmann::json tree_to_json(const DecisionTree& tree);
// Throws Error(InvalidTree) on malformed documents or invalid structure.
DecisionTree tree_from_json(const nlohmann::json& doc);

std::string serialize_tree(const DecisionTree& tree);
DecisionTree parse_tree(std::string_view text);
// Throws Error(IoError) when the file cannot be read.
DecisionTree load_tree_file(const std::filesystem::path& path);

}  // namespace arahope
