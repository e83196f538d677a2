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

#include "arahope/tree.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "arahope/error.hpp"

namespace arahope {

namespace {

constexpr std::string_view kTreeFormat = "arahope-tree";

bool is_end(std::string_view target) { return target == kEndOfBranch; }

std::string_view kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::Sequence: return "sequence";
    case NodeKind::Question: return "question";
    case NodeKind::SeverityPrompt: return "severity";
  }
  return "?";
}

std::optional<NodeKind> parse_kind(std::string_view text) {
  if (text == "sequence") return NodeKind::Sequence;
  if (text == "question") return NodeKind::Question;
  if (text == "severity") return NodeKind::SeverityPrompt;
  return std::nullopt;
}

constexpr std::string_view kGuardName = "no-meaning-transfer-error";

// Walks the tree in pre-order and checks reachability plus the gating
// layout: ADP prompts sit under a guarded question and after every
// meaning-transfer prompt.
struct StructureCheck {
  const std::map<std::string, const Node*, std::less<>>& by_id;
  std::vector<std::string>& problems;
  std::map<std::string, int, std::less<>> visits;
  bool seen_adp = false;

  void visit(const std::string& id, bool guarded, int depth) {
    if (is_end(id)) return;
    auto it = by_id.find(id);
    if (it == by_id.end()) return;  // reported as a dangling reference
    if (++visits[id] > 1) {
      problems.push_back("node '" + id + "' is reachable more than once");
      return;
    }
    if (depth > 256) {
      problems.push_back("tree deeper than 256 levels at node '" + id + "'");
      return;
    }
    const Node& node = *it->second;
    switch (node.kind) {
      case NodeKind::Sequence:
        for (const auto& child : node.children) visit(child, guarded, depth + 1);
        break;
      case NodeKind::Question: {
        bool inner = guarded || node.guard == Guard::NoMeaningTransferError;
        visit(node.yes_branch, inner, depth + 1);
        visit(node.no_branch, inner, depth + 1);
        break;
      }
      case NodeKind::SeverityPrompt:
        if (!node.category) break;
        if (*node.category == ErrorCategory::ADP) {
          seen_adp = true;
          if (!guarded) {
            problems.push_back("ADP prompt '" + id +
                               "' is not under a no-meaning-transfer-error guard");
          }
        } else if (is_meaning_transfer(*node.category) && seen_adp) {
          problems.push_back("meaning-transfer prompt '" + id + "' follows an ADP prompt");
        }
        break;
    }
  }
};

}  // namespace

std::vector<std::string> DecisionTree::structural_problems(const std::string& root,
                                                           const std::vector<Node>& nodes) {
  std::vector<std::string> problems;
  std::map<std::string, const Node*, std::less<>> by_id;
  for (const auto& node : nodes) {
    if (node.id.empty()) {
      problems.push_back("node with empty id");
      continue;
    }
    if (is_end(node.id)) {
      problems.push_back("node id 'end' is reserved for the terminal leaf");
      continue;
    }
    if (!by_id.emplace(node.id, &node).second) {
      problems.push_back("duplicate node id '" + node.id + "'");
    }
  }

  auto check_ref = [&](const Node& from, const std::string& target, std::string_view what) {
    if (target.empty()) {
      problems.push_back("node '" + from.id + "' has no " + std::string(what));
    } else if (!is_end(target) && !by_id.count(target)) {
      problems.push_back("node '" + from.id + "' " + std::string(what) + " references unknown node '" +
                         target + "'");
    }
  };

  for (const auto& node : nodes) {
    if (node.guard != Guard::None && node.kind != NodeKind::Question) {
      problems.push_back("guard on non-question node '" + node.id + "'");
    }
    switch (node.kind) {
      case NodeKind::Sequence:
        if (node.children.empty()) problems.push_back("sequence '" + node.id + "' has no children");
        for (const auto& child : node.children) check_ref(node, child, "child");
        break;
      case NodeKind::Question:
        check_ref(node, node.yes_branch, "yes branch");
        check_ref(node, node.no_branch, "no branch");
        break;
      case NodeKind::SeverityPrompt:
        if (!node.category) problems.push_back("severity prompt '" + node.id + "' has no category");
        break;
    }
  }

  if (!by_id.count(root)) {
    problems.push_back("root '" + root + "' is not a node");
    return problems;
  }

  StructureCheck check{by_id, problems, {}, false};
  check.visit(root, false, 0);
  for (const auto& [id, node] : by_id) {
    if (!check.visits.count(id)) problems.push_back("node '" + id + "' is unreachable from root");
  }
  return problems;
}

DecisionTree::DecisionTree(std::string version, std::string description, std::string root,
                           std::vector<Node> nodes)
    : version_(std::move(version)),
      description_(std::move(description)),
      root_(std::move(root)),
      nodes_(std::move(nodes)) {
  auto problems = structural_problems(root_, nodes_);
  if (!problems.empty()) {
    std::string message = "invalid decision tree: " + problems.front();
    if (problems.size() > 1) message += " (+" + std::to_string(problems.size() - 1) + " more)";
    throw Error(ErrorCode::InvalidTree, message, {{"problems", problems}});
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i].id, i);
}

const Node& DecisionTree::node(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw Error(ErrorCode::UnknownReference, "unknown tree node '" + std::string(id) + "'");
  }
  return nodes_[it->second];
}

bool DecisionTree::contains(std::string_view id) const { return index_.count(id) > 0; }

const DecisionTree& default_tree() {
  static const DecisionTree tree = [] {
    auto question = [](std::string id, std::string text, std::string yes,
                       Guard guard = Guard::None) {
      Node n;
      n.id = std::move(id);
      n.kind = NodeKind::Question;
      n.text = std::move(text);
      n.yes_branch = std::move(yes);
      n.no_branch = std::string(kEndOfBranch);
      n.guard = guard;
      return n;
    };
    auto prompt = [](std::string id, ErrorCategory category, std::string text) {
      Node n;
      n.id = std::move(id);
      n.kind = NodeKind::SeverityPrompt;
      n.category = category;
      n.text = std::move(text);
      return n;
    };
    auto sequence = [](std::string id, std::string text, std::vector<std::string> children) {
      Node n;
      n.id = std::move(id);
      n.kind = NodeKind::Sequence;
      n.text = std::move(text);
      n.children = std::move(children);
      return n;
    };

    std::vector<Node> nodes = {
        sequence("root", "Classify the errors in the machine translation",
                 {"fluency", "meaning_transfer", "adaptation"}),
        question("fluency",
                 "Fluency: does the MSA translation contain grammatical or linguistic errors, "
                 "judged on its own without the dialectal source?",
                 "fluency_severity"),
        prompt("fluency_severity", ErrorCategory::FLU,
               "How severe is the fluency error? 1 = minor, 2 = major"),
        sequence("meaning_transfer",
                 "Meaning transfer: compare the translation with the source and gold meaning",
                 {"proper_name", "dialect_term", "semantic"}),
        question("proper_name",
                 "Proper name: is a name of a person, place or organization translated "
                 "incorrectly?",
                 "proper_name_severity"),
        prompt("proper_name_severity", ErrorCategory::PRN,
               "How severe is the proper-name error? 1 = minor, 2 = major"),
        question("dialect_term",
                 "Dialect-specific term: is a dialectal word or expression left untranslated or "
                 "mistranslated so that the meaning changes?",
                 "dialect_term_severity"),
        prompt("dialect_term_severity", ErrorCategory::TRM,
               "How severe is the dialect-term error? 1 = minor, 2 = major"),
        question("semantic",
                 "General semantics: is any other meaning changed, for example by an omission, "
                 "an addition or a distortion?",
                 "semantic_severity"),
        prompt("semantic_severity", ErrorCategory::GSMIS,
               "How severe is the semantic error? 1 = minor, 2 = major"),
        question("adaptation",
                 "Adaptation: the meaning is preserved; is the translation unnatural or "
                 "inappropriate in tone, style or intent?",
                 "adaptation_severity", Guard::NoMeaningTransferError),
        prompt("adaptation_severity", ErrorCategory::ADP,
               "How severe is the adaptation error? 1 = minor, 2 = major"),
    };
    return DecisionTree("default-1",
                        "Built-in error classification tree. Question wording is editable "
                        "and not canonical.",
                        "root", std::move(nodes));
  }();
  return tree;
}

nlohmann::json tree_to_json(const DecisionTree& tree) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& node : tree.nodes()) {
    nlohmann::json j;
    j["id"] = node.id;
    j["kind"] = std::string(kind_name(node.kind));
    j["text"] = node.text;
    switch (node.kind) {
      case NodeKind::Sequence:
        j["children"] = node.children;
        break;
      case NodeKind::Question:
        j["yes"] = node.yes_branch;
        j["no"] = node.no_branch;
        if (node.guard == Guard::NoMeaningTransferError) j["guard"] = std::string(kGuardName);
        break;
      case NodeKind::SeverityPrompt:
        if (node.category) j["category"] = std::string(to_string(*node.category));
        break;
    }
    nodes.push_back(std::move(j));
  }
  return {{"format", std::string(kTreeFormat)},
          {"version", tree.version()},
          {"description", tree.description()},
          {"root", tree.root()},
          {"nodes", std::move(nodes)}};
}

DecisionTree tree_from_json(const nlohmann::json& doc) {
  auto fail = [](const std::string& why) -> DecisionTree {
    throw Error(ErrorCode::InvalidTree, "malformed decision tree: " + why);
  };
  try {
    if (!doc.is_object()) return fail("document is not an object");
    if (doc.value("format", "") != kTreeFormat) {
      return fail("format must be \"" + std::string(kTreeFormat) + "\"");
    }
    std::vector<Node> nodes;
    for (const auto& j : doc.at("nodes")) {
      Node node;
      node.id = j.at("id").get<std::string>();
      auto kind = parse_kind(j.at("kind").get<std::string>());
      if (!kind) return fail("node '" + node.id + "' has unknown kind");
      node.kind = *kind;
      node.text = j.value("text", "");
      if (j.contains("children")) node.children = j.at("children").get<std::vector<std::string>>();
      node.yes_branch = j.value("yes", "");
      node.no_branch = j.value("no", "");
      if (j.contains("category")) {
        node.category = parse_category(j.at("category").get<std::string>());
        if (!node.category) return fail("node '" + node.id + "' has unknown category");
      }
      if (j.contains("guard")) {
        if (j.at("guard").get<std::string>() != kGuardName) {
          return fail("node '" + node.id + "' has unknown guard");
        }
        node.guard = Guard::NoMeaningTransferError;
      }
      nodes.push_back(std::move(node));
    }
    return DecisionTree(doc.at("version").get<std::string>(), doc.value("description", ""),
                        doc.at("root").get<std::string>(), std::move(nodes));
  } catch (const nlohmann::json::exception& e) {
    return fail(e.what());
  }
}

std::string serialize_tree(const DecisionTree& tree) { return tree_to_json(tree).dump(2) + "\n"; }

DecisionTree parse_tree(std::string_view text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::InvalidTree, "decision tree is not valid JSON");
  return tree_from_json(doc);
}

DecisionTree load_tree_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_tree(buffer.str());
}

}  // namespace arahope
