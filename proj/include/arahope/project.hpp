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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arahope/model.hpp"
#include "arahope/tree.hpp"

namespace arahope {

enum class Rule : std::uint8_t {
  UnknownSegment,
  UnknownSystem,
  UnknownAnnotator,
  UnknownOutput,
  AdpDespiteMeaningTransfer,
  AdpApplicableDespiteMeaningTransfer,
  AdpNotApplicable,
  BadRevision,
};

std::string_view to_string(Rule rule);

struct Violation {
  Rule rule;
  std::optional<ErrorCategory> category;
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

class Project;

// Annotation-local invariants: gating and revision.
ValidationResult check_annotation(const Annotation& a);
// check_annotation plus reference resolution against the project.
ValidationResult validate_annotation(const Annotation& a, const Project& p);

using AuthoritativeMap = std::map<AnnotationKey, Annotation>;

// Highest revision per (annotator, segment, system). Throws
// Error(DuplicateRevision) when a triple carries the same revision twice.
AuthoritativeMap authoritative_annotations(std::span<const Annotation> log);
AuthoritativeMap authoritative_annotations(const Project& p);

// Corpus, system outputs, annotators, protocol tree, scoring config and the
// append-only annotation log of one evaluation.
class Project {
 public:
  Project();
  explicit Project(std::string name, DecisionTree taxonomy = default_tree(),
                   ScoringConfig config = {});

  const std::string& name() const { return name_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<SystemOutput>& outputs() const { return outputs_; }
  const std::vector<std::string>& systems() const { return systems_; }
  const std::vector<std::string>& annotators() const { return annotators_; }
  const DecisionTree& taxonomy() const { return taxonomy_; }
  const ScoringConfig& config() const { return config_; }
  const std::vector<Annotation>& annotations() const { return log_; }

  // Throws DuplicateId when the id or the (source, gold) pair exists, and
  // InvalidAnnotation for empty text.
  void add_segment(Segment segment);
  // No-op for known systems/annotators.
  void add_system(const std::string& system_id);
  void add_annotator(const std::string& annotator_id);
  // Registers the system if needed. Throws UnknownReference or DuplicateId.
  void add_output(SystemOutput output);
  void set_config(ScoringConfig config);
  void set_taxonomy(DecisionTree taxonomy);

  const Segment* find_segment(std::string_view id) const;
  const Segment* find_segment_by_text(std::string_view source_da, std::string_view gold_msa) const;
  const SystemOutput* find_output(std::string_view segment_id, std::string_view system_id) const;
  bool has_system(std::string_view system_id) const;
  bool has_annotator(std::string_view annotator_id) const;

  // Outputs of one system in corpus order.
  std::vector<const SystemOutput*> outputs_for(std::string_view system_id) const;

  // 0 when the triple has no annotation yet.
  std::int64_t latest_revision(const AnnotationKey& key) const;

  // Appends after validate_annotation. Throws InvalidAnnotation (context
  // lists violations), DuplicateRevision for a revision already present and
  // StaleRevision for one below the latest.
  void append(Annotation annotation);

  // An empty project name is not allowed in stored projects.
  void rename(std::string name) { name_ = std::move(name); }

  bool operator==(const Project& other) const;

 private:
  std::string name_;
  std::vector<Segment> segments_;
  std::vector<SystemOutput> outputs_;
  std::vector<std::string> systems_;
  std::vector<std::string> annotators_;
  DecisionTree taxonomy_;
  ScoringConfig config_;
  std::vector<Annotation> log_;
  std::map<AnnotationKey, std::int64_t> latest_;
};

}  // namespace arahope
