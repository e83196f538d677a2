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

#include "arahope/project.hpp"

#include <algorithm>

#include "arahope/error.hpp"

namespace arahope {

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::UnknownSegment: return "UnknownSegment";
    case Rule::UnknownSystem: return "UnknownSystem";
    case Rule::UnknownAnnotator: return "UnknownAnnotator";
    case Rule::UnknownOutput: return "UnknownOutput";
    case Rule::AdpDespiteMeaningTransfer: return "AdpDespiteMeaningTransfer";
    case Rule::AdpApplicableDespiteMeaningTransfer: return "AdpApplicableDespiteMeaningTransfer";
    case Rule::AdpNotApplicable: return "AdpNotApplicable";
    case Rule::BadRevision: return "BadRevision";
  }
  return "?";
}

std::string ValidationResult::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

ValidationResult check_annotation(const Annotation& a) {
  ValidationResult result;
  const SeverityMap& s = a.severities;
  if (s.has_meaning_transfer_error()) {
    if (s[ErrorCategory::ADP].is_error()) {
      result.violations.push_back({Rule::AdpDespiteMeaningTransfer, ErrorCategory::ADP,
                                   "ADP assessed despite meaning-transfer error"});
    }
    if (a.adp_applicable) {
      for (ErrorCategory c : kMeaningTransferCategories) {
        if (s[c].is_error()) {
          result.violations.push_back(
              {Rule::AdpApplicableDespiteMeaningTransfer, c,
               "adp_applicable set although " + std::string(to_string(c)) + " error is recorded"});
          break;
        }
      }
    }
  } else if (!a.adp_applicable && s[ErrorCategory::ADP].is_error()) {
    result.violations.push_back(
        {Rule::AdpNotApplicable, ErrorCategory::ADP, "ADP assessed although marked not applicable"});
  }
  if (a.revision < 1) {
    result.violations.push_back(
        {Rule::BadRevision, std::nullopt, "revision must be >= 1, got " + std::to_string(a.revision)});
  }
  return result;
}

ValidationResult validate_annotation(const Annotation& a, const Project& p) {
  ValidationResult result = check_annotation(a);
  bool segment_known = p.find_segment(a.segment_id) != nullptr;
  if (!segment_known) {
    result.violations.push_back(
        {Rule::UnknownSegment, std::nullopt, "unknown segment '" + a.segment_id + "'"});
  }
  bool system_known = p.has_system(a.system_id);
  if (!system_known) {
    result.violations.push_back(
        {Rule::UnknownSystem, std::nullopt, "unknown system '" + a.system_id + "'"});
  }
  if (!p.has_annotator(a.annotator_id)) {
    result.violations.push_back(
        {Rule::UnknownAnnotator, std::nullopt, "unknown annotator '" + a.annotator_id + "'"});
  }
  if (segment_known && system_known && !p.find_output(a.segment_id, a.system_id)) {
    result.violations.push_back({Rule::UnknownOutput, std::nullopt,
                                 "no output of system '" + a.system_id + "' for segment '" +
                                     a.segment_id + "'"});
  }
  return result;
}

AuthoritativeMap authoritative_annotations(std::span<const Annotation> log) {
  std::map<std::pair<AnnotationKey, std::int64_t>, int> seen;
  for (const auto& a : log) {
    if (++seen[{a.key(), a.revision}] > 1) {
      throw Error(ErrorCode::DuplicateRevision,
                  "revision " + std::to_string(a.revision) + " appears twice for (" +
                      a.annotator_id + ", " + a.segment_id + ", " + a.system_id + ")",
                  {{"annotator_id", a.annotator_id},
                   {"segment_id", a.segment_id},
                   {"system_id", a.system_id},
                   {"revision", a.revision}});
    }
  }
  AuthoritativeMap out;
  for (const auto& a : log) {
    auto [it, inserted] = out.try_emplace(a.key(), a);
    if (!inserted && a.revision > it->second.revision) it->second = a;
  }
  return out;
}

AuthoritativeMap authoritative_annotations(const Project& p) {
  return authoritative_annotations(std::span<const Annotation>(p.annotations()));
}

Project::Project() : Project("") {}

Project::Project(std::string name, DecisionTree taxonomy, ScoringConfig config)
    : name_(std::move(name)), taxonomy_(std::move(taxonomy)), config_(std::move(config)) {
  config_.validate();
}

void Project::add_segment(Segment segment) {
  if (segment.id.empty()) throw Error(ErrorCode::InvalidAnnotation, "segment id is empty");
  if (segment.source_da.empty() || segment.gold_msa.empty()) {
    throw Error(ErrorCode::InvalidAnnotation,
                "segment '" + segment.id + "' needs non-empty source and gold text");
  }
  if (find_segment(segment.id)) {
    throw Error(ErrorCode::DuplicateId, "segment id '" + segment.id + "' already exists",
                {{"segment_id", segment.id}});
  }
  if (const Segment* twin = find_segment_by_text(segment.source_da, segment.gold_msa)) {
    throw Error(ErrorCode::DuplicateId,
                "segment '" + segment.id + "' repeats the text of segment '" + twin->id + "'",
                {{"segment_id", segment.id}, {"existing_segment_id", twin->id}});
  }
  segments_.push_back(std::move(segment));
}

void Project::add_system(const std::string& system_id) {
  if (system_id.empty()) throw Error(ErrorCode::InvalidAnnotation, "system id is empty");
  if (!has_system(system_id)) systems_.push_back(system_id);
}

void Project::add_annotator(const std::string& annotator_id) {
  if (annotator_id.empty()) throw Error(ErrorCode::InvalidAnnotation, "annotator id is empty");
  if (!has_annotator(annotator_id)) annotators_.push_back(annotator_id);
}

void Project::add_output(SystemOutput output) {
  if (!find_segment(output.segment_id)) {
    throw Error(ErrorCode::UnknownReference, "unknown segment '" + output.segment_id + "'",
                {{"segment_id", output.segment_id}});
  }
  if (find_output(output.segment_id, output.system_id)) {
    throw Error(ErrorCode::DuplicateId,
                "output of system '" + output.system_id + "' for segment '" + output.segment_id +
                    "' already exists");
  }
  add_system(output.system_id);
  outputs_.push_back(std::move(output));
}

void Project::set_config(ScoringConfig config) {
  config.validate();
  config_ = std::move(config);
}

void Project::set_taxonomy(DecisionTree taxonomy) { taxonomy_ = std::move(taxonomy); }

const Segment* Project::find_segment(std::string_view id) const {
  auto it = std::find_if(segments_.begin(), segments_.end(),
                         [&](const Segment& s) { return s.id == id; });
  return it == segments_.end() ? nullptr : &*it;
}

const Segment* Project::find_segment_by_text(std::string_view source_da,
                                             std::string_view gold_msa) const {
  auto it = std::find_if(segments_.begin(), segments_.end(), [&](const Segment& s) {
    return s.source_da == source_da && s.gold_msa == gold_msa;
  });
  return it == segments_.end() ? nullptr : &*it;
}

const SystemOutput* Project::find_output(std::string_view segment_id,
                                         std::string_view system_id) const {
  auto it = std::find_if(outputs_.begin(), outputs_.end(), [&](const SystemOutput& o) {
    return o.segment_id == segment_id && o.system_id == system_id;
  });
  return it == outputs_.end() ? nullptr : &*it;
}

bool Project::has_system(std::string_view system_id) const {
  return std::find(systems_.begin(), systems_.end(), system_id) != systems_.end();
}

bool Project::has_annotator(std::string_view annotator_id) const {
  return std::find(annotators_.begin(), annotators_.end(), annotator_id) != annotators_.end();
}

std::vector<const SystemOutput*> Project::outputs_for(std::string_view system_id) const {
  std::vector<const SystemOutput*> out;
  for (const auto& segment : segments_) {
    if (const SystemOutput* o = find_output(segment.id, system_id)) out.push_back(o);
  }
  return out;
}

std::int64_t Project::latest_revision(const AnnotationKey& key) const {
  auto it = latest_.find(key);
  return it == latest_.end() ? 0 : it->second;
}

void Project::append(Annotation annotation) {
  ValidationResult result = validate_annotation(annotation, *this);
  if (!result.ok()) {
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : result.violations) {
      nlohmann::json j = {{"rule", std::string(to_string(v.rule))}, {"message", v.message}};
      if (v.category) j["category"] = std::string(to_string(*v.category));
      violations.push_back(std::move(j));
    }
    throw Error(ErrorCode::InvalidAnnotation, result.summary(), {{"violations", violations}});
  }
  std::int64_t latest = latest_revision(annotation.key());
  if (annotation.revision == latest) {
    throw Error(ErrorCode::DuplicateRevision,
                "revision " + std::to_string(annotation.revision) + " already recorded",
                {{"revision", annotation.revision}});
  }
  if (annotation.revision < latest) {
    throw Error(ErrorCode::StaleRevision,
                "revision " + std::to_string(annotation.revision) + " is older than latest " +
                    std::to_string(latest),
                {{"revision", annotation.revision}, {"latest_revision", latest}});
  }
  latest_[annotation.key()] = annotation.revision;
  log_.push_back(std::move(annotation));
}

bool Project::operator==(const Project& other) const {
  return name_ == other.name_ && segments_ == other.segments_ && outputs_ == other.outputs_ &&
         systems_ == other.systems_ && annotators_ == other.annotators_ &&
         taxonomy_ == other.taxonomy_ && config_ == other.config_ && log_ == other.log_;
}

}  // namespace arahope
