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

#include "arahope/scoring.hpp"

#include "arahope/error.hpp"

namespace arahope {

std::string_view to_string(Bucket b) {
  switch (b) {
    case Bucket::NoEdit: return "NoEdit";
    case Bucket::Minor: return "Minor";
    case Bucket::Major: return "Major";
  }
  return "?";
}

Rational segs(const Annotation& a, const ScoringConfig& cfg) {
  ValidationResult check = check_annotation(a);
  if (!check.ok()) throw Error(ErrorCode::InvalidAnnotation, check.summary());
  Rational total = 0;
  for (ErrorCategory c : kCategories) {
    Rational level = a.severities[c].level();
    total += c == ErrorCategory::ADP ? level * cfg.adp_weight : level;
  }
  return total;
}

Rational segs_aggregated(std::span<const Annotation> annotations, const ScoringConfig& cfg) {
  if (cfg.aggregation == AggregationMode::PerAnnotator) {
    for (const auto& a : annotations) {
      if (a.annotator_id == cfg.focus_annotator) return segs(a, cfg);
    }
    throw Error(ErrorCode::NoAnnotations,
                "no annotation by '" + cfg.focus_annotator + "' for this item");
  }
  if (annotations.empty()) throw Error(ErrorCode::NoAnnotations, "no annotations for this item");
  Rational sum = 0;
  for (const auto& a : annotations) sum += segs(a, cfg);
  return sum / static_cast<std::int64_t>(annotations.size());
}

Bucket bucket(const Rational& segs, const ScoringConfig& cfg) {
  if (segs == Rational(0)) return Bucket::NoEdit;
  if (segs <= cfg.minor_upper) return Bucket::Minor;
  return Bucket::Major;
}

Rational SeverityDistribution::percentage(Bucket b) const {
  if (total_segments == 0) return 0;
  return Rational(static_cast<std::int64_t>(count(b)) * 100,
                  static_cast<std::int64_t>(total_segments));
}

namespace {

struct Item {
  const SystemOutput* output;
  std::vector<Annotation> annotations;  // those that count under cfg
};

// Annotations that count for every output of the system; throws
// MissingAnnotations naming uncovered segments.
std::vector<Item> collect_items(const Project& project, std::string_view system_id,
                                const ScoringConfig& cfg) {
  cfg.validate();
  if (!project.has_system(system_id)) {
    throw Error(ErrorCode::UnknownSystem, "unknown system '" + std::string(system_id) + "'",
                {{"system_id", system_id}});
  }
  AuthoritativeMap auth = authoritative_annotations(project);
  std::map<std::string, std::vector<Annotation>, std::less<>> by_segment;
  for (const auto& [key, a] : auth) {
    if (key.system_id != system_id) continue;
    if (cfg.aggregation == AggregationMode::PerAnnotator && key.annotator_id != cfg.focus_annotator) {
      continue;
    }
    by_segment[key.segment_id].push_back(a);
  }
  std::vector<Item> items;
  std::vector<std::string> missing;
  for (const SystemOutput* output : project.outputs_for(system_id)) {
    auto it = by_segment.find(output->segment_id);
    if (it == by_segment.end()) {
      missing.push_back(output->segment_id);
      continue;
    }
    items.push_back({output, std::move(it->second)});
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::MissingAnnotations,
                std::to_string(missing.size()) + " segment(s) of system '" +
                    std::string(system_id) + "' lack annotations",
                {{"system_id", system_id}, {"segments", missing}});
  }
  return items;
}

}  // namespace

std::vector<SegmentScore> segment_scores(const Project& project, std::string_view system_id,
                                         const ScoringConfig& cfg) {
  std::vector<SegmentScore> scores;
  for (const auto& item : collect_items(project, system_id, cfg)) {
    SegmentScore score;
    score.segment_id = item.output->segment_id;
    score.system_id = item.output->system_id;
    score.segs = segs_aggregated(item.annotations, cfg);
    score.bucket = bucket(score.segs, cfg);
    if (cfg.aggregation == AggregationMode::PerAnnotator) score.basis_annotator = cfg.focus_annotator;
    score.annotator_count = item.annotations.size();
    scores.push_back(std::move(score));
  }
  return scores;
}

SeverityDistribution severity_distribution(const Project& project, std::string_view system_id,
                                           const ScoringConfig& cfg) {
  SeverityDistribution dist;
  dist.system_id = std::string(system_id);
  for (const auto& score : segment_scores(project, system_id, cfg)) {
    ++dist.counts[static_cast<std::size_t>(score.bucket)];
    ++dist.total_segments;
  }
  return dist;
}

CategoryTotals category_totals(const Project& project, std::string_view system_id,
                               const ScoringConfig& cfg) {
  CategoryTotals totals;
  totals.system_id = std::string(system_id);
  Rational segs_sum = 0;
  for (const auto& item : collect_items(project, system_id, cfg)) {
    const auto n = static_cast<std::int64_t>(item.annotations.size());
    for (ErrorCategory c : kCategories) {
      Rational level_sum = 0;
      for (const auto& a : item.annotations) level_sum += a.severities[c].level();
      Rational mean = level_sum / n;
      totals.per_category[index_of(c)] += c == ErrorCategory::ADP ? mean * cfg.adp_weight : mean;
    }
    segs_sum += segs_aggregated(item.annotations, cfg);
  }
  for (const auto& v : totals.per_category) totals.grand_total += v;
  if (totals.grand_total != segs_sum) {
    throw Error(ErrorCode::InvalidAnnotation,
                "category totals " + rational_to_string(totals.grand_total) +
                    " disagree with summed SEGS " + rational_to_string(segs_sum));
  }
  return totals;
}

}  // namespace arahope
