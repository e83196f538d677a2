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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arahope/model.hpp"
#include "arahope/project.hpp"

namespace arahope {

enum class Bucket : std::uint8_t { NoEdit = 0, Minor = 1, Major = 2 };

inline constexpr std::array<Bucket, 3> kBuckets = {Bucket::NoEdit, Bucket::Minor, Bucket::Major};

std::string_view to_string(Bucket b);

// Segment error score: FLU + PRN + TRM + GSMIS + adp_weight * ADP.
// Throws Error(InvalidAnnotation) when gating is violated.
Rational segs(const Annotation& a, const ScoringConfig& cfg);

// Combines the authoritative annotations of one (segment, system) item
// under cfg.aggregation. Throws NoAnnotations when nothing applies
// (including a missing focus annotator in PerAnnotator mode).
Rational segs_aggregated(std::span<const Annotation> annotations, const ScoringConfig& cfg);

// NoEdit for 0, Minor for (0, minor_upper], Major above.
Bucket bucket(const Rational& segs, const ScoringConfig& cfg);

struct SegmentScore {
  std::string segment_id;
  std::string system_id;
  Rational segs;
  Bucket bucket = Bucket::NoEdit;
  // Empty for MeanAcrossAnnotators.
  std::string basis_annotator;
  std::size_t annotator_count = 0;

  bool operator==(const SegmentScore&) const = default;
};

struct SeverityDistribution {
  std::string system_id;
  std::array<std::size_t, 3> counts{};  // indexed by Bucket
  std::size_t total_segments = 0;

  std::size_t count(Bucket b) const { return counts[static_cast<std::size_t>(b)]; }
  // Exact share in percent.
  Rational percentage(Bucket b) const;
};

struct CategoryTotals {
  std::string system_id;
  // ADP entry already multiplied by adp_weight.
  std::array<Rational, 5> per_category{};
  Rational grand_total;

  const Rational& operator[](ErrorCategory c) const { return per_category[index_of(c)]; }
};

// Per-item scores for one system in corpus order. Throws
// MissingAnnotations (context lists the uncovered segment ids).
std::vector<SegmentScore> segment_scores(const Project& project, std::string_view system_id,
                                         const ScoringConfig& cfg);

SeverityDistribution severity_distribution(const Project& project, std::string_view system_id,
                                           const ScoringConfig& cfg);

// Throws MissingAnnotations, or InvalidAnnotation if the two ways of
// summing ever disagree.
CategoryTotals category_totals(const Project& project, std::string_view system_id,
                               const ScoringConfig& cfg);

}  // namespace arahope
