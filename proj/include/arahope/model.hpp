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

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace arahope {

// Exact arithmetic for scores: ADP weighting and annotator averaging
// produce quarter steps that must add up without drift.
using Rational = boost::rational<std::int64_t>;

enum class ErrorCategory : std::uint8_t { FLU = 0, PRN, TRM, GSMIS, ADP };

inline constexpr std::array<ErrorCategory, 5> kCategories = {
    ErrorCategory::FLU, ErrorCategory::PRN, ErrorCategory::TRM,
    ErrorCategory::GSMIS, ErrorCategory::ADP};

inline constexpr std::array<ErrorCategory, 3> kMeaningTransferCategories = {
    ErrorCategory::PRN, ErrorCategory::TRM, ErrorCategory::GSMIS};

enum class ErrorGroup : std::uint8_t { Fluency, MeaningTransfer, Adaptation };

constexpr ErrorGroup group_of(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::FLU: return ErrorGroup::Fluency;
    case ErrorCategory::PRN:
    case ErrorCategory::TRM:
    case ErrorCategory::GSMIS: return ErrorGroup::MeaningTransfer;
    case ErrorCategory::ADP: return ErrorGroup::Adaptation;
  }
  return ErrorGroup::Fluency;
}

constexpr bool is_meaning_transfer(ErrorCategory c) {
  return group_of(c) == ErrorGroup::MeaningTransfer;
}

constexpr std::size_t index_of(ErrorCategory c) { return static_cast<std::size_t>(c); }

std::string_view to_string(ErrorCategory c);
std::string_view to_string(ErrorGroup g);
std::optional<ErrorCategory> parse_category(std::string_view text);

// Ordinal severity. Only 0 (no error), 1 (minor) and 2 (major) exist.
class Severity {
 public:
  constexpr Severity() = default;

  static constexpr Severity none() { return Severity(0); }
  static constexpr Severity minor() { return Severity(1); }
  static constexpr Severity major() { return Severity(2); }

  static std::optional<Severity> from_level(int level) {
    if (level < 0 || level > 2) return std::nullopt;
    return Severity(static_cast<std::uint8_t>(level));
  }
  // Throws Error(InvalidSeverity) outside {0, 1, 2}.
  static Severity checked(int level);

  constexpr int level() const { return level_; }
  constexpr bool is_error() const { return level_ > 0; }

  constexpr auto operator<=>(const Severity&) const = default;

 private:
  constexpr explicit Severity(std::uint8_t level) : level_(level) {}
  std::uint8_t level_ = 0;
};

// Total map ErrorCategory -> Severity; every category always has a value.
class SeverityMap {
 public:
  constexpr SeverityMap() = default;

  constexpr Severity operator[](ErrorCategory c) const { return values_[index_of(c)]; }
  constexpr void set(ErrorCategory c, Severity s) { values_[index_of(c)] = s; }

  bool has_meaning_transfer_error() const;
  bool all_zero() const;

  constexpr bool operator==(const SeverityMap&) const = default;

 private:
  std::array<Severity, 5> values_{};
};

struct Segment {
  std::string id;
  std::string source_da;
  std::string gold_msa;

  bool operator==(const Segment&) const = default;
};

struct SystemOutput {
  std::string segment_id;
  std::string system_id;
  std::string hypothesis;

  bool operator==(const SystemOutput&) const = default;
};

// (annotator, segment, system)
struct AnnotationKey {
  std::string annotator_id;
  std::string segment_id;
  std::string system_id;

  auto operator<=>(const AnnotationKey&) const = default;
};

struct Annotation {
  std::string annotator_id;
  std::string segment_id;
  std::string system_id;
  SeverityMap severities;
  bool adp_applicable = true;
  std::int64_t revision = 1;

  AnnotationKey key() const { return {annotator_id, segment_id, system_id}; }
  bool operator==(const Annotation&) const = default;
};

enum class AggregationMode : std::uint8_t { PerAnnotator, MeanAcrossAnnotators };

// How the three meaning-transfer severities collapse into one ordinal level
// for agreement analysis.
enum class MeaningTransferLevel : std::uint8_t { Max, CappedSum };

struct ScoringConfig {
  Rational adp_weight{1, 2};
  Rational minor_upper{1};
  std::size_t min_project_size = 200;
  AggregationMode aggregation = AggregationMode::MeanAcrossAnnotators;
  // Annotator whose judgments are scored in PerAnnotator mode.
  std::string focus_annotator;
  MeaningTransferLevel meaning_transfer = MeaningTransferLevel::Max;

  // Throws Error(InvalidConfig).
  void validate() const;

  bool operator==(const ScoringConfig&) const = default;
};

std::string_view to_string(AggregationMode m);
std::optional<AggregationMode> parse_aggregation(std::string_view text);
std::string_view to_string(MeaningTransferLevel m);
std::optional<MeaningTransferLevel> parse_meaning_transfer_level(std::string_view text);

// "p/q" for storage; parse_rational accepts "p/q", integers and plain
// decimals such as "0.5".
std::string rational_to_string(const Rational& r);
std::optional<Rational> parse_rational(std::string_view text);

// Decimal rendering with round-half-up at the given number of places.
std::string format_decimal(const Rational& r, int places);

}  // namespace arahope
