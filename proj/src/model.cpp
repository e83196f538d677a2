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

#include "arahope/model.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include "arahope/error.hpp"

namespace arahope {

std::string_view to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::FLU: return "FLU";
    case ErrorCategory::PRN: return "PRN";
    case ErrorCategory::TRM: return "TRM";
    case ErrorCategory::GSMIS: return "GSMIS";
    case ErrorCategory::ADP: return "ADP";
  }
  return "?";
}

std::string_view to_string(ErrorGroup g) {
  switch (g) {
    case ErrorGroup::Fluency: return "Fluency";
    case ErrorGroup::MeaningTransfer: return "MeaningTransfer";
    case ErrorGroup::Adaptation: return "Adaptation";
  }
  return "?";
}

std::optional<ErrorCategory> parse_category(std::string_view text) {
  for (ErrorCategory c : kCategories) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

Severity Severity::checked(int level) {
  auto s = from_level(level);
  if (!s) {
    throw Error(ErrorCode::InvalidSeverity,
                "severity must be 0, 1 or 2, got " + std::to_string(level));
  }
  return *s;
}

bool SeverityMap::has_meaning_transfer_error() const {
  return std::any_of(kMeaningTransferCategories.begin(), kMeaningTransferCategories.end(),
                     [this](ErrorCategory c) { return (*this)[c].is_error(); });
}

bool SeverityMap::all_zero() const {
  return std::none_of(values_.begin(), values_.end(),
                      [](Severity s) { return s.is_error(); });
}

void ScoringConfig::validate() const {
  if (adp_weight <= Rational(0) || adp_weight > Rational(1)) {
    throw Error(ErrorCode::InvalidConfig,
                "adp_weight must lie in (0, 1], got " + rational_to_string(adp_weight));
  }
  if (minor_upper <= Rational(0)) {
    throw Error(ErrorCode::InvalidConfig,
                "minor_upper must be positive, got " + rational_to_string(minor_upper));
  }
  if (aggregation == AggregationMode::PerAnnotator && focus_annotator.empty()) {
    throw Error(ErrorCode::InvalidConfig, "PerAnnotator aggregation needs a focus annotator");
  }
}

std::string_view to_string(AggregationMode m) {
  return m == AggregationMode::PerAnnotator ? "PerAnnotator" : "MeanAcrossAnnotators";
}

std::optional<AggregationMode> parse_aggregation(std::string_view text) {
  if (text == "PerAnnotator") return AggregationMode::PerAnnotator;
  if (text == "MeanAcrossAnnotators") return AggregationMode::MeanAcrossAnnotators;
  return std::nullopt;
}

std::string_view to_string(MeaningTransferLevel m) {
  return m == MeaningTransferLevel::Max ? "Max" : "CappedSum";
}

std::optional<MeaningTransferLevel> parse_meaning_transfer_level(std::string_view text) {
  if (text == "Max") return MeaningTransferLevel::Max;
  if (text == "CappedSum") return MeaningTransferLevel::CappedSum;
  return std::nullopt;
}

std::string rational_to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::optional<std::int64_t> parse_int(std::string_view text) {
  std::int64_t value = 0;
  if (text.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_int(text.substr(0, slash));
    auto den = parse_int(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return Rational(*num, *den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 12) return std::nullopt;
    if (!std::all_of(frac.begin(), frac.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      return std::nullopt;
    }
    bool negative = !whole.empty() && whole.front() == '-';
    if (negative) whole.remove_prefix(1);
    auto w = whole.empty() ? std::optional<std::int64_t>(0) : parse_int(whole);
    auto f = parse_int(frac);
    if (!w || !f || *w < 0) return std::nullopt;
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Rational value(*w * scale + *f, scale);
    return negative ? -value : value;
  }
  if (auto v = parse_int(text)) return Rational(*v);
  return std::nullopt;
}

std::string format_decimal(const Rational& r, int places) {
  std::int64_t scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  Rational magnitude = r < Rational(0) ? -r : r;
  Rational scaled = magnitude * scale + Rational(1, 2);
  std::int64_t units = scaled.numerator() / scaled.denominator();
  std::string out = (r < Rational(0) && units != 0) ? "-" : "";
  out += std::to_string(units / scale);
  if (places > 0) {
    std::string frac = std::to_string(units % scale);
    out += '.';
    out += std::string(static_cast<std::size_t>(places) - frac.size(), '0');
    out += frac;
  }
  return out;
}

}  // namespace arahope
