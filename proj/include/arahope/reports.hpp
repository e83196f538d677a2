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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "arahope/agreement.hpp"
#include "arahope/project.hpp"
#include "arahope/scoring.hpp"

namespace arahope {

enum class ReportKind : std::uint8_t { Segments, Severity, Pattern, Totals, Agreement };

// The four analyses; `report` with no --kind prints these. Segments is the
// per-item listing behind `score`.
inline constexpr std::array<ReportKind, 4> kReportKinds = {
    ReportKind::Severity, ReportKind::Pattern, ReportKind::Totals, ReportKind::Agreement};

std::string_view to_string(ReportKind k);
std::optional<ReportKind> parse_report_kind(std::string_view text);

enum class OutputFormat : std::uint8_t { Text, Delimited, Structured };

std::string_view to_string(OutputFormat f);
std::optional<OutputFormat> parse_output_format(std::string_view text);

inline constexpr std::string_view kReportSchema = "arahope-report";
inline constexpr int kReportSchemaVersion = 1;

// A rendered analysis. Cells hold the final display strings (kappa to 3
// decimals, scores to 2, percentages as integers); `data` carries the same
// strings under stable field names for chart clients.
struct Report {
  ReportKind kind = ReportKind::Severity;
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;
  nlohmann::json data = nlohmann::json::object();
};

std::string render(const Report& report, OutputFormat format);
std::string render_text(const Report& report);
std::string render_delimited(const Report& report, char delimiter = '\t');
// {"schema", "schema_version", "kind", "title", "columns", "rows", "notes", "data"}
nlohmann::json report_document(const Report& report);

// Builders over precomputed aggregates.
Report build_segments_report(std::span<const SegmentScore> scores);
Report build_severity_report(std::span<const SeverityDistribution> distributions);
Report build_pattern_report(std::span<const CategoryTotals> totals);
Report build_totals_report(std::span<const CategoryTotals> totals);
Report build_agreement_report(const AgreementTable& table);

// Builders over a project, one entry per system in project order.
// Propagate MissingAnnotations and agreement errors.
Report segments_report(const Project& project, const ScoringConfig& cfg);
Report severity_report(const Project& project, const ScoringConfig& cfg);
Report pattern_report(const Project& project, const ScoringConfig& cfg);
Report totals_report(const Project& project, const ScoringConfig& cfg);
Report agreement_report(const Project& project, const ScoringConfig& cfg);
Report build_report(ReportKind kind, const Project& project, const ScoringConfig& cfg);

// Integer percent with round-half-up.
std::int64_t round_percent(const Rational& percent);

}  // namespace arahope
