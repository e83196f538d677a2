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

#include "arahope/reports.hpp"

#include <algorithm>

#include "arahope/error.hpp"
#include "arahope/ingestion.hpp"

namespace arahope {

std::string_view to_string(ReportKind k) {
  switch (k) {
    case ReportKind::Segments: return "segments";
    case ReportKind::Severity: return "severity";
    case ReportKind::Pattern: return "pattern";
    case ReportKind::Totals: return "totals";
    case ReportKind::Agreement: return "agreement";
  }
  return "?";
}

std::optional<ReportKind> parse_report_kind(std::string_view text) {
  for (ReportKind k : {ReportKind::Segments, ReportKind::Severity, ReportKind::Pattern,
                       ReportKind::Totals, ReportKind::Agreement}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Text: return "text";
    case OutputFormat::Delimited: return "delimited";
    case OutputFormat::Structured: return "structured";
  }
  return "?";
}

std::optional<OutputFormat> parse_output_format(std::string_view text) {
  if (text == "text") return OutputFormat::Text;
  if (text == "delimited") return OutputFormat::Delimited;
  if (text == "structured") return OutputFormat::Structured;
  return std::nullopt;
}

std::int64_t round_percent(const Rational& percent) {
  Rational shifted = percent + Rational(1, 2);
  std::int64_t q = shifted.numerator() / shifted.denominator();
  if (shifted < Rational(0) && q * shifted.denominator() != shifted.numerator()) --q;
  return q;
}

namespace {

// Display width in code points; enough for the scripts in our tables.
std::size_t display_width(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string pad(const std::string& s, std::size_t width, bool left) {
  std::size_t w = display_width(s);
  std::string fill(width > w ? width - w : 0, ' ');
  return left ? s + fill : fill + s;
}

std::string kappa_text(const std::optional<double>& kappa) {
  if (!kappa) return "n/a (degenerate)";
  // Three decimals through exact rounding of the double's value.
  double v = *kappa;
  auto scaled = static_cast<std::int64_t>(v * 1000.0 + (v < 0 ? -0.5 : 0.5));
  std::string sign = scaled < 0 ? "-" : "";
  std::int64_t mag = scaled < 0 ? -scaled : scaled;
  std::string frac = std::to_string(mag % 1000);
  return sign + std::to_string(mag / 1000) + "." + std::string(3 - frac.size(), '0') + frac;
}

nlohmann::json base_data(ReportKind kind) {
  return {{"schema", std::string(kReportSchema)},
          {"schema_version", kReportSchemaVersion},
          {"kind", std::string(to_string(kind))}};
}

}  // namespace

std::string render_text(const Report& report) {
  std::vector<std::size_t> widths(report.columns.size(), 0);
  for (std::size_t c = 0; c < report.columns.size(); ++c) widths[c] = display_width(report.columns[c]);
  for (const auto& row : report.rows) {
    for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c) {
      widths[c] = std::max(widths[c], display_width(row[c]));
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < widths.size(); ++c) {
      if (c) out += "  ";
      std::string cell = c < cells.size() ? cells[c] : "";
      out += pad(cell, widths[c], c == 0);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string out = report.title + "\n\n";
  out += line(report.columns);
  std::vector<std::string> rule;
  for (std::size_t w : widths) rule.push_back(std::string(w, '-'));
  out += line(rule);
  for (const auto& row : report.rows) out += line(row);
  if (!report.notes.empty()) {
    out += "\n";
    for (const auto& note : report.notes) out += "note: " + note + "\n";
  }
  return out;
}

std::string render_delimited(const Report& report, char delimiter) {
  Delimiter d = delimiter == ',' ? Delimiter::Comma : Delimiter::Tab;
  std::string out = write_record(report.columns, d);
  for (const auto& row : report.rows) out += write_record(row, d);
  for (const auto& note : report.notes) out += "# " + note + "\n";
  return out;
}

nlohmann::json report_document(const Report& report) {
  return {{"schema", std::string(kReportSchema)},
          {"schema_version", kReportSchemaVersion},
          {"kind", std::string(to_string(report.kind))},
          {"title", report.title},
          {"columns", report.columns},
          {"rows", report.rows},
          {"notes", report.notes},
          {"data", report.data}};
}

std::string render(const Report& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::Text: return render_text(report);
    case OutputFormat::Delimited: return render_delimited(report);
    case OutputFormat::Structured: return report_document(report).dump(2) + "\n";
  }
  return {};
}

Report build_segments_report(std::span<const SegmentScore> scores) {
  Report r;
  r.kind = ReportKind::Segments;
  r.title = "Segment error scores (SEGS)";
  r.columns = {"Segment", "System", "SEGS", "Bucket", "Basis"};
  nlohmann::json items = nlohmann::json::array();
  for (const auto& s : scores) {
    std::string basis = s.basis_annotator.empty()
                            ? "mean of " + std::to_string(s.annotator_count)
                            : s.basis_annotator;
    std::string value = format_decimal(s.segs, 2);
    r.rows.push_back({s.segment_id, s.system_id, value, std::string(to_string(s.bucket)), basis});
    items.push_back({{"segment_id", s.segment_id},
                     {"system_id", s.system_id},
                     {"segs", value},
                     {"segs_exact", rational_to_string(s.segs)},
                     {"bucket", std::string(to_string(s.bucket))},
                     {"basis", basis}});
  }
  r.data = base_data(r.kind);
  r.data["segments"] = items;
  return r;
}

Report build_severity_report(std::span<const SeverityDistribution> distributions) {
  Report r;
  r.kind = ReportKind::Severity;
  r.title = "Severity distribution";
  r.columns = {"System", "NoEdit", "Minor", "Major", "NoEdit %", "Minor %", "Major %", "Segments"};
  nlohmann::json systems = nlohmann::json::array();
  for (const auto& d : distributions) {
    std::vector<std::string> row = {d.system_id};
    nlohmann::json counts = nlohmann::json::object();
    nlohmann::json percent = nlohmann::json::object();
    for (Bucket b : kBuckets) {
      row.push_back(std::to_string(d.count(b)));
      counts[std::string(to_string(b))] = d.count(b);
    }
    std::int64_t sum = 0;
    for (Bucket b : kBuckets) {
      std::int64_t p = round_percent(d.percentage(b));
      sum += p;
      row.push_back(std::to_string(p));
      percent[std::string(to_string(b))] = std::to_string(p);
    }
    row.push_back(std::to_string(d.total_segments));
    r.rows.push_back(std::move(row));
    if (d.total_segments > 0 && sum != 100) {
      r.notes.push_back(d.system_id + ": rounded percentages sum to " + std::to_string(sum));
    }
    systems.push_back({{"system_id", d.system_id},
                       {"total_segments", d.total_segments},
                       {"counts", counts},
                       {"percent", percent},
                       {"percent_sum", std::to_string(sum)}});
  }
  r.data = base_data(r.kind);
  r.data["systems"] = systems;
  return r;
}

Report build_pattern_report(std::span<const CategoryTotals> totals) {
  Report r;
  r.kind = ReportKind::Pattern;
  r.title = "Error scores by category (ADP weighted)";
  r.columns = {"System"};
  for (ErrorCategory c : kCategories) r.columns.push_back(std::string(to_string(c)));
  r.columns.push_back("Total");
  for (ErrorCategory c : kCategories) r.columns.push_back(std::string(to_string(c)) + " %");
  r.columns.push_back("TRM+GSMIS %");

  nlohmann::json systems = nlohmann::json::array();
  for (const auto& t : totals) {
    std::vector<std::string> row = {t.system_id};
    nlohmann::json scores = nlohmann::json::object();
    nlohmann::json shares = nlohmann::json::object();
    for (ErrorCategory c : kCategories) {
      std::string v = format_decimal(t[c], 2);
      row.push_back(v);
      scores[std::string(to_string(c))] = v;
    }
    std::string grand = format_decimal(t.grand_total, 2);
    row.push_back(grand);

    std::string dominant = "n/a";
    if (t.grand_total == Rational(0)) {
      for (ErrorCategory c : kCategories) {
        row.push_back("n/a");
        shares[std::string(to_string(c))] = "n/a";
      }
    } else {
      std::int64_t sum = 0;
      for (ErrorCategory c : kCategories) {
        std::int64_t p = round_percent(t[c] * 100 / t.grand_total);
        sum += p;
        row.push_back(std::to_string(p));
        shares[std::string(to_string(c))] = std::to_string(p);
      }
      if (sum != 100) {
        r.notes.push_back(t.system_id + ": rounded category shares sum to " + std::to_string(sum));
      }
      Rational semantic = t[ErrorCategory::TRM] + t[ErrorCategory::GSMIS];
      dominant = std::to_string(round_percent(semantic * 100 / t.grand_total));
    }
    row.push_back(dominant);
    r.rows.push_back(std::move(row));

    Rational mt = t[ErrorCategory::PRN] + t[ErrorCategory::TRM] + t[ErrorCategory::GSMIS];
    systems.push_back({{"system_id", t.system_id},
                       {"scores", scores},
                       {"groups",
                        {{"Fluency", format_decimal(t[ErrorCategory::FLU], 2)},
                         {"MeaningTransfer", format_decimal(mt, 2)},
                         {"Adaptation", format_decimal(t[ErrorCategory::ADP], 2)}}},
                       {"grand_total", grand},
                       {"grand_total_exact", rational_to_string(t.grand_total)},
                       {"share_percent", shares},
                       {"trm_gsmis_share_percent", dominant}});
  }
  r.data = base_data(r.kind);
  r.data["systems"] = systems;
  return r;
}

Report build_totals_report(std::span<const CategoryTotals> totals) {
  Report r;
  r.kind = ReportKind::Totals;
  r.title = "Accumulated error scores";
  r.columns = {"System", "Fluency", "Meaning Transfer", "Adaptation", "Total", "Rank"};

  // Rank 1 is the lowest accumulated score; ties share a rank.
  std::vector<std::size_t> rank(totals.size(), 1);
  for (std::size_t i = 0; i < totals.size(); ++i) {
    for (const auto& other : totals) {
      if (other.grand_total < totals[i].grand_total) ++rank[i];
    }
  }

  nlohmann::json systems = nlohmann::json::array();
  for (std::size_t i = 0; i < totals.size(); ++i) {
    const auto& t = totals[i];
    Rational mt = t[ErrorCategory::PRN] + t[ErrorCategory::TRM] + t[ErrorCategory::GSMIS];
    std::string flu = format_decimal(t[ErrorCategory::FLU], 2);
    std::string mts = format_decimal(mt, 2);
    std::string adp = format_decimal(t[ErrorCategory::ADP], 2);
    std::string grand = format_decimal(t.grand_total, 2);
    r.rows.push_back({t.system_id, flu, mts, adp, grand, std::to_string(rank[i])});
    systems.push_back({{"system_id", t.system_id},
                       {"groups", {{"Fluency", flu}, {"MeaningTransfer", mts}, {"Adaptation", adp}}},
                       {"grand_total", grand},
                       {"grand_total_exact", rational_to_string(t.grand_total)},
                       {"rank", rank[i]}});
  }
  r.data = base_data(r.kind);
  r.data["systems"] = systems;
  return r;
}

Report build_agreement_report(const AgreementTable& table) {
  Report r;
  r.kind = ReportKind::Agreement;
  r.title = "Quadratic weighted kappa by error type";
  r.columns = {"Error Type"};
  for (const auto& s : table.systems) r.columns.push_back(s);
  nlohmann::json rows = nlohmann::json::array();
  for (Dimension d : kDimensions) {
    std::vector<std::string> row = {std::string(display_name(d))};
    for (const auto& s : table.systems) {
      const AgreementRow* cell = table.find(d, s);
      std::optional<double> kappa = cell ? cell->kappa : std::nullopt;
      std::string value = kappa_text(kappa);
      std::string band = kappa ? std::string(to_string(arahope::band(*kappa))) : "";
      row.push_back(kappa ? value + " (" + band + ")" : value);
      nlohmann::json j = {{"dimension", std::string(to_string(d))},
                          {"system_id", s},
                          {"kappa", kappa ? nlohmann::json(value) : nlohmann::json(nullptr)},
                          {"band", kappa ? nlohmann::json(band) : nlohmann::json(nullptr)},
                          {"items", cell ? cell->items : 0}};
      rows.push_back(std::move(j));
    }
    r.rows.push_back(std::move(row));
  }
  if (!table.excluded.empty()) {
    r.notes.push_back(std::to_string(table.excluded.size()) +
                      " item(s) excluded: not annotated by both annotators");
  }
  r.data = base_data(r.kind);
  r.data["annotators"] = {table.annotator_a, table.annotator_b};
  r.data["systems"] = table.systems;
  r.data["cells"] = rows;
  nlohmann::json excluded = nlohmann::json::array();
  for (const auto& e : table.excluded) {
    excluded.push_back({{"system_id", e.system_id},
                        {"segment_id", e.segment_id},
                        {"missing_annotator", e.missing_annotator}});
  }
  r.data["excluded"] = excluded;
  return r;
}

Report segments_report(const Project& project, const ScoringConfig& cfg) {
  std::vector<SegmentScore> all;
  for (const auto& system : project.systems()) {
    auto scores = segment_scores(project, system, cfg);
    all.insert(all.end(), scores.begin(), scores.end());
  }
  return build_segments_report(all);
}

Report severity_report(const Project& project, const ScoringConfig& cfg) {
  std::vector<SeverityDistribution> dists;
  for (const auto& system : project.systems()) {
    dists.push_back(severity_distribution(project, system, cfg));
  }
  return build_severity_report(dists);
}

Report pattern_report(const Project& project, const ScoringConfig& cfg) {
  std::vector<CategoryTotals> totals;
  for (const auto& system : project.systems()) totals.push_back(category_totals(project, system, cfg));
  return build_pattern_report(totals);
}

Report totals_report(const Project& project, const ScoringConfig& cfg) {
  std::vector<CategoryTotals> totals;
  for (const auto& system : project.systems()) totals.push_back(category_totals(project, system, cfg));
  return build_totals_report(totals);
}

Report agreement_report(const Project& project, const ScoringConfig& cfg) {
  return build_agreement_report(agreement_table(project, cfg));
}

Report build_report(ReportKind kind, const Project& project, const ScoringConfig& cfg) {
  switch (kind) {
    case ReportKind::Segments: return segments_report(project, cfg);
    case ReportKind::Severity: return severity_report(project, cfg);
    case ReportKind::Pattern: return pattern_report(project, cfg);
    case ReportKind::Totals: return totals_report(project, cfg);
    case ReportKind::Agreement: return agreement_report(project, cfg);
  }
  throw Error(ErrorCode::BadRequest, "unknown report kind");
}

}  // namespace arahope
