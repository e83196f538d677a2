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
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "arahope/error.hpp"
#include "arahope/project.hpp"

namespace arahope {

enum class Delimiter : char { Tab = '\t', Comma = ',' };

// Sheet header, bit-exact: DA GOLD MT FLU PRN TRM GSMIS ADP TOTAL.
inline constexpr std::array<std::string_view, 9> kSheetHeader = {
    "DA", "GOLD", "MT", "FLU", "PRN", "TRM", "GSMIS", "ADP", "TOTAL"};

struct Record {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

// Splits delimiter-separated text into records, skipping blank lines.
// Fields may be quoted with '"' (doubled inside) and then span lines.
// A leading UTF-8 BOM and CRLF line ends are accepted. Throws EncodingError
// for invalid UTF-8 and BadHeader for an unterminated quote.
std::vector<Record> read_records(std::string_view text, Delimiter delimiter);
std::string write_record(const std::vector<std::string>& fields, Delimiter delimiter);

// Tab when the first line contains a tab, comma otherwise.
Delimiter detect_delimiter(std::string_view text);

bool is_valid_utf8(std::string_view text);

struct RejectedRow {
  std::size_t row = 0;  // 1-based line of the record; the header is row 1
  ErrorCode code = ErrorCode::BadSeverityCell;
  std::string column;  // empty when the whole row is at fault
  std::string reason;
};

struct SheetWarning {
  std::size_t row = 0;
  std::string message;
};

struct SheetImport {
  std::string system_id;
  std::string annotator_id;
  std::vector<Annotation> annotations;
  std::vector<Segment> new_segments;
  std::vector<SystemOutput> new_outputs;
  std::vector<RejectedRow> rejected;
  std::vector<SheetWarning> warnings;
  std::size_t rows_read = 0;  // == annotations.size() + rejected.size()

  // Throws an Error carrying the first rejection's code, row and column.
  void throw_if_rejected() const;
};

// Parses one annotator's sheet for one system against the project without
// modifying it. Segments are matched on the exact (DA, GOLD) pair or
// created; revisions continue from the project's log. Throws BadHeader or
// EncodingError for the whole stream; row problems land in `rejected`.
SheetImport import_sheet(std::string_view text, const std::string& system_id,
                         const std::string& annotator_id, const Project& project);
SheetImport import_sheet(std::istream& in, const std::string& system_id,
                         const std::string& annotator_id, const Project& project);

// Registers system/annotator, adds new segments and outputs, appends the
// accepted annotations.
void apply_import(Project& project, const SheetImport& import);

// One row per corpus segment with an authoritative annotation by the
// annotator. Zero severities are empty cells; TOTAL is SEGS to 2 places.
// Throws UnknownSystem or UnknownAnnotator.
std::string export_sheet(const Project& project, const std::string& system_id,
                         const std::string& annotator_id, Delimiter delimiter = Delimiter::Tab);

struct CorpusImport {
  std::size_t segments_added = 0;
  std::size_t outputs_added = 0;
};

// Header: [ID,] DA, GOLD, then one hypothesis column per system. Existing
// segments (same text pair) are reused. Throws BadHeader, EncodingError,
// Conflict (different MT text for a stored output) or DuplicateId.
CorpusImport import_corpus(std::string_view text, Project& project);

// Versioned project document:
// {"format", "version", "checksum": "sha256:<hex of compact project>", "project"}
inline constexpr int kProjectFormatVersion = 1;

nlohmann::json project_to_json(const Project& project);
// Throws CorruptFile when the body does not describe a valid project.
Project project_from_json(const nlohmann::json& body);

std::string serialize_project(const Project& project);
// Throws CorruptFile (unparsable, checksum mismatch, invalid content) or
// VersionMismatch.
Project parse_project(std::string_view text);

// Atomic replace: writes a sibling temporary file, syncs, renames.
void save_project(const Project& project, const std::filesystem::path& path);
Project load_project(const std::filesystem::path& path);

std::string sha256_hex(std::string_view data);

nlohmann::json annotation_to_json(const Annotation& a);
// Throws BadRequest on malformed input and InvalidSeverity for bad levels.
Annotation annotation_from_json(const nlohmann::json& j);

}  // namespace arahope
