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

#include "arahope/ingestion.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "arahope/scoring.hpp"

namespace arahope {

bool is_valid_utf8(std::string_view text) {
  std::size_t i = 0;
  const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
  while (i < text.size()) {
    unsigned char c = bytes[i];
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= text.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      unsigned char cc = bytes[i + k];
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates and values past U+10FFFF.
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

Delimiter detect_delimiter(std::string_view text) {
  std::string_view first = text.substr(0, text.find('\n'));
  return first.find('\t') != std::string_view::npos ? Delimiter::Tab : Delimiter::Comma;
}

std::vector<Record> read_records(std::string_view text, Delimiter delimiter) {
  if (!is_valid_utf8(text)) throw Error(ErrorCode::EncodingError, "input is not valid UTF-8");
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  const char sep = static_cast<char>(delimiter);

  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // anything seen on this record
  std::size_t line = 1;
  current.line = 1;

  auto finish_record = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    bool blank = current.fields.size() == 1 && current.fields[0].empty() && !field_started;
    if (!blank) records.push_back(std::move(current));
    current = Record{};
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
      field_started = true;
    } else if (c == sep) {
      current.fields.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      continue;
    } else if (c == '\n') {
      finish_record();
      ++line;
      current.line = line;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::BadHeader, "unterminated quoted field starting on line " +
                                          std::to_string(current.line),
                {{"row", current.line}});
  }
  if (field_started || !field.empty()) finish_record();
  return records;
}

std::string write_record(const std::vector<std::string>& fields, Delimiter delimiter) {
  const char sep = static_cast<char>(delimiter);
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += sep;
    const std::string& f = fields[i];
    bool quote = f.find_first_of(std::string{sep, '"', '\n', '\r'}) != std::string::npos;
    if (!quote) {
      out += f;
      continue;
    }
    out += '"';
    for (char c : f) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
  }
  out += '\n';
  return out;
}

void SheetImport::throw_if_rejected() const {
  if (rejected.empty()) return;
  const RejectedRow& r = rejected.front();
  nlohmann::json context = {{"row", r.row}, {"rejected_rows", rejected.size()}};
  if (!r.column.empty()) context["column"] = r.column;
  std::string where = "row " + std::to_string(r.row);
  if (!r.column.empty()) where += ", column " + r.column;
  throw Error(r.code, where + ": " + r.reason, context);
}

namespace {

std::string trim(std::string_view s) {
  auto begin = s.find_first_not_of(" \t");
  if (begin == std::string_view::npos) return "";
  auto end = s.find_last_not_of(" \t");
  return std::string(s.substr(begin, end - begin + 1));
}

std::string read_all(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string next_segment_id(const Project& project, const std::set<std::string>& taken,
                            std::size_t& counter) {
  while (true) {
    std::ostringstream id;
    id << "seg-" << std::setw(4) << std::setfill('0') << ++counter;
    if (!project.find_segment(id.str()) && !taken.count(id.str())) return id.str();
  }
}

}  // namespace

SheetImport import_sheet(std::string_view text, const std::string& system_id,
                         const std::string& annotator_id, const Project& project) {
  if (system_id.empty()) throw Error(ErrorCode::UnknownSystem, "system id is empty");
  if (annotator_id.empty()) throw Error(ErrorCode::UnknownAnnotator, "annotator id is empty");

  auto records = read_records(text, detect_delimiter(text));
  if (records.empty()) throw Error(ErrorCode::BadHeader, "sheet is empty");
  const auto& header = records.front().fields;
  std::vector<std::string> expected(kSheetHeader.begin(), kSheetHeader.end());
  std::vector<std::string> got;
  for (const auto& h : header) got.push_back(trim(h));
  if (got != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : " ") + h;
    throw Error(ErrorCode::BadHeader, "sheet header must be: " + want, {{"row", 1}});
  }

  SheetImport out;
  out.system_id = system_id;
  out.annotator_id = annotator_id;
  std::set<std::string> new_ids;
  std::set<std::string> seen_segments;
  std::size_t counter = project.segments().size();

  for (std::size_t r = 1; r < records.size(); ++r) {
    const Record& record = records[r];
    ++out.rows_read;
    auto reject = [&](ErrorCode code, std::string column, std::string reason) {
      out.rejected.push_back({record.line, code, std::move(column), std::move(reason)});
    };

    std::vector<std::string> fields = record.fields;
    if (fields.size() > kSheetHeader.size()) {
      reject(ErrorCode::BadHeader, "",
             "row has " + std::to_string(fields.size()) + " fields, expected " +
                 std::to_string(kSheetHeader.size()));
      continue;
    }
    fields.resize(kSheetHeader.size());
    const std::string& source = fields[0];
    const std::string& gold = fields[1];
    const std::string& hypothesis = fields[2];
    if (source.empty() || gold.empty()) {
      reject(ErrorCode::InvalidAnnotation, source.empty() ? "DA" : "GOLD", "empty text");
      continue;
    }

    SeverityMap severities;
    bool bad_cell = false;
    for (ErrorCategory c : kCategories) {
      std::size_t col = 3 + index_of(c);
      std::string cell = trim(fields[col]);
      if (cell.empty()) continue;  // empty cell means 0
      std::optional<Severity> s;
      if (cell.size() == 1 && cell[0] >= '0' && cell[0] <= '9') s = Severity::from_level(cell[0] - '0');
      if (!s) {
        reject(ErrorCode::BadSeverityCell, std::string(to_string(c)),
               "severity cell '" + cell + "' is not empty, 0, 1 or 2");
        bad_cell = true;
        break;
      }
      severities.set(c, *s);
    }
    if (bad_cell) continue;
    if (severities.has_meaning_transfer_error() && severities[ErrorCategory::ADP].is_error()) {
      reject(ErrorCode::GatingViolation, "ADP", "ADP assessed despite meaning-transfer error");
      continue;
    }

    std::string segment_id;
    if (const Segment* existing = project.find_segment_by_text(source, gold)) {
      segment_id = existing->id;
    } else {
      auto it = std::find_if(out.new_segments.begin(), out.new_segments.end(),
                             [&](const Segment& s) { return s.source_da == source && s.gold_msa == gold; });
      if (it != out.new_segments.end()) {
        segment_id = it->id;
      } else {
        segment_id = next_segment_id(project, new_ids, counter);
        new_ids.insert(segment_id);
        out.new_segments.push_back({segment_id, source, gold});
      }
    }
    if (!seen_segments.insert(segment_id).second) {
      reject(ErrorCode::DuplicateId, "", "segment repeats an earlier row of this sheet");
      continue;
    }

    const SystemOutput* stored = project.find_output(segment_id, system_id);
    if (stored && stored->hypothesis != hypothesis) {
      reject(ErrorCode::Conflict, "MT", "MT text differs from the stored output of '" + system_id + "'");
      continue;
    }
    if (!stored) out.new_outputs.push_back({segment_id, system_id, hypothesis});

    Annotation a;
    a.annotator_id = annotator_id;
    a.segment_id = segment_id;
    a.system_id = system_id;
    a.severities = severities;
    a.adp_applicable = !severities.has_meaning_transfer_error();
    a.revision = project.latest_revision(a.key()) + 1;

    std::string total = trim(fields[8]);
    if (!total.empty()) {
      Rational computed = segs(a, project.config());
      auto stated = parse_rational(total);
      if (!stated) {
        out.warnings.push_back({record.line, "TOTAL '" + total + "' is not a number"});
      } else if (format_decimal(*stated, 2) != format_decimal(computed, 2)) {
        out.warnings.push_back({record.line, "TOTAL " + total + " differs from computed " +
                                                 format_decimal(computed, 2)});
      }
    }
    out.annotations.push_back(std::move(a));
  }
  return out;
}

SheetImport import_sheet(std::istream& in, const std::string& system_id,
                         const std::string& annotator_id, const Project& project) {
  return import_sheet(read_all(in), system_id, annotator_id, project);
}

void apply_import(Project& project, const SheetImport& import) {
  project.add_system(import.system_id);
  project.add_annotator(import.annotator_id);
  for (const auto& s : import.new_segments) project.add_segment(s);
  for (const auto& o : import.new_outputs) project.add_output(o);
  for (const auto& a : import.annotations) project.append(a);
}

std::string export_sheet(const Project& project, const std::string& system_id,
                         const std::string& annotator_id, Delimiter delimiter) {
  if (!project.has_system(system_id)) {
    throw Error(ErrorCode::UnknownSystem, "unknown system '" + system_id + "'",
                {{"system_id", system_id}});
  }
  if (!project.has_annotator(annotator_id)) {
    throw Error(ErrorCode::UnknownAnnotator, "unknown annotator '" + annotator_id + "'",
                {{"annotator_id", annotator_id}});
  }
  AuthoritativeMap auth = authoritative_annotations(project);
  std::string out =
      write_record(std::vector<std::string>(kSheetHeader.begin(), kSheetHeader.end()), delimiter);
  for (const SystemOutput* output : project.outputs_for(system_id)) {
    auto it = auth.find({annotator_id, output->segment_id, system_id});
    if (it == auth.end()) continue;
    const Annotation& a = it->second;
    const Segment& segment = *project.find_segment(output->segment_id);
    std::vector<std::string> row = {segment.source_da, segment.gold_msa, output->hypothesis};
    for (ErrorCategory c : kCategories) {
      int level = a.severities[c].level();
      row.push_back(level == 0 ? "" : std::to_string(level));
    }
    row.push_back(format_decimal(segs(a, project.config()), 2));
    out += write_record(row, delimiter);
  }
  return out;
}

CorpusImport import_corpus(std::string_view text, Project& project) {
  auto records = read_records(text, detect_delimiter(text));
  if (records.empty()) throw Error(ErrorCode::BadHeader, "corpus is empty");
  std::vector<std::string> header;
  for (const auto& h : records.front().fields) header.push_back(trim(h));
  std::size_t offset = (!header.empty() && header[0] == "ID") ? 1 : 0;
  if (header.size() < offset + 2 || header[offset] != "DA" || header[offset + 1] != "GOLD") {
    throw Error(ErrorCode::BadHeader, "corpus header must be [ID,] DA, GOLD, <system>...",
                {{"row", 1}});
  }
  std::vector<std::string> systems(header.begin() + static_cast<std::ptrdiff_t>(offset + 2),
                                   header.end());
  for (const auto& s : systems) {
    if (s.empty()) throw Error(ErrorCode::BadHeader, "empty system column name", {{"row", 1}});
  }

  // Work on a copy so a failing row leaves the project untouched.
  Project staged = project;
  CorpusImport result;
  std::size_t counter = staged.segments().size();
  for (std::size_t r = 1; r < records.size(); ++r) {
    const Record& record = records[r];
    std::vector<std::string> fields = record.fields;
    if (fields.size() > header.size()) {
      throw Error(ErrorCode::BadHeader, "row " + std::to_string(record.line) + " has too many fields",
                  {{"row", record.line}});
    }
    fields.resize(header.size());
    std::string id = offset ? trim(fields[0]) : "";
    const std::string& source = fields[offset];
    const std::string& gold = fields[offset + 1];
    if (source.empty() || gold.empty()) {
      throw Error(ErrorCode::InvalidAnnotation,
                  "row " + std::to_string(record.line) + ": empty DA or GOLD text",
                  {{"row", record.line}});
    }
    std::string segment_id;
    if (const Segment* existing = staged.find_segment_by_text(source, gold)) {
      segment_id = existing->id;
    } else {
      segment_id = id.empty() ? next_segment_id(staged, {}, counter) : id;
      staged.add_segment({segment_id, source, gold});
      ++result.segments_added;
    }
    for (std::size_t s = 0; s < systems.size(); ++s) {
      const std::string& hypothesis = fields[offset + 2 + s];
      if (const SystemOutput* stored = staged.find_output(segment_id, systems[s])) {
        if (stored->hypothesis != hypothesis) {
          throw Error(ErrorCode::Conflict,
                      "row " + std::to_string(record.line) + ": output of '" + systems[s] +
                          "' differs from the stored one",
                      {{"row", record.line}, {"system_id", systems[s]}});
        }
        continue;
      }
      staged.add_output({segment_id, systems[s], hypothesis});
      ++result.outputs_added;
    }
  }
  for (const auto& s : systems) staged.add_system(s);
  project = std::move(staged);
  return result;
}

nlohmann::json annotation_to_json(const Annotation& a) {
  nlohmann::json severities = nlohmann::json::object();
  for (ErrorCategory c : kCategories) severities[std::string(to_string(c))] = a.severities[c].level();
  return {{"annotator_id", a.annotator_id}, {"segment_id", a.segment_id},
          {"system_id", a.system_id},       {"severities", severities},
          {"adp_applicable", a.adp_applicable}, {"revision", a.revision}};
}

Annotation annotation_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::BadRequest, "annotation must be an object");
  auto str = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
      throw Error(ErrorCode::BadRequest, std::string("annotation needs string field ") + key);
    }
    return j[key].get<std::string>();
  };
  Annotation a;
  a.annotator_id = str("annotator_id");
  a.segment_id = str("segment_id");
  a.system_id = str("system_id");
  if (j.contains("severities")) {
    const auto& sev = j["severities"];
    if (!sev.is_object()) throw Error(ErrorCode::BadRequest, "severities must be an object");
    for (auto it = sev.begin(); it != sev.end(); ++it) {
      auto c = parse_category(it.key());
      if (!c) throw Error(ErrorCode::BadRequest, "unknown category '" + it.key() + "'");
      if (!it.value().is_number_integer()) {
        throw Error(ErrorCode::InvalidSeverity, "severity of " + it.key() + " must be an integer");
      }
      // Absent categories stay 0.
      a.severities.set(*c, Severity::checked(it.value().get<int>()));
    }
  }
  if (j.contains("adp_applicable")) {
    if (!j["adp_applicable"].is_boolean()) {
      throw Error(ErrorCode::BadRequest, "adp_applicable must be a boolean");
    }
    a.adp_applicable = j["adp_applicable"].get<bool>();
  } else {
    a.adp_applicable = !a.severities.has_meaning_transfer_error();
  }
  if (j.contains("revision")) {
    if (!j["revision"].is_number_integer()) throw Error(ErrorCode::BadRequest, "revision must be an integer");
    a.revision = j["revision"].get<std::int64_t>();
  }
  return a;
}

nlohmann::json project_to_json(const Project& p) {
  const ScoringConfig& cfg = p.config();
  nlohmann::json segments = nlohmann::json::array();
  for (const auto& s : p.segments()) {
    segments.push_back({{"id", s.id}, {"source_da", s.source_da}, {"gold_msa", s.gold_msa}});
  }
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& o : p.outputs()) {
    outputs.push_back(
        {{"segment_id", o.segment_id}, {"system_id", o.system_id}, {"hypothesis", o.hypothesis}});
  }
  nlohmann::json annotations = nlohmann::json::array();
  for (const auto& a : p.annotations()) annotations.push_back(annotation_to_json(a));
  return {
      {"name", p.name()},
      {"config",
       {{"adp_weight", rational_to_string(cfg.adp_weight)},
        {"minor_upper", rational_to_string(cfg.minor_upper)},
        {"min_project_size", cfg.min_project_size},
        {"aggregation", std::string(to_string(cfg.aggregation))},
        {"focus_annotator", cfg.focus_annotator},
        {"meaning_transfer", std::string(to_string(cfg.meaning_transfer))}}},
      {"taxonomy", tree_to_json(p.taxonomy())},
      {"segments", segments},
      {"systems", p.systems()},
      {"annotators", p.annotators()},
      {"outputs", outputs},
      {"annotations", annotations},
  };
}

Project project_from_json(const nlohmann::json& body) {
  try {
    const auto& c = body.at("config");
    ScoringConfig cfg;
    auto weight = parse_rational(c.at("adp_weight").get<std::string>());
    auto upper = parse_rational(c.at("minor_upper").get<std::string>());
    auto aggregation = parse_aggregation(c.at("aggregation").get<std::string>());
    auto mt = parse_meaning_transfer_level(c.at("meaning_transfer").get<std::string>());
    if (!weight || !upper || !aggregation || !mt) {
      throw Error(ErrorCode::CorruptFile, "unreadable scoring config");
    }
    cfg.adp_weight = *weight;
    cfg.minor_upper = *upper;
    cfg.min_project_size = c.at("min_project_size").get<std::size_t>();
    cfg.aggregation = *aggregation;
    cfg.focus_annotator = c.at("focus_annotator").get<std::string>();
    cfg.meaning_transfer = *mt;

    Project p(body.at("name").get<std::string>(), tree_from_json(body.at("taxonomy")), cfg);
    for (const auto& s : body.at("segments")) {
      p.add_segment({s.at("id").get<std::string>(), s.at("source_da").get<std::string>(),
                     s.at("gold_msa").get<std::string>()});
    }
    for (const auto& s : body.at("systems")) p.add_system(s.get<std::string>());
    for (const auto& a : body.at("annotators")) p.add_annotator(a.get<std::string>());
    for (const auto& o : body.at("outputs")) {
      p.add_output({o.at("segment_id").get<std::string>(), o.at("system_id").get<std::string>(),
                    o.at("hypothesis").get<std::string>()});
    }
    for (const auto& a : body.at("annotations")) p.append(annotation_from_json(a));
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptFile, std::string("malformed project: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptFile) throw;
    throw Error(ErrorCode::CorruptFile, std::string("invalid project content: ") + e.what(),
                e.to_json());
  }
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::IoError, "SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

namespace {
constexpr std::string_view kProjectFormat = "arahope-project";
}

std::string serialize_project(const Project& project) {
  nlohmann::json body = project_to_json(project);
  nlohmann::json doc = {{"format", std::string(kProjectFormat)},
                        {"version", kProjectFormatVersion},
                        {"checksum", "sha256:" + sha256_hex(body.dump())},
                        {"project", std::move(body)}};
  return doc.dump(1) + "\n";
}

Project parse_project(std::string_view text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::CorruptFile, "project file is not a complete document");
  }
  if (doc.value("format", "") != kProjectFormat) {
    throw Error(ErrorCode::CorruptFile, "not an arahope project file");
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer()) {
    throw Error(ErrorCode::CorruptFile, "project file has no version");
  }
  int version = doc["version"].get<int>();
  if (version != kProjectFormatVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "project file version " + std::to_string(version) + " is not supported (expected " +
                    std::to_string(kProjectFormatVersion) + ")",
                {{"version", version}});
  }
  if (!doc.contains("project") || !doc.contains("checksum") || !doc["checksum"].is_string()) {
    throw Error(ErrorCode::CorruptFile, "project file lacks body or checksum");
  }
  std::string expected = "sha256:" + sha256_hex(doc["project"].dump());
  if (doc["checksum"].get<std::string>() != expected) {
    throw Error(ErrorCode::CorruptFile, "project checksum mismatch");
  }
  return project_from_json(doc["project"]);
}

void save_project(const Project& project, const std::filesystem::path& path) {
  std::string data = serialize_project(project);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw Error(ErrorCode::IoError, "cannot write " + tmp.string() + ": " + std::strerror(errno));
  std::size_t written = 0;
  while (written < data.size()) {
    ssize_t n = ::write(fd, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    throw Error(ErrorCode::IoError, "cannot sync " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot replace " + path.string() + ": " + ec.message());
}

Project load_project(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  return parse_project(read_all(in));
}

}  // namespace arahope
