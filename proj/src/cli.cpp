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

#include "arahope/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "arahope/demo.hpp"
#include "arahope/error.hpp"
#include "arahope/ingestion.hpp"
#include "arahope/reports.hpp"
#include "arahope/service.hpp"

namespace arahope {

namespace {

std::filesystem::path resolve(const std::string& path) {
  std::filesystem::path p(path);
  const char* dir = std::getenv("ARAHOPE_DATA_DIR");
  if (p.is_relative() && dir && *dir) return std::filesystem::path(dir) / p;
  return p;
}

std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream buffer;
  if (path == "-") {
    buffer << in.rdbuf();
    return buffer.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot read " + path);
  buffer << file.rdbuf();
  return buffer.str();
}

void print_rejections(const SheetImport& import, std::ostream& err) {
  for (const auto& r : import.rejected) {
    nlohmann::json j = {{"row", r.row}, {"error", std::string(to_string(r.code))}, {"reason", r.reason}};
    if (!r.column.empty()) j["column"] = r.column;
    err << "rejected: " << j.dump() << "\n";
  }
}

void print_warnings(const SheetImport& import, std::ostream& err) {
  for (const auto& w : import.warnings) {
    err << "warning: " << nlohmann::json{{"row", w.row}, {"message", w.message}}.dump() << "\n";
  }
}

ScoringConfig apply_overrides(ScoringConfig cfg, const std::string& adp_weight,
                              const std::string& minor_upper, const std::string& aggregation,
                              const std::string& focus, const std::string& meaning_transfer) {
  if (!adp_weight.empty()) {
    auto w = parse_rational(adp_weight);
    if (!w) throw Error(ErrorCode::InvalidConfig, "cannot parse --adp-weight '" + adp_weight + "'");
    cfg.adp_weight = *w;
  }
  if (!minor_upper.empty()) {
    auto u = parse_rational(minor_upper);
    if (!u) throw Error(ErrorCode::InvalidConfig, "cannot parse --minor-upper '" + minor_upper + "'");
    cfg.minor_upper = *u;
  }
  if (!aggregation.empty()) {
    auto a = parse_aggregation(aggregation);
    if (!a) throw Error(ErrorCode::InvalidConfig, "unknown --aggregation '" + aggregation + "'");
    cfg.aggregation = *a;
  }
  if (!focus.empty()) cfg.focus_annotator = focus;
  if (!meaning_transfer.empty()) {
    auto m = parse_meaning_transfer_level(meaning_transfer);
    if (!m) throw Error(ErrorCode::InvalidConfig, "unknown --meaning-transfer '" + meaning_transfer + "'");
    cfg.meaning_transfer = *m;
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Post-editing error annotation, scoring and agreement for dialectal Arabic MT"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "arahope 1.0.0");

  std::string project_path;
  std::string format_name = "text";
  std::string adp_weight, minor_upper, aggregation, focus, meaning_transfer;
  auto add_scoring_flags = [&](CLI::App* cmd) {
    cmd->add_option("--adp-weight", adp_weight, "Weight of ADP severities in SEGS, e.g. 1/2");
    cmd->add_option("--minor-upper", minor_upper, "Upper SEGS bound of the Minor bucket");
    cmd->add_option("--aggregation", aggregation, "PerAnnotator or MeanAcrossAnnotators");
    cmd->add_option("--focus-annotator", focus, "Annotator scored in PerAnnotator mode");
    cmd->add_option("--meaning-transfer", meaning_transfer, "Max or CappedSum");
  };
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format_name, "text, delimited or structured")
        ->check(CLI::IsMember({"text", "delimited", "structured"}));
  };

  // init
  std::string name, tree_file;
  bool demo = false, force = false;
  auto* init = app.add_subcommand("init", "Create a project file");
  init->add_option("project", project_path, "Project file")->required();
  init->add_option("--name", name, "Project name (defaults to the file stem)");
  init->add_flag("--demo", demo, "Fill with the bundled synthetic demo project");
  init->add_option("--tree", tree_file, "Decision tree file to use instead of the default");
  init->add_flag("--force", force, "Overwrite an existing file");
  add_scoring_flags(init);

  // import-corpus
  std::string input_path;
  auto* import_corpus_cmd = app.add_subcommand("import-corpus", "Add segments and system outputs");
  import_corpus_cmd->add_option("project", project_path, "Project file")->required();
  import_corpus_cmd->add_option("corpus", input_path, "Corpus file or - for stdin")->required();

  // import-sheet / export-sheet
  std::string system_id, annotator_id, output_path, delimiter_name = "tab";
  bool skip_rejected = false;
  auto* import_sheet_cmd = app.add_subcommand("import-sheet", "Import one annotator's sheet");
  import_sheet_cmd->add_option("project", project_path, "Project file")->required();
  import_sheet_cmd->add_option("sheet", input_path, "Sheet file or - for stdin")->required();
  import_sheet_cmd->add_option("--system", system_id, "MT system of the sheet")->required();
  import_sheet_cmd->add_option("--annotator", annotator_id, "Annotator of the sheet")->required();
  import_sheet_cmd->add_flag("--skip-rejected", skip_rejected,
                             "Import the valid rows even when some rows are rejected");

  auto* export_sheet_cmd = app.add_subcommand("export-sheet", "Write one annotator's sheet");
  export_sheet_cmd->add_option("project", project_path, "Project file")->required();
  export_sheet_cmd->add_option("--system", system_id, "MT system")->required();
  export_sheet_cmd->add_option("--annotator", annotator_id, "Annotator")->required();
  export_sheet_cmd->add_option("-o,--output", output_path, "Output file (default stdout)");
  export_sheet_cmd->add_option("--delimiter", delimiter_name, "tab or comma")
      ->check(CLI::IsMember({"tab", "comma"}));

  // validate
  std::string sheet_path;
  auto* validate = app.add_subcommand("validate", "Check a project, or a sheet against a project");
  validate->add_option("project", project_path, "Project file")->required();
  validate->add_option("--sheet", sheet_path, "Sheet to check without importing it");
  validate->add_option("--system", system_id, "MT system of the sheet");
  validate->add_option("--annotator", annotator_id, "Annotator of the sheet");

  // score / agreement / report
  auto* score = app.add_subcommand("score", "Print per-segment SEGS and buckets");
  score->add_option("project", project_path, "Project file")->required();
  add_format(score);
  add_scoring_flags(score);

  auto* agreement = app.add_subcommand("agreement", "Print the quadratic weighted kappa table");
  agreement->add_option("project", project_path, "Project file")->required();
  add_format(agreement);
  add_scoring_flags(agreement);

  std::string kind_name = "all";
  auto* report = app.add_subcommand("report", "Print one report kind or all of them");
  report->add_option("project", project_path, "Project file")->required();
  report->add_option("--kind", kind_name, "segments, severity, pattern, totals, agreement or all")
      ->check(CLI::IsMember({"segments", "severity", "pattern", "totals", "agreement", "all"}));
  add_format(report);
  add_scoring_flags(report);

  // serve
  std::string listen = "127.0.0.1:8080";
  std::string data_dir;
  std::string serve_project;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--listen", listen, "host:port")->envname("ARAHOPE_LISTEN");
  serve_cmd->add_option("--data-dir", data_dir, "Directory of project files")->envname("ARAHOPE_DATA_DIR");
  serve_cmd->add_option("--project", serve_project, "Project file to serve");

  // tree-check
  std::string check_path;
  bool print_default = false;
  auto* tree_check = app.add_subcommand("tree-check", "Validate a decision tree file");
  tree_check->add_option("tree", check_path, "Tree file (default: the built-in tree)");
  tree_check->add_flag("--print-default", print_default, "Print the built-in tree");

  std::vector<std::string> argv_store = {"arahope"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  auto scoring_config = [&](const Project& p) {
    return apply_overrides(p.config(), adp_weight, minor_upper, aggregation, focus, meaning_transfer);
  };
  OutputFormat format = *parse_output_format(format_name);

  try {
    if (init->parsed()) {
      auto path = resolve(project_path);
      if (std::filesystem::exists(path) && !force) {
        throw Error(ErrorCode::Conflict, path.string() + " already exists (use --force)");
      }
      Project project = demo ? demo_project()
                             : Project(name.empty() ? path.stem().stem().string() : name);
      if (demo && !name.empty()) project.rename(name);
      if (!tree_file.empty()) project.set_taxonomy(load_tree_file(tree_file));
      project.set_config(scoring_config(project));
      save_project(project, path);
      out << "created " << path.string() << " (" << project.segments().size() << " segments, "
          << project.systems().size() << " systems, " << project.annotators().size()
          << " annotators, " << project.annotations().size() << " annotations)\n";
      return 0;
    }
    if (import_corpus_cmd->parsed()) {
      auto path = resolve(project_path);
      Project project = load_project(path);
      CorpusImport result = import_corpus(read_input(input_path, in), project);
      save_project(project, path);
      out << "added " << result.segments_added << " segments, " << result.outputs_added
          << " outputs\n";
      return 0;
    }
    if (import_sheet_cmd->parsed()) {
      auto path = resolve(project_path);
      Project project = load_project(path);
      SheetImport import = import_sheet(read_input(input_path, in), system_id, annotator_id, project);
      print_warnings(import, err);
      print_rejections(import, err);
      if (!import.rejected.empty() && !skip_rejected) import.throw_if_rejected();
      apply_import(project, import);
      save_project(project, path);
      out << "imported " << import.annotations.size() << " of " << import.rows_read << " rows ("
          << import.rejected.size() << " rejected, " << import.new_segments.size()
          << " new segments)\n";
      return 0;
    }
    if (export_sheet_cmd->parsed()) {
      Project project = load_project(resolve(project_path));
      std::string text = export_sheet(project, system_id, annotator_id,
                                      delimiter_name == "comma" ? Delimiter::Comma : Delimiter::Tab);
      if (output_path.empty() || output_path == "-") {
        out << text;
      } else {
        std::ofstream file(output_path, std::ios::binary);
        if (!file) throw Error(ErrorCode::IoError, "cannot write " + output_path);
        file << text;
      }
      return 0;
    }
    if (validate->parsed()) {
      Project project = load_project(resolve(project_path));
      if (!sheet_path.empty()) {
        if (system_id.empty() || annotator_id.empty()) {
          throw Error(ErrorCode::BadRequest, "--sheet needs --system and --annotator");
        }
        SheetImport import = import_sheet(read_input(sheet_path, in), system_id, annotator_id, project);
        print_warnings(import, err);
        print_rejections(import, err);
        import.throw_if_rejected();
        out << "ok: " << import.rows_read << " rows valid\n";
        return 0;
      }
      authoritative_annotations(project);
      std::size_t bad = 0;
      for (const auto& a : project.annotations()) {
        ValidationResult r = validate_annotation(a, project);
        if (r.ok()) continue;
        ++bad;
        err << "invalid: "
            << nlohmann::json{{"annotator_id", a.annotator_id},
                              {"segment_id", a.segment_id},
                              {"system_id", a.system_id},
                              {"revision", a.revision},
                              {"message", r.summary()}}
                   .dump()
            << "\n";
      }
      if (project.segments().size() < project.config().min_project_size) {
        err << "warning: " << project.segments().size() << " segments, below the advised minimum of "
            << project.config().min_project_size << "\n";
      }
      if (bad) {
        throw Error(ErrorCode::InvalidAnnotation, std::to_string(bad) + " invalid annotation(s)");
      }
      out << "ok: " << project.annotations().size() << " annotations valid\n";
      return 0;
    }
    if (score->parsed() || agreement->parsed() || report->parsed()) {
      Project project = load_project(resolve(project_path));
      ScoringConfig cfg = scoring_config(project);
      std::vector<ReportKind> kinds;
      if (score->parsed()) {
        kinds = {ReportKind::Segments};
      } else if (agreement->parsed()) {
        kinds = {ReportKind::Agreement};
      } else if (kind_name == "all") {
        kinds.assign(kReportKinds.begin(), kReportKinds.end());
      } else {
        kinds = {*parse_report_kind(kind_name)};
      }
      // Build everything first so a failure prints nothing partial.
      std::vector<std::string> rendered;
      for (ReportKind k : kinds) rendered.push_back(render(build_report(k, project, cfg), format));
      for (std::size_t i = 0; i < rendered.size(); ++i) {
        if (i) out << "\n";
        out << rendered[i];
      }
      return 0;
    }
    if (serve_cmd->parsed()) {
      ServeOptions options;
      auto colon = listen.rfind(':');
      if (colon == std::string::npos) throw Error(ErrorCode::BadRequest, "--listen needs host:port");
      options.host = listen.substr(0, colon);
      options.port = std::stoi(listen.substr(colon + 1));
      options.data_dir = data_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(data_dir);
      if (!serve_project.empty()) options.project_file = resolve(serve_project);
      return serve(options);
    }
    if (tree_check->parsed()) {
      if (print_default) {
        out << serialize_tree(default_tree());
        return 0;
      }
      const DecisionTree tree = check_path.empty() ? default_tree() : load_tree_file(check_path);
      out << "ok: tree '" << tree.version() << "' with " << tree.nodes().size() << " nodes\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.to_json().dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << nlohmann::json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace arahope
