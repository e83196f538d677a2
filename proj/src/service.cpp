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

#include "arahope/service.hpp"

#include <iostream>
#include <regex>

#include <httplib.h>

#include "arahope/error.hpp"
#include "arahope/ingestion.hpp"
#include "arahope/reports.hpp"

namespace arahope {

namespace {

constexpr std::string_view kProjectSuffix = ".arahope.json";

bool usable_name(const std::string& name) {
  static const std::regex pattern("[A-Za-z0-9][A-Za-z0-9._-]{0,127}");
  return std::regex_match(name, pattern);
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound:
    case ErrorCode::UnknownReference:
    case ErrorCode::UnknownSystem:
    case ErrorCode::UnknownAnnotator: return 404;
    case ErrorCode::Conflict:
    case ErrorCode::DuplicateId:
    case ErrorCode::DuplicateRevision:
    case ErrorCode::StaleRevision:
    case ErrorCode::MissingAnnotations:
    case ErrorCode::NeedExactlyTwoAnnotators:
    case ErrorCode::NoSharedItems: return 409;
    case ErrorCode::BadRequest:
    case ErrorCode::BadHeader:
    case ErrorCode::EncodingError: return 400;
    case ErrorCode::IoError:
    case ErrorCode::CorruptFile:
    case ErrorCode::VersionMismatch: return 500;
    default: return 422;
  }
}

nlohmann::json segment_json(const Segment& s) {
  return {{"id", s.id}, {"source_da", s.source_da}, {"gold_msa", s.gold_msa}};
}

nlohmann::json output_json(const SystemOutput& o) {
  return {{"segment_id", o.segment_id}, {"system_id", o.system_id}, {"hypothesis", o.hypothesis}};
}

nlohmann::json metadata(const Project& p) {
  const ScoringConfig& cfg = p.config();
  return {{"name", p.name()},
          {"segments", p.segments().size()},
          {"outputs", p.outputs().size()},
          {"systems", p.systems()},
          {"annotators", p.annotators()},
          {"annotations", p.annotations().size()},
          {"taxonomy_version", p.taxonomy().version()},
          {"config",
           {{"adp_weight", rational_to_string(cfg.adp_weight)},
            {"minor_upper", rational_to_string(cfg.minor_upper)},
            {"min_project_size", cfg.min_project_size},
            {"aggregation", std::string(to_string(cfg.aggregation))},
            {"meaning_transfer", std::string(to_string(cfg.meaning_transfer))}}},
          {"below_min_project_size", p.segments().size() < cfg.min_project_size}};
}

nlohmann::json view_json(const ProjectService::SessionView& v) {
  return {{"session_id", v.session_id}, {"state", state_to_json(v.state)}};
}

}  // namespace

std::filesystem::path project_file_name(const std::string& name) {
  return name + std::string(kProjectSuffix);
}

ProjectService::ProjectService(std::filesystem::path data_dir) : data_dir_(std::move(data_dir)) {}

void ProjectService::load_data_dir() {
  std::error_code ec;
  if (!std::filesystem::is_directory(data_dir_, ec)) return;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(data_dir_)) {
    std::string file = entry.path().filename().string();
    if (file.size() > kProjectSuffix.size() && file.ends_with(kProjectSuffix)) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) open_project_file(f);
}

void ProjectService::open_project_file(const std::filesystem::path& path) {
  auto project = std::make_shared<const Project>(load_project(path));
  std::lock_guard lock(registry_);
  if (projects_.count(project->name())) {
    throw Error(ErrorCode::Conflict, "project '" + project->name() + "' is already open");
  }
  auto slot = std::make_unique<Slot>();
  slot->path = path;
  slot->current = project;
  projects_.emplace(project->name(), std::move(slot));
}

std::shared_ptr<const Project> ProjectService::create(Project project) {
  if (!usable_name(project.name())) {
    throw Error(ErrorCode::BadRequest,
                "project name must match [A-Za-z0-9][A-Za-z0-9._-]*, got '" + project.name() + "'");
  }
  std::lock_guard lock(registry_);
  if (projects_.count(project.name())) {
    throw Error(ErrorCode::Conflict, "project '" + project.name() + "' already exists",
                {{"name", project.name()}});
  }
  std::filesystem::create_directories(data_dir_);
  auto path = data_dir_ / project_file_name(project.name());
  if (std::filesystem::exists(path)) {
    throw Error(ErrorCode::Conflict, "project file " + path.string() + " already exists");
  }
  save_project(project, path);
  auto slot = std::make_unique<Slot>();
  slot->path = path;
  slot->current = std::make_shared<const Project>(std::move(project));
  auto current = slot->current;
  projects_.emplace(current->name(), std::move(slot));
  return current;
}

ProjectService::Slot& ProjectService::slot(const std::string& name) const {
  std::lock_guard lock(registry_);
  auto it = projects_.find(name);
  if (it == projects_.end()) {
    throw Error(ErrorCode::NotFound, "no project named '" + name + "'", {{"name", name}});
  }
  return *it->second;
}

std::shared_ptr<const Project> ProjectService::snapshot(const std::string& name) const {
  return slot(name).read();
}

std::vector<std::string> ProjectService::project_names() const {
  std::lock_guard lock(registry_);
  std::vector<std::string> names;
  for (const auto& [name, _] : projects_) names.push_back(name);
  return names;
}

template <typename Fn>
auto ProjectService::mutate(const std::string& name, Fn&& fn) {
  Slot& s = slot(name);
  std::lock_guard lock(s.write);
  Project copy = *s.read();
  auto result = fn(copy);
  save_project(copy, s.path);
  auto next = std::make_shared<const Project>(std::move(copy));
  std::lock_guard publish(s.publish);
  s.current = std::move(next);
  return result;
}

std::optional<std::pair<Segment, SystemOutput>> ProjectService::next_item(
    const std::string& project, const std::string& annotator) const {
  auto p = snapshot(project);
  if (!p->has_annotator(annotator)) {
    throw Error(ErrorCode::UnknownAnnotator, "unknown annotator '" + annotator + "'",
                {{"annotator_id", annotator}});
  }
  for (const auto& system : p->systems()) {
    for (const SystemOutput* output : p->outputs_for(system)) {
      if (p->latest_revision({annotator, output->segment_id, system}) > 0) continue;
      return std::make_pair(*p->find_segment(output->segment_id), *output);
    }
  }
  return std::nullopt;
}

ProjectService::SessionView ProjectService::start_session(const std::string& project,
                                                          const std::string& annotator,
                                                          const std::string& segment_id,
                                                          const std::string& system_id,
                                                          const std::vector<TrailEntry>& trail) {
  auto p = snapshot(project);
  if (!p->has_annotator(annotator)) {
    throw Error(ErrorCode::UnknownAnnotator, "unknown annotator '" + annotator + "'",
                {{"annotator_id", annotator}});
  }
  const Segment* segment = p->find_segment(segment_id);
  if (!segment) throw Error(ErrorCode::NotFound, "unknown segment '" + segment_id + "'");
  const SystemOutput* output = p->find_output(segment_id, system_id);
  if (!output) {
    throw Error(ErrorCode::NotFound,
                "no output of system '" + system_id + "' for segment '" + segment_id + "'");
  }
  Session session{project, replay(p->taxonomy(), *segment, *output, annotator, trail),
                  p->latest_revision({annotator, segment_id, system_id}), false};
  std::lock_guard lock(sessions_mutex_);
  std::string id = "session-" + std::to_string(next_session_++);
  sessions_.emplace(id, session);
  return {id, session.state};
}

ProjectService::SessionView ProjectService::session(const std::string& project,
                                                    const std::string& session_id) const {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end() || it->second.project != project) {
    throw Error(ErrorCode::NotFound, "no session '" + session_id + "'");
  }
  return {session_id, it->second.state};
}

ProjectService::SessionView ProjectService::answer(const std::string& project,
                                                   const std::string& session_id,
                                                   const Response& response) {
  std::lock_guard lock(sessions_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end() || it->second.project != project) {
    throw Error(ErrorCode::NotFound, "no session '" + session_id + "'");
  }
  it->second.state = arahope::answer(it->second.state, response);
  return {session_id, it->second.state};
}

Annotation ProjectService::finalize(const std::string& project, const std::string& session_id) {
  Session session = [&] {
    std::lock_guard lock(sessions_mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end() || it->second.project != project) {
      throw Error(ErrorCode::NotFound, "no session '" + session_id + "'");
    }
    return it->second;
  }();
  if (session.finalized) {
    throw Error(ErrorCode::StaleRevision, "session '" + session_id + "' was already submitted");
  }
  Annotation draft = arahope::finalize(session.state);
  Annotation stored = mutate(project, [&](Project& p) {
    std::int64_t latest = p.latest_revision(draft.key());
    if (latest != session.base_revision) {
      throw Error(ErrorCode::StaleRevision,
                  "another revision was stored since session '" + session_id + "' started",
                  {{"latest_revision", latest}, {"base_revision", session.base_revision}});
    }
    Annotation a = draft;
    a.revision = latest + 1;
    p.append(a);
    return a;
  });
  std::lock_guard lock(sessions_mutex_);
  sessions_.at(session_id).finalized = true;
  return stored;
}

Annotation ProjectService::submit(const std::string& project, Annotation annotation,
                                  bool explicit_revision) {
  ValidationResult check = check_annotation(annotation);
  for (const auto& v : check.violations) {
    if (v.rule == Rule::AdpDespiteMeaningTransfer) {
      throw Error(ErrorCode::GatingViolation, v.message);
    }
  }
  return mutate(project, [&](Project& p) {
    std::int64_t latest = p.latest_revision(annotation.key());
    if (!explicit_revision) {
      annotation.revision = latest + 1;
    } else if (annotation.revision <= latest) {
      throw Error(ErrorCode::StaleRevision,
                  "revision " + std::to_string(annotation.revision) + " is not newer than " +
                      std::to_string(latest),
                  {{"latest_revision", latest}});
    }
    p.append(annotation);
    return annotation;
  });
}

void ProjectService::add_annotator(const std::string& project, const std::string& annotator) {
  mutate(project, [&](Project& p) {
    p.add_annotator(annotator);
    return 0;
  });
}

nlohmann::json ProjectService::import_corpus(const std::string& project, const std::string& text) {
  return mutate(project, [&](Project& p) {
    CorpusImport result = arahope::import_corpus(text, p);
    return nlohmann::json{{"segments_added", result.segments_added},
                          {"outputs_added", result.outputs_added}};
  });
}

nlohmann::json ProjectService::progress(const std::string& project) const {
  auto p = snapshot(project);
  std::size_t total = p->outputs().size();
  nlohmann::json annotators = nlohmann::json::array();
  for (const auto& annotator : p->annotators()) {
    std::size_t done = 0;
    for (const auto& o : p->outputs()) {
      if (p->latest_revision({annotator, o.segment_id, o.system_id}) > 0) ++done;
    }
    std::int64_t percent =
        total == 0 ? 0
                   : round_percent(Rational(static_cast<std::int64_t>(done) * 100,
                                            static_cast<std::int64_t>(total)));
    annotators.push_back(
        {{"annotator_id", annotator}, {"completed", done}, {"total", total}, {"percent", percent}});
  }
  return {{"project", p->name()}, {"items", total}, {"annotators", annotators}};
}

void ProjectService::mount(httplib::Server& server) {
  using httplib::Request;
  using httplib::Response;

  auto send_json = [](Response& res, const nlohmann::json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
  };
  auto guarded = [send_json](auto fn) {
    return [fn, send_json](const Request& req, Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_json(res, e.to_json(), status_for(e.code()));
      } catch (const nlohmann::json::exception& e) {
        send_json(res, Error(ErrorCode::BadRequest, e.what()).to_json(), 400);
      }
    };
  };
  auto body_json = [](const Request& req) {
    if (req.body.empty()) return nlohmann::json::object();
    nlohmann::json j = nlohmann::json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorCode::BadRequest, "request body must be a JSON object");
    }
    return j;
  };
  auto annotator_of = [](const Request& req, const nlohmann::json& body) {
    if (body.contains("annotator_id") && body["annotator_id"].is_string()) {
      return body["annotator_id"].get<std::string>();
    }
    if (req.has_param("annotator")) return req.get_param_value("annotator");
    if (req.has_header("X-Annotator-Id")) return req.get_header_value("X-Annotator-Id");
    throw Error(ErrorCode::BadRequest, "annotator id missing (X-Annotator-Id header)");
  };
  auto string_field = [](const nlohmann::json& body, const char* key) {
    if (!body.contains(key) || !body[key].is_string()) {
      throw Error(ErrorCode::BadRequest, std::string("field '") + key + "' is required");
    }
    return body[key].get<std::string>();
  };
  const std::string P = "/projects/([A-Za-z0-9._-]+)";

  server.Get("/health", [send_json](const Request&, Response& res) {
    send_json(res, {{"status", "ok"}});
  });

  server.Get("/projects", guarded([this, send_json](const Request&, Response& res) {
    send_json(res, {{"projects", project_names()}});
  }));

  server.Post("/projects", guarded([this, send_json, body_json, string_field](const Request& req,
                                                                            Response& res) {
    nlohmann::json body = body_json(req);
    Project project(string_field(body, "name"));
    if (body.contains("config")) {
      ScoringConfig cfg;
      const auto& c = body["config"];
      if (c.contains("adp_weight")) {
        auto w = parse_rational(c["adp_weight"].get<std::string>());
        if (!w) throw Error(ErrorCode::InvalidConfig, "bad adp_weight");
        cfg.adp_weight = *w;
      }
      if (c.contains("minor_upper")) {
        auto u = parse_rational(c["minor_upper"].get<std::string>());
        if (!u) throw Error(ErrorCode::InvalidConfig, "bad minor_upper");
        cfg.minor_upper = *u;
      }
      project.set_config(cfg);
    }
    if (body.contains("corpus")) arahope::import_corpus(body["corpus"].get<std::string>(), project);
    if (body.contains("annotators")) {
      for (const auto& a : body["annotators"]) project.add_annotator(a.get<std::string>());
    }
    send_json(res, metadata(*create(std::move(project))), 201);
  }));

  server.Get(P, guarded([this, send_json](const Request& req, Response& res) {
    send_json(res, metadata(*snapshot(req.matches[1])));
  }));

  server.Get(P + "/segments", guarded([this, send_json](const Request& req, Response& res) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : snapshot(req.matches[1])->segments()) out.push_back(segment_json(s));
    send_json(res, {{"segments", out}});
  }));

  server.Get(P + "/systems", guarded([this, send_json](const Request& req, Response& res) {
    send_json(res, {{"systems", snapshot(req.matches[1])->systems()}});
  }));

  server.Get(P + "/annotators", guarded([this, send_json](const Request& req, Response& res) {
    send_json(res, {{"annotators", snapshot(req.matches[1])->annotators()}});
  }));

  server.Post(P + "/annotators",
              guarded([this, send_json, body_json, string_field](const Request& req, Response& res) {
                add_annotator(req.matches[1], string_field(body_json(req), "annotator_id"));
                send_json(res, {{"annotators", snapshot(req.matches[1])->annotators()}}, 201);
              }));

  server.Post(P + "/corpus", guarded([this, send_json](const Request& req, Response& res) {
    send_json(res, import_corpus(req.matches[1], req.body), 201);
  }));

  server.Get(P + "/tree", guarded([this, send_json](const Request& req, Response& res) {
    send_json(res, tree_to_json(snapshot(req.matches[1])->taxonomy()));
  }));

  server.Get(P + "/next-item",
             guarded([this, send_json, annotator_of](const Request& req, Response& res) {
               auto item = next_item(req.matches[1], annotator_of(req, nlohmann::json::object()));
               if (!item) {
                 send_json(res, {{"done", true}});
                 return;
               }
               send_json(res, {{"done", false},
                               {"segment", segment_json(item->first)},
                               {"output", output_json(item->second)}});
             }));

  server.Post(P + "/session/start", guarded([this, send_json, body_json, annotator_of,
                                             string_field](const Request& req, Response& res) {
    nlohmann::json body = body_json(req);
    std::vector<TrailEntry> trail;
    if (body.contains("trail")) trail = trail_from_json(body["trail"]);
    auto view = start_session(req.matches[1], annotator_of(req, body),
                              string_field(body, "segment_id"), string_field(body, "system_id"), trail);
    send_json(res, view_json(view), 201);
  }));

  server.Get(P + "/session/([A-Za-z0-9-]+)",
             guarded([this, send_json](const Request& req, Response& res) {
               send_json(res, view_json(session(req.matches[1], req.matches[2])));
             }));

  server.Post(P + "/session/answer", guarded([this, send_json, body_json,
                                              string_field](const Request& req, Response& res) {
    nlohmann::json body = body_json(req);
    auto response = parse_response(string_field(body, "response"));
    if (!response) throw Error(ErrorCode::BadRequest, "response must be yes, no, 1 or 2");
    send_json(res, view_json(answer(req.matches[1], string_field(body, "session_id"), *response)));
  }));

  server.Post(P + "/session/finalize", guarded([this, send_json, body_json,
                                                string_field](const Request& req, Response& res) {
    nlohmann::json body = body_json(req);
    Annotation a = finalize(req.matches[1], string_field(body, "session_id"));
    send_json(res, {{"annotation", annotation_to_json(a)}}, 201);
  }));

  server.Post(P + "/annotations",
              guarded([this, send_json, body_json, annotator_of](const Request& req, Response& res) {
                nlohmann::json body = body_json(req);
                if (!body.contains("annotator_id")) body["annotator_id"] = annotator_of(req, body);
                bool explicit_revision = body.contains("revision");
                Annotation a = submit(req.matches[1], annotation_from_json(body), explicit_revision);
                send_json(res, {{"annotation", annotation_to_json(a)}}, 201);
              }));

  server.Get(P + "/annotations", guarded([this, send_json](const Request& req, Response& res) {
    auto p = snapshot(req.matches[1]);
    nlohmann::json out = nlohmann::json::array();
    if (req.has_param("authoritative")) {
      for (const auto& [key, a] : authoritative_annotations(*p)) out.push_back(annotation_to_json(a));
    } else {
      for (const auto& a : p->annotations()) out.push_back(annotation_to_json(a));
    }
    send_json(res, {{"annotations", out}});
  }));

  server.Get(P + "/progress", guarded([this, send_json](const Request& req, Response& res) {
    send_json(res, progress(req.matches[1]));
  }));

  server.Get(P + "/export-sheet", guarded([this](const Request& req, Response& res) {
    auto p = snapshot(req.matches[1]);
    res.set_content(export_sheet(*p, req.get_param_value("system"), req.get_param_value("annotator")),
                    "text/tab-separated-values; charset=utf-8");
  }));

  server.Get(P + "/reports/([a-z]+)", guarded([this](const Request& req, Response& res) {
    auto kind = parse_report_kind(req.matches[2].str());
    if (!kind) throw Error(ErrorCode::NotFound, "unknown report kind '" + req.matches[2].str() + "'");
    OutputFormat format = OutputFormat::Structured;
    if (req.has_param("format")) {
      auto f = parse_output_format(req.get_param_value("format"));
      if (!f) throw Error(ErrorCode::BadRequest, "format must be text, delimited or structured");
      format = *f;
    }
    auto p = snapshot(req.matches[1]);
    std::string body = render(build_report(*kind, *p, p->config()), format);
    res.set_content(body, format == OutputFormat::Structured ? "application/json"
                                                               : "text/plain; charset=utf-8");
  }));
}

int serve(const ServeOptions& options) {
  ProjectService service(options.data_dir);
  service.load_data_dir();
  if (options.project_file) {
    auto names = service.project_names();
    Project probe = load_project(*options.project_file);
    if (std::find(names.begin(), names.end(), probe.name()) == names.end()) {
      service.open_project_file(*options.project_file);
    }
  }
  httplib::Server server;
  service.mount(server);
  if (!server.bind_to_port(options.host, options.port)) {
    std::cerr << "error: cannot listen on " << options.host << ":" << options.port << "\n";
    return 1;
  }
  std::cerr << "listening on " << options.host << ":" << options.port << "\n";
  return server.listen_after_bind() ? 0 : 1;
}

}  // namespace arahope
