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

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arahope/project.hpp"
#include "arahope/protocol.hpp"

namespace httplib {
class Server;
}

namespace arahope {

// Multi-annotator project host. Each project has a single logical writer:
// mutations run under a per-project lock, persist the whole project
// atomically, then publish a new immutable snapshot that readers share.
class ProjectService {
 public:
  explicit ProjectService(std::filesystem::path data_dir);

  // Loads every *.arahope.json file in the data directory.
  void load_data_dir();
  // Serves an existing project file under its stored name.
  void open_project_file(const std::filesystem::path& path);

  // Throws Conflict for a duplicate name, BadRequest for unusable names.
  std::shared_ptr<const Project> create(Project project);
  // Throws NotFound.
  std::shared_ptr<const Project> snapshot(const std::string& name) const;
  std::vector<std::string> project_names() const;

  // Throws UnknownAnnotator. nullopt when every item is annotated.
  std::optional<std::pair<Segment, SystemOutput>> next_item(const std::string& project,
                                                            const std::string& annotator) const;

  struct SessionView {
    std::string session_id;
    ProtocolState state;
  };
  // `trail` restores a walk recorded by a dropped client.
  SessionView start_session(const std::string& project, const std::string& annotator,
                            const std::string& segment_id, const std::string& system_id,
                            const std::vector<TrailEntry>& trail = {});
  SessionView session(const std::string& project, const std::string& session_id) const;
  SessionView answer(const std::string& project, const std::string& session_id,
                     const Response& response);
  // Stores the walk's annotation as the next revision. Throws
  // SessionIncomplete, or StaleRevision when the session was already
  // finalized or another revision landed since it started.
  Annotation finalize(const std::string& project, const std::string& session_id);

  // Direct submission. Without an explicit revision the next one is used.
  // Throws GatingViolation, InvalidAnnotation or StaleRevision.
  Annotation submit(const std::string& project, Annotation annotation, bool explicit_revision);

  void add_annotator(const std::string& project, const std::string& annotator);
  nlohmann::json import_corpus(const std::string& project, const std::string& text);

  nlohmann::json progress(const std::string& project) const;

  // Registers the HTTP routes on `server`.
  void mount(httplib::Server& server);

  const std::filesystem::path& data_dir() const { return data_dir_; }

 private:
  struct Slot {
    std::filesystem::path path;
    mutable std::mutex write;
    mutable std::mutex publish;
    std::shared_ptr<const Project> current;

    std::shared_ptr<const Project> read() const {
      std::lock_guard lock(publish);
      return current;
    }
  };

  struct Session {
    std::string project;
    ProtocolState state;
    std::int64_t base_revision = 0;
    bool finalized = false;
  };

  Slot& slot(const std::string& name) const;
  // Runs `mutate` on a copy of the project under the write lock, saves it
  // and publishes it.
  template <typename Fn>
  auto mutate(const std::string& name, Fn&& fn);

  std::filesystem::path data_dir_;
  mutable std::mutex registry_;
  std::map<std::string, std::unique_ptr<Slot>> projects_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, Session> sessions_;
  std::uint64_t next_session_ = 1;
};

// File name used for a project inside the data directory.
std::filesystem::path project_file_name(const std::string& name);

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir = ".";
  std::optional<std::filesystem::path> project_file;
};

// Blocks until the server stops. Returns non-zero when binding fails.
int serve(const ServeOptions& options);

}  // namespace arahope
