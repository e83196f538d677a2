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


#include <filesystem>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "support.hpp"

#include "arahope/cli.hpp"
#include "arahope/demo.hpp"
#include "arahope/ingestion.hpp"
#include "arahope/reports.hpp"
#include "arahope/service.hpp"

using namespace arahope;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// A service on an ephemeral port backed by a scratch data directory.
class Harness {
 public:
  Harness() {
    static int counter = 0;
    dir_ = fs::temp_directory_path() /
           ("arahope-svc-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    start();
  }
  ~Harness() {
    stop();
    fs::remove_all(dir_);
  }

  void start() {
    service_ = std::make_unique<ProjectService>(dir_);
    service_->load_data_dir();
    server_ = std::make_unique<httplib::Server>();
    service_->mount(*server_);
    port_ = server_->bind_to_any_port("127.0.0.1");
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void stop() {
    server_->stop();
    thread_.join();
  }
  void restart() {
    stop();
    start();
  }

  struct Reply {
    int status;
    std::string body;
    json doc() const { return json::parse(body); }
  };

  Reply get(const std::string& path) {
    auto r = client_->Get(path);
    REQUIRE(r);
    return {r->status, r->body};
  }
  Reply post(const std::string& path, const json& body) {
    auto r = client_->Post(path, body.dump(), "application/json");
    REQUIRE(r);
    return {r->status, r->body};
  }
  Reply post_text(const std::string& path, const std::string& body) {
    auto r = client_->Post(path, body, "text/plain");
    REQUIRE(r);
    return {r->status, r->body};
  }

  const fs::path& dir() const { return dir_; }
  ProjectService& service() { return *service_; }

 private:
  fs::path dir_;
  std::unique_ptr<ProjectService> service_;
  std::unique_ptr<httplib::Server> server_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

// 5 segments x 2 systems.
const char* kCorpus = "ID\tDA\tGOLD\tm1\tm2\n"
                      "s1\tda1\tgold1\tx1\ty1\n"
                      "s2\tda2\tgold2\tx2\ty2\n"
                      "s3\tda3\tgold3\tx3\ty3\n"
                      "s4\tda4\tgold4\tx4\ty4\n"
                      "s5\tda5\tgold5\tx5\ty5\n";

void create_small(Harness& h) {
  auto r = h.post("/projects", {{"name", "small"}, {"corpus", kCorpus}, {"annotators", {"a1", "a2"}}});
  REQUIRE(r.status == 201);
}

json plain(const std::string& annotator, const std::string& segment, const std::string& system) {
  return {{"annotator_id", annotator}, {"segment_id", segment}, {"system_id", system}, {"severities", json::object()}};
}

std::string run(const std::vector<std::string>& args) {
  std::istringstream in;
  std::ostringstream out, err;
  int code = run_cli(args, in, out, err);
  REQUIRE_MESSAGE(code == 0, err.str());
  return out.str();
}

}  // namespace

TEST_CASE("project resources") {
  Harness h;
  CHECK(h.get("/health").doc()["status"] == "ok");
  auto created = h.post("/projects", {{"name", "small"}, {"corpus", kCorpus}, {"annotators", {"a1"}}});
  REQUIRE(created.status == 201);
  auto fetched = h.get("/projects/small");
  CHECK(fetched.status == 200);
  CHECK(fetched.doc() == created.doc());
  CHECK(fetched.doc()["segments"] == 5);
  CHECK(fetched.doc()["systems"] == json({"m1", "m2"}));
  CHECK(h.get("/projects").doc()["projects"] == json({"small"}));
  CHECK(h.get("/projects/small/segments").doc()["segments"][0]["id"] == "s1");
  CHECK(h.get("/projects/small/systems").doc()["systems"].size() == 2);
  CHECK(h.post("/projects/small/annotators", {{"annotator_id", "a2"}}).status == 201);
  CHECK(h.get("/projects/small/annotators").doc()["annotators"] == json({"a1", "a2"}));
  CHECK(h.get("/projects/small/tree").doc()["version"] == "default-1");

  auto missing = h.get("/projects/nope");
  CHECK(missing.status == 404);
  CHECK(missing.doc()["error"] == "NotFound");
  auto dup = h.post("/projects", {{"name", "small"}});
  CHECK(dup.status == 409);
  CHECK(dup.doc()["error"] == "Conflict");
  CHECK(h.post("/projects", {{"nom", "x"}}).status == 400);

  auto more = h.post_text("/projects/small/corpus", "DA\tGOLD\tm1\nda6\tgold6\tx6\n");
  CHECK(more.status == 201);
  CHECK(more.doc()["segments_added"] == 1);
}

TEST_CASE("state is persisted after every mutation") {
  Harness h;
  create_small(h);
  REQUIRE(h.post("/projects/small/annotations", plain("a1", "s1", "m1")).status == 201);
  Project on_disk = load_project(h.dir() / project_file_name("small"));
  CHECK(on_disk == *h.service().snapshot("small"));
  h.restart();
  CHECK(h.get("/projects/small").doc()["annotations"] == 1);
  auto listed = h.get("/projects/small/annotations").doc()["annotations"];
  REQUIRE(listed.size() == 1);
  CHECK(listed[0]["segment_id"] == "s1");
}

TEST_CASE("next item order") {
  Harness h;
  create_small(h);
  auto first = h.get("/projects/small/next-item?annotator=a1").doc();
  CHECK(first["done"] == false);
  CHECK(first["segment"]["id"] == "s1");
  CHECK(first["output"]["system_id"] == "m1");
  REQUIRE(h.post("/projects/small/annotations", plain("a1", "s1", "m1")).status == 201);
  auto second = h.get("/projects/small/next-item?annotator=a1").doc();
  CHECK(second["segment"]["id"] == "s2");
  CHECK(second["output"]["system_id"] == "m1");
  // a2 is unaffected.
  CHECK(h.get("/projects/small/next-item?annotator=a2").doc()["segment"]["id"] == "s1");

  for (const char* m : {"m1", "m2"}) {
    for (int s = 1; s <= 5; ++s) {
      if (std::string(m) == "m1" && s == 1) continue;
      REQUIRE(h.post("/projects/small/annotations", plain("a1", "s" + std::to_string(s), m)).status == 201);
    }
  }
  CHECK(h.get("/projects/small/next-item?annotator=a1").doc()["done"] == true);
  auto unknown = h.get("/projects/small/next-item?annotator=zz");
  CHECK(unknown.status == 404);
  CHECK(unknown.doc()["error"] == "UnknownAnnotator");
}

TEST_CASE("session walk with a major dialect-term error") {
  Harness h;
  create_small(h);
  auto started = h.post("/projects/small/session/start",
                        {{"annotator_id", "a1"}, {"segment_id", "s2"}, {"system_id", "m2"}});
  REQUIRE(started.status == 201);
  std::string id = started.doc()["session_id"];
  CHECK(started.doc()["state"]["cursor"]["node"] == "fluency");

  json state;
  for (const char* r : {"no", "no", "yes", "2", "no"}) {
    auto step = h.post("/projects/small/session/answer", {{"session_id", id}, {"response", r}});
    REQUIRE(step.status == 200);
    state = step.doc()["state"];
  }
  CHECK(state["done"] == true);
  CHECK(state["skipped"] == json({"adaptation"}));
  CHECK(h.get("/projects/small/session/" + id).doc()["state"] == state);

  auto late = h.post("/projects/small/session/answer", {{"session_id", id}, {"response", "no"}});
  CHECK(late.status == 422);
  CHECK(late.doc()["error"] == "SessionComplete");

  auto done = h.post("/projects/small/session/finalize", {{"session_id", id}});
  REQUIRE(done.status == 201);
  json a = done.doc()["annotation"];
  CHECK(a["severities"]["TRM"] == 2);
  CHECK(a["severities"]["ADP"] == 0);
  CHECK(a["adp_applicable"] == false);
  CHECK(a["revision"] == 1);

  auto again = h.post("/projects/small/session/finalize", {{"session_id", id}});
  CHECK(again.status == 409);
  CHECK(again.doc()["error"] == "StaleRevision");
}

TEST_CASE("session errors and resume") {
  Harness h;
  create_small(h);
  std::string id = h.post("/projects/small/session/start",
                          {{"annotator_id", "a1"}, {"segment_id", "s1"}, {"system_id", "m1"}})
                       .doc()["session_id"];
  auto early = h.post("/projects/small/session/finalize", {{"session_id", id}});
  CHECK(early.status == 422);
  CHECK(early.doc()["error"] == "SessionIncomplete");
  auto wrong = h.post("/projects/small/session/answer", {{"session_id", id}, {"response", "2"}});
  CHECK(wrong.doc()["error"] == "WrongResponseKind");

  auto step = h.post("/projects/small/session/answer", {{"session_id", id}, {"response", "yes"}}).doc();
  // A client that lost its session restarts from the recorded trail.
  auto resumed = h.post("/projects/small/session/start", {{"annotator_id", "a1"},
                                                          {"segment_id", "s1"},
                                                          {"system_id", "m1"},
                                                          {"trail", step["state"]["trail"]}});
  REQUIRE(resumed.status == 201);
  CHECK(resumed.doc()["state"]["cursor"]["node"] == "fluency_severity");
  CHECK(resumed.doc()["state"]["cursor"]["allowed"] == json({"1", "2"}));

  // Another revision lands while the first session is open.
  std::string other = h.post("/projects/small/session/start",
                             {{"annotator_id", "a1"}, {"segment_id", "s1"}, {"system_id", "m1"}})
                          .doc()["session_id"];
  REQUIRE(h.post("/projects/small/annotations", plain("a1", "s1", "m1")).status == 201);
  for (const char* r : {"no", "no", "no", "no", "no"}) {
    h.post("/projects/small/session/answer", {{"session_id", other}, {"response", r}});
  }
  auto stale = h.post("/projects/small/session/finalize", {{"session_id", other}});
  CHECK(stale.status == 409);
  CHECK(stale.doc()["error"] == "StaleRevision");

  CHECK(h.post("/projects/small/session/start",
               {{"annotator_id", "a1"}, {"segment_id", "s9"}, {"system_id", "m1"}})
            .status == 404);
  CHECK(h.get("/projects/small/session/none").status == 404);
}

TEST_CASE("direct submission") {
  Harness h;
  create_small(h);
  json bad = plain("a1", "s1", "m1");
  bad["severities"] = {{"PRN", 1}, {"ADP", 1}};
  auto gated = h.post("/projects/small/annotations", bad);
  CHECK(gated.status == 422);
  CHECK(gated.doc()["error"] == "GatingViolation");
  CHECK(h.get("/projects/small").doc()["annotations"] == 0);

  json good = plain("a1", "s1", "m1");
  good["severities"] = {{"FLU", 1}};
  CHECK(h.post("/projects/small/annotations", good).doc()["annotation"]["revision"] == 1);
  CHECK(h.post("/projects/small/annotations", good).doc()["annotation"]["revision"] == 2);
  good["revision"] = 2;
  auto stale = h.post("/projects/small/annotations", good);
  CHECK(stale.status == 409);
  CHECK(stale.doc()["error"] == "StaleRevision");
  good["revision"] = 7;
  CHECK(h.post("/projects/small/annotations", good).doc()["annotation"]["revision"] == 7);
  auto auth = h.get("/projects/small/annotations?authoritative=1").doc()["annotations"];
  REQUIRE(auth.size() == 1);
  CHECK(auth[0]["revision"] == 7);

  json ghost = plain("a1", "s1", "m9");
  CHECK(h.post("/projects/small/annotations", ghost).doc()["error"] == "InvalidAnnotation");
  CHECK(h.post_text("/projects/small/annotations", "{oops").status == 400);
}

TEST_CASE("concurrent submissions serialize by revision") {
  Harness h;
  create_small(h);
  const int threads = 6, per_thread = 5;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = 0; i < per_thread; ++i) {
        Annotation a{"a1", "s3", "m1", {}, true, 1};
        a.severities.set(ErrorCategory::FLU, Severity::checked((t + i) % 3));
        h.service().submit("small", a, false);
      }
    });
  }
  for (auto& t : pool) t.join();
  auto p = h.service().snapshot("small");
  REQUIRE(p->annotations().size() == threads * per_thread);
  for (int r = 0; r < threads * per_thread; ++r) CHECK(p->annotations()[r].revision == r + 1);
  CHECK(load_project(h.dir() / project_file_name("small")) == *p);
}

TEST_CASE("progress") {
  Harness h;
  create_small(h);
  for (const char* s : {"s1", "s2", "s3"}) {
    REQUIRE(h.post("/projects/small/annotations", plain("a1", s, "m1")).status == 201);
  }
  auto doc = h.get("/projects/small/progress").doc();
  CHECK(doc["items"] == 10);
  CHECK(doc["annotators"][0]["annotator_id"] == "a1");
  CHECK(doc["annotators"][0]["completed"] == 3);
  CHECK(doc["annotators"][0]["percent"] == 30);
  CHECK(doc["annotators"][1]["percent"] == 0);
}

TEST_CASE("report on an incomplete project") {
  Harness h;
  create_small(h);
  h.post("/projects/small/annotations", plain("a1", "s1", "m1"));
  auto r = h.get("/projects/small/reports/severity");
  CHECK(r.status == 409);
  CHECK(r.doc()["error"] == "MissingAnnotations");
  CHECK(r.doc()["segments"] == json({"s2", "s3", "s4", "s5"}));
  CHECK(h.get("/projects/small/reports/bogus").status == 404);
}

TEST_CASE("service reports equal CLI reports byte for byte") {
  Harness h;
  fs::path file = h.dir() / project_file_name("demo-synthetic");
  run({"init", file.string(), "--demo"});
  h.restart();
  for (ReportKind kind : kReportKinds) {
    std::string k(to_string(kind));
    for (const char* format : {"text", "delimited", "structured"}) {
      auto served = h.get("/projects/demo-synthetic/reports/" + k + "?format=" + format);
      REQUIRE(served.status == 200);
      std::string cli = run({"report", file.string(), "--kind", k, "--format", format});
      CHECK(served.body == cli);
    }
    CHECK(h.get("/projects/demo-synthetic/reports/" + k).body ==
          run({"report", file.string(), "--kind", k, "--format", "structured"}));
  }
  CHECK(h.get("/projects/demo-synthetic/reports/segments?format=text").body == run({"score", file.string()}));
  CHECK(h.get("/projects/demo-synthetic/reports/agreement?format=text").body == run({"agreement", file.string()}));

  auto sheet = h.get("/projects/demo-synthetic/export-sheet?system=mt-alpha&annotator=annotator-1");
  CHECK(sheet.body == run({"export-sheet", file.string(), "--system", "mt-alpha", "--annotator", "annotator-1"}));
}
