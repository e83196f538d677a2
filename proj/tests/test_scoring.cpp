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


#include <map>
#include <random>

#include "doctest.h"
#include "support.hpp"

#include "arahope/error.hpp"
#include "arahope/project.hpp"
#include "arahope/scoring.hpp"

using namespace arahope;

namespace {

Annotation make(std::string annotator, std::string segment,
                std::initializer_list<std::pair<ErrorCategory, int>> levels) {
  Annotation a{std::move(annotator), std::move(segment), "m1", {}, true, 1};
  for (auto [c, l] : levels) a.severities.set(c, Severity::checked(l));
  a.adp_applicable = !a.severities.has_meaning_transfer_error();
  return a;
}

Annotation make(std::initializer_list<std::pair<ErrorCategory, int>> levels) {
  return make("a1", "s1", levels);
}

Project corpus(std::size_t segments) {
  Project p("scoring");
  for (std::size_t i = 1; i <= segments; ++i) {
    std::string id = "s" + std::to_string(i);
    p.add_segment({id, "da " + id, "gold " + id});
    p.add_output({id, "m1", "mt " + id});
  }
  p.add_annotator("a1");
  p.add_annotator("a2");
  return p;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::BadRequest;
}


}  // namespace

TEST_CASE("segs examples") {
  ScoringConfig cfg;
  CHECK(segs(make({}), cfg) == Rational(0));
  CHECK(segs(make({{ErrorCategory::FLU, 1}, {ErrorCategory::ADP, 1}}), cfg) == Rational(3, 2));
  CHECK(segs(make({{ErrorCategory::FLU, 1}, {ErrorCategory::TRM, 2}}), cfg) == Rational(3));
  ScoringConfig full;
  full.adp_weight = Rational(1);
  CHECK(segs(make({{ErrorCategory::ADP, 2}}), full) == Rational(2));

  Annotation bad = make({{ErrorCategory::PRN, 1}});
  bad.severities.set(ErrorCategory::ADP, Severity::minor());
  CHECK(code_of([&] { segs(bad, cfg); }) == ErrorCode::InvalidAnnotation);
}

TEST_CASE("segs maximum is not clamped") {
  Annotation a = make({{ErrorCategory::FLU, 2}, {ErrorCategory::PRN, 2}, {ErrorCategory::TRM, 2},
                       {ErrorCategory::GSMIS, 2}});
  CHECK(segs(a, ScoringConfig{}) == Rational(8));
}

TEST_CASE("aggregation across annotators") {
  ScoringConfig cfg;
  std::vector<Annotation> two = {make("a1", "s1", {{ErrorCategory::TRM, 2}}),
                                 make("a2", "s1", {{ErrorCategory::FLU, 1}})};
  CHECK(segs_aggregated(two, cfg) == Rational(3, 2));
  std::vector<Annotation> one = {make({{ErrorCategory::ADP, 1}})};
  CHECK(segs_aggregated(one, cfg) == Rational(1, 2));
  std::vector<Annotation> quarter = {make("a1", "s1", {{ErrorCategory::ADP, 1}}), make("a2", "s1", {})};
  CHECK(segs_aggregated(quarter, cfg) == Rational(1, 4));

  ScoringConfig per;
  per.aggregation = AggregationMode::PerAnnotator;
  per.focus_annotator = "a2";
  CHECK(segs_aggregated(two, per) == Rational(1));
  per.focus_annotator = "a9";
  CHECK(code_of([&] { segs_aggregated(two, per); }) == ErrorCode::NoAnnotations);
  CHECK(code_of([&] { segs_aggregated({}, cfg); }) == ErrorCode::NoAnnotations);
}

TEST_CASE("bucket examples") {
  ScoringConfig cfg;
  CHECK(bucket(Rational(0), cfg) == Bucket::NoEdit);
  CHECK(bucket(Rational(1), cfg) == Bucket::Minor);
  CHECK(bucket(Rational(1, 4), cfg) == Bucket::Minor);
  CHECK(bucket(Rational(5, 4), cfg) == Bucket::Major);
}

TEST_CASE("bucket partition over a rational grid") {
  for (Rational upper : {Rational(1), Rational(1, 2), Rational(3)}) {
    ScoringConfig cfg;
    cfg.minor_upper = upper;
    for (int step = 0; step <= 32; ++step) {
      Rational v(step, 4);
      bool no_edit = v == Rational(0);
      bool minor = Rational(0) < v && v <= upper;
      bool major = v > upper;
      CHECK(int(no_edit) + int(minor) + int(major) == 1);
      Bucket expected = no_edit ? Bucket::NoEdit : minor ? Bucket::Minor : Bucket::Major;
      CHECK(bucket(v, cfg) == expected);
    }
  }
}

TEST_CASE("severity distribution") {
  ScoringConfig cfg;
  Project p = corpus(4);
  p.append(make("a1", "s1", {}));
  p.append(make("a1", "s2", {{ErrorCategory::ADP, 1}}));
  p.append(make("a1", "s3", {{ErrorCategory::FLU, 2}}));
  p.append(make("a1", "s4", {{ErrorCategory::TRM, 2}}));
  auto d = severity_distribution(p, "m1", cfg);
  CHECK(d.total_segments == 4);
  CHECK(d.count(Bucket::NoEdit) == 1);
  CHECK(d.count(Bucket::Minor) == 1);
  CHECK(d.count(Bucket::Major) == 2);
  CHECK(d.percentage(Bucket::NoEdit) == Rational(25));
  CHECK(d.percentage(Bucket::Minor) == Rational(25));
  CHECK(d.percentage(Bucket::Major) == Rational(50));

  Project zero = corpus(3);
  for (const char* s : {"s1", "s2", "s3"}) zero.append(make("a1", s, {}));
  CHECK(severity_distribution(zero, "m1", cfg).percentage(Bucket::NoEdit) == Rational(100));
}

TEST_CASE("missing annotations name the segments") {
  Project p = corpus(3);
  p.append(make("a1", "s2", {}));
  try {
    severity_distribution(p, "m1", ScoringConfig{});
    FAIL("expected MissingAnnotations");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingAnnotations);
    CHECK(e.context()["segments"] == nlohmann::json({"s1", "s3"}));
  }
  CHECK(code_of([&] { segment_scores(p, "m7", ScoringConfig{}); }) == ErrorCode::UnknownSystem);
}

TEST_CASE("category totals single annotation") {
  Project p = corpus(1);
  p.append(make("a1", "s1", {{ErrorCategory::TRM, 2}}));
  auto t = category_totals(p, "m1", ScoringConfig{});
  CHECK(t[ErrorCategory::TRM] == Rational(2));
  CHECK(t[ErrorCategory::FLU] == Rational(0));
  CHECK(t.grand_total == Rational(2));
}

TEST_CASE("grand total equals the sum of segment scores on random projects") {
  testing::Rng rng(9917);
  for (int trial = 0; trial < 100; ++trial) {
    testing::ProjectShape shape;
    shape.segments = 1 + testing::uniform(rng, 0, 24);
    shape.systems = 1 + testing::uniform(rng, 0, 2);
    shape.annotators = 1 + testing::uniform(rng, 0, 2);
    shape.max_extra_revisions = 2;
    Project p = testing::random_project(rng, shape);
    ScoringConfig cfg;
    if (trial % 3 == 1) cfg.adp_weight = Rational(1, 3);
    if (trial % 5 == 2) {
      cfg.aggregation = AggregationMode::PerAnnotator;
      cfg.focus_annotator = "a1";
    }
    for (const auto& system : p.systems()) {
      Rational sum_segs = 0;
      for (const auto& s : segment_scores(p, system, cfg)) sum_segs += s.segs;
      auto totals = category_totals(p, system, cfg);
      REQUIRE(totals.grand_total == sum_segs);

      // Independent recomputation from the raw log: latest revision per
      // triple, per-category means, ADP weighted.
      std::map<std::pair<std::string, std::string>, Annotation> latest;
      for (const auto& a : p.annotations()) {
        if (a.system_id != system) continue;
        if (cfg.aggregation == AggregationMode::PerAnnotator && a.annotator_id != cfg.focus_annotator) continue;
        auto key = std::make_pair(a.segment_id, a.annotator_id);
        auto it = latest.find(key);
        if (it == latest.end() || it->second.revision < a.revision) latest[key] = a;
      }
      std::map<std::string, int> per_segment;
      for (const auto& [key, a] : latest) per_segment[key.first] += 1;
      std::array<Rational, 5> expected{};
      for (const auto& [key, a] : latest) {
        Rational share(1, per_segment[key.first]);
        for (ErrorCategory c : kCategories) {
          Rational w = c == ErrorCategory::ADP ? cfg.adp_weight : Rational(1);
          expected[index_of(c)] += share * w * a.severities[c].level();
        }
      }
      Rational expected_total = 0;
      for (ErrorCategory c : kCategories) {
        REQUIRE(totals[c] == expected[index_of(c)]);
        expected_total += expected[index_of(c)];
      }
      REQUIRE(totals.grand_total == expected_total);
    }
  }
}

TEST_CASE("segs monotonicity and ADP discount") {
  testing::Rng rng(311);
  ScoringConfig cfg;
  for (int i = 0; i < 5000; ++i) {
    Annotation a = make({});
    a.severities = testing::random_severities(rng);
    a.adp_applicable = !a.severities.has_meaning_transfer_error();
    Rational base = segs(a, cfg);
    for (ErrorCategory c : kCategories) {
      int level = a.severities[c].level();
      if (level == 2) continue;
      Annotation up = a;
      up.severities.set(c, Severity::checked(level + 1));
      if (c == ErrorCategory::ADP) {
        if (!a.adp_applicable) continue;
        REQUIRE(segs(up, cfg) - base == cfg.adp_weight);
      } else if (is_meaning_transfer(c) && a.severities[ErrorCategory::ADP].is_error()) {
        continue;  // would break the gate
      } else {
        up.adp_applicable = !up.severities.has_meaning_transfer_error();
        REQUIRE(segs(up, cfg) >= base);
      }
    }
  }
}
