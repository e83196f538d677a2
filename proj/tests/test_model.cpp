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


#include <random>

#include "doctest.h"
#include "support.hpp"

#include "arahope/error.hpp"
#include "arahope/model.hpp"
#include "arahope/project.hpp"

using namespace arahope;

namespace {

Project small_project() {
  Project p("small");
  p.add_segment({"s1", "da one", "gold one"});
  p.add_output({"s1", "m1", "mt one"});
  p.add_annotator("a1");
  return p;
}

Annotation make(std::initializer_list<std::pair<ErrorCategory, int>> levels) {
  Annotation a{"a1", "s1", "m1", {}, true, 1};
  for (auto [c, l] : levels) a.severities.set(c, Severity::checked(l));
  a.adp_applicable = !a.severities.has_meaning_transfer_error();
  return a;
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

TEST_CASE("category groups") {
  CHECK(group_of(ErrorCategory::FLU) == ErrorGroup::Fluency);
  CHECK(group_of(ErrorCategory::PRN) == ErrorGroup::MeaningTransfer);
  CHECK(group_of(ErrorCategory::TRM) == ErrorGroup::MeaningTransfer);
  CHECK(group_of(ErrorCategory::GSMIS) == ErrorGroup::MeaningTransfer);
  CHECK(group_of(ErrorCategory::ADP) == ErrorGroup::Adaptation);
  for (ErrorCategory c : kCategories) CHECK(parse_category(to_string(c)) == c);
  CHECK_FALSE(parse_category("XYZ"));
}

TEST_CASE("severity scale has exactly three levels") {
  for (int l = -3; l <= 5; ++l) CHECK(Severity::from_level(l).has_value() == (l >= 0 && l <= 2));
  CHECK(code_of([] { Severity::checked(3); }) == ErrorCode::InvalidSeverity);
  CHECK(Severity::major() > Severity::minor());
}

TEST_CASE("scoring config bounds") {
  ScoringConfig cfg;
  CHECK(cfg.adp_weight == Rational(1, 2));
  CHECK(cfg.minor_upper == Rational(1));
  CHECK(cfg.min_project_size == 200);
  CHECK(cfg.aggregation == AggregationMode::MeanAcrossAnnotators);
  cfg.validate();
  cfg.adp_weight = Rational(1);
  cfg.validate();
  cfg.adp_weight = Rational(0);
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidConfig);
  cfg.adp_weight = Rational(3, 2);
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidConfig);
  cfg.adp_weight = Rational(1, 2);
  cfg.minor_upper = Rational(0);
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("rational text forms") {
  CHECK(rational_to_string(Rational(1, 2)) == "1/2");
  CHECK(rational_to_string(Rational(3)) == "3");
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("2") == Rational(2));
  CHECK_FALSE(parse_rational("x"));
  CHECK_FALSE(parse_rational("1/0"));
  CHECK(format_decimal(Rational(3, 2), 2) == "1.50");
  CHECK(format_decimal(Rational(785, 4), 2) == "196.25");
  CHECK(format_decimal(Rational(1, 8), 2) == "0.13");
  CHECK(format_decimal(Rational(0), 2) == "0.00");
}

TEST_CASE("validate_annotation examples") {
  Project p = small_project();
  CHECK(validate_annotation(make({{ErrorCategory::FLU, 1}}), p).ok());
  CHECK(validate_annotation(make({}), p).ok());

  Annotation bad = make({{ErrorCategory::PRN, 1}});
  bad.severities.set(ErrorCategory::ADP, Severity::minor());
  auto result = validate_annotation(bad, p);
  REQUIRE_FALSE(result.ok());
  bool named = false;
  for (const auto& v : result.violations) {
    if (v.message == "ADP assessed despite meaning-transfer error") {
      named = true;
      CHECK(v.rule == Rule::AdpDespiteMeaningTransfer);
      CHECK(v.category == ErrorCategory::ADP);
    }
  }
  CHECK(named);
}

TEST_CASE("applicability flag must follow the gate") {
  Project p = small_project();
  Annotation a = make({{ErrorCategory::TRM, 2}});
  a.adp_applicable = true;
  auto r = validate_annotation(a, p);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].rule == Rule::AdpApplicableDespiteMeaningTransfer);
  CHECK(r.violations[0].category == ErrorCategory::TRM);

  Annotation b = make({{ErrorCategory::ADP, 1}});
  b.adp_applicable = false;
  r = validate_annotation(b, p);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].rule == Rule::AdpNotApplicable);
}

TEST_CASE("unknown references are violations, not crashes") {
  Project p = small_project();
  Annotation a = make({});
  a.segment_id = "nope";
  a.system_id = "ghost";
  a.annotator_id = "who";
  auto r = validate_annotation(a, p);
  std::vector<Rule> rules;
  for (const auto& v : r.violations) rules.push_back(v.rule);
  CHECK(std::find(rules.begin(), rules.end(), Rule::UnknownSegment) != rules.end());
  CHECK(std::find(rules.begin(), rules.end(), Rule::UnknownSystem) != rules.end());
  CHECK(std::find(rules.begin(), rules.end(), Rule::UnknownAnnotator) != rules.end());
}

TEST_CASE("authoritative annotations") {
  Project p = small_project();
  CHECK(authoritative_annotations(p).empty());

  Annotation r1 = make({{ErrorCategory::FLU, 1}});
  Annotation r2 = make({{ErrorCategory::FLU, 2}});
  r2.revision = 2;
  p.append(r1);
  p.append(r2);
  auto map = authoritative_annotations(p);
  REQUIRE(map.size() == 1);
  CHECK(map.begin()->second.revision == 2);
  CHECK(map.begin()->second.severities[ErrorCategory::FLU] == Severity::major());

  std::vector<Annotation> log = {make({}), make({{ErrorCategory::FLU, 1}})};
  log[0].revision = 3;
  log[1].revision = 3;
  CHECK(code_of([&] { authoritative_annotations(log); }) == ErrorCode::DuplicateRevision);
}

TEST_CASE("append enforces revision order") {
  Project p = small_project();
  Annotation a = make({});
  a.revision = 2;
  p.append(a);
  CHECK(code_of([&] { p.append(a); }) == ErrorCode::DuplicateRevision);
  a.revision = 1;
  CHECK(code_of([&] { p.append(a); }) == ErrorCode::StaleRevision);
  CHECK(p.latest_revision(a.key()) == 2);
  Annotation bad = make({{ErrorCategory::GSMIS, 1}});
  bad.severities.set(ErrorCategory::ADP, Severity::major());
  bad.revision = 3;
  CHECK(code_of([&] { p.append(bad); }) == ErrorCode::InvalidAnnotation);
  CHECK(p.annotations().size() == 1);
}

TEST_CASE("project identity rules") {
  Project p = small_project();
  CHECK(code_of([&] { p.add_segment({"s1", "other", "other"}); }) == ErrorCode::DuplicateId);
  CHECK(code_of([&] { p.add_segment({"s2", "da one", "gold one"}); }) == ErrorCode::DuplicateId);
  CHECK(code_of([&] { p.add_segment({"s3", "", "gold"}); }) == ErrorCode::InvalidAnnotation);
  CHECK(code_of([&] { p.add_output({"s1", "m1", "again"}); }) == ErrorCode::DuplicateId);
  CHECK(code_of([&] { p.add_output({"s9", "m1", "x"}); }) == ErrorCode::UnknownReference);
  p.add_output({"s1", "m2", "second"});
  CHECK(p.has_system("m2"));
  p.add_annotator("a1");
  CHECK(p.annotators().size() == 1);
}

TEST_CASE("gating soundness over random annotations") {
  testing::Rng rng(1201);
  Project p = small_project();
  p.add_annotator("a2");
  p.add_annotator("a3");
  for (int i = 2; i <= 9; ++i) {
    p.add_segment({"s" + std::to_string(i), "da " + std::to_string(i), "gold " + std::to_string(i)});
  }
  for (const auto& s : p.segments()) {
    for (const char* m : {"m1", "m2", "m3"}) {
      if (!p.find_output(s.id, m)) p.add_output({s.id, m, "mt"});
    }
  }
  int rejected = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    Annotation a = testing::random_gating_violation(rng);
    REQUIRE(p.find_segment(a.segment_id));
    if (!validate_annotation(a, p).ok()) ++rejected;
  }
  CHECK(rejected == n);

  // Nothing accepted ever pairs ADP with a meaning-transfer error.
  for (int i = 0; i < n; ++i) {
    Annotation a{"a1", "s1", "m1", {}, testing::uniform(rng, 0, 1) == 1, 1};
    for (ErrorCategory c : kCategories) a.severities.set(c, Severity::checked(testing::uniform(rng, 0, 2)));
    if (validate_annotation(a, p).ok()) {
      CHECK_FALSE((a.severities.has_meaning_transfer_error() && a.severities[ErrorCategory::ADP].is_error()));
    }
  }
}

TEST_CASE("error document") {
  Error e(ErrorCode::MissingAnnotations, "missing", {{"segments", {"s1"}}});
  auto j = e.to_json();
  CHECK(j["error"] == "MissingAnnotations");
  CHECK(j["message"] == "missing");
  CHECK(j["segments"][0] == "s1");
}
