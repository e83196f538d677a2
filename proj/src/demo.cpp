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

#include "arahope/demo.hpp"

#include <array>
#include <map>
#include <random>
#include <string>

#include "arahope/protocol.hpp"

namespace arahope {

namespace {

// mt19937 output is fully specified, unlike the std distributions.
class Dice {
 public:
  explicit Dice(std::uint32_t seed) : engine_(seed) {}
  int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint32_t>(n)); }
  bool percent(int p) { return below(100) < p; }

 private:
  std::mt19937 engine_;
};

struct SimulatedSystem {
  const char* id;
  int error_percent;  // chance of answering yes at a question
  int major_percent;  // chance a found error is major
};

constexpr std::array<SimulatedSystem, 3> kSystems = {{
    {"mt-alpha", 18, 30},
    {"mt-beta", 22, 35},
    {"mt-gamma", 38, 55},
}};

std::string number(std::size_t i) { return std::to_string(i + 1); }

}  // namespace

Project demo_project(const DemoOptions& options) {
  Project project("demo-synthetic");
  Dice dice(options.seed);

  for (std::size_t i = 0; i < options.segments; ++i) {
    std::string id = "demo-" + std::string(i < 9 ? "0" : "") + number(i);
    project.add_segment({id, "جملة عامية تجريبية رقم " + number(i) + " (synthetic)",
                         "جملة فصحى مرجعية رقم " + number(i) + " (synthetic)"});
  }
  for (const auto& system : kSystems) {
    for (const auto& segment : project.segments()) {
      project.add_output({segment.id, system.id,
                          "ترجمة آلية تجريبية " + segment.id + " من " + system.id + " (synthetic)"});
    }
  }
  const std::string first = "annotator-1";
  const std::string second = "annotator-2";
  project.add_annotator(first);
  project.add_annotator(second);

  for (const auto& system : kSystems) {
    for (const auto& segment : project.segments()) {
      const SystemOutput& output = *project.find_output(segment.id, system.id);
      ProtocolState a = start_session(project.taxonomy(), segment, output, first);
      ProtocolState b = start_session(project.taxonomy(), segment, output, second);
      // Both walk in lockstep where their cursors coincide so the second
      // annotator mostly echoes the first.
      std::map<std::string, Response> first_choice;
      while (!a.done()) {
        const Node& node = a.tree().node(*a.cursor());
        Response r = Answer::No;
        if (node.kind == NodeKind::Question) {
          r = dice.percent(system.error_percent) ? Answer::Yes : Answer::No;
        } else {
          r = dice.percent(system.major_percent) ? Severity::major() : Severity::minor();
        }
        first_choice.emplace(node.id, r);
        a = answer(a, r);
      }
      while (!b.done()) {
        const Node& node = b.tree().node(*b.cursor());
        auto it = first_choice.find(node.id);
        Response r = Answer::No;
        if (node.kind == NodeKind::Question) {
          Answer base = it != first_choice.end() ? std::get<Answer>(it->second) : Answer::No;
          bool flip = dice.percent(options.disagreement_percent);
          r = flip ? (base == Answer::Yes ? Answer::No : Answer::Yes) : base;
        } else {
          Severity base = it != first_choice.end() ? std::get<Severity>(it->second) : Severity::minor();
          bool flip = dice.percent(options.disagreement_percent);
          r = flip ? (base == Severity::major() ? Severity::minor() : Severity::major()) : base;
        }
        b = answer(b, r);
      }
      project.append(finalize(a));
      project.append(finalize(b));
    }
  }
  return project;
}

}  // namespace arahope
