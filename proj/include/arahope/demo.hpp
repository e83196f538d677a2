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

#include "arahope/project.hpp"

namespace arahope {

struct DemoOptions {
  std::size_t segments = 20;
  std::uint32_t seed = 20240611;
  // Probability (percent) that the second annotator answers a question
  // differently from the first.
  int disagreement_percent = 15;
};

// Synthetic demonstration project: placeholder Arabic sentences, three
// simulated MT systems and two simulated annotators whose judgments are
// produced by walking the project's decision tree. Deterministic for a
// given seed. Not real evaluation data.
Project demo_project(const DemoOptions& options = {});

}  // namespace arahope
