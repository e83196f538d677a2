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
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "arahope/model.hpp"
#include "arahope/project.hpp"

namespace arahope::testing {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Valid under the gating rule: ADP only without a meaning-transfer error.
inline SeverityMap random_severities(Rng& rng) {
  SeverityMap s;
  for (ErrorCategory c : {ErrorCategory::FLU, ErrorCategory::PRN, ErrorCategory::TRM,
                          ErrorCategory::GSMIS}) {
    // Bias towards 0 so error-free items show up often.
    int level = uniform(rng, 0, 3);
    s.set(c, Severity::checked(level == 3 ? 0 : level));
  }
  if (!s.has_meaning_transfer_error()) s.set(ErrorCategory::ADP, Severity::checked(uniform(rng, 0, 2)));
  return s;
}

// ADP > 0 together with at least one PRN/TRM/GSMIS > 0.
inline Annotation random_gating_violation(Rng& rng) {
  Annotation a;
  a.annotator_id = "a" + std::to_string(uniform(rng, 1, 3));
  a.segment_id = "s" + std::to_string(uniform(rng, 1, 9));
  a.system_id = "m" + std::to_string(uniform(rng, 1, 3));
  a.severities.set(ErrorCategory::FLU, Severity::checked(uniform(rng, 0, 2)));
  for (ErrorCategory c : kMeaningTransferCategories) {
    a.severities.set(c, Severity::checked(uniform(rng, 0, 2)));
  }
  ErrorCategory forced = kMeaningTransferCategories[uniform(rng, 0, 2)];
  a.severities.set(forced, Severity::checked(uniform(rng, 1, 2)));
  a.severities.set(ErrorCategory::ADP, Severity::checked(uniform(rng, 1, 2)));
  a.adp_applicable = uniform(rng, 0, 1) == 1;
  a.revision = uniform(rng, 1, 5);
  return a;
}

inline std::string random_text(Rng& rng, std::size_t index) {
  static const std::vector<std::string> words = {
      "\xd8\xb4\xd9\x88",  // شو
      "\xd9\x83\xd9\x8a\xd9\x81\xd9\x83",  // كيفك
      "\xd9\x85\xd8\xb1\xd8\xad\xd8\xa8\xd8\xa7",  // مرحبا
      "\xd9\x8a\xd8\xb9\xd9\x86\xd9\x8a",  // يعني
      "\"quoted\"", "a,b", "x\ty", "line\nbreak", "plain"};
  std::string out = std::to_string(index);
  int n = uniform(rng, 1, 5);
  for (int i = 0; i < n; ++i) out += " " + words[uniform(rng, 0, static_cast<int>(words.size()) - 1)];
  return out;
}

struct ProjectShape {
  std::size_t segments = 6;
  std::size_t systems = 2;
  std::size_t annotators = 2;
  // Percent of items each annotator actually annotates; 100 gives a
  // complete project.
  int coverage = 100;
  // Extra revisions stacked on random items.
  int max_extra_revisions = 0;
};

inline Project random_project(Rng& rng, const ProjectShape& shape) {
  Project p("random");
  for (std::size_t i = 0; i < shape.segments; ++i) {
    p.add_segment({"s" + std::to_string(i + 1), "DA " + random_text(rng, i),
                   "GOLD " + random_text(rng, i)});
  }
  for (std::size_t m = 0; m < shape.systems; ++m) {
    std::string system = "m" + std::to_string(m + 1);
    for (const auto& seg : p.segments()) p.add_output({seg.id, system, "MT " + random_text(rng, m)});
  }
  for (std::size_t a = 0; a < shape.annotators; ++a) p.add_annotator("a" + std::to_string(a + 1));
  for (const auto& annotator : p.annotators()) {
    for (const auto& out : p.outputs()) {
      if (uniform(rng, 1, 100) > shape.coverage) continue;
      int revisions = 1 + (shape.max_extra_revisions ? uniform(rng, 0, shape.max_extra_revisions) : 0);
      for (int r = 1; r <= revisions; ++r) {
        Annotation a;
        a.annotator_id = annotator;
        a.segment_id = out.segment_id;
        a.system_id = out.system_id;
        a.severities = random_severities(rng);
        a.adp_applicable = !a.severities.has_meaning_transfer_error();
        a.revision = r;
        p.append(a);
      }
    }
  }
  return p;
}

// Kappa written straight from the definition with floating point:
// kappa = 1 - sum(w * O) / sum(w * E), O = counts / n,
// E[i][j] = (row_i / n) * (col_j / n), w = (i - j)^2 / (k - 1)^2.
// Returns NaN where the definition divides by zero.
inline double brute_force_kappa(const std::vector<std::vector<long>>& counts) {
  const std::size_t k = counts.size();
  double n = 0;
  for (const auto& row : counts) {
    for (long c : row) n += static_cast<double>(c);
  }
  std::vector<double> row_sum(k, 0.0), col_sum(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      row_sum[i] += static_cast<double>(counts[i][j]);
      col_sum[j] += static_cast<double>(counts[i][j]);
    }
  }
  double wo = 0, we = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double d = static_cast<double>(i) - static_cast<double>(j);
      double w = d * d / (static_cast<double>(k - 1) * static_cast<double>(k - 1));
      double o = static_cast<double>(counts[i][j]) / n;
      double e = (row_sum[i] / n) * (col_sum[j] / n);
      wo += w * o;
      we += w * e;
    }
  }
  if (we == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return 1.0 - wo / we;
}

inline std::vector<std::vector<long>> random_counts(Rng& rng, std::size_t k, int n) {
  std::vector<std::vector<long>> counts(k, std::vector<long>(k, 0));
  for (int t = 0; t < n; ++t) {
    counts[uniform(rng, 0, static_cast<int>(k) - 1)][uniform(rng, 0, static_cast<int>(k) - 1)] += 1;
  }
  return counts;
}

}  // namespace arahope::testing
