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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arahope/model.hpp"
#include "arahope/project.hpp"

namespace arahope {

// k x k counts of paired ordinal ratings. Rows are annotator A's level,
// columns annotator B's.
class ConfusionMatrix {
 public:
  // Throws Error(LevelOutOfRange) for k < 2.
  explicit ConfusionMatrix(std::size_t k);

  std::size_t k() const { return k_; }
  std::int64_t n() const { return n_; }
  std::int64_t at(std::size_t row, std::size_t col) const { return counts_[row * k_ + col]; }

  // Throws Error(LevelOutOfRange).
  void add(std::size_t row, std::size_t col, std::int64_t count = 1);

  ConfusionMatrix transposed() const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t k_;
  std::int64_t n_ = 0;
  std::vector<std::int64_t> counts_;
};

// Throws LengthMismatch or LevelOutOfRange.
ConfusionMatrix confusion_matrix(std::span<const int> ratings_a, std::span<const int> ratings_b,
                                 std::size_t k);

// Quadratic weighted kappa, 1 - sum(w*O) / sum(w*E) with w = (i-j)^2/(k-1)^2.
// When expected disagreement is zero the result is 1.0 if observed
// disagreement is also zero and nullopt (undefined) otherwise.
// Throws Error(EmptyMatrix) for n = 0.
std::optional<double> qwk(const ConfusionMatrix& m);

// Combined PRN/TRM/GSMIS level on the 0..2 scale.
int meaning_transfer_level(const Annotation& a,
                           MeaningTransferLevel mode = MeaningTransferLevel::Max);

// SEGS bucket as an ordinal: NoEdit 0, Minor 1, Major 2.
int overall_level(const Annotation& a, const ScoringConfig& cfg);

enum class Dimension : std::uint8_t { Fluency, MeaningTransfer, Adaptation, Overall };

inline constexpr std::array<Dimension, 4> kDimensions = {
    Dimension::Fluency, Dimension::MeaningTransfer, Dimension::Adaptation, Dimension::Overall};

std::string_view to_string(Dimension d);
// "Fluency", "Meaning Transfer", ...
std::string_view display_name(Dimension d);

enum class Band : std::uint8_t { Poor, Slight, Fair, Moderate, Substantial, AlmostPerfect };

std::string_view to_string(Band b);  // "Almost Perfect" etc.

// Landis-Koch interpretation, upper bounds inclusive: <0 Poor,
// [0, .20] Slight, (.20, .40] Fair, (.40, .60] Moderate,
// (.60, .80] Substantial, above Almost Perfect.
Band band(double kappa);

struct AgreementRow {
  Dimension dimension = Dimension::Overall;
  std::string system_id;
  std::optional<double> kappa;
  std::size_t items = 0;

  std::optional<Band> band() const {
    return kappa ? std::optional<Band>(arahope::band(*kappa)) : std::nullopt;
  }
};

struct ExcludedItem {
  std::string system_id;
  std::string segment_id;
  std::string missing_annotator;
};

struct AgreementTable {
  std::string annotator_a;
  std::string annotator_b;
  std::vector<std::string> systems;
  std::vector<AgreementRow> rows;  // systems x dimensions, system-major
  std::vector<ExcludedItem> excluded;

  const AgreementRow* find(Dimension d, std::string_view system_id) const;
};

// Two-annotator QWK per system: Fluency over FLU, MeaningTransfer over
// meaning_transfer_level, Adaptation over ADP on items both marked
// applicable, Overall over overall_level. Items missing from either
// annotator are excluded and listed. Throws NeedExactlyTwoAnnotators or
// NoSharedItems.
AgreementTable agreement_table(const Project& project, const ScoringConfig& cfg);

}  // namespace arahope
