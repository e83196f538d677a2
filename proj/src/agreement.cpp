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

#include "arahope/agreement.hpp"

#include <algorithm>
#include <set>

#include "arahope/error.hpp"
#include "arahope/scoring.hpp"

namespace arahope {

ConfusionMatrix::ConfusionMatrix(std::size_t k) : k_(k), counts_(k * k, 0) {
  if (k < 2) {
    throw Error(ErrorCode::LevelOutOfRange, "a confusion matrix needs k >= 2 levels");
  }
}

void ConfusionMatrix::add(std::size_t row, std::size_t col, std::int64_t count) {
  if (row >= k_ || col >= k_) {
    throw Error(ErrorCode::LevelOutOfRange, "level outside [0, " + std::to_string(k_) + ")");
  }
  if (count < 0) throw Error(ErrorCode::LevelOutOfRange, "negative count");
  counts_[row * k_ + col] += count;
  n_ += count;
}

ConfusionMatrix ConfusionMatrix::transposed() const {
  ConfusionMatrix t(k_);
  for (std::size_t i = 0; i < k_; ++i) {
    for (std::size_t j = 0; j < k_; ++j) t.add(j, i, at(i, j));
  }
  return t;
}

ConfusionMatrix confusion_matrix(std::span<const int> ratings_a, std::span<const int> ratings_b,
                                 std::size_t k) {
  if (ratings_a.size() != ratings_b.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "rating lists differ in length (" + std::to_string(ratings_a.size()) + " vs " +
                    std::to_string(ratings_b.size()) + ")");
  }
  ConfusionMatrix m(k);
  for (std::size_t i = 0; i < ratings_a.size(); ++i) {
    int a = ratings_a[i];
    int b = ratings_b[i];
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= k || static_cast<std::size_t>(b) >= k) {
      throw Error(ErrorCode::LevelOutOfRange,
                  "rating pair " + std::to_string(i) + " outside [0, " + std::to_string(k) + ")",
                  {{"position", i}});
    }
    m.add(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  }
  return m;
}

std::optional<double> qwk(const ConfusionMatrix& m) {
  if (m.n() == 0) throw Error(ErrorCode::EmptyMatrix, "no paired ratings");
  const std::size_t k = m.k();
  std::vector<std::int64_t> rows(k, 0), cols(k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      rows[i] += m.at(i, j);
      cols[j] += m.at(i, j);
    }
  }
  // Both sums scaled by n^2 (k-1)^2, which cancels in the ratio; the
  // integers stay exact until the final division.
  std::int64_t observed = 0;
  std::int64_t expected = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      auto d = static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j);
      observed += d * d * m.at(i, j);
      expected += d * d * rows[i] * cols[j];
    }
  }
  observed *= m.n();
  if (expected == 0) {
    if (observed == 0) return 1.0;
    return std::nullopt;
  }
  return 1.0 - static_cast<double>(observed) / static_cast<double>(expected);
}

int meaning_transfer_level(const Annotation& a, MeaningTransferLevel mode) {
  const SeverityMap& s = a.severities;
  if (mode == MeaningTransferLevel::CappedSum) {
    int sum = 0;
    for (ErrorCategory c : kMeaningTransferCategories) sum += s[c].level();
    return std::min(sum, 2);
  }
  int level = 0;
  for (ErrorCategory c : kMeaningTransferCategories) level = std::max(level, s[c].level());
  return level;
}

int overall_level(const Annotation& a, const ScoringConfig& cfg) {
  return static_cast<int>(bucket(segs(a, cfg), cfg));
}

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::Fluency: return "Fluency";
    case Dimension::MeaningTransfer: return "MeaningTransfer";
    case Dimension::Adaptation: return "Adaptation";
    case Dimension::Overall: return "Overall";
  }
  return "?";
}

std::string_view display_name(Dimension d) {
  return d == Dimension::MeaningTransfer ? "Meaning Transfer" : to_string(d);
}

std::string_view to_string(Band b) {
  switch (b) {
    case Band::Poor: return "Poor";
    case Band::Slight: return "Slight";
    case Band::Fair: return "Fair";
    case Band::Moderate: return "Moderate";
    case Band::Substantial: return "Substantial";
    case Band::AlmostPerfect: return "Almost Perfect";
  }
  return "?";
}

Band band(double kappa) {
  // Keeps values that print as a boundary (e.g. 0.600) in the lower band.
  constexpr double kSlack = 1e-9;
  if (kappa < 0.0) return Band::Poor;
  if (kappa <= 0.20 + kSlack) return Band::Slight;
  if (kappa <= 0.40 + kSlack) return Band::Fair;
  if (kappa <= 0.60 + kSlack) return Band::Moderate;
  if (kappa <= 0.80 + kSlack) return Band::Substantial;
  return Band::AlmostPerfect;
}

const AgreementRow* AgreementTable::find(Dimension d, std::string_view system_id) const {
  auto it = std::find_if(rows.begin(), rows.end(), [&](const AgreementRow& r) {
    return r.dimension == d && r.system_id == system_id;
  });
  return it == rows.end() ? nullptr : &*it;
}

namespace {

std::optional<double> kappa_or_undefined(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.empty()) return std::nullopt;
  return qwk(confusion_matrix(a, b, 3));
}

}  // namespace

AgreementTable agreement_table(const Project& project, const ScoringConfig& cfg) {
  cfg.validate();
  AuthoritativeMap auth = authoritative_annotations(project);

  std::set<std::string> active;
  for (const auto& [key, a] : auth) active.insert(key.annotator_id);
  if (active.size() != 2) {
    throw Error(ErrorCode::NeedExactlyTwoAnnotators,
                "agreement needs exactly two annotators with annotations, found " +
                    std::to_string(active.size()),
                {{"annotators", std::vector<std::string>(active.begin(), active.end())}});
  }
  AgreementTable table;
  std::vector<std::string> ordered;
  for (const auto& id : project.annotators()) {
    if (active.count(id)) ordered.push_back(id);
  }
  table.annotator_a = ordered.at(0);
  table.annotator_b = ordered.at(1);
  table.systems = project.systems();

  for (const auto& system : project.systems()) {
    std::vector<int> flu_a, flu_b, mt_a, mt_b, adp_a, adp_b, all_a, all_b;
    for (const SystemOutput* output : project.outputs_for(system)) {
      auto ia = auth.find({table.annotator_a, output->segment_id, system});
      auto ib = auth.find({table.annotator_b, output->segment_id, system});
      bool has_a = ia != auth.end();
      bool has_b = ib != auth.end();
      if (!has_a || !has_b) {
        if (!has_a) table.excluded.push_back({system, output->segment_id, table.annotator_a});
        if (!has_b) table.excluded.push_back({system, output->segment_id, table.annotator_b});
        continue;
      }
      const Annotation& a = ia->second;
      const Annotation& b = ib->second;
      flu_a.push_back(a.severities[ErrorCategory::FLU].level());
      flu_b.push_back(b.severities[ErrorCategory::FLU].level());
      mt_a.push_back(meaning_transfer_level(a, cfg.meaning_transfer));
      mt_b.push_back(meaning_transfer_level(b, cfg.meaning_transfer));
      if (a.adp_applicable && b.adp_applicable) {
        adp_a.push_back(a.severities[ErrorCategory::ADP].level());
        adp_b.push_back(b.severities[ErrorCategory::ADP].level());
      }
      all_a.push_back(overall_level(a, cfg));
      all_b.push_back(overall_level(b, cfg));
    }
    if (flu_a.empty()) {
      throw Error(ErrorCode::NoSharedItems,
                  "no items of system '" + system + "' were annotated by both annotators",
                  {{"system_id", system}});
    }
    table.rows.push_back({Dimension::Fluency, system, kappa_or_undefined(flu_a, flu_b), flu_a.size()});
    table.rows.push_back(
        {Dimension::MeaningTransfer, system, kappa_or_undefined(mt_a, mt_b), mt_a.size()});
    table.rows.push_back(
        {Dimension::Adaptation, system, kappa_or_undefined(adp_a, adp_b), adp_a.size()});
    table.rows.push_back({Dimension::Overall, system, kappa_or_undefined(all_a, all_b), all_a.size()});
  }
  return table;
}

}  // namespace arahope
