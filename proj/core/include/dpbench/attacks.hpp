// Copyright 2026 The dpbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPBENCH_ATTACKS_HPP
#define DPBENCH_ATTACKS_HPP

#include <cstddef>
#include <vector>

#include "dpbench/core.hpp"
#include "dpbench/models.hpp"
#include "dpbench/rng.hpp"

namespace dpbench {

/// Candidate values for one protected attribute. Attributes with at most 10
/// unique values keep those exact values (a binary attribute gets exactly 2);
/// continuous attributes get 10 equal-width bins over the declared feature
/// range with bin centers as candidates.
struct AttributeBinning {
  std::size_t attribute_index = 0;
  std::vector<double> bin_edges;         // strictly increasing interior edges
  std::size_t n_bins = 0;                // == candidate_values.size()
  std::vector<double> candidate_values;  // sorted ascending

  /// Index of the bin containing a value. Candidate j always maps to bin j.
  std::size_t bin_of(double value) const;
};

AttributeBinning make_binning(const LabeledDataset& train,
                              std::size_t attribute_index);

/// Membership threshold calibrated on data disjoint from the evaluation sets.
struct MiThreshold {
  double threshold = 0.0;
  std::size_t calibration_size = 0;
};

/// Maximum-confidence threshold maximizing TPR - FPR on the reference sets;
/// ties break toward the larger threshold. Reference sets must be disjoint
/// from the sets later evaluated (the harness asserts this at index level).
MiThreshold calibrate_salem_threshold(const PredictiveModel& model,
                                      const LabeledDataset& ref_members,
                                      const LabeledDataset& ref_nonmembers);

/// Salem membership inference: predict "member" iff the maximum predicted
/// class probability is >= threshold. Label-free.
AttackResult salem_mi(const PredictiveModel& model, const LabeledDataset& members,
                      const LabeledDataset& nonmembers, const MiThreshold& threshold);

/// Yeom membership inference: predict "member" iff the per-example loss is
/// <= the model's recorded training loss.
AttackResult yeom_mi(const PredictiveModel& model, const LabeledDataset& members,
                     const LabeledDataset& nonmembers);

/// Yeom attribute inference: given all features but one and the true label,
/// return the candidate whose substituted loss is closest to the model's
/// training loss. Ties break to the smallest candidate. The value currently
/// stored at the protected column is ignored.
double yeom_ai_guess(const PredictiveModel& model, std::span<const double> x,
                     std::size_t true_label, const AttributeBinning& binning);

/// Salem attribute inference: the candidate with the highest model confidence.
/// No true label needed. Ties break to the smallest candidate.
double salem_ai_guess(const PredictiveModel& model, std::span<const double> x,
                      const AttributeBinning& binning);

enum class AiAttack { Yeom, Salem };

struct AiAdvantage {
  double mean_advantage = 0.0;
  std::vector<std::size_t> attribute_indices;  // sorted ascending
  std::vector<double> per_attribute;           // aligned with attribute_indices
  /// Sample std over per-attribute advantages (0 when fewer than 2).
  double stddev() const;
};

/// Attribute-inference advantage over n_attributes protected columns sampled
/// without replacement: per attribute, success rate on members (guessed bin ==
/// true bin) minus success rate on non-members. May be negative. Binnings are
/// built from the members' dataset.
AiAdvantage ai_advantage(const PredictiveModel& model, const LabeledDataset& members,
                         const LabeledDataset& nonmembers, std::size_t n_attributes,
                         SeededRng rng, AiAttack kind);

}  // namespace dpbench

#endif  // DPBENCH_ATTACKS_HPP
