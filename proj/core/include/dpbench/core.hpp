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

#ifndef DPBENCH_CORE_HPP
#define DPBENCH_CORE_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpbench/matrix.hpp"

namespace dpbench {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
// Violated caller contract (e.g. handing unclipped gradients to a DP update).
struct ContractError : Error {
  using Error::Error;
};

/// Pipeline position where DP noise is injected. None encodes the non-private
/// baseline (epsilon = infinity) without pushing IEEE infinities through
/// noise-scale arithmetic.
enum class Stage { S1, S2, S3, None };

std::string stage_name(Stage s);
Stage stage_from_name(const std::string& name);

/// A strictly positive privacy budget bound to the stage it is spent at.
class PrivacyBudget {
 public:
  static PrivacyBudget none() { return PrivacyBudget(); }
  PrivacyBudget(Stage stage, double epsilon);

  Stage stage() const { return stage_; }
  bool is_private() const { return stage_ != Stage::None; }

  /// Only valid when is_private(); the baseline has no finite epsilon.
  double epsilon() const;

 private:
  PrivacyBudget() = default;
  Stage stage_ = Stage::None;
  double epsilon_ = 0.0;
};

struct FeatureRange {
  double min = 0.0;
  double max = 1.0;
  double width() const { return max - min; }
  friend bool operator==(const FeatureRange&, const FeatureRange&) = default;
};

/// Normalized feature matrix plus integer class labels; the unit every
/// pipeline stage, model, and attack consumes. Immutable after construction.
class LabeledDataset {
 public:
  LabeledDataset(Matrix features, std::vector<std::size_t> labels,
                 std::size_t n_classes, std::vector<FeatureRange> feature_ranges);

  std::size_t n() const { return features_.rows(); }
  std::size_t p() const { return features_.cols(); }
  std::size_t k() const { return n_classes_; }

  const Matrix& features() const { return features_; }
  const std::vector<std::size_t>& labels() const { return labels_; }
  const std::vector<FeatureRange>& feature_ranges() const { return feature_ranges_; }

  /// Row subset in the given index order. Declared ranges and class count are
  /// carried over verbatim, never recomputed from the subset.
  LabeledDataset subset(const std::vector<std::size_t>& indices) const;

  /// Per-class sample counts (length k).
  std::vector<std::size_t> class_counts() const;

 private:
  Matrix features_;
  std::vector<std::size_t> labels_;
  std::size_t n_classes_;
  std::vector<FeatureRange> feature_ranges_;
};

/// Outcome of one inference attack run. advantage == tpr - fpr always.
struct AttackResult {
  double tpr = 0.0;
  double fpr = 0.0;
  double advantage = 0.0;
  std::size_t n_members = 0;
  std::size_t n_nonmembers = 0;
};

AttackResult make_attack_result(double tpr, double fpr, std::size_t n_members,
                                std::size_t n_nonmembers);

/// Adversary advantage ADV = TPR - FPR. Inputs must lie in [0, 1].
double advantage(double tpr, double fpr);

/// Accuracy loss 1 - acc/acc_baseline. May be negative (a DP model can beat
/// its non-private counterpart); the value is never clamped.
double accuracy_loss(double acc, double acc_baseline);

struct NormalizedMatrix {
  Matrix features;                    // every column affinely mapped into [0,1]
  std::vector<FeatureRange> ranges;   // declared per-feature range after the map
};

/// Per-column min-max normalization into [0,1]. Constant columns map to the
/// midpoint 0.5 and record the degenerate range (0.5, 0.5), which downstream
/// noise scaling treats as width zero. Rejects non-finite entries.
NormalizedMatrix minmax_normalize(const Matrix& raw);

/// Convenience: normalize raw features and bundle them with labels.
LabeledDataset make_dataset(const Matrix& raw_features,
                            std::vector<std::size_t> labels,
                            std::size_t n_classes);

}  // namespace dpbench

#endif  // DPBENCH_CORE_HPP
