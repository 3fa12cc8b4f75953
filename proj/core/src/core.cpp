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

#include "dpbench/core.hpp"

#include <cmath>
#include <utility>

namespace dpbench {

std::string stage_name(Stage s) {
  switch (s) {
    case Stage::S1: return "S1";
    case Stage::S2: return "S2";
    case Stage::S3: return "S3";
    case Stage::None: return "None";
  }
  throw std::invalid_argument("stage_name: invalid stage");
}

Stage stage_from_name(const std::string& name) {
  if (name == "S1") return Stage::S1;
  if (name == "S2") return Stage::S2;
  if (name == "S3") return Stage::S3;
  if (name == "None") return Stage::None;
  throw std::invalid_argument("stage_from_name: unknown stage '" + name + "'");
}

PrivacyBudget::PrivacyBudget(Stage stage, double epsilon)
    : stage_(stage), epsilon_(epsilon) {
  if (stage == Stage::None)
    throw std::invalid_argument("PrivacyBudget: use none() for the baseline");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("PrivacyBudget: epsilon must be positive and finite");
}

double PrivacyBudget::epsilon() const {
  if (stage_ == Stage::None)
    throw std::logic_error("PrivacyBudget: baseline has no finite epsilon");
  return epsilon_;
}

LabeledDataset::LabeledDataset(Matrix features, std::vector<std::size_t> labels,
                               std::size_t n_classes,
                               std::vector<FeatureRange> feature_ranges)
    : features_(std::move(features)), labels_(std::move(labels)),
      n_classes_(n_classes), feature_ranges_(std::move(feature_ranges)) {
  // n == 0 is tolerated as a degenerate split artifact (e.g. an empty test
  // half); primary datasets always arrive with n >= 1.
  if (features_.cols() < 1)
    throw std::invalid_argument("LabeledDataset: need p >= 1");
  if (n_classes_ < 2)
    throw std::invalid_argument("LabeledDataset: need k >= 2");
  if (labels_.size() != features_.rows())
    throw std::invalid_argument("LabeledDataset: labels/features row mismatch");
  if (feature_ranges_.size() != features_.cols())
    throw std::invalid_argument("LabeledDataset: one range per feature required");
  for (std::size_t label : labels_) {
    if (label >= n_classes_)
      throw std::invalid_argument("LabeledDataset: label out of [0, k)");
  }
  for (std::size_t j = 0; j < features_.cols(); ++j) {
    const auto& r = feature_ranges_[j];
    if (!std::isfinite(r.min) || !std::isfinite(r.max) || r.min > r.max)
      throw std::invalid_argument("LabeledDataset: malformed feature range");
  }
  for (std::size_t i = 0; i < features_.rows(); ++i) {
    for (std::size_t j = 0; j < features_.cols(); ++j) {
      double v = features_(i, j);
      if (!std::isfinite(v) || v < feature_ranges_[j].min || v > feature_ranges_[j].max)
        throw std::invalid_argument(
            "LabeledDataset: feature value outside declared range");
    }
  }
}

LabeledDataset LabeledDataset::subset(const std::vector<std::size_t>& indices) const {
  Matrix sub(indices.size(), p());
  std::vector<std::size_t> sub_labels(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    std::size_t src = indices[i];
    if (src >= n()) throw std::invalid_argument("subset: index out of range");
    for (std::size_t j = 0; j < p(); ++j) sub(i, j) = features_(src, j);
    sub_labels[i] = labels_[src];
  }
  return LabeledDataset(std::move(sub), std::move(sub_labels), n_classes_,
                        feature_ranges_);
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(n_classes_, 0);
  for (std::size_t label : labels_) ++counts[label];
  return counts;
}

AttackResult make_attack_result(double tpr, double fpr, std::size_t n_members,
                                std::size_t n_nonmembers) {
  if (n_members == 0 || n_nonmembers == 0)
    throw std::invalid_argument("AttackResult: counts must be positive");
  AttackResult r;
  r.tpr = tpr;
  r.fpr = fpr;
  r.advantage = advantage(tpr, fpr);
  r.n_members = n_members;
  r.n_nonmembers = n_nonmembers;
  return r;
}

double advantage(double tpr, double fpr) {
  if (!(tpr >= 0.0 && tpr <= 1.0) || !(fpr >= 0.0 && fpr <= 1.0))
    throw std::invalid_argument("advantage: rates must lie in [0, 1]");
  return tpr - fpr;
}

double accuracy_loss(double acc, double acc_baseline) {
  if (!(acc >= 0.0 && acc <= 1.0))
    throw std::invalid_argument("accuracy_loss: acc must lie in [0, 1]");
  if (!(acc_baseline > 0.0 && acc_baseline <= 1.0))
    throw std::invalid_argument("accuracy_loss: baseline must lie in (0, 1]");
  return 1.0 - acc / acc_baseline;
}

NormalizedMatrix minmax_normalize(const Matrix& raw) {
  if (raw.rows() < 1 || raw.cols() < 1)
    throw std::invalid_argument("minmax_normalize: empty matrix");
  NormalizedMatrix out;
  out.features = Matrix(raw.rows(), raw.cols());
  out.ranges.resize(raw.cols());
  for (std::size_t j = 0; j < raw.cols(); ++j) {
    double lo = raw(0, j), hi = raw(0, j);
    for (std::size_t i = 0; i < raw.rows(); ++i) {
      double v = raw(i, j);
      if (!std::isfinite(v))
        throw std::invalid_argument("minmax_normalize: non-finite entry in column " +
                                    std::to_string(j));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (lo == hi) {
      for (std::size_t i = 0; i < raw.rows(); ++i) out.features(i, j) = 0.5;
      out.ranges[j] = FeatureRange{0.5, 0.5};
    } else {
      double width = hi - lo;
      for (std::size_t i = 0; i < raw.rows(); ++i)
        out.features(i, j) = (raw(i, j) - lo) / width;
      out.ranges[j] = FeatureRange{0.0, 1.0};
    }
  }
  return out;
}

LabeledDataset make_dataset(const Matrix& raw_features,
                            std::vector<std::size_t> labels,
                            std::size_t n_classes) {
  NormalizedMatrix nm = minmax_normalize(raw_features);
  return LabeledDataset(std::move(nm.features), std::move(labels), n_classes,
                        std::move(nm.ranges));
}

}  // namespace dpbench
