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

#include <cmath>
#include <numbers>
#include <utility>

#include "dpbench/mechanisms.hpp"
#include "dpbench/models.hpp"

namespace dpbench {

namespace {

constexpr double kHalfLog2Pi = 0.5 * 1.8378770664093454836;  // log(2*pi)

struct GnbStats {
  std::vector<double> priors;
  Matrix means;
  Matrix stds;  // population std, not floored yet
  std::vector<std::size_t> counts;
};

GnbStats compute_stats(const LabeledDataset& train) {
  const std::size_t k = train.k();
  const std::size_t p = train.p();
  GnbStats s;
  s.counts = train.class_counts();
  for (std::size_t c = 0; c < k; ++c) {
    if (s.counts[c] < 2)
      throw std::invalid_argument("fit_gnb: class " + std::to_string(c) +
                                  " has fewer than 2 samples");
  }
  s.priors.resize(k);
  s.means = Matrix(k, p);
  s.stds = Matrix(k, p);
  for (std::size_t i = 0; i < train.n(); ++i) {
    std::size_t c = train.labels()[i];
    for (std::size_t j = 0; j < p; ++j) s.means(c, j) += train.features()(i, j);
  }
  for (std::size_t c = 0; c < k; ++c) {
    double inv = 1.0 / static_cast<double>(s.counts[c]);
    s.priors[c] = static_cast<double>(s.counts[c]) / static_cast<double>(train.n());
    for (std::size_t j = 0; j < p; ++j) s.means(c, j) *= inv;
  }
  for (std::size_t i = 0; i < train.n(); ++i) {
    std::size_t c = train.labels()[i];
    for (std::size_t j = 0; j < p; ++j) {
      double d = train.features()(i, j) - s.means(c, j);
      s.stds(c, j) += d * d;
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    double inv = 1.0 / static_cast<double>(s.counts[c]);
    for (std::size_t j = 0; j < p; ++j)
      s.stds(c, j) = std::sqrt(s.stds(c, j) * inv);
  }
  return s;
}

void floor_stds(Matrix& stds) {
  for (std::size_t c = 0; c < stds.rows(); ++c)
    for (std::size_t j = 0; j < stds.cols(); ++j)
      stds(c, j) = std::max(stds(c, j), kStdFloor);
}

double mean_training_loss(const PredictiveModel& model, const LabeledDataset& train) {
  double total = 0.0;
  for (std::size_t i = 0; i < train.n(); ++i)
    total += per_example_loss(model, train.features().row(i), train.labels()[i]);
  return total / static_cast<double>(train.n());
}

}  // namespace

GnbModel::GnbModel(std::vector<double> class_priors, Matrix means, Matrix stds,
                   PrivacyBudget privacy, double training_loss)
    : class_priors_(std::move(class_priors)), means_(std::move(means)),
      stds_(std::move(stds)), privacy_(privacy), training_loss_(training_loss) {
  if (means_.rows() != stds_.rows() || means_.cols() != stds_.cols() ||
      class_priors_.size() != means_.rows())
    throw std::invalid_argument("GnbModel: shape mismatch");
  double total = 0.0;
  for (double prior : class_priors_) {
    if (!(prior > 0.0)) throw std::invalid_argument("GnbModel: priors must be positive");
    total += prior;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("GnbModel: priors must sum to 1");
  for (std::size_t c = 0; c < stds_.rows(); ++c)
    for (std::size_t j = 0; j < stds_.cols(); ++j)
      if (!(stds_(c, j) >= kStdFloor))
        throw std::invalid_argument("GnbModel: std below floor");
}

void GnbModel::predict_row(std::span<const double> x, std::span<double> out) const {
  const std::size_t k = n_classes();
  const std::size_t p = n_features();
  if (x.size() != p) throw std::invalid_argument("predict: feature width mismatch");
  if (out.size() != k) throw std::invalid_argument("predict: output width mismatch");

  // Joint log-likelihood per class; softmax with max-shift keeps it stable.
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    double score = std::log(class_priors_[c]);
    for (std::size_t j = 0; j < p; ++j) {
      double z = (x[j] - means_(c, j)) / stds_(c, j);
      score += -0.5 * z * z - std::log(stds_(c, j)) - kHalfLog2Pi;
    }
    out[c] = score;
    best = std::max(best, score);
  }
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    out[c] = std::exp(out[c] - best);
    total += out[c];
  }
  for (std::size_t c = 0; c < k; ++c) out[c] /= total;
}

GnbModel fit_gnb(const LabeledDataset& train, const PrivacyBudget& tag) {
  if (tag.stage() == Stage::S2 || tag.stage() == Stage::S3)
    throw std::invalid_argument("fit_gnb: tag must be stage None or S1");
  GnbStats s = compute_stats(train);
  floor_stds(s.stds);
  GnbModel model(s.priors, s.means, s.stds, tag, 0.0);
  return GnbModel(std::move(s.priors), std::move(s.means), std::move(s.stds), tag,
                  mean_training_loss(model, train));
}

GnbModel fit_gnb_dp(const LabeledDataset& train, const PrivacyBudget& budget,
                    SeededRng rng) {
  if (!budget.is_private()) return fit_gnb(train);
  if (budget.stage() != Stage::S3)
    throw std::invalid_argument("fit_gnb_dp: budget must be stage S3");
  const double epsilon = budget.epsilon();
  const std::size_t p = train.p();

  GnbStats s = compute_stats(train);
  // Laplace noise on every per-class mean and std, feature by feature (mean
  // first, then std), scale = sensitivity / per-statistic budget share.
  // Priors stay exact. A negatively-noised std is folded to its magnitude
  // (plain post-processing of the released value, so the DP guarantee is
  // untouched): clamping it to the tiny floor instead would turn the Gaussian
  // into a near-delta spike and silently delete the class from the model.
  for (std::size_t c = 0; c < s.means.rows(); ++c) {
    for (std::size_t j = 0; j < p; ++j) {
      NbSensitivity sens = nb_sensitivities(
          s.counts[c], train.feature_ranges()[j].width(), epsilon, p);
      s.means(c, j) += laplace_sample(LaplaceScale{sens.s_mu / sens.epsilon_share}, rng);
      s.stds(c, j) = std::abs(
          s.stds(c, j) +
          laplace_sample(LaplaceScale{sens.s_sigma / sens.epsilon_share}, rng));
    }
  }
  floor_stds(s.stds);
  GnbModel model(s.priors, s.means, s.stds, budget, 0.0);
  return GnbModel(std::move(s.priors), std::move(s.means), std::move(s.stds),
                  budget, mean_training_loss(model, train));
}

GnbModel fit_gnb_dp(const LabeledDataset& train, double epsilon, SeededRng rng) {
  return fit_gnb_dp(train, PrivacyBudget(Stage::S3, epsilon), rng);
}

}  // namespace dpbench
