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

#ifndef DPBENCH_MECHANISMS_HPP
#define DPBENCH_MECHANISMS_HPP

#include <cstddef>
#include <span>

#include "dpbench/core.hpp"
#include "dpbench/rng.hpp"

namespace dpbench {

// Scale floor applied when a feature's declared range is degenerate (width 0).
// A constant feature carries no identifying information, so it effectively
// receives no noise instead of tripping a division by zero.
inline constexpr double kLaplaceScaleFloor = 1e-12;

struct LaplaceScale {
  double beta = 1.0;  // > 0 and finite
};

/// Standard Laplace inverse CDF (location 0, scale 1) evaluated at u in (0,1).
/// Noise draws are always beta * laplace_unit(u), so for a fixed uniform draw
/// a smaller scale yields a strictly smaller |noise|.
double laplace_unit(double u);

/// One draw from Lap(0, beta) via inverse-CDF on a uniform draw.
double laplace_sample(const LaplaceScale& scale, SeededRng& rng);

/// Input-perturbation scale beta_i = S_i * p / epsilon for a feature with
/// declared range width S_i in a p-dimensional dataset. Degenerate ranges are
/// floored at kLaplaceScaleFloor. epsilon must be positive.
LaplaceScale s1_scale(double feature_range, double epsilon, std::size_t p);

/// Adds independent Laplace noise to every feature of every training vector,
/// scaled per feature off the declared range (never the realized sample
/// min/max). Labels pass through untouched and perturbed values are not
/// clipped back into [0,1]; the returned dataset's declared ranges are widened
/// to the realized envelope so its invariants still hold. Apply to training
/// data only; test data is never perturbed.
LabeledDataset perturb_dataset_s1(const LabeledDataset& train, double epsilon,
                                  SeededRng& rng);

struct SgdNoiseConfig {
  double clip_norm = 1.0;          // L1 bound C on each per-example gradient
  double epsilon_total = 1.0;      // budget spent over the whole training run
  std::size_t n_batches_total = 1; // T
  std::size_t batch_size = 1;
};

/// Per-batch budget under basic sequential composition: epsilon_total / T.
double per_batch_epsilon(const SgdNoiseConfig& cfg);

/// L1 norm of a vector.
double l1_norm(std::span<const double> v);

/// Scales grad in place so its L1 norm is at most clip_norm.
void clip_l1(std::span<double> grad, double clip_norm);

/// Throws ContractError if grad's L1 norm exceeds clip_norm + 1e-9.
void check_clipped(std::span<const double> grad, double clip_norm);

/// One DP-SGD step: params -= lr * (summed_clipped_grad + noise) / n_examples,
/// with per-coordinate Laplace scale clip_norm / per_batch_epsilon (the L1
/// sensitivity of a sum of clipped per-example gradients is clip_norm under
/// add/remove-one neighboring). Every per-example gradient in the sum must
/// already be clipped to L1 norm <= clip_norm; a summed norm above
/// n_examples * clip_norm is rejected as a contract violation. With add_noise
/// false (the stage-None baseline) the step is plain minibatch SGD,
/// bit-for-bit.
void dp_sgd_update(std::span<double> params,
                   std::span<const double> summed_clipped_grad,
                   const SgdNoiseConfig& cfg, double learning_rate,
                   std::size_t n_examples, SeededRng& rng,
                   bool add_noise = true);

/// Per-feature sensitivities for DP Gaussian Naive Bayes statistics of one
/// class with n_class samples: s_mu = range/(n+1), s_sigma = sqrt(n)*range/(n+1),
/// each statistic spending an even share epsilon/(2p) of the class budget.
/// Classes compose in parallel because they partition the records.
struct NbSensitivity {
  double s_mu = 0.0;
  double s_sigma = 0.0;
  double epsilon_share = 0.0;
};

NbSensitivity nb_sensitivities(std::size_t n_class, double feature_range,
                               double epsilon, std::size_t p);

}  // namespace dpbench

#endif  // DPBENCH_MECHANISMS_HPP
