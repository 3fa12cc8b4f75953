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

#include "dpbench/mechanisms.hpp"

#include <cmath>
#include <limits>

namespace dpbench {

double laplace_unit(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::invalid_argument("laplace_unit: u must lie in (0, 1)");
  return u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
}

double laplace_sample(const LaplaceScale& scale, SeededRng& rng) {
  if (!(scale.beta > 0.0) || !std::isfinite(scale.beta))
    throw std::invalid_argument("laplace_sample: beta must be positive and finite");
  return scale.beta * laplace_unit(rng.uniform_open());
}

LaplaceScale s1_scale(double feature_range, double epsilon, std::size_t p) {
  if (!(feature_range >= 0.0) || !std::isfinite(feature_range))
    throw std::invalid_argument("s1_scale: feature range must be >= 0 and finite");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("s1_scale: epsilon must be positive and finite");
  if (p < 1) throw std::invalid_argument("s1_scale: p must be >= 1");
  double beta = feature_range * static_cast<double>(p) / epsilon;
  return LaplaceScale{std::max(beta, kLaplaceScaleFloor)};
}

LabeledDataset perturb_dataset_s1(const LabeledDataset& train, double epsilon,
                                  SeededRng& rng) {
  const std::size_t n = train.n();
  const std::size_t p = train.p();
  std::vector<LaplaceScale> scales;
  scales.reserve(p);
  for (std::size_t j = 0; j < p; ++j)
    scales.push_back(s1_scale(train.feature_ranges()[j].width(), epsilon, p));

  Matrix noisy(n, p);
  std::vector<FeatureRange> ranges = train.feature_ranges();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double v = train.features()(i, j) + laplace_sample(scales[j], rng);
      noisy(i, j) = v;
      // Perturbed values are not clipped; widen the declared range to the
      // realized envelope so the dataset invariants still hold.
      ranges[j].min = std::min(ranges[j].min, v);
      ranges[j].max = std::max(ranges[j].max, v);
    }
  }
  return LabeledDataset(std::move(noisy), train.labels(), train.k(),
                        std::move(ranges));
}

double per_batch_epsilon(const SgdNoiseConfig& cfg) {
  if (!(cfg.epsilon_total > 0.0) || !std::isfinite(cfg.epsilon_total))
    throw std::invalid_argument("per_batch_epsilon: epsilon must be positive");
  if (cfg.n_batches_total < 1)
    throw std::invalid_argument("per_batch_epsilon: need at least one batch");
  return cfg.epsilon_total / static_cast<double>(cfg.n_batches_total);
}

double l1_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

void clip_l1(std::span<double> grad, double clip_norm) {
  if (!(clip_norm > 0.0) || !std::isfinite(clip_norm))
    throw std::invalid_argument("clip_l1: clip norm must be positive and finite");
  double norm = l1_norm(grad);
  if (norm > clip_norm) {
    double scale = clip_norm / norm;
    for (double& x : grad) x *= scale;
  }
}

void check_clipped(std::span<const double> grad, double clip_norm) {
  if (l1_norm(grad) > clip_norm + 1e-9)
    throw ContractError("dp_sgd: unclipped gradient detected (L1 norm " +
                        std::to_string(l1_norm(grad)) + " > clip norm " +
                        std::to_string(clip_norm) + ")");
}

void dp_sgd_update(std::span<double> params,
                   std::span<const double> summed_clipped_grad,
                   const SgdNoiseConfig& cfg, double learning_rate,
                   std::size_t n_examples, SeededRng& rng, bool add_noise) {
  if (params.size() != summed_clipped_grad.size())
    throw std::invalid_argument("dp_sgd_update: size mismatch");
  if (n_examples < 1)
    throw std::invalid_argument("dp_sgd_update: empty batch");
  const double inv_batch = 1.0 / static_cast<double>(n_examples);

  if (!add_noise) {
    // Stage-None baseline: plain minibatch SGD, no clipping contract and no
    // noise draw at all, so the step is bit-identical to non-private SGD.
    for (std::size_t i = 0; i < params.size(); ++i)
      params[i] -= learning_rate * summed_clipped_grad[i] * inv_batch;
    return;
  }

  // Sum of n clipped per-example gradients can reach n * C at most; anything
  // above that means a caller skipped clipping.
  check_clipped(summed_clipped_grad,
                cfg.clip_norm * static_cast<double>(n_examples));

  const double eps_batch = per_batch_epsilon(cfg);
  const LaplaceScale noise_scale{cfg.clip_norm / eps_batch};
  for (std::size_t i = 0; i < params.size(); ++i) {
    double noise = laplace_sample(noise_scale, rng);
    params[i] -= learning_rate * (summed_clipped_grad[i] + noise) * inv_batch;
  }
}

NbSensitivity nb_sensitivities(std::size_t n_class, double feature_range,
                               double epsilon, std::size_t p) {
  if (n_class < 2)
    throw std::invalid_argument("nb_sensitivities: class needs >= 2 samples");
  if (!(feature_range >= 0.0) || !std::isfinite(feature_range))
    throw std::invalid_argument("nb_sensitivities: bad feature range");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw std::invalid_argument("nb_sensitivities: epsilon must be positive");
  if (p < 1) throw std::invalid_argument("nb_sensitivities: p must be >= 1");

  const double n = static_cast<double>(n_class);
  NbSensitivity s;
  s.s_mu = std::max(feature_range / (n + 1.0), kLaplaceScaleFloor);
  s.s_sigma = std::max(std::sqrt(n) * feature_range / (n + 1.0), kLaplaceScaleFloor);
  // epsilon split evenly over the 2p perturbed statistics of one class;
  // classes compose in parallel over disjoint records.
  s.epsilon_share = epsilon / (2.0 * static_cast<double>(p));
  return s;
}

}  // namespace dpbench
