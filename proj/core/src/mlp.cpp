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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "dpbench/mechanisms.hpp"
#include "dpbench/models.hpp"

namespace dpbench {

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::Tanh: return "tanh";
    case Activation::Relu: return "relu";
  }
  throw std::invalid_argument("activation_name: invalid activation");
}

Activation activation_from_name(const std::string& name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "relu") return Activation::Relu;
  throw std::invalid_argument("activation_from_name: unknown activation '" +
                              name + "'");
}

namespace {

double activate(Activation act, double z) {
  return act == Activation::Tanh ? std::tanh(z) : std::max(0.0, z);
}

// Derivative expressed through the activation value.
double activate_grad(Activation act, double a) {
  return act == Activation::Tanh ? 1.0 - a * a : (a > 0.0 ? 1.0 : 0.0);
}

std::size_t param_count(const std::vector<std::size_t>& sizes) {
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
    total += sizes[l + 1] * sizes[l] + sizes[l + 1];
  return total;
}

// Per layer: weights (out x in, row-major), then bias.
struct Workspace {
  std::vector<std::vector<double>> acts;  // acts[0] = input, acts[L] = probs
  std::vector<double> delta;
  std::vector<double> delta_prev;

  explicit Workspace(const std::vector<std::size_t>& sizes) {
    acts.resize(sizes.size());
    for (std::size_t l = 0; l < sizes.size(); ++l) acts[l].resize(sizes[l]);
    std::size_t widest = *std::max_element(sizes.begin(), sizes.end());
    delta.resize(widest);
    delta_prev.resize(widest);
  }
};

void forward(const std::vector<std::size_t>& sizes, Activation act,
             std::span<const double> params, std::span<const double> x,
             Workspace& ws) {
  const std::size_t n_layers = sizes.size() - 1;
  std::copy(x.begin(), x.end(), ws.acts[0].begin());
  std::size_t off = 0;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const std::size_t in = sizes[l];
    const std::size_t out = sizes[l + 1];
    const double* w = params.data() + off;
    const double* b = params.data() + off + out * in;
    const double* a_in = ws.acts[l].data();
    double* a_out = ws.acts[l + 1].data();
    for (std::size_t i = 0; i < out; ++i) {
      const double* wi = w + i * in;
      double z = b[i];
      for (std::size_t j = 0; j < in; ++j) z += wi[j] * a_in[j];
      a_out[i] = (l + 1 < n_layers) ? activate(act, z) : z;
    }
    off += out * in + out;
  }
  // Softmax over the output logits, shifted by the max for stability.
  auto& logits = ws.acts[n_layers];
  double m = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double& v : logits) {
    v = std::exp(v - m);
    total += v;
  }
  for (double& v : logits) v /= total;
}

// Gradient of -log p[label] w.r.t. all parameters; forward() must have run.
void backward(const std::vector<std::size_t>& sizes, Activation act,
              std::span<const double> params, std::size_t label, Workspace& ws,
              std::span<double> grad_out) {
  const std::size_t n_layers = sizes.size() - 1;
  const auto& probs = ws.acts[n_layers];
  for (std::size_t i = 0; i < probs.size(); ++i)
    ws.delta[i] = probs[i] - (i == label ? 1.0 : 0.0);

  std::size_t off_end = grad_out.size();
  for (std::size_t l = n_layers; l-- > 0;) {
    const std::size_t in = sizes[l];
    const std::size_t out = sizes[l + 1];
    const std::size_t off = off_end - (out * in + out);
    double* gw = grad_out.data() + off;
    double* gb = grad_out.data() + off + out * in;
    const double* w = params.data() + off;
    const double* a_in = ws.acts[l].data();

    for (std::size_t i = 0; i < out; ++i) {
      const double d = ws.delta[i];
      double* gwi = gw + i * in;
      for (std::size_t j = 0; j < in; ++j) gwi[j] = d * a_in[j];
      gb[i] = d;
    }
    if (l > 0) {
      for (std::size_t j = 0; j < in; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < out; ++i) s += w[i * in + j] * ws.delta[i];
        ws.delta_prev[j] = s * activate_grad(act, a_in[j]);
      }
      std::swap(ws.delta, ws.delta_prev);
    }
    off_end = off;
  }
}

std::vector<double> init_params(const std::vector<std::size_t>& sizes,
                                SeededRng& rng) {
  std::vector<double> params(param_count(sizes));
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const std::size_t in = sizes[l];
    const std::size_t out = sizes[l + 1];
    // Scaled uniform init, +-sqrt(6 / (fan_in + fan_out)); biases start at 0.
    const double a = std::sqrt(6.0 / static_cast<double>(in + out));
    for (std::size_t i = 0; i < out * in; ++i)
      params[off + i] = rng.uniform_range(-a, a);
    off += out * in + out;
  }
  return params;
}

double dataset_mean_loss(const std::vector<std::size_t>& sizes, Activation act,
                         std::span<const double> params,
                         const LabeledDataset& ds, Workspace& ws) {
  double total = 0.0;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    forward(sizes, act, params, ds.features().row(i), ws);
    total += -std::log(std::max(ws.acts.back()[ds.labels()[i]], kProbFloor));
  }
  return total / static_cast<double>(ds.n());
}

}  // namespace

MlpModel::MlpModel(std::vector<std::size_t> layer_sizes, Activation activation,
                   std::vector<double> params, PrivacyBudget privacy,
                   double training_loss)
    : layer_sizes_(std::move(layer_sizes)), activation_(activation),
      params_(std::move(params)), privacy_(privacy), training_loss_(training_loss) {
  if (layer_sizes_.size() < 2)
    throw std::invalid_argument("MlpModel: need at least input and output layers");
  for (std::size_t s : layer_sizes_)
    if (s == 0) throw std::invalid_argument("MlpModel: zero-width layer");
  if (layer_sizes_.back() < 2)
    throw std::invalid_argument("MlpModel: output width must be >= 2");
  if (params_.size() != param_count(layer_sizes_))
    throw std::invalid_argument("MlpModel: parameter count mismatch");
}

void MlpModel::predict_row(std::span<const double> x, std::span<double> out) const {
  if (x.size() != n_features())
    throw std::invalid_argument("predict: feature width mismatch");
  if (out.size() != n_classes())
    throw std::invalid_argument("predict: output width mismatch");
  Workspace ws(layer_sizes_);
  forward(layer_sizes_, activation_, params_, x, ws);
  std::copy(ws.acts.back().begin(), ws.acts.back().end(), out.begin());
}

void MlpModel::per_example_gradient(std::span<const double> x, std::size_t label,
                                    std::span<double> grad_out) const {
  if (grad_out.size() != params_.size())
    throw std::invalid_argument("per_example_gradient: gradient size mismatch");
  if (label >= n_classes())
    throw std::invalid_argument("per_example_gradient: label out of range");
  Workspace ws(layer_sizes_);
  forward(layer_sizes_, activation_, params_, x, ws);
  backward(layer_sizes_, activation_, params_, label, ws, grad_out);
}

MlpModel train_mlp(const LabeledDataset& train, const MlpHyperparams& hyper,
                   const PrivacyBudget& budget, double clip_norm, SeededRng rng) {
  if (train.n() == 0) throw std::invalid_argument("fit_mlp: empty training set");
  if (!(hyper.learning_rate > 0.0) || !std::isfinite(hyper.learning_rate))
    throw std::invalid_argument("fit_mlp: learning rate must be positive");
  if (hyper.batch_size < 1)
    throw std::invalid_argument("fit_mlp: batch size must be >= 1");
  if (budget.stage() == Stage::S3)
    throw std::invalid_argument("fit_mlp: stage S3 does not apply to the MLP");
  const bool dp = budget.stage() == Stage::S2;

  std::vector<std::size_t> sizes;
  sizes.push_back(train.p());
  sizes.insert(sizes.end(), hyper.hidden_layers.begin(), hyper.hidden_layers.end());
  sizes.push_back(train.k());

  SeededRng init_rng = rng.derive("init");
  SeededRng shuffle_rng = rng.derive("shuffle");
  SeededRng noise_rng = rng.derive("noise");
  std::vector<double> params = init_params(sizes, init_rng);

  const std::size_t n = train.n();
  const std::size_t batch = hyper.batch_size;
  const std::size_t batches_per_epoch = (n + batch - 1) / batch;
  const std::size_t total_batches =
      std::max<std::size_t>(1, hyper.epochs * batches_per_epoch);
  SgdNoiseConfig cfg{dp ? clip_norm : 1.0, dp ? budget.epsilon() : 1.0,
                     total_batches, batch};

  Workspace ws(sizes);
  std::vector<double> grad(params.size());
  std::vector<double> grad_sum(params.size());
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    shuffle_rng.shuffle(perm);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t bsz = std::min(batch, n - start);
      std::fill(grad_sum.begin(), grad_sum.end(), 0.0);
      for (std::size_t b = 0; b < bsz; ++b) {
        const std::size_t idx = perm[start + b];
        forward(sizes, hyper.activation, params, train.features().row(idx), ws);
        epoch_loss +=
            -std::log(std::max(ws.acts.back()[train.labels()[idx]], kProbFloor));
        backward(sizes, hyper.activation, params, train.labels()[idx], ws, grad);
        if (dp) clip_l1(grad, clip_norm);
        for (std::size_t i = 0; i < grad_sum.size(); ++i) grad_sum[i] += grad[i];
      }
      dp_sgd_update(params, grad_sum, cfg, hyper.learning_rate, bsz, noise_rng, dp);
    }
    if (!std::isfinite(epoch_loss))
      throw Error("fit_mlp: training diverged (non-finite loss in epoch " +
                  std::to_string(epoch) + ")");
  }

  double loss = dataset_mean_loss(sizes, hyper.activation, params, train, ws);
  return MlpModel(std::move(sizes), hyper.activation, std::move(params), budget,
                  loss);
}

MlpModel fit_mlp(const LabeledDataset& train, const MlpHyperparams& hyper,
                 SeededRng rng, const PrivacyBudget& tag) {
  if (tag.stage() == Stage::S2)
    throw std::invalid_argument("fit_mlp: use fit_mlp_dp for stage S2");
  return train_mlp(train, hyper, tag, 0.0, rng);
}

MlpModel fit_mlp_dp(const LabeledDataset& train, const MlpHyperparams& hyper,
                    double epsilon, double clip_norm, SeededRng rng) {
  if (!(clip_norm > 0.0) || !std::isfinite(clip_norm))
    throw std::invalid_argument("fit_mlp_dp: clip norm must be positive");
  return train_mlp(train, hyper, PrivacyBudget(Stage::S2, epsilon), clip_norm, rng);
}

}  // namespace dpbench
