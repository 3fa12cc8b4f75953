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

#ifndef DPBENCH_MODELS_HPP
#define DPBENCH_MODELS_HPP

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dpbench/core.hpp"
#include "dpbench/rng.hpp"

namespace dpbench {

// Lower bound on Gaussian stds; keeps likelihoods finite after negative noise.
inline constexpr double kStdFloor = 1e-6;
// Probability floor inside cross-entropy; caps per-example loss at -ln(1e-12).
inline constexpr double kProbFloor = 1e-12;

/// A trained classifier: class-probability prediction plus the recorded mean
/// training loss (the Yeom attacks assume the training loss is known).
/// Implementations are immutable after fitting and safe to share across
/// threads for prediction.
class PredictiveModel {
 public:
  virtual ~PredictiveModel() = default;

  virtual std::size_t n_features() const = 0;
  virtual std::size_t n_classes() const = 0;

  /// Writes a probability distribution over classes for one input row.
  /// out.size() must equal n_classes(); rows sum to 1 within 1e-9.
  virtual void predict_row(std::span<const double> x, std::span<double> out) const = 0;

  virtual double training_loss() const = 0;
  virtual const PrivacyBudget& privacy() const = 0;
  virtual std::string model_type() const = 0;
};

/// n x k matrix of class probabilities, one row per input row.
Matrix predict_proba(const PredictiveModel& model, const Matrix& X);

/// Argmax class for one input row.
std::size_t predict_class(const PredictiveModel& model, std::span<const double> x);

/// Cross-entropy -log(p[true_label]) with probability floored at kProbFloor.
double per_example_loss(const PredictiveModel& model, std::span<const double> x,
                        std::size_t true_label);

/// Fraction of rows whose argmax prediction matches the label.
double model_accuracy(const PredictiveModel& model, const LabeledDataset& ds);

/// Largest class probability for one input row (the Salem attack statistic).
double max_confidence(const PredictiveModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------
// Gaussian Naive Bayes
// ---------------------------------------------------------------------------

class GnbModel final : public PredictiveModel {
 public:
  GnbModel(std::vector<double> class_priors, Matrix means, Matrix stds,
           PrivacyBudget privacy, double training_loss);

  std::size_t n_features() const override { return means_.cols(); }
  std::size_t n_classes() const override { return means_.rows(); }
  void predict_row(std::span<const double> x, std::span<double> out) const override;
  double training_loss() const override { return training_loss_; }
  const PrivacyBudget& privacy() const override { return privacy_; }
  std::string model_type() const override { return "gnb"; }

  const std::vector<double>& class_priors() const { return class_priors_; }
  const Matrix& means() const { return means_; }
  const Matrix& stds() const { return stds_; }

 private:
  std::vector<double> class_priors_;  // sums to 1 within 1e-9
  Matrix means_;                      // k x p
  Matrix stds_;                       // k x p, every entry >= kStdFloor
  PrivacyBudget privacy_;
  double training_loss_;
};

/// Plain Gaussian NB: per-class per-feature mean and population std, priors
/// from class frequencies, stds floored at kStdFloor. Every class needs at
/// least 2 samples. The optional tag records upstream privacy spending (a
/// stage-1 perturbed training set); it does not change the fit.
GnbModel fit_gnb(const LabeledDataset& train,
                 const PrivacyBudget& tag = PrivacyBudget::none());

/// Stage-3 DP variant: Laplace noise on every per-class mean and std with
/// scales sensitivity / epsilon-share from nb_sensitivities; noised stds are
/// re-floored. Priors are left exact. A stage-None budget short-circuits to
/// fit_gnb bit-for-bit.
GnbModel fit_gnb_dp(const LabeledDataset& train, double epsilon, SeededRng rng);
GnbModel fit_gnb_dp(const LabeledDataset& train, const PrivacyBudget& budget,
                    SeededRng rng);

// ---------------------------------------------------------------------------
// Multilayer perceptron
// ---------------------------------------------------------------------------

enum class Activation { Tanh, Relu };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

struct MlpHyperparams {
  std::vector<std::size_t> hidden_layers{128};
  Activation activation = Activation::Tanh;
  double learning_rate = 0.01;
  std::size_t batch_size = 200;
  std::size_t epochs = 50;
};

class MlpModel final : public PredictiveModel {
 public:
  MlpModel(std::vector<std::size_t> layer_sizes, Activation activation,
           std::vector<double> params, PrivacyBudget privacy,
           double training_loss);

  std::size_t n_features() const override { return layer_sizes_.front(); }
  std::size_t n_classes() const override { return layer_sizes_.back(); }
  void predict_row(std::span<const double> x, std::span<double> out) const override;
  double training_loss() const override { return training_loss_; }
  const PrivacyBudget& privacy() const override { return privacy_; }
  std::string model_type() const override { return "mlp"; }

  const std::vector<std::size_t>& layer_sizes() const { return layer_sizes_; }
  Activation activation() const { return activation_; }
  /// Flat parameter buffer, per layer: weights (out x in, row-major) then bias.
  const std::vector<double>& params() const { return params_; }
  std::size_t n_params() const { return params_.size(); }

  /// Gradient of per_example_loss w.r.t. all parameters, same layout as
  /// params(). Exposed for the DP-SGD loop and for finite-difference checks.
  void per_example_gradient(std::span<const double> x, std::size_t label,
                            std::span<double> grad_out) const;

 private:
  std::vector<std::size_t> layer_sizes_;  // [p, hidden..., k]
  Activation activation_;
  std::vector<double> params_;
  PrivacyBudget privacy_;
  double training_loss_;
};

/// Minibatch SGD minimizing softmax cross-entropy. Aborts with Error if the
/// loss goes non-finite. Records the final mean training loss. The optional
/// tag records upstream privacy spending without changing the fit.
MlpModel fit_mlp(const LabeledDataset& train, const MlpHyperparams& hyper,
                 SeededRng rng, const PrivacyBudget& tag = PrivacyBudget::none());

/// Stage-2 DP variant: every per-example gradient is clipped to L1 norm
/// clip_norm, then the summed batch gradient gets Laplace noise via
/// dp_sgd_update. The declared epsilon is spent over the entire run under
/// basic sequential composition.
MlpModel fit_mlp_dp(const LabeledDataset& train, const MlpHyperparams& hyper,
                    double epsilon, double clip_norm, SeededRng rng);

/// Shared training loop. A stage-None budget trains plain SGD bit-for-bit
/// identical to fit_mlp.
MlpModel train_mlp(const LabeledDataset& train, const MlpHyperparams& hyper,
                   const PrivacyBudget& budget, double clip_norm, SeededRng rng);

// ---------------------------------------------------------------------------
// Persistence (documented JSON schema, see README)
// ---------------------------------------------------------------------------

void save_model_json(const PredictiveModel& model, const std::filesystem::path& path);
std::unique_ptr<PredictiveModel> load_model_json(const std::filesystem::path& path);

}  // namespace dpbench

#endif  // DPBENCH_MODELS_HPP
