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

#include "dpbench/models.hpp"

namespace dpbench {

Matrix predict_proba(const PredictiveModel& model, const Matrix& X) {
  if (X.cols() != model.n_features())
    throw std::invalid_argument("predict_proba: feature width mismatch");
  Matrix probs(X.rows(), model.n_classes());
  for (std::size_t i = 0; i < X.rows(); ++i)
    model.predict_row(X.row(i), probs.row(i));
  return probs;
}

std::size_t predict_class(const PredictiveModel& model, std::span<const double> x) {
  std::vector<double> probs(model.n_classes());
  model.predict_row(x, probs);
  return static_cast<std::size_t>(
      std::max_element(probs.begin(), probs.end()) - probs.begin());
}

double per_example_loss(const PredictiveModel& model, std::span<const double> x,
                        std::size_t true_label) {
  if (true_label >= model.n_classes())
    throw std::invalid_argument("per_example_loss: label out of range");
  std::vector<double> probs(model.n_classes());
  model.predict_row(x, probs);
  return -std::log(std::max(probs[true_label], kProbFloor));
}

double model_accuracy(const PredictiveModel& model, const LabeledDataset& ds) {
  if (ds.n() == 0) throw std::invalid_argument("model_accuracy: empty dataset");
  std::size_t correct = 0;
  std::vector<double> probs(model.n_classes());
  for (std::size_t i = 0; i < ds.n(); ++i) {
    model.predict_row(ds.features().row(i), probs);
    std::size_t argmax = static_cast<std::size_t>(
        std::max_element(probs.begin(), probs.end()) - probs.begin());
    if (argmax == ds.labels()[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.n());
}

double max_confidence(const PredictiveModel& model, std::span<const double> x) {
  std::vector<double> probs(model.n_classes());
  model.predict_row(x, probs);
  return *std::max_element(probs.begin(), probs.end());
}

}  // namespace dpbench
