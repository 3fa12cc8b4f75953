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

#include <fstream>

#include "dpbench/models.hpp"
#include "json.hpp"

namespace dpbench {

namespace {

using nlohmann::json;

json privacy_to_json(const PrivacyBudget& budget) {
  json j;
  j["stage"] = stage_name(budget.stage());
  if (budget.is_private()) j["epsilon"] = budget.epsilon();
  return j;
}

PrivacyBudget privacy_from_json(const json& j) {
  Stage stage = stage_from_name(j.at("stage").get<std::string>());
  if (stage == Stage::None) return PrivacyBudget::none();
  return PrivacyBudget(stage, j.at("epsilon").get<double>());
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) rows.push_back(row.get<std::vector<double>>());
  return Matrix::from_rows(rows);
}

}  // namespace

void save_model_json(const PredictiveModel& model, const std::filesystem::path& path) {
  json j;
  j["model_type"] = model.model_type();
  j["privacy"] = privacy_to_json(model.privacy());
  j["training_loss"] = model.training_loss();

  if (const auto* gnb = dynamic_cast<const GnbModel*>(&model)) {
    j["class_priors"] = gnb->class_priors();
    j["means"] = matrix_to_json(gnb->means());
    j["stds"] = matrix_to_json(gnb->stds());
  } else if (const auto* mlp = dynamic_cast<const MlpModel*>(&model)) {
    j["layer_sizes"] = mlp->layer_sizes();
    j["activation"] = activation_name(mlp->activation());
    j["params"] = mlp->params();
  } else {
    throw std::invalid_argument("save_model_json: unknown model type");
  }

  std::ofstream out(path);
  if (!out) throw IoError("save_model_json: cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("save_model_json: write failed: " + path.string());
}

std::unique_ptr<PredictiveModel> load_model_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_model_json: cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("load_model_json: " + path.string() + ": " + e.what());
  }

  try {
    const std::string type = j.at("model_type").get<std::string>();
    PrivacyBudget privacy = privacy_from_json(j.at("privacy"));
    double loss = j.at("training_loss").get<double>();
    if (type == "gnb") {
      return std::make_unique<GnbModel>(
          j.at("class_priors").get<std::vector<double>>(),
          matrix_from_json(j.at("means")), matrix_from_json(j.at("stds")),
          privacy, loss);
    }
    if (type == "mlp") {
      return std::make_unique<MlpModel>(
          j.at("layer_sizes").get<std::vector<std::size_t>>(),
          activation_from_name(j.at("activation").get<std::string>()),
          j.at("params").get<std::vector<double>>(), privacy, loss);
    }
    throw ParseError("load_model_json: unknown model_type '" + type + "'");
  } catch (const json::exception& e) {
    throw ParseError("load_model_json: malformed model file " + path.string() +
                     ": " + e.what());
  }
}

}  // namespace dpbench
