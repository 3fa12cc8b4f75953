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
#include <fstream>
#include <set>
#include <sstream>

#include "dpbench/harness.hpp"
#include "json.hpp"

namespace dpbench {

std::string method_name(Method m) {
  switch (m) {
    case Method::S1Gnb: return "S1-GNB";
    case Method::S1Mlp: return "S1-MLP";
    case Method::S2Mlp: return "S2-MLP";
    case Method::S3Gnb: return "S3-GNB";
  }
  throw std::invalid_argument("method_name: invalid method");
}

Method method_from_name(const std::string& name) {
  if (name == "S1-GNB") return Method::S1Gnb;
  if (name == "S1-MLP") return Method::S1Mlp;
  if (name == "S2-MLP") return Method::S2Mlp;
  if (name == "S3-GNB") return Method::S3Gnb;
  throw ConfigError("unknown method '" + name +
                    "' (expected S1-GNB, S1-MLP, S2-MLP, or S3-GNB)");
}

Stage method_stage(Method m) {
  switch (m) {
    case Method::S1Gnb:
    case Method::S1Mlp: return Stage::S1;
    case Method::S2Mlp: return Stage::S2;
    case Method::S3Gnb: return Stage::S3;
  }
  throw std::invalid_argument("method_stage: invalid method");
}

ExperimentConfig ExperimentConfig::paper_profile() {
  ExperimentConfig cfg;
  cfg.dataset.n = 100000;
  cfg.n_train = 10000;
  cfg.n_test = 10000;
  cfg.mlp.epochs = 50;
  cfg.calibration_size = 1000;
  cfg.ai_eval_size = 1000;
  return cfg;
}

ExperimentConfig ExperimentConfig::desk_profile() {
  ExperimentConfig cfg;
  cfg.dataset.n = 20000;
  cfg.n_train = 2000;
  cfg.n_test = 2000;
  cfg.mlp.epochs = 20;
  cfg.calibration_size = 1000;
  cfg.ai_eval_size = 200;
  return cfg;
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw ConfigError("config: methods must be nonempty");
  if (epsilon_grid.empty()) throw ConfigError("config: epsilon_grid must be nonempty");
  for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
    if (!(epsilon_grid[i] > 0.0) || !std::isfinite(epsilon_grid[i]))
      throw ConfigError("config: epsilon_grid entries must be positive and finite");
    if (i > 0 && !(epsilon_grid[i] > epsilon_grid[i - 1]))
      throw ConfigError("config: epsilon_grid must be sorted strictly ascending");
  }
  if (n_train < 1 || n_test < 1)
    throw ConfigError("config: n_train and n_test must be >= 1");
  if (n_repetitions < 1) throw ConfigError("config: n_repetitions must be >= 1");
  if (n_protected_attributes < 1)
    throw ConfigError("config: n_protected_attributes must be >= 1");
  if (!(clip_norm > 0.0) || !std::isfinite(clip_norm))
    throw ConfigError("config: clip_norm must be positive and finite");
  if (calibration_size < 1) throw ConfigError("config: calibration_size must be >= 1");
  if (ai_eval_size < 1) throw ConfigError("config: ai_eval_size must be >= 1");
  if (!(mlp.learning_rate > 0.0) || !std::isfinite(mlp.learning_rate))
    throw ConfigError("config: mlp.learning_rate must be positive");
  if (mlp.batch_size < 1) throw ConfigError("config: mlp.batch_size must be >= 1");
  if (dataset.name.empty()) throw ConfigError("config: dataset.name must be nonempty");
  if (dataset.name.find(',') != std::string::npos ||
      dataset.name.find('\n') != std::string::npos)
    throw ConfigError("config: dataset.name must not contain ',' or newlines");
  if (dataset.kind == DatasetSpec::Kind::Synthetic) {
    if (dataset.n < 1 || dataset.p < 1)
      throw ConfigError("config: synthetic dataset needs n >= 1 and p >= 1");
    if (dataset.k_values.empty())
      throw ConfigError("config: synthetic dataset needs k_values");
    for (std::size_t k : dataset.k_values)
      if (k < 2) throw ConfigError("config: k_values entries must be >= 2");
  } else {
    if (dataset.path.empty()) throw ConfigError("config: csv dataset needs a path");
    if (!dataset.label_column && dataset.k_values.empty())
      throw ConfigError("config: csv dataset needs label_column or k_values");
  }
}

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key()))
      throw ConfigError("config: unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config: bad value for '" + std::string(key) + "': " + e.what());
  }
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text,
                                   const ExperimentConfig& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  check_keys(j, {"dataset", "methods", "epsilon_grid", "n_train", "n_test",
                 "n_repetitions", "n_protected_attributes", "master_seed", "mlp",
                 "clip_norm", "calibration_size", "ai_eval_size",
                 "deterministic_timing"},
             "top level");

  ExperimentConfig cfg = base;

  if (j.contains("dataset")) {
    const json& d = j.at("dataset");
    if (!d.is_object()) throw ConfigError("config: dataset must be an object");
    check_keys(d, {"type", "name", "n", "p", "k_values", "path", "has_header",
                   "label_column"},
               "dataset");
    if (d.contains("type")) {
      std::string type = d.at("type").get<std::string>();
      if (type == "synthetic") cfg.dataset.kind = DatasetSpec::Kind::Synthetic;
      else if (type == "csv") cfg.dataset.kind = DatasetSpec::Kind::Csv;
      else throw ConfigError("config: dataset.type must be 'synthetic' or 'csv'");
    }
    read_field(d, "name", cfg.dataset.name);
    read_field(d, "n", cfg.dataset.n);
    read_field(d, "p", cfg.dataset.p);
    read_field(d, "k_values", cfg.dataset.k_values);
    read_field(d, "path", cfg.dataset.path);
    read_field(d, "has_header", cfg.dataset.has_header);
    if (d.contains("label_column")) {
      if (d.at("label_column").is_null()) cfg.dataset.label_column.reset();
      else cfg.dataset.label_column = d.at("label_column").get<std::size_t>();
    }
  }

  // Protocol default: 5 repetitions for synthetic data, 10 for real data.
  // An explicit n_repetitions always wins.
  if (cfg.dataset.kind == DatasetSpec::Kind::Csv && !j.contains("n_repetitions"))
    cfg.n_repetitions = 10;

  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& m : j.at("methods"))
      cfg.methods.push_back(method_from_name(m.get<std::string>()));
  }
  read_field(j, "epsilon_grid", cfg.epsilon_grid);
  read_field(j, "n_train", cfg.n_train);
  read_field(j, "n_test", cfg.n_test);
  read_field(j, "n_repetitions", cfg.n_repetitions);
  read_field(j, "n_protected_attributes", cfg.n_protected_attributes);
  read_field(j, "master_seed", cfg.master_seed);
  read_field(j, "clip_norm", cfg.clip_norm);
  read_field(j, "calibration_size", cfg.calibration_size);
  read_field(j, "ai_eval_size", cfg.ai_eval_size);
  read_field(j, "deterministic_timing", cfg.deterministic_timing);

  if (j.contains("mlp")) {
    const json& m = j.at("mlp");
    if (!m.is_object()) throw ConfigError("config: mlp must be an object");
    check_keys(m, {"hidden_layers", "activation", "learning_rate", "batch_size",
                   "epochs"},
               "mlp");
    read_field(m, "hidden_layers", cfg.mlp.hidden_layers);
    if (m.contains("activation"))
      cfg.mlp.activation = activation_from_name(m.at("activation").get<std::string>());
    read_field(m, "learning_rate", cfg.mlp.learning_rate);
    read_field(m, "batch_size", cfg.mlp.batch_size);
    read_field(m, "epochs", cfg.mlp.epochs);
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_json(const std::filesystem::path& path,
                                  const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str(), base);
}

}  // namespace dpbench
