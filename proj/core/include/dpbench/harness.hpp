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

#ifndef DPBENCH_HARNESS_HPP
#define DPBENCH_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dpbench/core.hpp"
#include "dpbench/models.hpp"

namespace dpbench {

/// The four DP-enabled method/stage combinations under test.
enum class Method { S1Gnb, S1Mlp, S2Mlp, S3Gnb };

std::string method_name(Method m);
Method method_from_name(const std::string& name);
Stage method_stage(Method m);

struct DatasetSpec {
  enum class Kind { Synthetic, Csv };
  Kind kind = Kind::Synthetic;
  std::string name = "synthetic";

  // Synthetic: n x p uniform vectors labeled by k-means, one dataset per k,
  // all sharing the same vectors.
  std::size_t n = 20000;
  std::size_t p = 50;
  std::vector<std::size_t> k_values{10};

  // Csv: either a pre-labeled file (label_column set) or a transaction matrix
  // relabeled by k-means into one dataset per k (label_column unset).
  std::string path;
  bool has_header = false;
  std::optional<std::size_t> label_column;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  std::vector<Method> methods{Method::S1Gnb, Method::S1Mlp, Method::S2Mlp,
                              Method::S3Gnb};
  std::vector<double> epsilon_grid{0.01, 0.05, 0.1, 0.5, 1, 5, 10, 50, 100, 500, 1000};
  std::size_t n_train = 10000;
  std::size_t n_test = 10000;
  std::size_t n_repetitions = 5;
  std::size_t n_protected_attributes = 20;
  std::uint64_t master_seed = 1;
  MlpHyperparams mlp;
  double clip_norm = 1.0;
  // Vectors per side of the disjoint reference split used to calibrate the
  // Salem threshold (a disposable shadow model is trained on the member half).
  std::size_t calibration_size = 1000;
  // Vectors per side evaluated by the attribute-inference attacks; AI cost
  // scales with candidates x attributes x vectors, so this caps it.
  std::size_t ai_eval_size = 1000;
  // When true (the default) the wall_time_s column is written as 0 so that
  // result CSVs are byte-identical across reruns and parallelism degrees.
  bool deterministic_timing = true;

  /// Paper-protocol values: 10k/10k sampling, 50 training epochs.
  static ExperimentConfig paper_profile();
  /// Reduced sizes that keep the full protocol runnable on one workstation.
  static ExperimentConfig desk_profile();

  void validate() const;
};

/// Parses the JSON config document (field-for-field mirror of
/// ExperimentConfig; unknown keys are errors) on top of the given base.
ExperimentConfig load_config_json(const std::filesystem::path& path,
                                  const ExperimentConfig& base);
ExperimentConfig parse_config_json(const std::string& text,
                                   const ExperimentConfig& base);

/// One (dataset, method, stage, epsilon, repetition) outcome. Baseline rows
/// carry stage "None" and epsilon = infinity (rendered "inf" in CSV).
struct TrialRecord {
  std::string dataset;
  std::size_t n_classes = 0;
  std::string method;
  std::string stage;
  double epsilon = 0.0;  // +infinity for the non-private baseline
  std::size_t rep = 0;
  double accuracy = 0.0;
  double baseline_accuracy = 0.0;
  double acl = 0.0;
  double salem_mi_adv = 0.0;
  double yeom_mi_adv = 0.0;
  double yeom_ai_mean_adv = 0.0;
  double yeom_ai_std = 0.0;
  double salem_ai_mean_adv = 0.0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;  // derived split stream id; shared with the paired baseline

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Materializes the configured dataset family (generation, loading, k-means
/// labeling). Names are `<name>_k<k>` for families, `<name>` otherwise.
std::vector<std::pair<std::string, LabeledDataset>> materialize_datasets(
    const ExperimentConfig& cfg);

/// Runs one trial: sample disjoint train/test/calibration splits, apply the
/// method's noise, train, score accuracy, and mount SalemMI (calibrated on the
/// reference split), YeomMI, YeomAI, and SalemAI. epsilon == nullopt runs the
/// non-private baseline. baseline_accuracy, when absent, is computed by
/// running the paired baseline (same split seed) internally.
TrialRecord run_trial(const ExperimentConfig& cfg, const LabeledDataset& ds,
                      const std::string& dataset_name, Method method,
                      std::optional<double> epsilon, std::size_t rep,
                      std::optional<double> baseline_accuracy = std::nullopt);

/// Full grid: datasets x methods x epsilon_grid x repetitions plus one paired
/// baseline per (dataset, method, rep). Trials may run on n_jobs workers;
/// records come back sorted by (dataset, method, epsilon, rep) regardless of
/// execution order. If partial_out is set, completed records are flushed
/// there before an error is rethrown.
std::vector<TrialRecord> run_sweep(
    const ExperimentConfig& cfg, std::size_t n_jobs = 1,
    std::ostream* progress = nullptr,
    const std::filesystem::path* partial_out = nullptr);

/// CSV persistence. Header (exact, in order):
/// dataset,n_classes,method,stage,epsilon,rep,accuracy,baseline_accuracy,acl,
/// salem_mi_adv,yeom_mi_adv,yeom_ai_mean_adv,yeom_ai_std,salem_ai_mean_adv,
/// wall_time_s,seed. Floats are rendered with 17 significant digits so the
/// round trip is lossless.
void write_results(const std::vector<TrialRecord>& records,
                   const std::filesystem::path& path);
std::vector<TrialRecord> read_results(const std::filesystem::path& path);

}  // namespace dpbench

#endif  // DPBENCH_HARNESS_HPP
