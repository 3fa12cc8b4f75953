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
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>
#include <tuple>
#include <unordered_set>

#include "dpbench/attacks.hpp"
#include "dpbench/data.hpp"
#include "dpbench/harness.hpp"
#include "dpbench/mechanisms.hpp"

namespace dpbench {

namespace {

std::uint64_t epsilon_salt(std::optional<double> epsilon) {
  return epsilon ? std::bit_cast<std::uint64_t>(*epsilon) : fnv1a64("inf");
}

std::uint64_t split_stream_id(std::uint64_t master_seed, const std::string& dataset,
                              Method method, std::size_t rep) {
  return combine_stream({master_seed, fnv1a64(dataset),
                         fnv1a64(method_name(method)), rep, fnv1a64("split")});
}

SeededRng trial_stream(const ExperimentConfig& cfg, std::uint64_t split_id,
                       std::uint64_t eps_salt, std::string_view purpose) {
  return SeededRng(cfg.master_seed,
                   combine_stream({split_id, eps_salt, fnv1a64(purpose)}));
}

void assert_disjoint(const std::vector<std::vector<std::size_t>>& parts) {
  std::unordered_set<std::size_t> seen;
  std::size_t total = 0;
  for (const auto& part : parts) {
    total += part.size();
    seen.insert(part.begin(), part.end());
  }
  if (seen.size() != total)
    throw Error("harness: split index sets are not disjoint");
}

/// Trains the configured method's model on the already-perturbed training set.
std::unique_ptr<PredictiveModel> train_method(const ExperimentConfig& cfg,
                                              Method method,
                                              const PrivacyBudget& budget,
                                              const LabeledDataset& train,
                                              SeededRng model_rng) {
  switch (method) {
    case Method::S1Gnb:
      return std::make_unique<GnbModel>(fit_gnb(train, budget));
    case Method::S1Mlp:
      return std::make_unique<MlpModel>(fit_mlp(train, cfg.mlp, model_rng, budget));
    case Method::S2Mlp:
      return std::make_unique<MlpModel>(
          budget.is_private()
              ? fit_mlp_dp(train, cfg.mlp, budget.epsilon(), cfg.clip_norm, model_rng)
              : fit_mlp(train, cfg.mlp, model_rng));
    case Method::S3Gnb:
      return std::make_unique<GnbModel>(fit_gnb_dp(train, budget, model_rng));
  }
  throw std::invalid_argument("train_method: invalid method");
}

struct TrialData {
  LabeledDataset train;
  LabeledDataset test;
  LabeledDataset calib_members;
  LabeledDataset calib_nonmembers;
};

TrialData carve_splits(const ExperimentConfig& cfg, const LabeledDataset& ds,
                       std::uint64_t split_seed) {
  auto parts = sample_disjoint_indices(
      ds.n(),
      {cfg.n_train, cfg.n_test, cfg.calibration_size, cfg.calibration_size},
      split_seed);
  assert_disjoint(parts);
  return TrialData{ds.subset(parts[0]), ds.subset(parts[1]), ds.subset(parts[2]),
                   ds.subset(parts[3])};
}

/// Trains the model a trial evaluates, with the stage's noise applied.
std::unique_ptr<PredictiveModel> build_model(const ExperimentConfig& cfg,
                                             Method method,
                                             const PrivacyBudget& budget,
                                             const LabeledDataset& train,
                                             std::uint64_t split_id,
                                             std::uint64_t eps_salt,
                                             std::string_view noise_tag,
                                             std::string_view model_tag) {
  const LabeledDataset* fit_set = &train;
  std::optional<LabeledDataset> perturbed;
  if (budget.is_private() && budget.stage() == Stage::S1) {
    SeededRng noise_rng = trial_stream(cfg, split_id, eps_salt, noise_tag);
    perturbed = perturb_dataset_s1(train, budget.epsilon(), noise_rng);
    fit_set = &*perturbed;
  }
  return train_method(cfg, method, budget, *fit_set,
                      trial_stream(cfg, split_id, eps_salt, model_tag));
}

double baseline_accuracy_for(const ExperimentConfig& cfg, const LabeledDataset& ds,
                             const std::string& dataset_name, Method method,
                             std::size_t rep) {
  const std::uint64_t split_id =
      split_stream_id(cfg.master_seed, dataset_name, method, rep);
  TrialData data = carve_splits(cfg, ds, split_id);
  auto model = build_model(cfg, method, PrivacyBudget::none(), data.train, split_id,
                           epsilon_salt(std::nullopt), "s1-noise", "model");
  return model_accuracy(*model, data.test);
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& cfg, const LabeledDataset& ds,
                      const std::string& dataset_name, Method method,
                      std::optional<double> epsilon, std::size_t rep,
                      std::optional<double> baseline_accuracy) {
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.n_protected_attributes > ds.p())
    throw ConfigError("run_trial: n_protected_attributes exceeds feature count");
  if (epsilon && !(*epsilon > 0.0))
    throw std::invalid_argument("run_trial: epsilon must be positive");

  const PrivacyBudget budget = epsilon
      ? PrivacyBudget(method_stage(method), *epsilon)
      : PrivacyBudget::none();
  const std::uint64_t split_id =
      split_stream_id(cfg.master_seed, dataset_name, method, rep);
  const std::uint64_t eps_salt = epsilon_salt(epsilon);

  TrialData data = carve_splits(cfg, ds, split_id);

  auto model = build_model(cfg, method, budget, data.train, split_id, eps_salt,
                           "s1-noise", "model");
  const double accuracy = model_accuracy(*model, data.test);

  // The paired epsilon = infinity trial shares this trial's split seed, so the
  // accuracy-loss denominator carries no split variance.
  double base_acc = baseline_accuracy
      ? *baseline_accuracy
      : (epsilon ? baseline_accuracy_for(cfg, ds, dataset_name, method, rep)
                 : accuracy);

  // Salem threshold: a disposable shadow copy of the same method, trained on
  // the member half of the reference split. Member confidences are read
  // against the original (pre-noise) vectors, mirroring the target attack.
  auto shadow = build_model(cfg, method, budget, data.calib_members, split_id,
                            eps_salt, "s1-shadow", "shadow-model");
  MiThreshold threshold =
      calibrate_salem_threshold(*shadow, data.calib_members, data.calib_nonmembers);

  AttackResult salem = salem_mi(*model, data.train, data.test, threshold);
  AttackResult yeom = yeom_mi(*model, data.train, data.test);

  // Attribute inference on capped evaluation subsets; both AI attacks see the
  // same protected attributes.
  SeededRng eval_rng = trial_stream(cfg, split_id, eps_salt, "ai-eval");
  auto pick_subset = [&](const LabeledDataset& src, SeededRng rng) {
    std::vector<std::size_t> idx(src.n());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    rng.shuffle(idx);
    idx.resize(std::min<std::size_t>(cfg.ai_eval_size, idx.size()));
    return src.subset(idx);
  };
  LabeledDataset ai_members = pick_subset(data.train, eval_rng.derive("train"));
  LabeledDataset ai_nonmembers = pick_subset(data.test, eval_rng.derive("test"));

  SeededRng attr_rng = trial_stream(cfg, split_id, eps_salt, "ai-attrs");
  AiAdvantage yeom_ai = ai_advantage(*model, ai_members, ai_nonmembers,
                                     cfg.n_protected_attributes, attr_rng,
                                     AiAttack::Yeom);
  AiAdvantage salem_ai = ai_advantage(*model, ai_members, ai_nonmembers,
                                      cfg.n_protected_attributes, attr_rng,
                                      AiAttack::Salem);

  TrialRecord rec;
  rec.dataset = dataset_name;
  rec.n_classes = ds.k();
  rec.method = method_name(method);
  rec.stage = stage_name(budget.stage());
  rec.epsilon = epsilon ? *epsilon : std::numeric_limits<double>::infinity();
  rec.rep = rep;
  rec.accuracy = accuracy;
  rec.baseline_accuracy = base_acc;
  rec.acl = accuracy_loss(accuracy, base_acc);
  rec.salem_mi_adv = salem.advantage;
  rec.yeom_mi_adv = yeom.advantage;
  rec.yeom_ai_mean_adv = yeom_ai.mean_advantage;
  rec.yeom_ai_std = yeom_ai.stddev();
  rec.salem_ai_mean_adv = salem_ai.mean_advantage;
  rec.seed = split_id;
  const auto t1 = std::chrono::steady_clock::now();
  rec.wall_time_s = cfg.deterministic_timing
      ? 0.0
      : std::chrono::duration<double>(t1 - t0).count();
  return rec;
}

std::vector<std::pair<std::string, LabeledDataset>> materialize_datasets(
    const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::pair<std::string, LabeledDataset>> out;
  const DatasetSpec& spec = cfg.dataset;

  if (spec.kind == DatasetSpec::Kind::Synthetic) {
    SeededRng gen(cfg.master_seed, combine_stream({fnv1a64(spec.name), fnv1a64("gen")}));
    Matrix X = generate_synthetic(spec.n, spec.p, gen);
    std::vector<FeatureRange> ranges(spec.p, FeatureRange{0.0, 1.0});
    for (std::size_t k : spec.k_values) {
      auto [labels, model] = kmeans_label(
          X, k, combine_stream({cfg.master_seed, fnv1a64(spec.name), k,
                                fnv1a64("kmeans")}));
      out.emplace_back(spec.name + "_k" + std::to_string(k),
                       LabeledDataset(X, std::move(labels), k, ranges));
    }
    return out;
  }

  if (spec.label_column) {
    CsvData csv = load_csv(spec.path, spec.has_header, spec.label_column);
    std::size_t k = 0;
    for (std::size_t label : *csv.labels) k = std::max(k, label + 1);
    out.emplace_back(spec.name, make_dataset(csv.features, std::move(*csv.labels), k));
    return out;
  }

  CsvData csv = load_csv(spec.path, spec.has_header);
  std::vector<LabeledDataset> family = relabel_transactions(
      csv.features, spec.k_values,
      combine_stream({cfg.master_seed, fnv1a64(spec.name), fnv1a64("relabel")}));
  for (std::size_t i = 0; i < family.size(); ++i) {
    out.emplace_back(spec.name + "_k" + std::to_string(spec.k_values[i]),
                     std::move(family[i]));
  }
  return out;
}

namespace {

struct TrialTask {
  std::size_t dataset_index;
  Method method;
  std::optional<double> epsilon;
  std::size_t rep;
};

void parallel_run(std::size_t n_tasks, std::size_t n_jobs,
                  const std::function<void(std::size_t)>& fn) {
  n_jobs = std::max<std::size_t>(1, std::min(n_jobs, n_tasks));
  if (n_jobs == 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      std::size_t i = next.fetch_add(1);
      if (i >= n_tasks) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        stop.store(true, std::memory_order_relaxed);
      }
    }
  };

  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < n_jobs; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

void sort_records(std::vector<TrialRecord>& records) {
  std::sort(records.begin(), records.end(),
            [](const TrialRecord& a, const TrialRecord& b) {
              if (a.dataset != b.dataset) return a.dataset < b.dataset;
              if (a.method != b.method) return a.method < b.method;
              if (a.epsilon != b.epsilon) return a.epsilon < b.epsilon;
              return a.rep < b.rep;
            });
}

}  // namespace

std::vector<TrialRecord> run_sweep(const ExperimentConfig& cfg, std::size_t n_jobs,
                                   std::ostream* progress,
                                   const std::filesystem::path* partial_out) {
  cfg.validate();
  auto datasets = materialize_datasets(cfg);

  std::vector<TrialTask> baseline_tasks;
  std::vector<TrialTask> noised_tasks;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    for (Method m : cfg.methods) {
      for (std::size_t rep = 0; rep < cfg.n_repetitions; ++rep) {
        baseline_tasks.push_back({d, m, std::nullopt, rep});
        for (double eps : cfg.epsilon_grid)
          noised_tasks.push_back({d, m, eps, rep});
      }
    }
  }

  std::vector<TrialRecord> completed;
  std::mutex completed_mutex;
  std::atomic<std::size_t> n_done{0};
  const std::size_t n_total = baseline_tasks.size() + noised_tasks.size();

  auto note_done = [&](const TrialRecord& rec) {
    std::size_t done = n_done.fetch_add(1) + 1;
    if (progress) {
      std::lock_guard<std::mutex> lock(completed_mutex);
      (*progress) << "[" << done << "/" << n_total << "] " << rec.dataset << " "
                  << rec.method << " eps=" << (std::isinf(rec.epsilon)
                                                   ? std::string("inf")
                                                   : std::to_string(rec.epsilon))
                  << " rep=" << rec.rep << " acc=" << rec.accuracy << "\n";
    }
  };

  // Baseline accuracies keyed by (dataset, method, rep), filled in phase 1 and
  // shared by every epsilon of the same key in phase 2.
  std::map<std::tuple<std::size_t, Method, std::size_t>, double> baseline_acc;
  std::vector<TrialRecord> baseline_records(baseline_tasks.size());

  auto flush_partial = [&] {
    if (!partial_out) return;
    std::lock_guard<std::mutex> lock(completed_mutex);
    std::vector<TrialRecord> snapshot = completed;
    sort_records(snapshot);
    try {
      write_results(snapshot, *partial_out);
    } catch (...) {
      // The original trial error matters more than a failed partial flush.
    }
  };

  auto run_task = [&](const TrialTask& task, std::optional<double> base)
      -> TrialRecord {
    const auto& [name, ds] = datasets[task.dataset_index];
    try {
      return run_trial(cfg, ds, name, task.method, task.epsilon, task.rep, base);
    } catch (const std::exception& e) {
      throw Error("sweep: trial (" + name + ", " + method_name(task.method) +
                  ", eps=" +
                  (task.epsilon ? std::to_string(*task.epsilon) : std::string("inf")) +
                  ", rep=" + std::to_string(task.rep) + ") failed: " + e.what());
    }
  };

  try {
    parallel_run(baseline_tasks.size(), n_jobs, [&](std::size_t i) {
      TrialRecord rec = run_task(baseline_tasks[i], std::nullopt);
      {
        std::lock_guard<std::mutex> lock(completed_mutex);
        completed.push_back(rec);
      }
      baseline_records[i] = std::move(rec);
      note_done(baseline_records[i]);
    });
    for (std::size_t i = 0; i < baseline_tasks.size(); ++i) {
      const TrialTask& t = baseline_tasks[i];
      baseline_acc[{t.dataset_index, t.method, t.rep}] =
          baseline_records[i].accuracy;
    }

    parallel_run(noised_tasks.size(), n_jobs, [&](std::size_t i) {
      const TrialTask& t = noised_tasks[i];
      double base = baseline_acc.at({t.dataset_index, t.method, t.rep});
      TrialRecord rec = run_task(t, base);
      {
        std::lock_guard<std::mutex> lock(completed_mutex);
        completed.push_back(rec);
      }
      note_done(rec);
    });
  } catch (...) {
    flush_partial();
    throw;
  }

  sort_records(completed);
  return completed;
}

}  // namespace dpbench
