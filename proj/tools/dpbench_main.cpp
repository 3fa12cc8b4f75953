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
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "dpbench/analysis.hpp"
#include "dpbench/data.hpp"
#include "dpbench/harness.hpp"

namespace fs = std::filesystem;
using namespace dpbench;

namespace {

ExperimentConfig build_config(const std::string& profile,
                              const std::string& config_path,
                              std::optional<std::uint64_t> seed_override) {
  ExperimentConfig cfg = profile == "paper" ? ExperimentConfig::paper_profile()
                                            : ExperimentConfig::desk_profile();
  if (!config_path.empty()) cfg = load_config_json(config_path, cfg);
  if (seed_override) cfg.master_seed = *seed_override;
  cfg.validate();
  return cfg;
}

int cmd_gen_data(std::size_t n, std::size_t p, const std::vector<std::size_t>& ks,
                 const std::string& name, std::uint64_t seed, const fs::path& out) {
  fs::create_directories(out);
  SeededRng gen(seed, combine_stream({fnv1a64(name), fnv1a64("gen")}));
  Matrix X = generate_synthetic(n, p, gen);
  std::vector<FeatureRange> ranges(p, FeatureRange{0.0, 1.0});
  for (std::size_t k : ks) {
    auto [labels, model] =
        kmeans_label(X, k, combine_stream({seed, fnv1a64(name), k, fnv1a64("kmeans")}));
    LabeledDataset ds(X, std::move(labels), k, ranges);
    fs::path file = out / (name + "_k" + std::to_string(k) + ".csv");
    write_dataset_csv(ds, file);
    std::printf("wrote %s (n=%zu, p=%zu, k=%zu, inertia=%.6g)\n",
                file.string().c_str(), n, p, k, model.inertia);
  }
  return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const fs::path& out, std::size_t jobs) {
  fs::create_directories(out);
  fs::path results_path = out / "results.csv";
  std::vector<TrialRecord> records =
      run_sweep(cfg, jobs, &std::cerr, &results_path);
  write_results(records, results_path);
  std::printf("wrote %s (%zu records)\n", results_path.string().c_str(),
              records.size());
  return 0;
}

void print_curve(const MetricCurve& curve) {
  std::printf("# %s %s %s\n", metric_name(curve.metric).c_str(),
              curve.dataset.c_str(), curve.method.c_str());
  std::printf("%12s %12s %12s %6s\n", "epsilon", "mean", "std", "n");
  for (const CurvePoint& pt : curve.points)
    std::printf("%12.6g %12.6g %12.6g %6zu\n", pt.epsilon, pt.mean, pt.stddev, pt.n);
  auto inflection = find_inflection(curve);
  if (inflection)
    std::printf("inflection epsilon* = %.6g\n", *inflection);
  else
    std::printf("inflection: none (flat curve)\n");
}

int cmd_analyze(const fs::path& results_path, const std::string& metric,
                const std::string& method, const std::string& dataset,
                const fs::path& out) {
  std::vector<TrialRecord> records = read_results(results_path);
  std::vector<MetricCurve> curves = aggregate(records);

  bool printed = false;
  for (const MetricCurve& curve : curves) {
    if (!metric.empty() && metric_name(curve.metric) != metric) continue;
    if (!method.empty() && curve.method != method) continue;
    if (!dataset.empty() && curve.dataset != dataset) continue;
    print_curve(curve);
    printed = true;
  }
  if (!printed) {
    std::fprintf(stderr, "no curves match the given filters\n");
    return 1;
  }
  if (!out.empty()) {
    emit_plot_data(curves, records, out);
    std::printf("plot data written to %s\n", out.string().c_str());
  }
  return 0;
}

int cmd_recommend(const fs::path& results_path, std::optional<double> acl_bound,
                  std::optional<double> eps_bound, const std::string& dataset) {
  std::vector<TrialRecord> records = read_results(results_path);
  std::vector<MetricCurve> curves = aggregate(records);

  // One recommendation per dataset group.
  std::vector<std::string> datasets;
  for (const MetricCurve& c : curves) {
    if (!dataset.empty() && c.dataset != dataset) continue;
    if (std::find(datasets.begin(), datasets.end(), c.dataset) == datasets.end())
      datasets.push_back(c.dataset);
  }
  if (datasets.empty()) {
    std::fprintf(stderr, "no matching datasets in results\n");
    return 1;
  }

  for (const std::string& ds : datasets) {
    std::vector<MetricCurve> group;
    for (const MetricCurve& c : curves)
      if (c.dataset == ds && c.metric == MetricTag::Acl) group.push_back(c);
    if (acl_bound) {
      Recommendation rec = recommend_for_acl(group, *acl_bound);
      if (rec.feasible)
        std::printf("%s: ACL <= %.4g -> %s at epsilon = %.6g\n", ds.c_str(),
                    rec.constraint, rec.method.c_str(), rec.achieved);
      else
        std::printf("%s: ACL <= %.4g -> infeasible for every method\n", ds.c_str(),
                    rec.constraint);
    }
    if (eps_bound) {
      Recommendation rec = recommend_for_eps(group, *eps_bound);
      std::printf("%s: epsilon <= %.4g -> %s with ACL = %.6g%s\n", ds.c_str(),
                  rec.constraint, rec.method.c_str(), rec.achieved,
                  rec.clamped ? " (epsilon clamped to the measured grid)" : "");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dpbench: privacy-utility tradeoff benchmark for DP-enabled ML"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic dataset family");
  std::size_t gen_n = 100000, gen_p = 50;
  std::vector<std::size_t> gen_k{2, 5, 10, 20, 50, 100, 200};
  std::string gen_name = "synthetic";
  std::uint64_t gen_seed = 1;
  std::string gen_out = "data";
  gen->add_option("--n", gen_n, "Number of vectors");
  gen->add_option("--p", gen_p, "Number of features");
  gen->add_option("--k", gen_k, "Class counts (one dataset per k)")->delimiter(',');
  gen->add_option("--name", gen_name, "Dataset family name");
  gen->add_option("--seed", gen_seed, "Master seed");
  gen->add_option("--out", gen_out, "Output directory");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run the epsilon sweep protocol");
  std::string sweep_config, sweep_profile = "desk", sweep_out = "results";
  std::optional<std::uint64_t> sweep_seed;
  std::size_t sweep_jobs = std::max(1u, std::thread::hardware_concurrency());
  sweep->add_option("--config", sweep_config, "JSON experiment config");
  sweep->add_option("--profile", sweep_profile, "desk or paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  sweep->add_option("--seed", sweep_seed, "Master seed override");
  sweep->add_option("--out", sweep_out, "Output directory");
  sweep->add_option("--jobs", sweep_jobs, "Worker threads");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Aggregate curves and inflection points");
  std::string an_results, an_metric, an_method, an_dataset, an_out;
  analyze->add_option("--results", an_results, "results.csv from a sweep")->required();
  analyze->add_option("--metric", an_metric, "acl, salem_mi, yeom_mi, or yeom_ai");
  analyze->add_option("--method", an_method, "e.g. S3-GNB");
  analyze->add_option("--dataset", an_dataset, "Dataset name filter");
  analyze->add_option("--out", an_out, "Directory for plot-data CSVs");

  // recommend
  auto* rec = app.add_subcommand("recommend", "Constrained method recommendations");
  std::string rec_results, rec_dataset;
  std::optional<double> rec_acl, rec_eps;
  rec->add_option("--results", rec_results, "results.csv from a sweep")->required();
  rec->add_option("--acl-bound", rec_acl, "Maximum tolerated accuracy loss");
  rec->add_option("--eps-bound", rec_eps, "Mandated privacy budget");
  rec->add_option("--dataset", rec_dataset, "Dataset name filter");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen_data(gen_n, gen_p, gen_k, gen_name, gen_seed, gen_out);
    if (sweep->parsed()) {
      ExperimentConfig cfg = build_config(sweep_profile, sweep_config, sweep_seed);
      return cmd_sweep(cfg, sweep_out, sweep_jobs);
    }
    if (analyze->parsed())
      return cmd_analyze(an_results, an_metric, an_method, an_dataset, an_out);
    if (rec->parsed()) {
      if (!rec_acl && !rec_eps) {
        std::fprintf(stderr, "recommend: provide --acl-bound and/or --eps-bound\n");
        return 1;
      }
      return cmd_recommend(rec_results, rec_acl, rec_eps, rec_dataset);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
