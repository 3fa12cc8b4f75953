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

#ifndef DPBENCH_DATA_HPP
#define DPBENCH_DATA_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "dpbench/core.hpp"
#include "dpbench/rng.hpp"

namespace dpbench {

struct KMeansModel {
  Matrix centroids;          // k x p
  double inertia = 0.0;      // sum of squared distances to assigned centroids
  std::size_t iterations_run = 0;
};

struct KMeansParams {
  std::size_t max_iterations = 100;
  double tolerance = 1e-6;   // absolute change in inertia
  std::size_t n_restarts = 10;
};

struct SplitSpec {
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::uint64_t seed = 0;
};

/// n x p matrix with entries independently uniform on [0, 1].
Matrix generate_synthetic(std::size_t n, std::size_t p, SeededRng rng);

/// Lloyd's algorithm with k-means++ initialization. Runs params.n_restarts
/// seeded restarts and keeps the lowest-inertia run (ties break to the lowest
/// restart index). Empty clusters are re-seeded to the point farthest from its
/// current centroid, so every returned class is nonempty.
std::pair<std::vector<std::size_t>, KMeansModel> kmeans_label(
    const Matrix& X, std::size_t k, std::uint64_t seed,
    const KMeansParams& params = {});

/// Normalizes a transaction-style matrix once and emits one LabeledDataset per
/// k in k_values, all sharing the same feature matrix.
std::vector<LabeledDataset> relabel_transactions(
    const Matrix& X, const std::vector<std::size_t>& k_values,
    std::uint64_t seed, const KMeansParams& params = {});

struct CsvData {
  Matrix features;
  std::optional<std::vector<std::size_t>> labels;
  std::vector<std::string> header;  // empty when has_header is false
};

/// Comma-separated, UTF-8, decimal-point reals, optional single header row.
/// If label_column is given that column is extracted as integer labels.
/// Missing files, ragged rows, and non-numeric cells produce distinct errors;
/// parse errors name the offending line.
CsvData load_csv(const std::filesystem::path& path, bool has_header,
                 std::optional<std::size_t> label_column = std::nullopt);

/// Writes features plus the label as the final column, `%.17g` reals.
void write_dataset_csv(const LabeledDataset& ds, const std::filesystem::path& path);

/// Disjoint uniformly-sampled subsets of the requested sizes, drawn from one
/// seeded permutation so a new seed resamples everything anew.
std::pair<LabeledDataset, LabeledDataset> sample_split(const LabeledDataset& ds,
                                                       const SplitSpec& spec);

/// Index-level version of sample_split used by the harness to carve more than
/// two disjoint subsets out of one permutation.
std::vector<std::vector<std::size_t>> sample_disjoint_indices(
    std::size_t n_total, const std::vector<std::size_t>& sizes,
    std::uint64_t seed);

}  // namespace dpbench

#endif  // DPBENCH_DATA_HPP
