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

#include "dpbench/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

namespace dpbench {

Matrix generate_synthetic(std::size_t n, std::size_t p, SeededRng rng) {
  if (n < 1 || p < 1)
    throw std::invalid_argument("generate_synthetic: need n >= 1 and p >= 1");
  Matrix X(n, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) X(i, j) = rng.uniform();
  return X;
}

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

struct LloydRun {
  std::vector<std::size_t> labels;
  Matrix centroids;
  double inertia = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
};

// Assigns each point to the nearest centroid (ties to the lowest index) and
// returns the total within-cluster squared distance.
double assign_points(const Matrix& X, const Matrix& centroids,
                     std::vector<std::size_t>& labels) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_c = 0;
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
      double d = sq_dist(X.row(i), centroids.row(c));
      if (d < best) {
        best = d;
        best_c = c;
      }
    }
    labels[i] = best_c;
    inertia += best;
  }
  return inertia;
}

Matrix kmeanspp_init(const Matrix& X, std::size_t k, SeededRng& rng) {
  const std::size_t n = X.rows();
  Matrix centroids(k, X.cols());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  std::size_t first = rng.uniform_index(n);
  for (std::size_t j = 0; j < X.cols(); ++j) centroids(0, j) = X(first, j);

  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], sq_dist(X.row(i), centroids.row(c - 1)));
      total += d2[i];
    }
    std::size_t pick;
    if (total > 0.0) {
      double r = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > r) {
          pick = i;
          break;
        }
      }
    } else {
      // All remaining points coincide with chosen centroids.
      pick = rng.uniform_index(n);
    }
    for (std::size_t j = 0; j < X.cols(); ++j) centroids(c, j) = X(pick, j);
  }
  return centroids;
}

// Moves each empty cluster's centroid onto the point currently farthest from
// its assigned centroid, so no returned class can stay empty.
void repair_empty_clusters(const Matrix& X, Matrix& centroids,
                           const std::vector<std::size_t>& labels,
                           std::vector<std::size_t>& counts) {
  std::vector<bool> taken(X.rows(), false);
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    if (counts[c] > 0) continue;
    double far_d = -1.0;
    std::size_t far_i = 0;
    for (std::size_t i = 0; i < X.rows(); ++i) {
      if (taken[i]) continue;
      double d = sq_dist(X.row(i), centroids.row(labels[i]));
      if (d > far_d) {
        far_d = d;
        far_i = i;
      }
    }
    for (std::size_t j = 0; j < X.cols(); ++j) centroids(c, j) = X(far_i, j);
    taken[far_i] = true;
    counts[c] = 1;  // provisional; the next assignment recomputes counts
  }
}

LloydRun lloyd(const Matrix& X, std::size_t k, SeededRng rng,
               const KMeansParams& params) {
  const std::size_t n = X.rows();
  const std::size_t p = X.cols();
  LloydRun run;
  run.centroids = kmeanspp_init(X, k, rng);
  run.labels.assign(n, 0);

  std::vector<std::size_t> prev_labels;
  double prev_inertia = std::numeric_limits<double>::infinity();
  for (std::size_t iter = 0; iter <= params.max_iterations; ++iter) {
    double inertia = assign_points(X, run.centroids, run.labels);
    if (inertia > prev_inertia + 1e-9 * (1.0 + prev_inertia))
      throw Error("kmeans: inertia increased across a Lloyd iteration");
    run.inertia = inertia;
    run.iterations = iter;
    bool converged = (run.labels == prev_labels) ||
                     (std::abs(prev_inertia - inertia) <= params.tolerance);
    if (converged || iter == params.max_iterations) break;
    prev_labels = run.labels;
    prev_inertia = inertia;

    std::vector<std::size_t> counts(k, 0);
    Matrix sums(k, p);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[run.labels[i]];
      for (std::size_t j = 0; j < p; ++j) sums(run.labels[i], j) += X(i, j);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t j = 0; j < p; ++j)
        run.centroids(c, j) = sums(c, j) / static_cast<double>(counts[c]);
    }
    repair_empty_clusters(X, run.centroids, run.labels, counts);
  }

  // The best run must hand back nonempty classes; repair and reassign until
  // the final assignment covers every cluster.
  for (std::size_t attempt = 0; attempt < k; ++attempt) {
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t label : run.labels) ++counts[label];
    if (std::find(counts.begin(), counts.end(), std::size_t{0}) == counts.end())
      return run;
    repair_empty_clusters(X, run.centroids, run.labels, counts);
    run.inertia = assign_points(X, run.centroids, run.labels);
  }
  throw Error("kmeans: could not produce k nonempty clusters (k exceeds the "
              "number of distinct points?)");
}

}  // namespace

std::pair<std::vector<std::size_t>, KMeansModel> kmeans_label(
    const Matrix& X, std::size_t k, std::uint64_t seed,
    const KMeansParams& params) {
  if (k < 1) throw std::invalid_argument("kmeans_label: k must be >= 1");
  if (k > X.rows())
    throw std::invalid_argument("kmeans_label: k must not exceed n");
  if (X.rows() == 0 || X.cols() == 0)
    throw std::invalid_argument("kmeans_label: empty matrix");

  SeededRng base(seed, fnv1a64("kmeans"));
  LloydRun best;
  bool have_best = false;
  for (std::size_t r = 0; r < std::max<std::size_t>(1, params.n_restarts); ++r) {
    LloydRun run = lloyd(X, k, base.derive(r), params);
    if (!have_best || run.inertia < best.inertia) {
      best = std::move(run);
      have_best = true;
    }
  }

  KMeansModel model;
  model.centroids = std::move(best.centroids);
  model.inertia = best.inertia;
  model.iterations_run = best.iterations;
  return {std::move(best.labels), std::move(model)};
}

std::vector<LabeledDataset> relabel_transactions(const Matrix& X,
                                                 const std::vector<std::size_t>& k_values,
                                                 std::uint64_t seed,
                                                 const KMeansParams& params) {
  std::vector<LabeledDataset> family;
  if (k_values.empty()) return family;
  NormalizedMatrix nm = minmax_normalize(X);
  for (std::size_t k : k_values) {
    auto [labels, model] =
        kmeans_label(nm.features, k, combine_stream({seed, k}), params);
    family.emplace_back(nm.features, std::move(labels), k, nm.ranges);
  }
  return family;
}

namespace {

double parse_cell(const std::string& cell, std::size_t line_no, std::size_t col) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw ParseError("csv: line " + std::to_string(line_no) + ", column " +
                     std::to_string(col + 1) + ": not a finite number: '" +
                     cell + "'");
  return v;
}

std::vector<std::string> split_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cells;
}

}  // namespace

CsvData load_csv(const std::filesystem::path& path, bool has_header,
                 std::optional<std::size_t> label_column) {
  std::ifstream in(path);
  if (!in) throw IoError("csv: cannot open file: " + path.string());

  CsvData out;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> labels;
  std::string line;
  std::size_t line_no = 0;
  std::size_t expected_cells = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && has_header) {
      out.header = split_line(line);
      continue;
    }
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> cells = split_line(line);
    if (expected_cells == 0) {
      expected_cells = cells.size();
      if (label_column && *label_column >= expected_cells)
        throw std::invalid_argument("csv: label column out of range");
    } else if (cells.size() != expected_cells) {
      throw ParseError("csv: line " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " fields, expected " +
                       std::to_string(expected_cells));
    }
    std::vector<double> row;
    row.reserve(expected_cells - (label_column ? 1 : 0));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = parse_cell(cells[c], line_no, c);
      if (label_column && c == *label_column) {
        double rounded = std::nearbyint(v);
        if (v != rounded || v < 0.0)
          throw ParseError("csv: line " + std::to_string(line_no) +
                           ": label must be a nonnegative integer, got '" +
                           cells[c] + "'");
        labels.push_back(static_cast<std::size_t>(rounded));
      } else {
        row.push_back(v);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("csv: no data rows in " + path.string());

  out.features = Matrix::from_rows(rows);
  if (label_column) out.labels = std::move(labels);
  return out;
}

void write_dataset_csv(const LabeledDataset& ds, const std::filesystem::path& path) {
  std::ofstream outf(path);
  if (!outf) throw IoError("csv: cannot write file: " + path.string());
  char buf[64];
  for (std::size_t i = 0; i < ds.n(); ++i) {
    for (std::size_t j = 0; j < ds.p(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", ds.features()(i, j));
      outf << buf << ',';
    }
    outf << ds.labels()[i] << '\n';
  }
  if (!outf) throw IoError("csv: write failed: " + path.string());
}

std::vector<std::vector<std::size_t>> sample_disjoint_indices(
    std::size_t n_total, const std::vector<std::size_t>& sizes,
    std::uint64_t seed) {
  std::size_t need = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  if (need > n_total)
    throw std::invalid_argument("sample_disjoint_indices: insufficient data (" +
                                std::to_string(need) + " > " +
                                std::to_string(n_total) + ")");
  std::vector<std::size_t> perm(n_total);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  SeededRng rng(seed, fnv1a64("sample-split"));
  rng.shuffle(perm);

  std::vector<std::vector<std::size_t>> out;
  out.reserve(sizes.size());
  std::size_t offset = 0;
  for (std::size_t s : sizes) {
    out.emplace_back(perm.begin() + offset, perm.begin() + offset + s);
    offset += s;
  }
  return out;
}

std::pair<LabeledDataset, LabeledDataset> sample_split(const LabeledDataset& ds,
                                                       const SplitSpec& spec) {
  auto parts = sample_disjoint_indices(ds.n(), {spec.n_train, spec.n_test}, spec.seed);
  return {ds.subset(parts[0]), ds.subset(parts[1])};
}

}  // namespace dpbench
