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

#ifndef DPBENCH_ANALYSIS_HPP
#define DPBENCH_ANALYSIS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dpbench/harness.hpp"

namespace dpbench {

enum class MetricTag { Acl, SalemMi, YeomMi, YeomAi };

std::string metric_name(MetricTag m);
MetricTag metric_from_name(const std::string& name);

struct CurvePoint {
  double epsilon = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // sample std over repetitions; 0 when n < 2
  std::size_t n = 0;
};

/// Mean/std of one metric against the epsilon grid for one (dataset, method).
struct MetricCurve {
  std::string dataset;
  std::string method;
  MetricTag metric = MetricTag::Acl;
  std::vector<CurvePoint> points;  // epsilon strictly increasing
};

/// Aggregates trial records into one curve per (dataset, method, metric).
/// Baseline rows (stage None) are excluded from curves.
std::vector<MetricCurve> aggregate(const std::vector<TrialRecord>& records);

// Segments whose |mean change| stays below this are considered flat.
inline constexpr double kFlatCurveThreshold = 0.01;

/// The epsilon at which the curve changes fastest against log10(epsilon):
/// the geometric mean of the grid points bracketing the max-|slope| segment,
/// ties to the smaller epsilon. Returns nullopt for flat curves (every
/// segment's |mean change| < kFlatCurveThreshold). Needs >= 3 points.
std::optional<double> find_inflection(const MetricCurve& curve);

struct Recommendation {
  enum class Kind { AclBounded, EpsBounded };
  Kind kind = Kind::AclBounded;
  double constraint = 0.0;
  bool feasible = false;
  std::string method;      // empty when infeasible
  double achieved = 0.0;   // epsilon for AclBounded, ACL for EpsBounded
  bool clamped = false;    // EpsBounded only: bound was outside the grid
};

/// ACL interpolated at an epsilon, piecewise-linear in log10(epsilon); exact
/// at grid points. Epsilons outside the grid clamp to the nearest endpoint
/// (clamped flag set).
double interpolate_at(const MetricCurve& curve, double epsilon,
                      bool* clamped = nullptr);

/// Best attainable privacy for a bounded ACL: per method, the smallest
/// (log-interpolated) epsilon whose ACL is <= acl_bound; the method achieving
/// the minimum such epsilon wins. Infeasible when no method reaches the bound.
Recommendation recommend_for_acl(const std::vector<MetricCurve>& acl_curves,
                                 double acl_bound);

/// Smallest ACL compromise for a mandated epsilon: interpolate each method's
/// ACL at eps_bound and return the method with the minimum.
Recommendation recommend_for_eps(const std::vector<MetricCurve>& acl_curves,
                                 double eps_bound);

/// One CSV per (metric, dataset, method) with columns epsilon,mean,std,n,
/// plus summary_stages.csv holding per-stage means across methods/datasets.
/// Filenames are deterministic functions of the identifiers.
void emit_plot_data(const std::vector<MetricCurve>& curves,
                    const std::vector<TrialRecord>& records,
                    const std::filesystem::path& out_dir);

}  // namespace dpbench

#endif  // DPBENCH_ANALYSIS_HPP
