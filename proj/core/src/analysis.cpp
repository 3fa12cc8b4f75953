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

#include "dpbench/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <tuple>

namespace dpbench {

std::string metric_name(MetricTag m) {
  switch (m) {
    case MetricTag::Acl: return "acl";
    case MetricTag::SalemMi: return "salem_mi";
    case MetricTag::YeomMi: return "yeom_mi";
    case MetricTag::YeomAi: return "yeom_ai";
  }
  throw std::invalid_argument("metric_name: invalid metric");
}

MetricTag metric_from_name(const std::string& name) {
  if (name == "acl") return MetricTag::Acl;
  if (name == "salem_mi") return MetricTag::SalemMi;
  if (name == "yeom_mi") return MetricTag::YeomMi;
  if (name == "yeom_ai") return MetricTag::YeomAi;
  throw std::invalid_argument("metric_from_name: unknown metric '" + name +
                              "' (expected acl, salem_mi, yeom_mi, or yeom_ai)");
}

namespace {

constexpr MetricTag kAllMetrics[] = {MetricTag::Acl, MetricTag::SalemMi,
                                     MetricTag::YeomMi, MetricTag::YeomAi};

double metric_value(const TrialRecord& r, MetricTag m) {
  switch (m) {
    case MetricTag::Acl: return r.acl;
    case MetricTag::SalemMi: return r.salem_mi_adv;
    case MetricTag::YeomMi: return r.yeom_mi_adv;
    case MetricTag::YeomAi: return r.yeom_ai_mean_adv;
  }
  throw std::invalid_argument("metric_value: invalid metric");
}

CurvePoint summarize(double epsilon, const std::vector<double>& values) {
  CurvePoint pt;
  pt.epsilon = epsilon;
  pt.n = values.size();
  for (double v : values) pt.mean += v;
  pt.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - pt.mean) * (v - pt.mean);
    pt.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return pt;
}

}  // namespace

std::vector<MetricCurve> aggregate(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");

  // (dataset, method, metric) -> epsilon -> values over repetitions.
  std::map<std::tuple<std::string, std::string, int>,
           std::map<double, std::vector<double>>> groups;
  for (const TrialRecord& r : records) {
    if (r.stage == "None") continue;  // baselines carry no grid epsilon
    for (MetricTag m : kAllMetrics) {
      groups[{r.dataset, r.method, static_cast<int>(m)}][r.epsilon].push_back(
          metric_value(r, m));
    }
  }

  std::vector<MetricCurve> curves;
  for (const auto& [key, by_eps] : groups) {
    MetricCurve curve;
    curve.dataset = std::get<0>(key);
    curve.method = std::get<1>(key);
    curve.metric = static_cast<MetricTag>(std::get<2>(key));
    for (const auto& [eps, values] : by_eps)
      curve.points.push_back(summarize(eps, values));
    curves.push_back(std::move(curve));
  }
  return curves;
}

std::optional<double> find_inflection(const MetricCurve& curve) {
  const auto& pts = curve.points;
  if (pts.size() < 3)
    throw std::invalid_argument("find_inflection: need at least 3 points");

  bool any_change = false;
  double best_slope = -1.0;
  std::size_t best_segment = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double dm = std::abs(pts[i + 1].mean - pts[i].mean);
    if (dm >= kFlatCurveThreshold) any_change = true;
    double dt = std::log10(pts[i + 1].epsilon) - std::log10(pts[i].epsilon);
    double slope = dm / dt;
    if (slope > best_slope) {  // strict: ties keep the smaller epsilon
      best_slope = slope;
      best_segment = i;
    }
  }
  if (!any_change) return std::nullopt;
  return std::sqrt(pts[best_segment].epsilon * pts[best_segment + 1].epsilon);
}

double interpolate_at(const MetricCurve& curve, double epsilon, bool* clamped) {
  const auto& pts = curve.points;
  if (pts.empty()) throw std::invalid_argument("interpolate_at: empty curve");
  if (clamped) *clamped = false;
  if (epsilon <= pts.front().epsilon) {
    if (clamped) *clamped = epsilon < pts.front().epsilon;
    return pts.front().mean;
  }
  if (epsilon >= pts.back().epsilon) {
    if (clamped) *clamped = epsilon > pts.back().epsilon;
    return pts.back().mean;
  }
  std::size_t hi = 1;
  while (pts[hi].epsilon < epsilon) ++hi;
  if (pts[hi].epsilon == epsilon) return pts[hi].mean;  // exact at grid points
  const CurvePoint& a = pts[hi - 1];
  const CurvePoint& b = pts[hi];
  double t = (std::log10(epsilon) - std::log10(a.epsilon)) /
             (std::log10(b.epsilon) - std::log10(a.epsilon));
  return a.mean + t * (b.mean - a.mean);
}

namespace {

// Smallest epsilon (piecewise-linear in log10 space) whose ACL is <= bound.
std::optional<double> smallest_feasible_epsilon(const MetricCurve& curve,
                                                double bound) {
  const auto& pts = curve.points;
  if (pts.empty()) return std::nullopt;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].mean <= bound) {
      if (i == 0) return pts[0].epsilon;
      const CurvePoint& a = pts[i - 1];
      const CurvePoint& b = pts[i];
      if (a.mean <= bound) return a.epsilon;  // unreachable given the scan order
      double t = (bound - a.mean) / (b.mean - a.mean);
      double lt = std::log10(a.epsilon) +
                  t * (std::log10(b.epsilon) - std::log10(a.epsilon));
      return std::pow(10.0, lt);
    }
  }
  return std::nullopt;
}

std::vector<const MetricCurve*> acl_curves_only(
    const std::vector<MetricCurve>& curves) {
  std::vector<const MetricCurve*> acl;
  for (const auto& c : curves)
    if (c.metric == MetricTag::Acl) acl.push_back(&c);
  if (acl.empty())
    throw std::invalid_argument("recommend: no ACL curves provided");
  return acl;
}

}  // namespace

Recommendation recommend_for_acl(const std::vector<MetricCurve>& acl_curves,
                                 double acl_bound) {
  Recommendation rec;
  rec.kind = Recommendation::Kind::AclBounded;
  rec.constraint = acl_bound;
  for (const MetricCurve* curve : acl_curves_only(acl_curves)) {
    std::optional<double> eps = smallest_feasible_epsilon(*curve, acl_bound);
    if (!eps) continue;
    if (!rec.feasible || *eps < rec.achieved) {
      rec.feasible = true;
      rec.achieved = *eps;
      rec.method = curve->method;
    }
  }
  return rec;
}

Recommendation recommend_for_eps(const std::vector<MetricCurve>& acl_curves,
                                 double eps_bound) {
  Recommendation rec;
  rec.kind = Recommendation::Kind::EpsBounded;
  rec.constraint = eps_bound;
  for (const MetricCurve* curve : acl_curves_only(acl_curves)) {
    bool clamped = false;
    double acl = interpolate_at(*curve, eps_bound, &clamped);
    if (!rec.feasible || acl < rec.achieved) {
      rec.feasible = true;
      rec.achieved = acl;
      rec.method = curve->method;
      rec.clamped = clamped;
    }
  }
  return rec;
}

namespace {

void write_curve_csv(const MetricCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("emit_plot_data: cannot write " + path.string());
  out << "epsilon,mean,std,n\n";
  char buf[256];
  for (const CurvePoint& pt : curve.points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%zu\n", pt.epsilon, pt.mean,
                  pt.stddev, pt.n);
    out << buf;
  }
}

}  // namespace

void emit_plot_data(const std::vector<MetricCurve>& curves,
                    const std::vector<TrialRecord>& records,
                    const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec && !std::filesystem::is_directory(out_dir))
    throw IoError("emit_plot_data: cannot create " + out_dir.string());

  for (const MetricCurve& curve : curves) {
    std::string name = metric_name(curve.metric) + "_" + curve.dataset + "_" +
                       curve.method + ".csv";
    write_curve_csv(curve, out_dir / name);
  }

  // Per-stage summary: each (stage, metric, epsilon) point is the mean across
  // all methods and datasets, ACL on one axis and attack advantage on the other.
  std::map<std::tuple<std::string, int, double>, std::vector<double>> summary;
  for (const TrialRecord& r : records) {
    if (r.stage == "None") continue;
    for (MetricTag m : {MetricTag::Acl, MetricTag::SalemMi, MetricTag::YeomAi})
      summary[{r.stage, static_cast<int>(m), r.epsilon}].push_back(
          metric_value(r, m));
  }
  std::ofstream out(out_dir / "summary_stages.csv");
  if (!out) throw IoError("emit_plot_data: cannot write summary_stages.csv");
  out << "stage,metric,epsilon,mean,std,n\n";
  char buf[256];
  for (const auto& [key, values] : summary) {
    CurvePoint pt = summarize(std::get<2>(key), values);
    std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%.17g,%.17g,%zu\n",
                  std::get<0>(key).c_str(),
                  metric_name(static_cast<MetricTag>(std::get<1>(key))).c_str(),
                  pt.epsilon, pt.mean, pt.stddev, pt.n);
    out << buf;
  }
}

}  // namespace dpbench
