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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "dpbench/analysis.hpp"

namespace dpbench {
namespace {

namespace fs = std::filesystem;

TrialRecord record(const std::string& method, double eps, std::size_t rep,
                   double acl) {
  TrialRecord r;
  r.dataset = "d";
  r.n_classes = 2;
  r.method = method;
  r.stage = method.substr(0, 2);
  r.epsilon = eps;
  r.rep = rep;
  r.acl = acl;
  r.accuracy = 1.0 - acl;
  r.baseline_accuracy = 1.0;
  return r;
}

MetricCurve acl_curve(const std::string& method,
                      const std::vector<std::pair<double, double>>& pts) {
  MetricCurve c;
  c.dataset = "d";
  c.method = method;
  c.metric = MetricTag::Acl;
  for (auto [eps, mean] : pts) c.points.push_back({eps, mean, 0.0, 5});
  return c;
}

TEST(AggregateTest, MeanAndStdOverRepetitions) {
  std::vector<TrialRecord> records;
  for (std::size_t rep = 0; rep < 5; ++rep)
    records.push_back(record("S3-GNB", 1.0, rep, 0.1));
  auto curves = aggregate(records);
  const MetricCurve* acl = nullptr;
  for (const auto& c : curves)
    if (c.metric == MetricTag::Acl) acl = &c;
  ASSERT_NE(acl, nullptr);
  ASSERT_EQ(acl->points.size(), 1u);
  EXPECT_DOUBLE_EQ(acl->points[0].mean, 0.1);
  EXPECT_DOUBLE_EQ(acl->points[0].stddev, 0.0);
  EXPECT_EQ(acl->points[0].n, 5u);
}

TEST(AggregateTest, SingleRepHasZeroStd) {
  auto curves = aggregate({record("S3-GNB", 1.0, 0, 0.4)});
  for (const auto& c : curves) {
    ASSERT_EQ(c.points.size(), 1u);
    EXPECT_EQ(c.points[0].n, 1u);
    EXPECT_DOUBLE_EQ(c.points[0].stddev, 0.0);
  }
}

TEST(AggregateTest, GroupsByMethodAndSkipsBaselines) {
  std::vector<TrialRecord> records{record("S3-GNB", 1.0, 0, 0.1),
                                   record("S1-GNB", 1.0, 0, 0.2)};
  TrialRecord baseline = record("S3-GNB", 1.0, 0, 0.0);
  baseline.stage = "None";
  baseline.epsilon = std::numeric_limits<double>::infinity();
  records.push_back(baseline);

  auto curves = aggregate(records);
  std::size_t acl_curves = 0;
  for (const auto& c : curves) {
    if (c.metric != MetricTag::Acl) continue;
    ++acl_curves;
    ASSERT_EQ(c.points.size(), 1u);
    EXPECT_TRUE(std::isfinite(c.points[0].epsilon));
  }
  EXPECT_EQ(acl_curves, 2u);  // one per method, baseline ignored
}

TEST(FindInflectionTest, StepCurveForcedSegment) {
  MetricCurve c = acl_curve("S1-GNB", {{0.1, 0.9}, {1, 0.9}, {10, 0.9},
                                       {100, 0.0}, {1000, 0.0}});
  auto eps = find_inflection(c);
  ASSERT_TRUE(eps.has_value());
  EXPECT_NEAR(*eps, std::sqrt(10.0 * 100.0), 1e-9);
}

TEST(FindInflectionTest, FlatCurveHasNoInflection) {
  MetricCurve c = acl_curve("S1-GNB", {{0.1, 0.5}, {1, 0.5}, {10, 0.505}});
  EXPECT_FALSE(find_inflection(c).has_value());
  MetricCurve tiny = acl_curve("S1-GNB", {{0.1, 0.5}, {1, 0.5}});
  EXPECT_THROW(find_inflection(tiny), std::invalid_argument);
}

TEST(FindInflectionTest, InvariantToConstantShift) {
  MetricCurve a = acl_curve("m", {{0.1, 0.8}, {1, 0.5}, {10, 0.1}, {100, 0.05}});
  MetricCurve b = a;
  for (auto& pt : b.points) pt.mean += 0.17;
  EXPECT_EQ(find_inflection(a), find_inflection(b));
}

TEST(FindInflectionTest, TieBreaksToSmallerEpsilon) {
  // Equal |slope| on the first and last segments.
  MetricCurve c = acl_curve("m", {{0.1, 0.9}, {1, 0.5}, {10, 0.5}, {100, 0.1}});
  auto eps = find_inflection(c);
  ASSERT_TRUE(eps.has_value());
  EXPECT_NEAR(*eps, std::sqrt(0.1 * 1.0), 1e-12);
}

TEST(RecommendAclTest, PicksMethodReachingBoundAtSmallestEpsilon) {
  MetricCurve a = acl_curve("A", {{1, 0.5}, {5, 0.1}, {10, 0.1}});
  MetricCurve b = acl_curve("B", {{1, 0.5}, {8, 0.4}, {10, 0.1}});
  // A crosses 0.1 at eps=5; B only at eps=10.
  Recommendation rec = recommend_for_acl({a, b}, 0.1);
  ASSERT_TRUE(rec.feasible);
  EXPECT_EQ(rec.method, "A");
  EXPECT_NEAR(rec.achieved, 5.0, 1e-9);
}

TEST(RecommendAclTest, LogLinearInterpolationOracle) {
  // Analytic: ACL(1)=0.4, ACL(10)=0.0; bound 0.2 crossed at t=0.5 in log10,
  // i.e. eps = 10^0.5.
  MetricCurve c = acl_curve("A", {{1, 0.4}, {10, 0.0}});
  Recommendation rec = recommend_for_acl({c}, 0.2);
  ASSERT_TRUE(rec.feasible);
  EXPECT_NEAR(rec.achieved, std::pow(10.0, 0.5), 1e-9);
}

TEST(RecommendAclTest, UnattainableBoundIsInfeasible) {
  MetricCurve c = acl_curve("A", {{1, 0.5}, {10, 0.3}});
  Recommendation rec = recommend_for_acl({c}, 0.2);
  EXPECT_FALSE(rec.feasible);
  EXPECT_TRUE(rec.method.empty());
}

TEST(RecommendAclTest, LooseningBoundNeverRaisesEpsilon) {
  MetricCurve c = acl_curve(
      "A", {{0.1, 0.8}, {1, 0.55}, {10, 0.3}, {100, 0.12}, {1000, 0.02}});
  double prev_eps = std::numeric_limits<double>::infinity();
  for (double bound : {0.05, 0.1, 0.2, 0.3, 0.5, 0.7}) {
    Recommendation rec = recommend_for_acl({c}, bound);
    ASSERT_TRUE(rec.feasible) << bound;
    EXPECT_LE(rec.achieved, prev_eps + 1e-12) << bound;
    prev_eps = rec.achieved;
  }
}

TEST(RecommendEpsTest, GridPointIsExact) {
  MetricCurve a = acl_curve("A", {{1, 0.3}, {10, 0.2}});
  MetricCurve b = acl_curve("B", {{1, 0.5}, {10, 0.1}});
  Recommendation rec = recommend_for_eps({a, b}, 1.0);
  ASSERT_TRUE(rec.feasible);
  EXPECT_EQ(rec.method, "A");
  EXPECT_EQ(rec.achieved, 0.3);  // exact grid mean, no interpolation error
  EXPECT_FALSE(rec.clamped);
}

TEST(RecommendEpsTest, LogLinearInterpolationOracle) {
  MetricCurve c = acl_curve("A", {{1, 0.4}, {10, 0.0}});
  Recommendation rec = recommend_for_eps({c}, std::pow(10.0, 0.5));
  EXPECT_NEAR(rec.achieved, 0.2, 1e-9);
}

TEST(RecommendEpsTest, OutOfGridClampsWithWarning) {
  MetricCurve c = acl_curve("A", {{1, 0.4}, {10, 0.1}});
  Recommendation low = recommend_for_eps({c}, 0.001);
  EXPECT_TRUE(low.clamped);
  EXPECT_EQ(low.achieved, 0.4);
  Recommendation high = recommend_for_eps({c}, 500.0);
  EXPECT_TRUE(high.clamped);
  EXPECT_EQ(high.achieved, 0.1);
}

TEST(InterpolateTest, ExactAtEveryGridPoint) {
  MetricCurve c = acl_curve("A", {{0.1, 0.9}, {1, 0.42}, {10, 0.17}, {100, 0.03}});
  for (const CurvePoint& pt : c.points) {
    bool clamped = true;
    EXPECT_EQ(interpolate_at(c, pt.epsilon, &clamped), pt.mean);
    EXPECT_FALSE(clamped);
  }
}

TEST(EmitPlotDataTest, WritesCurveAndSummaryFiles) {
  std::vector<TrialRecord> records;
  for (std::size_t rep = 0; rep < 3; ++rep) {
    records.push_back(record("S3-GNB", 1.0, rep, 0.2));
    records.push_back(record("S3-GNB", 10.0, rep, 0.1));
  }
  auto curves = aggregate(records);
  fs::path dir = fs::temp_directory_path() / "dpbench_plots";
  fs::remove_all(dir);
  emit_plot_data(curves, records, dir);

  EXPECT_TRUE(fs::exists(dir / "acl_d_S3-GNB.csv"));
  EXPECT_TRUE(fs::exists(dir / "yeom_ai_d_S3-GNB.csv"));
  EXPECT_TRUE(fs::exists(dir / "summary_stages.csv"));

  std::ifstream in(dir / "acl_d_S3-GNB.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "epsilon,mean,std,n");
  std::string row;
  std::getline(in, row);
  EXPECT_NE(row.find("0.2"), std::string::npos);
}

TEST(EmitPlotDataTest, EmptyCurveGivesHeaderOnly) {
  MetricCurve empty;
  empty.dataset = "d";
  empty.method = "S1-GNB";
  empty.metric = MetricTag::Acl;
  fs::path dir = fs::temp_directory_path() / "dpbench_plots_empty";
  fs::remove_all(dir);
  emit_plot_data({empty}, {}, dir);
  std::ifstream in(dir / "acl_d_S1-GNB.csv");
  std::string header, rest;
  std::getline(in, header);
  EXPECT_EQ(header, "epsilon,mean,std,n");
  EXPECT_FALSE(std::getline(in, rest));
}

}  // namespace
}  // namespace dpbench
