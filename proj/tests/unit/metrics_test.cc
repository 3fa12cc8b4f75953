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

#include "dpbench/core.hpp"
#include "dpbench/rng.hpp"

namespace dpbench {
namespace {

TEST(AdvantageTest, ClosedForm) {
  EXPECT_NEAR(advantage(0.7, 0.2), 0.5, 1e-12);
  EXPECT_NEAR(advantage(0.5, 0.5), 0.0, 1e-12);
  EXPECT_NEAR(advantage(0.0, 1.0), -1.0, 1e-12);
}

TEST(AdvantageTest, RejectsOutOfRange) {
  EXPECT_THROW(advantage(-0.1, 0.5), std::invalid_argument);
  EXPECT_THROW(advantage(0.5, 1.1), std::invalid_argument);
  EXPECT_THROW(advantage(std::nan(""), 0.5), std::invalid_argument);
}

TEST(AdvantageTest, Antisymmetric) {
  SeededRng rng(11, 0);
  for (int i = 0; i < 1000; ++i) {
    double a = rng.uniform();
    double b = rng.uniform();
    EXPECT_EQ(advantage(a, b), -advantage(b, a));
  }
}

TEST(AccuracyLossTest, ClosedForm) {
  EXPECT_NEAR(accuracy_loss(0.4, 0.8), 0.5, 1e-12);
  EXPECT_NEAR(accuracy_loss(0.8, 0.8), 0.0, 1e-12);
  // Negative ACL is allowed and must not be clamped.
  EXPECT_NEAR(accuracy_loss(0.9, 0.8), -0.125, 1e-12);
  EXPECT_LT(accuracy_loss(0.9, 0.8), 0.0);
}

TEST(AccuracyLossTest, IdentityIsExactlyZero) {
  SeededRng rng(12, 0);
  for (int i = 0; i < 1000; ++i) {
    double x = rng.uniform_open();
    EXPECT_EQ(accuracy_loss(x, x), 0.0);
  }
}

TEST(AccuracyLossTest, RejectsBadInputs) {
  EXPECT_THROW(accuracy_loss(0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(accuracy_loss(-0.1, 0.5), std::invalid_argument);
  EXPECT_THROW(accuracy_loss(0.5, 1.5), std::invalid_argument);
}

TEST(MinmaxNormalizeTest, AffineMap) {
  Matrix raw(3, 1);
  raw(0, 0) = 2;
  raw(1, 0) = 4;
  raw(2, 0) = 6;
  NormalizedMatrix nm = minmax_normalize(raw);
  EXPECT_DOUBLE_EQ(nm.features(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(nm.features(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(nm.features(2, 0), 1.0);
  EXPECT_EQ(nm.ranges[0], (FeatureRange{0.0, 1.0}));
}

TEST(MinmaxNormalizeTest, ConstantColumnMapsToMidpoint) {
  Matrix raw(3, 1);
  raw(0, 0) = raw(1, 0) = raw(2, 0) = 5.0;
  NormalizedMatrix nm = minmax_normalize(raw);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(nm.features(i, 0), 0.5);
  // Degenerate recorded range; downstream noise scaling sees width 0.
  EXPECT_DOUBLE_EQ(nm.ranges[0].width(), 0.0);
}

TEST(MinmaxNormalizeTest, ColumnsAreIndependent) {
  Matrix raw(2, 2);
  raw(0, 0) = 0;  raw(0, 1) = 10;
  raw(1, 0) = 1;  raw(1, 1) = 20;
  NormalizedMatrix nm = minmax_normalize(raw);
  EXPECT_DOUBLE_EQ(nm.features(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(nm.features(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(nm.features(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(nm.features(1, 1), 1.0);
}

TEST(MinmaxNormalizeTest, RejectsNonFinite) {
  Matrix raw(2, 1);
  raw(0, 0) = 1.0;
  raw(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(minmax_normalize(raw), std::invalid_argument);
}

TEST(MinmaxNormalizeTest, Idempotent) {
  SeededRng rng(13, 7);
  Matrix raw(40, 5);
  for (std::size_t i = 0; i < raw.rows(); ++i)
    for (std::size_t j = 0; j < raw.cols(); ++j)
      raw(i, j) = rng.uniform_range(-3.0, 9.0);
  // Make one column constant.
  for (std::size_t i = 0; i < raw.rows(); ++i) raw(i, 2) = 4.0;

  NormalizedMatrix once = minmax_normalize(raw);
  NormalizedMatrix twice = minmax_normalize(once.features);
  for (std::size_t i = 0; i < raw.rows(); ++i)
    for (std::size_t j = 0; j < raw.cols(); ++j)
      EXPECT_NEAR(twice.features(i, j), once.features(i, j), 1e-12);
}

TEST(LabeledDatasetTest, ValidatesInvariants) {
  Matrix f(2, 1);
  f(0, 0) = 0.2;
  f(1, 0) = 0.8;
  std::vector<FeatureRange> ranges{{0.0, 1.0}};
  EXPECT_NO_THROW(LabeledDataset(f, {0, 1}, 2, ranges));
  // Label out of range.
  EXPECT_THROW(LabeledDataset(f, {0, 2}, 2, ranges), std::invalid_argument);
  // k too small.
  EXPECT_THROW(LabeledDataset(f, {0, 0}, 1, ranges), std::invalid_argument);
  // Value outside declared range.
  std::vector<FeatureRange> tight{{0.3, 1.0}};
  EXPECT_THROW(LabeledDataset(f, {0, 1}, 2, tight), std::invalid_argument);
}

TEST(AttackResultTest, AdvantageIsExactDifference) {
  AttackResult r = make_attack_result(0.7, 0.2, 10, 10);
  EXPECT_EQ(r.advantage, r.tpr - r.fpr);
  EXPECT_THROW(make_attack_result(0.5, 0.5, 0, 10), std::invalid_argument);
}

TEST(PrivacyBudgetTest, NoneEncodesBaseline) {
  PrivacyBudget baseline = PrivacyBudget::none();
  EXPECT_FALSE(baseline.is_private());
  EXPECT_THROW(baseline.epsilon(), std::logic_error);
  EXPECT_THROW(PrivacyBudget(Stage::S1, 0.0), std::invalid_argument);
  EXPECT_THROW(PrivacyBudget(Stage::S1, std::numeric_limits<double>::infinity()),
               std::invalid_argument);
  PrivacyBudget s2(Stage::S2, 0.5);
  EXPECT_EQ(s2.stage(), Stage::S2);
  EXPECT_EQ(s2.epsilon(), 0.5);
}

}  // namespace
}  // namespace dpbench
