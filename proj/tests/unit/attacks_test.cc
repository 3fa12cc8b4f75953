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

#include <algorithm>
#include <cmath>

#include "dpbench/attacks.hpp"
#include "dpbench/data.hpp"

namespace dpbench {
namespace {

LabeledDataset unit_dataset(Matrix features, std::vector<std::size_t> labels,
                            std::size_t k) {
  std::vector<FeatureRange> ranges(features.cols(), FeatureRange{0.0, 1.0});
  return LabeledDataset(std::move(features), std::move(labels), k, std::move(ranges));
}

/// Test double whose confidence and loss are plain functions of the first
/// feature: p(class 0) = x0, p(class 1) = 1 - x0.
class StubModel final : public PredictiveModel {
 public:
  explicit StubModel(double training_loss) : training_loss_(training_loss) {}
  std::size_t n_features() const override { return 1; }
  std::size_t n_classes() const override { return 2; }
  void predict_row(std::span<const double> x, std::span<double> out) const override {
    double p = std::clamp(x[0], 0.0, 1.0);
    out[0] = p;
    out[1] = 1.0 - p;
  }
  double training_loss() const override { return training_loss_; }
  const PrivacyBudget& privacy() const override { return privacy_; }
  std::string model_type() const override { return "stub"; }

 private:
  double training_loss_;
  PrivacyBudget privacy_ = PrivacyBudget::none();
};

LabeledDataset dataset_with_confidences(const std::vector<double>& conf) {
  Matrix X(conf.size(), 1);
  for (std::size_t i = 0; i < conf.size(); ++i) X(i, 0) = conf[i];
  return unit_dataset(std::move(X), std::vector<std::size_t>(conf.size(), 0), 2);
}

TEST(CalibrateSalemTest, SeparableSetsPickLargestTiedThreshold) {
  StubModel model(0.1);
  LabeledDataset members = dataset_with_confidences({0.9, 0.95});
  LabeledDataset nonmembers = dataset_with_confidences({0.5, 0.6});
  MiThreshold t = calibrate_salem_threshold(model, members, nonmembers);
  // Any threshold in (0.6, 0.9] separates; the tie rule forces 0.9.
  EXPECT_DOUBLE_EQ(t.threshold, 0.9);
  EXPECT_EQ(t.calibration_size, 4u);
}

TEST(CalibrateSalemTest, IdenticalDistributionsGiveZeroAdvantage) {
  StubModel model(0.1);
  LabeledDataset members = dataset_with_confidences({0.5, 0.7, 0.9});
  MiThreshold t = calibrate_salem_threshold(model, members, members);
  AttackResult r = salem_mi(model, members, members, t);
  EXPECT_EQ(r.advantage, 0.0);
}

TEST(CalibrateSalemTest, OnePointSetsAreDefined) {
  StubModel model(0.1);
  LabeledDataset members = dataset_with_confidences({0.8});
  LabeledDataset nonmembers = dataset_with_confidences({0.3});
  MiThreshold t = calibrate_salem_threshold(model, members, nonmembers);
  EXPECT_DOUBLE_EQ(t.threshold, 0.8);
}

TEST(CalibrateSalemTest, EmptyReferenceRejected) {
  StubModel model(0.1);
  LabeledDataset members = dataset_with_confidences({0.8});
  Matrix empty(0, 1);
  LabeledDataset none(empty, {}, 2, {FeatureRange{0.0, 1.0}});
  EXPECT_THROW(calibrate_salem_threshold(model, members, none),
               std::invalid_argument);
}

TEST(SalemMiTest, AllConfidentGivesZeroAdvantage) {
  StubModel model(0.1);
  LabeledDataset members = dataset_with_confidences({1.0, 1.0});
  LabeledDataset nonmembers = dataset_with_confidences({1.0, 1.0, 1.0});
  AttackResult r = salem_mi(model, members, nonmembers, MiThreshold{0.9, 4});
  EXPECT_EQ(r.tpr, 1.0);
  EXPECT_EQ(r.fpr, 1.0);
  EXPECT_EQ(r.advantage, 0.0);
}

TEST(SalemMiTest, LabelFreeByConstruction) {
  StubModel model(0.1);
  Matrix X(3, 1);
  X(0, 0) = 0.9; X(1, 0) = 0.4; X(2, 0) = 0.7;
  LabeledDataset a = unit_dataset(X, {0, 1, 0}, 2);
  LabeledDataset b = unit_dataset(X, {1, 0, 1}, 2);  // permuted labels
  MiThreshold t{0.6, 4};
  AttackResult ra = salem_mi(model, a, a, t);
  AttackResult rb = salem_mi(model, b, b, t);
  EXPECT_EQ(ra.tpr, rb.tpr);
  EXPECT_EQ(ra.fpr, rb.fpr);
}

TEST(YeomMiTest, PerfectSeparation) {
  // Member losses below the training loss, non-member losses above it.
  StubModel model(/*training_loss=*/0.5);
  // loss(x) = -log(x0) for label 0; members need loss <= 0.5 -> x0 >= 0.607.
  LabeledDataset members = dataset_with_confidences({0.9, 0.8});
  LabeledDataset nonmembers = dataset_with_confidences({0.2, 0.3});
  AttackResult r = yeom_mi(model, members, nonmembers);
  EXPECT_EQ(r.advantage, 1.0);
}

TEST(YeomMiTest, IdenticalDistributionsGiveZero) {
  StubModel model(0.5);
  LabeledDataset ds = dataset_with_confidences({0.2, 0.7, 0.9});
  AttackResult r = yeom_mi(model, ds, ds);
  EXPECT_EQ(r.advantage, 0.0);
}

TEST(YeomMiTest, InvariantUnderMonotoneReparameterization) {
  // Deciding loss <= t is the same as exp(loss) <= exp(t).
  StubModel model(0.45);
  Matrix X(6, 1);
  const double xs[6] = {0.91, 0.72, 0.55, 0.64, 0.33, 0.88};
  for (int i = 0; i < 6; ++i) X(i, 0) = xs[i];
  LabeledDataset ds = unit_dataset(X, std::vector<std::size_t>(6, 0), 2);
  AttackResult direct = yeom_mi(model, ds, ds);
  std::size_t members = 0;
  for (int i = 0; i < 6; ++i) {
    double loss = -std::log(xs[i]);
    if (std::exp(loss) <= std::exp(model.training_loss())) ++members;
  }
  EXPECT_EQ(direct.tpr, static_cast<double>(members) / 6.0);
}

TEST(MakeBinningTest, BinaryGetsTwoExactCandidates) {
  Matrix X(6, 2);
  for (int i = 0; i < 6; ++i) {
    X(i, 0) = i % 2;
    X(i, 1) = 0.1 * i;
  }
  LabeledDataset ds = unit_dataset(X, std::vector<std::size_t>(6, 0), 2);
  AttributeBinning bin = make_binning(ds, 0);
  EXPECT_EQ(bin.n_bins, 2u);
  ASSERT_EQ(bin.candidate_values.size(), 2u);
  EXPECT_EQ(bin.candidate_values[0], 0.0);
  EXPECT_EQ(bin.candidate_values[1], 1.0);
}

TEST(MakeBinningTest, SixValuedColumnGetsSixCandidates) {
  Matrix X(12, 1);
  for (int i = 0; i < 12; ++i) X(i, 0) = (i % 6) / 5.0;
  LabeledDataset ds = unit_dataset(X, std::vector<std::size_t>(12, 0), 2);
  AttributeBinning bin = make_binning(ds, 0);
  EXPECT_EQ(bin.n_bins, 6u);
  EXPECT_EQ(bin.candidate_values.size(), 6u);
}

TEST(MakeBinningTest, ContinuousColumnGetsTenEqualWidthCenters) {
  SeededRng rng(800, 1);
  Matrix X(100, 1);
  for (int i = 0; i < 100; ++i) X(i, 0) = rng.uniform();
  LabeledDataset ds = unit_dataset(X, std::vector<std::size_t>(100, 0), 2);
  AttributeBinning bin = make_binning(ds, 0);
  ASSERT_EQ(bin.n_bins, 10u);
  for (std::size_t i = 0; i < 10; ++i)
    EXPECT_NEAR(bin.candidate_values[i], 0.05 + 0.1 * static_cast<double>(i), 1e-12);
  // Candidate j must always land in bin j.
  for (std::size_t i = 0; i < 10; ++i)
    EXPECT_EQ(bin.bin_of(bin.candidate_values[i]), i);
  EXPECT_EQ(bin.bin_of(0.0), 0u);
  EXPECT_EQ(bin.bin_of(1.0), 9u);
}

TEST(YeomAiGuessTest, SingleCandidateIsReturned) {
  StubModel model(0.2);
  AttributeBinning bin;
  bin.attribute_index = 0;
  bin.n_bins = 1;
  bin.candidate_values = {0.42};
  std::vector<double> x{0.0};
  EXPECT_EQ(yeom_ai_guess(model, x, 0, bin), 0.42);
  EXPECT_EQ(salem_ai_guess(model, x, bin), 0.42);
}

TEST(YeomAiGuessTest, ForcedMinimumIsFound) {
  // loss(x0) = -log(x0) for label 0; training loss ln(2) is hit at x0 = 0.5.
  StubModel model(std::log(2.0));
  AttributeBinning bin;
  bin.attribute_index = 0;
  bin.n_bins = 3;
  bin.candidate_values = {0.1, 0.5, 0.9};
  bin.bin_edges = {0.3, 0.7};
  std::vector<double> x{0.0};
  EXPECT_EQ(yeom_ai_guess(model, x, 0, bin), 0.5);
}

TEST(SalemAiGuessTest, PicksHighestConfidenceSmallestOnTies) {
  StubModel model(0.2);  // max confidence = max(x0, 1-x0)
  AttributeBinning bin;
  bin.attribute_index = 0;
  bin.n_bins = 3;
  bin.candidate_values = {0.2, 0.5, 0.8};
  bin.bin_edges = {0.35, 0.65};
  std::vector<double> x{0.0};
  // Confidences: 0.8, 0.5, 0.8 -> tie between 0.2 and 0.8 -> smallest wins.
  EXPECT_EQ(salem_ai_guess(model, x, bin), 0.2);
}

TEST(AiAdvantageTest, IdenticalSetsGiveExactlyZero) {
  SeededRng gen(801, 1);
  Matrix X = generate_synthetic(60, 6, gen);
  std::vector<std::size_t> labels(60);
  for (std::size_t i = 0; i < 60; ++i) labels[i] = X(i, 0) > 0.5 ? 1 : 0;
  LabeledDataset ds = unit_dataset(std::move(X), std::move(labels), 2);
  GnbModel model = fit_gnb(ds);
  AiAdvantage adv =
      ai_advantage(model, ds, ds, 4, SeededRng(802, 1), AiAttack::Yeom);
  EXPECT_EQ(adv.mean_advantage, 0.0);
  for (double a : adv.per_attribute) EXPECT_EQ(a, 0.0);
  ASSERT_EQ(adv.attribute_indices.size(), 4u);
  EXPECT_TRUE(std::is_sorted(adv.attribute_indices.begin(),
                             adv.attribute_indices.end()));
}

TEST(AiAdvantageTest, SameSeedSamePicksBothKinds) {
  SeededRng gen(803, 1);
  Matrix X = generate_synthetic(40, 8, gen);
  std::vector<std::size_t> labels(40);
  for (std::size_t i = 0; i < 40; ++i) labels[i] = X(i, 1) > 0.5 ? 1 : 0;
  LabeledDataset ds = unit_dataset(std::move(X), std::move(labels), 2);
  GnbModel model = fit_gnb(ds);
  AiAdvantage yeom = ai_advantage(model, ds, ds, 5, SeededRng(804, 9), AiAttack::Yeom);
  AiAdvantage salem =
      ai_advantage(model, ds, ds, 5, SeededRng(804, 9), AiAttack::Salem);
  EXPECT_EQ(yeom.attribute_indices, salem.attribute_indices);
}

TEST(AiAdvantageTest, TooManyAttributesRejected) {
  SeededRng gen(805, 1);
  Matrix X = generate_synthetic(10, 3, gen);
  LabeledDataset ds = unit_dataset(std::move(X), std::vector<std::size_t>(10, 1), 2);
  GnbModel model = fit_gnb(unit_dataset(generate_synthetic(10, 3, SeededRng(805, 2)),
                                        {0, 1, 0, 1, 0, 1, 0, 1, 0, 1}, 2));
  EXPECT_THROW(ai_advantage(model, ds, ds, 4, SeededRng(806, 1), AiAttack::Yeom),
               std::invalid_argument);
}

TEST(AttackControlsTest, OverfitMlpLeaksAndYeomBeatsSalemish) {
  // Positive control: a deliberately overfit MLP on a small k-means-labeled
  // sample must leak membership; the Yeom variant should be at least about as
  // effective as Salem.
  SeededRng gen(807, 1);
  Matrix X = generate_synthetic(900, 8, gen);
  auto [labels, km] = kmeans_label(X, 5, 807);
  LabeledDataset ds = unit_dataset(std::move(X), std::move(labels), 5);

  auto idx = sample_disjoint_indices(900, {150, 300, 150, 150}, 808);
  LabeledDataset train = ds.subset(idx[0]);
  LabeledDataset test = ds.subset(idx[1]);
  LabeledDataset calib_members = ds.subset(idx[2]);
  LabeledDataset calib_nonmembers = ds.subset(idx[3]);

  MlpHyperparams hyper;
  hyper.hidden_layers = {32};
  hyper.epochs = 150;
  hyper.batch_size = 25;

  std::vector<double> salem_advs, yeom_advs;
  for (int rep = 0; rep < 3; ++rep) {
    MlpModel target = fit_mlp(train, hyper, SeededRng(809, rep));
    MlpModel shadow = fit_mlp(calib_members, hyper, SeededRng(810, rep));
    MiThreshold t = calibrate_salem_threshold(shadow, calib_members, calib_nonmembers);
    salem_advs.push_back(salem_mi(target, train, test, t).advantage);
    yeom_advs.push_back(yeom_mi(target, train, test).advantage);
  }
  std::sort(salem_advs.begin(), salem_advs.end());
  std::sort(yeom_advs.begin(), yeom_advs.end());
  EXPECT_GT(salem_advs[1], 0.0);
  EXPECT_GE(yeom_advs[1], salem_advs[1] - 0.05);
}

}  // namespace
}  // namespace dpbench
