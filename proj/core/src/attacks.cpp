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

#include "dpbench/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace dpbench {

namespace {

constexpr std::size_t kMaxBins = 10;

std::vector<double> confidences(const PredictiveModel& model,
                                const LabeledDataset& ds) {
  std::vector<double> out(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i)
    out[i] = max_confidence(model, ds.features().row(i));
  return out;
}

}  // namespace

std::size_t AttributeBinning::bin_of(double value) const {
  // Number of edges <= value; exact edge hits go to the upper bin.
  return static_cast<std::size_t>(
      std::upper_bound(bin_edges.begin(), bin_edges.end(), value) -
      bin_edges.begin());
}

AttributeBinning make_binning(const LabeledDataset& train,
                              std::size_t attribute_index) {
  if (attribute_index >= train.p())
    throw std::invalid_argument("make_binning: attribute index out of range");

  AttributeBinning binning;
  binning.attribute_index = attribute_index;

  std::set<double> unique;
  for (std::size_t i = 0; i < train.n() && unique.size() <= kMaxBins; ++i)
    unique.insert(train.features()(i, attribute_index));

  if (unique.size() <= kMaxBins) {
    // Discrete attribute: the exact values are the candidates (a binary
    // attribute gets exactly 2), bins split at midpoints.
    binning.candidate_values.assign(unique.begin(), unique.end());
    binning.n_bins = binning.candidate_values.size();
    for (std::size_t i = 0; i + 1 < binning.candidate_values.size(); ++i)
      binning.bin_edges.push_back(
          0.5 * (binning.candidate_values[i] + binning.candidate_values[i + 1]));
  } else {
    // Continuous attribute: 10 equal-width bins over the declared range.
    const FeatureRange range = train.feature_ranges()[attribute_index];
    const double width = range.width() / static_cast<double>(kMaxBins);
    binning.n_bins = kMaxBins;
    for (std::size_t i = 1; i < kMaxBins; ++i)
      binning.bin_edges.push_back(range.min + width * static_cast<double>(i));
    for (std::size_t i = 0; i < kMaxBins; ++i)
      binning.candidate_values.push_back(range.min +
                                         width * (static_cast<double>(i) + 0.5));
  }
  return binning;
}

MiThreshold calibrate_salem_threshold(const PredictiveModel& model,
                                      const LabeledDataset& ref_members,
                                      const LabeledDataset& ref_nonmembers) {
  if (ref_members.n() == 0 || ref_nonmembers.n() == 0)
    throw std::invalid_argument("calibrate_salem_threshold: empty reference set");

  std::vector<double> member_conf = confidences(model, ref_members);
  std::vector<double> nonmember_conf = confidences(model, ref_nonmembers);

  std::vector<double> candidates = member_conf;
  candidates.insert(candidates.end(), nonmember_conf.begin(), nonmember_conf.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  std::sort(member_conf.begin(), member_conf.end());
  std::sort(nonmember_conf.begin(), nonmember_conf.end());
  const double m = static_cast<double>(member_conf.size());
  const double nm = static_cast<double>(nonmember_conf.size());

  double best_threshold = candidates.front();
  double best_adv = -2.0;
  for (double t : candidates) {
    double tpr =
        static_cast<double>(member_conf.end() -
                            std::lower_bound(member_conf.begin(),
                                             member_conf.end(), t)) / m;
    double fpr =
        static_cast<double>(nonmember_conf.end() -
                            std::lower_bound(nonmember_conf.begin(),
                                             nonmember_conf.end(), t)) / nm;
    double adv = tpr - fpr;
    if (adv >= best_adv) {  // ties break toward the larger threshold
      best_adv = adv;
      best_threshold = t;
    }
  }
  return MiThreshold{best_threshold, ref_members.n() + ref_nonmembers.n()};
}

AttackResult salem_mi(const PredictiveModel& model, const LabeledDataset& members,
                      const LabeledDataset& nonmembers,
                      const MiThreshold& threshold) {
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < members.n(); ++i)
    if (max_confidence(model, members.features().row(i)) >= threshold.threshold)
      ++tp;
  for (std::size_t i = 0; i < nonmembers.n(); ++i)
    if (max_confidence(model, nonmembers.features().row(i)) >= threshold.threshold)
      ++fp;
  return make_attack_result(
      static_cast<double>(tp) / static_cast<double>(members.n()),
      static_cast<double>(fp) / static_cast<double>(nonmembers.n()),
      members.n(), nonmembers.n());
}

AttackResult yeom_mi(const PredictiveModel& model, const LabeledDataset& members,
                     const LabeledDataset& nonmembers) {
  const double train_loss = model.training_loss();
  if (!std::isfinite(train_loss))
    throw std::invalid_argument("yeom_mi: model has no finite training loss");
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < members.n(); ++i)
    if (per_example_loss(model, members.features().row(i), members.labels()[i]) <=
        train_loss)
      ++tp;
  for (std::size_t i = 0; i < nonmembers.n(); ++i)
    if (per_example_loss(model, nonmembers.features().row(i),
                         nonmembers.labels()[i]) <= train_loss)
      ++fp;
  return make_attack_result(
      static_cast<double>(tp) / static_cast<double>(members.n()),
      static_cast<double>(fp) / static_cast<double>(nonmembers.n()),
      members.n(), nonmembers.n());
}

double yeom_ai_guess(const PredictiveModel& model, std::span<const double> x,
                     std::size_t true_label, const AttributeBinning& binning) {
  if (binning.candidate_values.empty())
    throw std::invalid_argument("yeom_ai_guess: no candidates");
  const double train_loss = model.training_loss();
  std::vector<double> probe(x.begin(), x.end());
  double best_value = binning.candidate_values.front();
  double best_score = std::numeric_limits<double>::infinity();
  for (double candidate : binning.candidate_values) {  // ascending: ties stay small
    probe[binning.attribute_index] = candidate;
    double score = std::abs(per_example_loss(model, probe, true_label) - train_loss);
    if (score < best_score) {
      best_score = score;
      best_value = candidate;
    }
  }
  return best_value;
}

double salem_ai_guess(const PredictiveModel& model, std::span<const double> x,
                      const AttributeBinning& binning) {
  if (binning.candidate_values.empty())
    throw std::invalid_argument("salem_ai_guess: no candidates");
  std::vector<double> probe(x.begin(), x.end());
  double best_value = binning.candidate_values.front();
  double best_score = -std::numeric_limits<double>::infinity();
  for (double candidate : binning.candidate_values) {
    probe[binning.attribute_index] = candidate;
    double score = max_confidence(model, probe);
    if (score > best_score) {
      best_score = score;
      best_value = candidate;
    }
  }
  return best_value;
}

double AiAdvantage::stddev() const {
  if (per_attribute.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : per_attribute) mean += v;
  mean /= static_cast<double>(per_attribute.size());
  double ss = 0.0;
  for (double v : per_attribute) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(per_attribute.size() - 1));
}

AiAdvantage ai_advantage(const PredictiveModel& model, const LabeledDataset& members,
                         const LabeledDataset& nonmembers, std::size_t n_attributes,
                         SeededRng rng, AiAttack kind) {
  const std::size_t p = members.p();
  if (n_attributes > p)
    throw std::invalid_argument("ai_advantage: more attributes than features");
  if (members.n() == 0 || nonmembers.n() == 0)
    throw std::invalid_argument("ai_advantage: empty evaluation set");

  // Protected attributes sampled without replacement; reported in index order.
  std::vector<std::size_t> pool(p);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < n_attributes; ++i) {
    std::size_t j = i + rng.uniform_index(p - i);
    std::swap(pool[i], pool[j]);
  }
  std::vector<std::size_t> attrs(pool.begin(), pool.begin() + n_attributes);
  std::sort(attrs.begin(), attrs.end());

  auto success_rate = [&](const LabeledDataset& ds, const AttributeBinning& bin) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ds.n(); ++i) {
      std::span<const double> x = ds.features().row(i);
      double guess = kind == AiAttack::Yeom
                         ? yeom_ai_guess(model, x, ds.labels()[i], bin)
                         : salem_ai_guess(model, x, bin);
      if (bin.bin_of(guess) == bin.bin_of(x[bin.attribute_index])) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(ds.n());
  };

  AiAdvantage result;
  result.attribute_indices = attrs;
  for (std::size_t attr : attrs) {
    AttributeBinning bin = make_binning(members, attr);
    double tpr = success_rate(members, bin);
    double fpr = success_rate(nonmembers, bin);
    result.per_attribute.push_back(advantage(tpr, fpr));
  }
  if (!result.per_attribute.empty()) {
    double total = 0.0;
    for (double v : result.per_attribute) total += v;
    result.mean_advantage = total / static_cast<double>(result.per_attribute.size());
  }
  return result;
}

}  // namespace dpbench
