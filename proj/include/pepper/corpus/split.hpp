// Copyright 2026 The pepper Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "pepper/corpus/review.hpp"
#include "pepper/util/error.hpp"
#include "pepper/util/rng.hpp"

namespace pepper {

inline constexpr double kTrainFraction = 0.8;
inline constexpr size_t kMinSplitSize = 5;

struct CorpusSplit {
  std::set<std::string> train;
  std::set<std::string> dev;
  uint64_t seed = 0;
};

inline size_t round_half_up(double x) { return size_t(std::floor(x + 0.5)); }

// Stratified 80/20 split: positives and negatives are shuffled separately
// and each contributes its rounded share, then the total is fixed up to
// round(0.8 n) from the larger stratum.
inline CorpusSplit split_train_dev(const std::vector<LabeledReview>& labeled, uint64_t seed) {
  if (labeled.size() < kMinSplitSize)
    throw ValidationError("too few reviews to split: " + std::to_string(labeled.size()) + " < " +
                          std::to_string(kMinSplitSize));
  std::vector<std::string> pos, neg;
  std::set<std::string> seen;
  for (const auto& lr : labeled) {
    if (!seen.insert(lr.review.review_id).second) throw ValidationError("duplicate review_id " + lr.review.review_id);
    (lr.doc_label ? pos : neg).push_back(lr.review.review_id);
  }
  Rng rng(seed);
  rng.shuffle(pos);
  rng.shuffle(neg);
  size_t n = labeled.size();
  size_t n_train = round_half_up(kTrainFraction * double(n));
  size_t pos_train = std::min(round_half_up(kTrainFraction * double(pos.size())), n_train);
  size_t neg_train = n_train - pos_train;
  if (neg_train > neg.size()) {
    neg_train = neg.size();
    pos_train = n_train - neg_train;
  }
  CorpusSplit s;
  s.seed = seed;
  for (size_t i = 0; i < pos.size(); ++i) (i < pos_train ? s.train : s.dev).insert(pos[i]);
  for (size_t i = 0; i < neg.size(); ++i) (i < neg_train ? s.train : s.dev).insert(neg[i]);
  return s;
}

inline std::pair<std::vector<LabeledReview>, std::vector<LabeledReview>> apply_split(
    const std::vector<LabeledReview>& labeled, const CorpusSplit& split) {
  std::pair<std::vector<LabeledReview>, std::vector<LabeledReview>> out;
  for (const auto& lr : labeled) {
    if (split.train.count(lr.review.review_id)) out.first.push_back(lr);
    else if (split.dev.count(lr.review.review_id)) out.second.push_back(lr);
  }
  return out;
}

}  // namespace pepper
