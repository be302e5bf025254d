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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pepper/ensemble/ensemble.hpp"
#include "pepper/util/date.hpp"
#include "pepper/util/error.hpp"
#include "pepper/util/rng.hpp"

namespace pepper {

struct TestSetRequest {
  size_t n_agree_pos = 150;
  size_t n_agree_neg = 150;
  size_t n_disagree = 300;
  double recency_bias = 0.0;
  uint64_t seed = 0;
};

// Uniform sample of k distinct items (partial Fisher-Yates).
inline std::vector<std::string> sample_uniform(std::vector<std::string> pool, size_t k, Rng& rng) {
  for (size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.index(pool.size() - i)]);
  pool.resize(k);
  return pool;
}

// Weighted sample of k distinct items by exponential keys: item i gets
// key log(u_i) / w_i and the k largest keys win, which matches successive
// draws proportional to weight.
inline std::vector<std::string> sample_weighted(const std::vector<std::string>& pool, const std::vector<double>& w,
                                                size_t k, Rng& rng) {
  std::vector<std::pair<double, size_t>> keys(pool.size());
  for (size_t i = 0; i < pool.size(); ++i) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    keys[i] = {std::log(u) / w[i], i};
  }
  std::partial_sort(keys.begin(), keys.begin() + long(k), keys.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
  std::vector<std::string> out;
  for (size_t i = 0; i < k; ++i) out.push_back(pool[keys[i].second]);
  return out;
}

// Sampling weights 1 + bias * t, where t in [0, 1] is the review date
// rescaled over the stratum. Reviews without a date get t = 0.
inline std::vector<double> recency_weights(const std::vector<std::string>& pool,
                                           const std::map<std::string, Date>& dates, double bias) {
  std::vector<double> w(pool.size(), 1.0);
  long lo = 0, hi = 0;
  bool any = false;
  for (const auto& id : pool) {
    auto it = dates.find(id);
    if (it == dates.end()) continue;
    long d = it->second.days_since_epoch();
    if (!any || d < lo) lo = d;
    if (!any || d > hi) hi = d;
    any = true;
  }
  if (!any || hi == lo) return w;
  for (size_t i = 0; i < pool.size(); ++i) {
    auto it = dates.find(pool[i]);
    if (it == dates.end()) continue;
    w[i] = 1.0 + bias * double(it->second.days_since_epoch() - lo) / double(hi - lo);
  }
  return w;
}

// Draws the agree-positive, agree-negative and disagreement strata for the
// annotated test set. Only the disagreement stratum is date weighted. The
// result is shuffled so strata are not recoverable from order.
inline std::vector<std::string> sample_test_set(const std::vector<PredictionRecord>& predictions,
                                                const TestSetRequest& req,
                                                const std::map<std::string, Date>& dates = {}) {
  if (!(req.recency_bias >= 0.0)) throw ValidationError("recency_bias must be >= 0");
  std::vector<std::string> agree_pos, agree_neg, disagree;
  for (const auto& p : predictions) {
    if (p.chunker_label && p.doc_label) agree_pos.push_back(p.review_id);
    else if (!p.chunker_label && !p.doc_label) agree_neg.push_back(p.review_id);
    else disagree.push_back(p.review_id);
  }
  auto check = [](const char* name, size_t have, size_t want) {
    if (have < want)
      throw ValidationError(std::string("stratum pool smaller than request: ") + name + " has " + std::to_string(have) +
                            ", requested " + std::to_string(want));
  };
  check("agree_pos", agree_pos.size(), req.n_agree_pos);
  check("agree_neg", agree_neg.size(), req.n_agree_neg);
  check("disagree", disagree.size(), req.n_disagree);

  Rng rng(req.seed);
  std::vector<std::string> out = sample_uniform(std::move(agree_pos), req.n_agree_pos, rng);
  auto neg = sample_uniform(std::move(agree_neg), req.n_agree_neg, rng);
  out.insert(out.end(), neg.begin(), neg.end());
  std::vector<std::string> dis;
  if (req.recency_bias > 0.0)
    dis = sample_weighted(disagree, recency_weights(disagree, dates, req.recency_bias), req.n_disagree, rng);
  else
    dis = sample_uniform(std::move(disagree), req.n_disagree, rng);
  out.insert(out.end(), dis.begin(), dis.end());
  rng.shuffle(out);
  return out;
}

}  // namespace pepper
