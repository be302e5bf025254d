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

// Linear SVM: L2-regularised, class-weighted hinge loss minimised by seeded
// mini-batch subgradient steps with a 1 / (lambda t) schedule.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "pepper/docclf/tfidf.hpp"
#include "pepper/util/error.hpp"
#include "pepper/util/rng.hpp"

namespace pepper {

struct SvmExample {
  SparseVector x;
  int y = 1;  // +1 or -1
};

struct SvmConfig {
  double C = 1.0;  // lambda = 1 / (C n)
  int epochs = 50;
  size_t batch_size = 8;
  uint64_t seed = 0;
  bool class_weighting = true;
};

// The bias is stored as the last weight and acts on a constant feature of
// 1, so it is regularised along with the other weights.
struct SvmParams {
  std::vector<double> w;
  double bias() const { return w.empty() ? 0.0 : w.back(); }
  bool operator==(const SvmParams&) const = default;
};

struct SvmWeights {
  double pos = 1.0;
  double neg = 1.0;
  double of(int y) const { return y > 0 ? pos : neg; }
};

inline double svm_margin(const SvmParams& p, const SparseVector& x) {
  double s = p.bias();
  for (auto [j, v] : x) s += p.w[j] * v;
  return s;
}

// Inverse-frequency weights n / (2 n_c).
inline SvmWeights svm_class_weights(const std::vector<SvmExample>& ex) {
  double pos = 0, neg = 0;
  for (const auto& e : ex) (e.y > 0 ? pos : neg) += 1;
  if (pos == 0 || neg == 0) return {};
  double n = pos + neg;
  return {n / (2 * pos), n / (2 * neg)};
}

inline double svm_objective(const std::vector<SvmExample>& ex, const SvmParams& p, double lambda, const SvmWeights& cw) {
  double reg = 0;
  for (double v : p.w) reg += v * v;
  double loss = 0;
  for (const auto& e : ex) loss += cw.of(e.y) * std::max(0.0, 1.0 - e.y * svm_margin(p, e.x));
  return 0.5 * lambda * reg + (ex.empty() ? 0.0 : loss / double(ex.size()));
}

// A subgradient of svm_objective; at points off the hinge kinks it is the
// gradient.
inline std::vector<double> svm_subgradient(const std::vector<SvmExample>& ex, const SvmParams& p, double lambda,
                                           const SvmWeights& cw) {
  std::vector<double> g(p.w.size());
  for (size_t j = 0; j < g.size(); ++j) g[j] = lambda * p.w[j];
  double inv_n = ex.empty() ? 0.0 : 1.0 / double(ex.size());
  for (const auto& e : ex) {
    if (e.y * svm_margin(p, e.x) >= 1.0) continue;
    double c = -cw.of(e.y) * e.y * inv_n;
    for (auto [j, v] : e.x) g[j] += c * v;
    g.back() += c;
  }
  return g;
}

struct SvmFit {
  SvmParams params;
  SvmWeights class_weights;
  double lambda = 0;
  std::vector<double> objective_history;  // full objective after each epoch
};

inline SvmFit train_svm(const std::vector<SvmExample>& ex, size_t dim, const SvmConfig& cfg) {
  if (!(cfg.C > 0) || cfg.epochs < 1 || cfg.batch_size == 0) throw ValidationError("invalid SVM configuration");
  bool has_pos = false, has_neg = false;
  for (const auto& e : ex) (e.y > 0 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw ValidationError("training data has a single class");

  SvmFit fit;
  fit.class_weights = cfg.class_weighting ? svm_class_weights(ex) : SvmWeights{};
  fit.lambda = 1.0 / (cfg.C * double(ex.size()));
  const double lambda = fit.lambda;
  const auto& cw = fit.class_weights;

  std::vector<double> v(dim + 1, 0.0);  // weights = scale * v
  double scale = 1.0;
  std::vector<size_t> order(ex.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(cfg.seed);
  SvmParams best;
  double best_obj = std::numeric_limits<double>::infinity();
  uint64_t t = 0;
  std::vector<size_t> violators;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      size_t end = std::min(order.size(), start + cfg.batch_size);
      ++t;
      double eta = 1.0 / (lambda * double(t));
      violators.clear();
      for (size_t k = start; k < end; ++k) {
        const auto& e = ex[order[k]];
        double m = v.back();
        for (auto [j, x] : e.x) m += v[j] * x;
        if (e.y * m * scale < 1.0) violators.push_back(order[k]);
      }
      // First step (t = 1) zeroes the weights exactly.
      if (t == 1) {
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
      } else {
        scale *= 1.0 - eta * lambda;
      }
      double step = eta / double(end - start) / scale;
      for (size_t i : violators) {
        const auto& e = ex[i];
        double c = step * cw.of(e.y) * e.y;
        for (auto [j, x] : e.x) v[j] += c * x;
        v.back() += c;
      }
      if (scale < 1e-9) {
        for (auto& x : v) x *= scale;
        scale = 1.0;
      }
    }
    SvmParams cur;
    cur.w.resize(v.size());
    for (size_t j = 0; j < v.size(); ++j) cur.w[j] = v[j] * scale;
    double obj = svm_objective(ex, cur, lambda, cw);
    if (!std::isfinite(obj)) throw NumericError("SVM objective diverged at epoch " + std::to_string(epoch + 1));
    fit.objective_history.push_back(obj);
    if (obj < best_obj) {
      best_obj = obj;
      best = std::move(cur);
    }
  }
  fit.params = std::move(best);
  return fit;
}

}  // namespace pepper
