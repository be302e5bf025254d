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

// Seeded generators of clustered binary data with known coefficients.

#include <cmath>
#include <vector>

#include "pepper/stats/design.hpp"
#include "pepper/stats/gee.hpp"
#include "pepper/util/rng.hpp"

namespace pepper::stats {

// Correlated Bernoulli draws: each observation reuses its cluster's uniform
// with probability sqrt(rho). For equal means the pairwise correlation is
// exactly rho; unequal means within a cluster pull it slightly below.
class SharedUniform {
 public:
  SharedUniform(Rng& rng, double rho) : rng_(rng), reuse_(std::sqrt(rho)) {}
  void next_cluster() { shared_ = rng_.uniform(); }
  bool draw(double mu) { return (rng_.bernoulli(reuse_) ? shared_ : rng_.uniform()) < mu; }

 private:
  Rng& rng_;
  double reuse_;
  double shared_ = 0.0;
};

struct ClusteredSimSpec {
  size_t n_clusters = 2000;
  size_t cluster_size = 5;
  std::vector<double> beta = {-2.0, 0.8, -0.5};  // intercept, cluster-level x1, within-cluster x2
  double rho = 0.2;
  uint64_t seed = 0;
};

inline GeeData simulate_clustered(const ClusteredSimSpec& spec) {
  if (spec.beta.size() != 3) throw ValidationError("clustered simulation takes 3 coefficients");
  Rng rng(spec.seed);
  SharedUniform su(rng, spec.rho);
  const auto n = Eigen::Index(spec.n_clusters * spec.cluster_size);
  GeeData d;
  d.names = {"(Intercept)", "x1", "x2"};
  d.X.resize(n, 3);
  d.y.resize(n);
  d.cluster.resize(size_t(n));
  Eigen::Index row = 0;
  for (size_t c = 0; c < spec.n_clusters; ++c) {
    su.next_cluster();
    double x1 = rng.bernoulli(0.5);
    for (size_t k = 0; k < spec.cluster_size; ++k, ++row) {
      double x2 = rng.normal();
      double mu = detail::logistic(spec.beta[0] + spec.beta[1] * x1 + spec.beta[2] * x2);
      d.X.row(row) << 1.0, x1, x2;
      d.y[row] = su.draw(mu);
      d.cluster[size_t(row)] = long(c);
    }
  }
  return d;
}

// Generator coefficients in kTrendCovariates order.
inline const std::vector<double> kTrendGeneratorBeta = {-3.111, -0.428, -0.020, -0.075, 0.051, -0.528, 0.097};

struct TrendSimSpec {
  size_t n_obs = 50000;
  size_t reviews_per_professor = 10;
  double rho = 0.05;
  double female_share = 0.4;
  double quality_high_rate = 0.55;
  double difficulty_high_rate = 0.45;
  double volume_growth = 3.0;  // review density grows as t^volume_growth
  Date first{2010, 1, 1};
  Date last{2019, 8, 31};
  DesignOptions design;
  std::vector<double> beta = kTrendGeneratorBeta;
  uint64_t seed = 0;
};

inline GeeData simulate_trend(const TrendSimSpec& spec) {
  if (spec.beta.size() != kTrendCovariates.size()) throw ValidationError("trend simulation takes 7 coefficients");
  if (spec.reviews_per_professor == 0) throw ValidationError("reviews_per_professor must be positive");
  Rng rng(spec.seed);
  SharedUniform su(rng, spec.rho);
  const long d0 = spec.first.days_since_epoch(), span = spec.last.days_since_epoch() - d0;
  const long epoch_q = spec.design.epoch.quarter_index();
  const double shape = 1.0 / (1.0 + spec.volume_growth);
  Eigen::Map<const Eigen::VectorXd> beta(spec.beta.data(), Eigen::Index(spec.beta.size()));
  GeeData d;
  d.names = kTrendCovariates;
  d.X.resize(Eigen::Index(spec.n_obs), beta.size());
  d.y.resize(Eigen::Index(spec.n_obs));
  d.cluster.resize(spec.n_obs);
  bool female = false;
  for (size_t i = 0; i < spec.n_obs; ++i) {
    if (i % spec.reviews_per_professor == 0) {
      su.next_cluster();
      female = rng.bernoulli(spec.female_share);
    }
    Date date = Date::from_days(d0 + long(std::floor(std::pow(rng.uniform(), shape) * double(span + 1))));
    auto row = trend_row(!pepper_present(date, spec.design.cutoff), date.quarter_index() - epoch_q,
                         rng.bernoulli(spec.difficulty_high_rate), rng.bernoulli(spec.quality_high_rate), female);
    auto r = Eigen::Index(i);
    for (size_t j = 0; j < row.size(); ++j) d.X(r, Eigen::Index(j)) = row[j];
    d.y[r] = su.draw(detail::logistic(d.X.row(r).dot(beta)));
    d.cluster[i] = long(i / spec.reviews_per_professor);
  }
  return d;
}

}  // namespace pepper::stats
