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

// Logistic generalized estimating equations with independence or
// exchangeable working correlation and sandwich standard errors.

#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pepper/stats/contingency.hpp"
#include "pepper/util/error.hpp"

namespace pepper::stats {

enum class WorkingCorrelation { independence, exchangeable };

inline std::string_view to_string(WorkingCorrelation w) {
  return w == WorkingCorrelation::independence ? "independence" : "exchangeable";
}

inline WorkingCorrelation parse_working_correlation(std::string_view s) {
  if (s == "independence") return WorkingCorrelation::independence;
  if (s == "exchangeable") return WorkingCorrelation::exchangeable;
  throw ValidationError("unknown working correlation '" + std::string(s) + "' (expected independence or exchangeable)");
}

struct GeeOptions {
  WorkingCorrelation correlation = WorkingCorrelation::exchangeable;
  int max_iter = 50;
  double tol = 1e-8;
  double separation_bound = 25.0;  // |beta| beyond this on the log-odds scale
};

// One row per observation. Column 0 is usually the intercept.
struct GeeData {
  std::vector<std::string> names;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<long> cluster;
};

struct GeeCoefficient {
  std::string name;
  double estimate = 0.0;
  double robust_se = 0.0;
  double wald_chi2 = 0.0;
  double p_value = 1.0;
};

struct GeeFit {
  std::vector<GeeCoefficient> coefficients;
  WorkingCorrelation correlation = WorkingCorrelation::exchangeable;
  double alpha = 0.0;
  double phi = 1.0;
  long n_clusters = 0;
  long n_obs = 0;
  double log_quasi_likelihood = 0.0;
  double qic = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> trajectory;  // max |delta beta| per iteration
  Eigen::MatrixXd robust_cov;

  Eigen::VectorXd beta() const {
    Eigen::VectorXd b(coefficients.size());
    for (size_t j = 0; j < coefficients.size(); ++j) b[Eigen::Index(j)] = coefficients[j].estimate;
    return b;
  }
  const GeeCoefficient& at(std::string_view name) const {
    for (const auto& c : coefficients)
      if (c.name == name) return c;
    throw ValidationError("no coefficient named '" + std::string(name) + "'");
  }
};

class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& msg, std::vector<double> trajectory)
      : NumericError(msg), trajectory_(std::move(trajectory)) {}
  const std::vector<double>& trajectory() const { return trajectory_; }

 private:
  std::vector<double> trajectory_;
};

class SeparationError : public NumericError {
 public:
  SeparationError(const std::string& msg, std::string covariate) : NumericError(msg), covariate_(std::move(covariate)) {}
  const std::string& covariate() const { return covariate_; }

 private:
  std::string covariate_;
};

namespace detail {

inline double logistic(double eta) {
  return eta >= 0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
}

inline std::vector<std::vector<Eigen::Index>> group_clusters(const std::vector<long>& cluster) {
  std::map<long, size_t> slot;
  std::vector<std::vector<Eigen::Index>> groups;
  for (size_t i = 0; i < cluster.size(); ++i) {
    auto [it, fresh] = slot.emplace(cluster[i], groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(Eigen::Index(i));
  }
  return groups;
}

inline void check_design(const GeeData& d) {
  const auto n = d.X.rows(), p = d.X.cols();
  if (p == 0) throw ValidationError("design has no columns");
  if (d.names.size() != size_t(p)) throw ValidationError("design has " + std::to_string(p) + " columns but " +
                                                         std::to_string(d.names.size()) + " names");
  if (d.y.size() != n || d.cluster.size() != size_t(n)) throw ValidationError("design, outcome and cluster lengths differ");
  if (n == 0) throw ValidationError("empty input");
  for (Eigen::Index i = 0; i < n; ++i)
    if (d.y[i] != 0.0 && d.y[i] != 1.0) throw ValidationError("outcome must be 0 or 1");
  if (d.y.minCoeff() == d.y.maxCoeff()) throw ValidationError("outcome is constant");
  if (!d.X.allFinite()) throw ValidationError("design contains non-finite values");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.X);
  if (qr.rank() == p) return;
  for (Eigen::Index j = 1; j <= p; ++j) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> part(d.X.leftCols(j));
    if (part.rank() < j) throw ValidationError("design matrix is rank deficient at column '" + d.names[size_t(j - 1)] + "'");
  }
  throw ValidationError("design matrix is rank deficient");
}

struct ClusterTerms {
  Eigen::MatrixXd H;  // sum of D' V^-1 D
  Eigen::VectorXd U;  // sum of D' V^-1 (y - mu)
  Eigen::MatrixXd meat;
  Eigen::MatrixXd info_indep;
  double quasi_ll = 0.0;
  double pair_sum = 0.0;  // within-cluster products of Pearson residuals
  double sq_sum = 0.0;
};

// With V = A^1/2 R A^1/2 and D = A X, D' V^-1 D = Z' R^-1 Z for Z = A^1/2 X,
// and the score is Z' R^-1 e with Pearson residuals e. For the exchangeable
// R, R^-1 = (I - c J) / (1 - alpha) with c = alpha / (1 + (n - 1) alpha).
inline ClusterTerms accumulate(const GeeData& d, const std::vector<std::vector<Eigen::Index>>& groups,
                               const Eigen::VectorXd& beta, double alpha, bool want_meat) {
  const auto p = d.X.cols();
  ClusterTerms t{Eigen::MatrixXd::Zero(p, p), Eigen::VectorXd::Zero(p), Eigen::MatrixXd::Zero(p, p),
                 Eigen::MatrixXd::Zero(p, p), 0.0, 0.0, 0.0};
  Eigen::MatrixXd Z;
  Eigen::VectorXd e;
  for (const auto& g : groups) {
    const auto n = Eigen::Index(g.size());
    Z.resize(n, p);
    e.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto row = g[size_t(k)];
      double mu = std::clamp(logistic(d.X.row(row).dot(beta)), 1e-15, 1.0 - 1e-15);
      double v = mu * (1.0 - mu), sv = std::sqrt(v);
      double y = d.y[row];
      Z.row(k) = sv * d.X.row(row);
      e[k] = (y - mu) / sv;
      t.quasi_ll += y * std::log(mu) + (1.0 - y) * std::log(1.0 - mu);
    }
    Eigen::MatrixXd ztz = Z.transpose() * Z;
    Eigen::VectorXd zte = Z.transpose() * e;
    Eigen::VectorXd s = Z.colwise().sum().transpose();
    double esum = e.sum(), esq = e.squaredNorm();
    double c = alpha / (1.0 + double(n - 1) * alpha);
    double scale = 1.0 / (1.0 - alpha);
    Eigen::VectorXd u = scale * (zte - c * esum * s);
    t.H += scale * (ztz - c * s * s.transpose());
    t.U += u;
    if (want_meat) {
      t.meat += u * u.transpose();
      t.info_indep += ztz;
    }
    t.pair_sum += 0.5 * (esum * esum - esq);
    t.sq_sum += esq;
  }
  return t;
}

}  // namespace detail

// Moment estimates of the scale and exchangeable correlation from Pearson
// residuals; the pair count is reduced by the number of coefficients.
inline std::pair<double, double> moment_alpha(const detail::ClusterTerms& t,
                                              const std::vector<std::vector<Eigen::Index>>& groups, long n_obs,
                                              long p) {
  double phi = t.sq_sum / double(std::max<long>(1, n_obs - p));
  double pairs = 0.0;
  size_t max_n = 1;
  for (const auto& g : groups) {
    pairs += 0.5 * double(g.size()) * double(g.size() - 1);
    max_n = std::max(max_n, g.size());
  }
  pairs -= double(p);
  if (pairs <= 0.0 || phi <= 0.0 || max_n < 2) return {phi, 0.0};
  double alpha = t.pair_sum / (pairs * phi);
  double lower = -1.0 / double(max_n - 1) + 1e-6;
  return {phi, std::clamp(alpha, lower, 0.999)};
}

inline GeeFit fit_gee(const GeeData& d, const GeeOptions& opt = {}) {
  detail::check_design(d);
  const auto groups = detail::group_clusters(d.cluster);
  if (groups.size() < 2) throw ValidationError("need at least 2 clusters");
  const long n = long(d.X.rows()), p = long(d.X.cols());
  const bool exch = opt.correlation == WorkingCorrelation::exchangeable;

  GeeFit fit;
  fit.correlation = opt.correlation;
  fit.n_obs = n;
  fit.n_clusters = long(groups.size());
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double alpha = 0.0, phi = 1.0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    if (exch && it > 1) {
      auto moments = detail::accumulate(d, groups, beta, 0.0, false);
      std::tie(phi, alpha) = moment_alpha(moments, groups, n, p);
    }
    auto t = detail::accumulate(d, groups, beta, alpha, false);
    Eigen::VectorXd delta = t.H.ldlt().solve(t.U);
    if (!delta.allFinite()) throw NumericError("GEE update is not finite at iteration " + std::to_string(it));
    beta += delta;
    double step = delta.cwiseAbs().maxCoeff();
    fit.trajectory.push_back(step);
    fit.iterations = it;
    Eigen::Index worst;
    if (beta.cwiseAbs().maxCoeff(&worst) > opt.separation_bound) {
      const auto& name = d.names[size_t(worst)];
      throw SeparationError("separation detected: coefficient '" + name + "' exceeds " +
                                std::to_string(opt.separation_bound) + " in absolute value",
                            name);
    }
    if (step < opt.tol) {
      fit.converged = true;
      break;
    }
  }
  if (!fit.converged) {
    std::ostringstream msg;
    msg << "GEE did not converge in " << opt.max_iter << " iterations; max |delta beta| trajectory:";
    for (double s : fit.trajectory) msg << ' ' << s;
    throw ConvergenceError(msg.str(), fit.trajectory);
  }

  auto t = detail::accumulate(d, groups, beta, alpha, true);
  if (!exch) phi = t.sq_sum / double(std::max<long>(1, n - p));
  Eigen::MatrixXd bread = t.H.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  fit.robust_cov = bread * t.meat * bread;
  fit.robust_cov = (0.5 * (fit.robust_cov + fit.robust_cov.transpose())).eval();
  fit.alpha = alpha;
  fit.phi = phi;
  fit.log_quasi_likelihood = t.quasi_ll;
  fit.qic = -2.0 * t.quasi_ll + 2.0 * (t.info_indep * fit.robust_cov).trace();
  for (long j = 0; j < p; ++j) {
    GeeCoefficient c;
    c.name = d.names[size_t(j)];
    c.estimate = beta[j];
    c.robust_se = std::sqrt(std::max(0.0, fit.robust_cov(j, j)));
    c.wald_chi2 = c.robust_se > 0 ? (c.estimate / c.robust_se) * (c.estimate / c.robust_se) : 0.0;
    c.p_value = chi_square_upper_tail(c.wald_chi2, 1.0);
    fit.coefficients.push_back(std::move(c));
  }
  return fit;
}

inline std::string format_p(double p) {
  if (p < 0.001) return "<.001";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", p);
  return buf;
}

// Coefficient table with estimate, robust standard error, Wald statistic and p.
inline std::string gee_table(const GeeFit& fit) {
  size_t width = 12;
  for (const auto& c : fit.coefficients) width = std::max(width, c.name.size());
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-*s %10s %9s %10s %8s\n", int(width), "", "Estimate", "Std.err.", "Wald chi2",
                "p");
  os << buf;
  for (const auto& c : fit.coefficients) {
    std::snprintf(buf, sizeof buf, "%-*s %10.3f %9.3f %10.2f %8s\n", int(width), c.name.c_str(), c.estimate,
                  c.robust_se, c.wald_chi2, format_p(c.p_value).c_str());
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "N = %ld, clusters = %ld, working correlation = %s", fit.n_obs, fit.n_clusters,
                std::string(to_string(fit.correlation)).c_str());
  os << buf;
  if (fit.correlation == WorkingCorrelation::exchangeable) {
    std::snprintf(buf, sizeof buf, " (alpha = %.4f)", fit.alpha);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "\nlog quasi-likelihood = %.3f, QIC = %.3f, iterations = %d\n",
                fit.log_quasi_likelihood, fit.qic, fit.iterations);
  os << buf;
  return os.str();
}

inline std::string gee_csv(const GeeFit& fit) {
  std::ostringstream os;
  os.precision(17);
  os << "term,estimate,robust_se,wald_chi2,p_value\n";
  for (const auto& c : fit.coefficients)
    os << c.name << ',' << c.estimate << ',' << c.robust_se << ',' << c.wald_chi2 << ',' << c.p_value << '\n';
  return os.str();
}

}  // namespace pepper::stats
