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

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "pepper/corpus/review.hpp"
#include "pepper/ensemble/ensemble.hpp"
#include "pepper/util/error.hpp"

namespace pepper::stats {

struct ContingencyTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<long>> counts;  // counts[row][col]

  size_t rows() const { return counts.size(); }
  size_t cols() const { return counts.empty() ? 0 : counts[0].size(); }
  long total() const {
    long n = 0;
    for (const auto& r : counts)
      for (long c : r) n += c;
    return n;
  }
  long row_total(size_t i) const {
    long n = 0;
    for (long c : counts[i]) n += c;
    return n;
  }
  long col_total(size_t j) const {
    long n = 0;
    for (const auto& r : counts) n += r[j];
    return n;
  }
  ContingencyTable transposed() const {
    ContingencyTable t{col_labels, row_labels, std::vector<std::vector<long>>(cols(), std::vector<long>(rows()))};
    for (size_t i = 0; i < rows(); ++i)
      for (size_t j = 0; j < cols(); ++j) t.counts[j][i] = counts[i][j];
    return t;
  }
  bool operator==(const ContingencyTable&) const = default;
};

inline void validate(const ContingencyTable& t) {
  if (t.rows() < 2 || t.cols() < 2) throw ValidationError("contingency table needs at least 2 rows and 2 columns");
  for (const auto& r : t.counts) {
    if (r.size() != t.cols()) throw ValidationError("ragged contingency table");
    for (long c : r)
      if (c < 0) throw ValidationError("negative count in contingency table");
  }
}

struct ChiSquareResult {
  double chi2 = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

inline double chi_square_upper_tail(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), x));
}

// Pearson test of independence. Yates continuity correction applies to 2x2
// tables only.
inline ChiSquareResult chi_square_independence(const ContingencyTable& t, bool yates = false) {
  validate(t);
  const double n = double(t.total());
  ChiSquareResult out;
  for (size_t i = 0; i < t.rows(); ++i) {
    for (size_t j = 0; j < t.cols(); ++j) {
      double e = double(t.row_total(i)) * double(t.col_total(j)) / (n > 0 ? n : 1.0);
      if (e <= 0.0) throw ValidationError("zero expected cell at row " + std::to_string(i) + ", column " + std::to_string(j));
      double d = std::abs(double(t.counts[i][j]) - e);
      if (yates && t.rows() == 2 && t.cols() == 2) d = std::max(0.0, d - 0.5);
      out.chi2 += d * d / e;
    }
  }
  out.dof = int((t.rows() - 1) * (t.cols() - 1));
  out.p_value = chi_square_upper_tail(out.chi2, out.dof);
  return out;
}

struct ProfessorTable {
  ContingencyTable table;  // rows female, male; columns has, has-not
  long unknown_gender = 0;
  double female_rate = 0.0;
  double male_rate = 0.0;
};

inline ProfessorTable professor_table_from_flags(const std::vector<std::pair<Gender, bool>>& profs) {
  ProfessorTable out;
  out.table.row_labels = {"female", "male"};
  out.table.col_labels = {"has_objectifying", "none"};
  out.table.counts.assign(2, std::vector<long>(2, 0));
  for (const auto& [g, has] : profs) {
    if (g == Gender::unknown) {
      ++out.unknown_gender;
      continue;
    }
    out.table.counts[g == Gender::female ? 0 : 1][has ? 0 : 1]++;
  }
  long f = out.table.row_total(0), m = out.table.row_total(1);
  if (f + m == 0) throw ValidationError("no gendered professors");
  out.female_rate = f ? double(out.table.counts[0][0]) / double(f) : 0.0;
  out.male_rate = m ? double(out.table.counts[1][0]) / double(m) : 0.0;
  return out;
}

// Gender x "has at least one review the ensemble marks positive". Reviews
// without a prediction record do not count toward either column.
inline ProfessorTable professor_objectification_table(const std::vector<Review>& reviews,
                                                      const std::vector<PredictionRecord>& predictions) {
  std::map<std::string, bool> positive;
  for (const auto& p : predictions) positive[p.review_id] = p.ensemble1;
  std::vector<std::pair<Gender, bool>> flags;
  for (const auto& prof : professors(reviews)) {
    bool scored = false, has = false;
    for (const auto& id : prof.review_ids) {
      auto it = positive.find(id);
      if (it == positive.end()) continue;
      scored = true;
      has = has || it->second;
    }
    if (scored) flags.emplace_back(prof.gender, has);
  }
  return professor_table_from_flags(flags);
}

}  // namespace pepper::stats
