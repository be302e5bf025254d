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

#include <map>
#include <string>
#include <vector>

#include "pepper/corpus/review.hpp"
#include "pepper/ensemble/ensemble.hpp"
#include "pepper/stats/gee.hpp"
#include "pepper/util/date.hpp"

namespace pepper::stats {

inline const std::vector<std::string> kTrendCovariates = {
    "(Intercept)", "pepperAbsent", "timeInQuarters", "difficultyHigh", "qualityHigh", "genderFemale",
    "qualityHigh:genderFemale"};

struct DesignOptions {
  double high_threshold = 3.5;  // rating >= threshold counts as high
  Date epoch{2010, 1, 1};       // its quarter is timeInQuarters = 0
  Date cutoff = kPepperCutoff;
};

struct DesignExclusions {
  long no_prediction = 0;
  long abstained = 0;
  long missing_rating = 0;
  long unknown_gender = 0;
  long before_epoch = 0;
  long total() const { return no_prediction + abstained + missing_rating + unknown_gender + before_epoch; }
};

struct Design {
  GeeData data;
  std::vector<std::string> review_ids;
  std::vector<std::string> cluster_names;  // index = cluster id
  DesignExclusions excluded;
};

inline std::vector<double> trend_row(bool pepper_absent, long quarters, bool difficulty_high, bool quality_high,
                                     bool female) {
  double q = quality_high, f = female;
  return {1.0, double(pepper_absent), double(quarters), double(difficulty_high), q, f, q * f};
}

// One row per review the ensemble did not abstain on; the outcome is the
// ensemble's positive vote and clusters are professors.
inline Design build_design(const std::vector<Review>& reviews, const std::vector<PredictionRecord>& predictions,
                           const DesignOptions& opt = {}) {
  std::map<std::string, const PredictionRecord*> pred;
  for (const auto& p : predictions) pred[p.review_id] = &p;
  std::map<std::string, Gender> gender;
  for (const auto& prof : professors(reviews)) gender[prof.professor_id] = prof.gender;

  Design out;
  std::vector<std::vector<double>> rows;
  std::vector<double> ys;
  std::map<std::string, long> cluster_of;
  const long epoch_q = opt.epoch.quarter_index();
  for (const auto& r : reviews) {
    auto it = pred.find(r.review_id);
    if (it == pred.end()) {
      ++out.excluded.no_prediction;
      continue;
    }
    if (it->second->ensemble2 == Vote::abstain) {
      ++out.excluded.abstained;
      continue;
    }
    if (!r.quality || !r.difficulty) {
      ++out.excluded.missing_rating;
      continue;
    }
    Gender g = gender[r.professor_id];
    if (g == Gender::unknown) {
      ++out.excluded.unknown_gender;
      continue;
    }
    long q = r.date.quarter_index() - epoch_q;
    if (q < 0) {
      ++out.excluded.before_epoch;
      continue;
    }
    rows.push_back(trend_row(!pepper_present(r.date, opt.cutoff), q, *r.difficulty >= opt.high_threshold,
                             *r.quality >= opt.high_threshold, g == Gender::female));
    ys.push_back(it->second->ensemble2 == Vote::positive ? 1.0 : 0.0);
    auto [cit, fresh] = cluster_of.emplace(r.professor_id, long(out.cluster_names.size()));
    if (fresh) out.cluster_names.push_back(r.professor_id);
    out.data.cluster.push_back(cit->second);
    out.review_ids.push_back(r.review_id);
  }
  out.data.names = kTrendCovariates;
  out.data.X.resize(Eigen::Index(rows.size()), Eigen::Index(kTrendCovariates.size()));
  out.data.y.resize(Eigen::Index(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) out.data.X(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
    out.data.y[Eigen::Index(i)] = ys[i];
  }
  return out;
}

}  // namespace pepper::stats
