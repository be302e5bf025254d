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
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pepper/corpus/review.hpp"
#include "pepper/ensemble/ensemble.hpp"
#include "pepper/util/date.hpp"
#include "pepper/util/error.hpp"

namespace pepper::stats {

// Haldane-Anscombe corrected log-odds; finite for k = 0 and k = n.
inline double corrected_log_odds(long k, long n) { return std::log((double(k) + 0.5) / (double(n - k) + 0.5)); }

struct QuarterPoint {
  int year = 0;
  int quarter = 1;
  long n = 0;
  long k = 0;
  std::optional<double> log_odds;

  std::string label() const { return std::to_string(year) + "Q" + std::to_string(quarter); }
};

struct LabeledDate {
  Date date;
  bool positive = false;
};

// Every calendar quarter from the earliest to the latest date, gaps included.
inline std::vector<QuarterPoint> quarterly_logodds(const std::vector<LabeledDate>& items) {
  if (items.empty()) return {};
  long lo = items.front().date.quarter_index(), hi = lo;
  for (const auto& it : items) {
    lo = std::min(lo, it.date.quarter_index());
    hi = std::max(hi, it.date.quarter_index());
  }
  std::vector<QuarterPoint> out(size_t(hi - lo + 1));
  for (long q = lo; q <= hi; ++q) {
    auto& p = out[size_t(q - lo)];
    p.year = int(q / 4);
    p.quarter = int(q % 4) + 1;
  }
  for (const auto& it : items) {
    auto& p = out[size_t(it.date.quarter_index() - lo)];
    ++p.n;
    p.k += it.positive;
  }
  for (auto& p : out)
    if (p.n > 0) p.log_odds = corrected_log_odds(p.k, p.n);
  return out;
}

inline std::map<std::string, bool> positive_by_review(const std::vector<PredictionRecord>& predictions) {
  std::map<std::string, bool> out;
  for (const auto& p : predictions) out[p.review_id] = p.ensemble1;
  return out;
}

// A review counts as positive when the ensemble marks it positive. Every
// review needs a prediction record.
inline std::vector<QuarterPoint> quarterly_logodds(const std::vector<Review>& reviews,
                                                   const std::vector<PredictionRecord>& predictions) {
  auto pos = positive_by_review(predictions);
  std::vector<LabeledDate> items;
  items.reserve(reviews.size());
  for (const auto& r : reviews) {
    auto it = pos.find(r.review_id);
    if (it == pos.end()) throw ValidationError("review " + r.review_id + " has no prediction record");
    items.push_back({r.date, it->second});
  }
  return quarterly_logodds(items);
}

inline std::string format_optional(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

inline std::string trend_csv(const std::vector<QuarterPoint>& series) {
  std::ostringstream os;
  os << "quarter,n,k,log_odds\n";
  for (const auto& p : series) os << p.label() << ',' << p.n << ',' << p.k << ',' << format_optional(p.log_odds) << '\n';
  return os.str();
}

struct RatingBin {
  double lo = 0.0;
  double hi = 0.0;  // exclusive except for the last bin
  long n = 0;
  long k = 0;
  std::optional<double> proportion;

  std::string label(bool last) const {
    char buf[48];
    std::snprintf(buf, sizeof buf, "[%g,%g%c", lo, hi, last ? ']' : ')');
    return buf;
  }
};

struct RatingProportions {
  std::vector<RatingBin> quality;
  std::vector<RatingBin> difficulty;
};

inline std::vector<double> default_rating_edges() { return {1.0, 2.0, 3.0, 4.0, 5.0}; }

inline std::optional<size_t> bin_of(const std::vector<double>& edges, double v) {
  if (v < edges.front() || v > edges.back()) return std::nullopt;
  for (size_t b = 0; b + 1 < edges.size(); ++b)
    if (v < edges[b + 1]) return b;
  return edges.size() - 2;
}

inline RatingProportions proportions_by_rating(const std::vector<Review>& reviews,
                                               const std::vector<PredictionRecord>& predictions,
                                               const std::vector<double>& edges = default_rating_edges()) {
  if (edges.size() < 2) throw ValidationError("need at least two bin edges");
  for (size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) throw ValidationError("bin edges must be strictly increasing");
  auto pos = positive_by_review(predictions);
  RatingProportions out;
  for (size_t b = 0; b + 1 < edges.size(); ++b) {
    out.quality.push_back({edges[b], edges[b + 1], 0, 0, std::nullopt});
    out.difficulty.push_back({edges[b], edges[b + 1], 0, 0, std::nullopt});
  }
  auto add = [&](std::vector<RatingBin>& bins, const std::optional<double>& rating, bool positive) {
    if (!rating) return;
    if (auto b = bin_of(edges, *rating)) {
      ++bins[*b].n;
      bins[*b].k += positive;
    }
  };
  for (const auto& r : reviews) {
    auto it = pos.find(r.review_id);
    if (it == pos.end()) continue;
    add(out.quality, r.quality, it->second);
    add(out.difficulty, r.difficulty, it->second);
  }
  for (auto* bins : {&out.quality, &out.difficulty})
    for (auto& b : *bins)
      if (b.n > 0) b.proportion = double(b.k) / double(b.n);
  return out;
}

inline std::string rating_csv(const RatingProportions& t) {
  std::ostringstream os;
  os << "scale,bin,n,k,proportion\n";
  auto emit = [&](const char* scale, const std::vector<RatingBin>& bins) {
    for (size_t i = 0; i < bins.size(); ++i)
      os << scale << ",\"" << bins[i].label(i + 1 == bins.size()) << "\"," << bins[i].n << ',' << bins[i].k << ','
         << format_optional(bins[i].proportion) << '\n';
  };
  emit("quality", t.quality);
  emit("difficulty", t.difficulty);
  return os.str();
}

}  // namespace pepper::stats
