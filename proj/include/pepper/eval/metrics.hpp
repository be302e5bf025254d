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

#include "pepper/util/csv.hpp"
#include "pepper/util/error.hpp"

namespace pepper {

// A metric that may be undefined; `reason` says why when it is.
struct Metric {
  std::optional<double> value;
  std::string reason;

  static Metric of(double v) { return {v, {}}; }
  static Metric absent(std::string why) { return {std::nullopt, std::move(why)}; }
  bool defined() const { return value.has_value(); }
  std::string str(int digits = 3) const {
    if (!value) return "\xE2\x80\x94";  // em dash placeholder for undefined cells
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, *value);
    return buf;
  }
};

struct MetricReport {
  long tp = 0, fp = 0, fn = 0, tn = 0;
  Metric precision, recall, f1, accuracy, kappa;
  long total() const { return tp + fp + fn + tn; }
};

// Cohen's kappa over any label type: (p_o - p_e) / (1 - p_e) with p_e from
// the product of the two raters' marginals. Absent when p_e = 1.
template <typename T>
Metric cohen_kappa(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw ValidationError("length mismatch");
  if (a.empty()) throw ValidationError("empty input");
  std::map<T, double> ma, mb;
  double agree = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    ma[a[i]] += 1;
    mb[b[i]] += 1;
    agree += a[i] == b[i];
  }
  double n = double(a.size());
  double po = agree / n, pe = 0;
  for (const auto& [label, c] : ma) {
    auto it = mb.find(label);
    if (it != mb.end()) pe += (c / n) * (it->second / n);
  }
  if (std::abs(1.0 - pe) < 1e-15) return Metric::absent("chance agreement is 1 (both raters constant on one label)");
  return Metric::of((po - pe) / (1.0 - pe));
}

inline MetricReport report_from_counts(long tp, long fp, long fn, long tn) {
  MetricReport r{tp, fp, fn, tn, {}, {}, {}, {}, {}};
  long total = tp + fp + fn + tn;
  if (total == 0) throw ValidationError("empty input");
  r.precision = tp + fp ? Metric::of(double(tp) / double(tp + fp)) : Metric::absent("no positive predictions");
  r.recall = tp + fn ? Metric::of(double(tp) / double(tp + fn)) : Metric::absent("no positive gold labels");
  // 2tp / (2tp + fp + fn): zero whenever there are gold or predicted
  // positives but no hits, even if precision itself is undefined.
  r.f1 = 2 * tp + fp + fn ? Metric::of(2.0 * double(tp) / double(2 * tp + fp + fn))
                          : Metric::absent("no positive predictions or gold labels");
  r.accuracy = Metric::of(double(tp + tn) / double(total));
  // Kappa from the 2x2 table directly.
  double n = double(total);
  double po = double(tp + tn) / n;
  double pe = (double(tp + fp) / n) * (double(tp + fn) / n) + (double(fn + tn) / n) * (double(fp + tn) / n);
  r.kappa = std::abs(1.0 - pe) < 1e-15 ? Metric::absent("chance agreement is 1")
                                       : Metric::of((po - pe) / (1.0 - pe));
  return r;
}

inline MetricReport score(const std::vector<bool>& pred, const std::vector<bool>& gold) {
  if (pred.size() != gold.size()) throw ValidationError("length mismatch");
  if (pred.empty()) throw ValidationError("empty input");
  long tp = 0, fp = 0, fn = 0, tn = 0;
  for (size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] && gold[i]) ++tp;
    else if (pred[i]) ++fp;
    else if (gold[i]) ++fn;
    else ++tn;
  }
  return report_from_counts(tp, fp, fn, tn);
}

struct NamedReport {
  std::string name;
  MetricReport report;
};

inline std::string metrics_csv(const std::vector<NamedReport>& rows) {
  std::ostringstream os;
  csv::write_row(os, {"model", "precision", "recall", "f1", "accuracy", "kappa", "tp", "fp", "fn", "tn"});
  auto cell = [](const Metric& m) {
    if (!m.value) return std::string();
    std::ostringstream s;
    s.precision(17);
    s << *m.value;
    return s.str();
  };
  for (const auto& r : rows) {
    const auto& m = r.report;
    csv::write_row(os, {r.name, cell(m.precision), cell(m.recall), cell(m.f1), cell(m.accuracy), cell(m.kappa),
                        std::to_string(m.tp), std::to_string(m.fp), std::to_string(m.fn), std::to_string(m.tn)});
  }
  return os.str();
}

// Fixed-width text table with the columns Prec. Rec. F1 Acc. kappa.
inline std::string metrics_table(const std::vector<NamedReport>& rows) {
  size_t w = 5;
  for (const auto& r : rows) w = std::max(w, r.name.size());
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %6s  %6s  %6s  %6s  %6s\n", int(w), "Model", "Prec.", "Rec.", "F1", "Acc.",
                "kappa");
  os << buf;
  auto pad = [](const Metric& m) {
    auto s = m.str();
    // the placeholder is one glyph but three bytes
    return m.defined() ? s : std::string(5, ' ') + s;
  };
  for (const auto& r : rows) {
    const auto& m = r.report;
    std::snprintf(buf, sizeof buf, "%-*s  %6s  %6s  %6s  %6s  %6s\n", int(w), r.name.c_str(), pad(m.precision).c_str(),
                  pad(m.recall).c_str(), pad(m.f1).c_str(), pad(m.accuracy).c_str(), pad(m.kappa).c_str());
    os << buf;
  }
  return os.str();
}

}  // namespace pepper
