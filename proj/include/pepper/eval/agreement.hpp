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

// Inter-annotator agreement between two labeled versions of the same
// reviews, at token (span) and document level.

#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pepper/corpus/review.hpp"
#include "pepper/eval/metrics.hpp"

namespace pepper {

// Qualitative bands: <0 poor, then slight, fair, moderate, substantial and
// almost perfect with upper edges 0.20, 0.40, 0.60, 0.80.
inline std::string kappa_band(double k) {
  if (k < 0.0) return "poor";
  if (k <= 0.20) return "slight";
  if (k <= 0.40) return "fair";
  if (k <= 0.60) return "moderate";
  if (k <= 0.80) return "substantial";
  return "almost perfect";
}

// Values within 0.01 of an edge are flagged: two-decimal tables put 0.801
// under "substantial" while the edge rule puts it above.
inline std::string band_note(double k) {
  for (double edge : {0.20, 0.40, 0.60, 0.80}) {
    if (k > edge && k < edge + 0.01) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%.3f is just above the %.2f edge; %s by the edge rule, %s if read to two decimals", k,
                    edge, kappa_band(k).c_str(), kappa_band(edge).c_str());
      return buf;
    }
  }
  return {};
}

enum class SpanMode { binary, iob };

struct ReviewDiff {
  std::string review_id;
  bool doc_a = false, doc_b = false;
  std::vector<size_t> token_positions;  // tokens whose tags differ
};

struct AgreementReport {
  size_t reviews = 0;
  size_t tokens = 0;
  Metric span_kappa;      // binarised in-span agreement
  Metric span_kappa_iob;  // three-class B/I/O agreement
  Metric doc_kappa;
  std::string doc_band, span_band;
  std::string note;
  std::vector<ReviewDiff> diffs;

  const Metric& span(SpanMode m) const { return m == SpanMode::binary ? span_kappa : span_kappa_iob; }
};

inline AgreementReport agreement_report(const std::vector<LabeledReview>& a, const std::vector<LabeledReview>& b) {
  std::map<std::string, const LabeledReview*> bi;
  for (const auto& r : b)
    if (!bi.emplace(r.review.review_id, &r).second) throw ValidationError("duplicate review_id " + r.review.review_id);
  if (a.size() != b.size()) throw ValidationError("id mismatch: annotators labeled different review sets");
  std::vector<bool> da, db;
  std::vector<int> ta, tb, ba, bb;
  AgreementReport rep;
  for (const auto& ra : a) {
    auto it = bi.find(ra.review.review_id);
    if (it == bi.end()) throw ValidationError("id mismatch: " + ra.review.review_id + " missing from second annotator");
    const auto& rb = *it->second;
    if (ra.iob.size() != rb.iob.size())
      throw ValidationError("review " + ra.review.review_id + " has different token counts for the two annotators");
    da.push_back(ra.doc_label);
    db.push_back(rb.doc_label);
    ReviewDiff d{ra.review.review_id, ra.doc_label, rb.doc_label, {}};
    for (size_t i = 0; i < ra.iob.size(); ++i) {
      ta.push_back(int(ra.iob[i]));
      tb.push_back(int(rb.iob[i]));
      ba.push_back(ra.iob[i] != Iob::O);
      bb.push_back(rb.iob[i] != Iob::O);
      if (ra.iob[i] != rb.iob[i]) d.token_positions.push_back(i);
    }
    if (d.doc_a != d.doc_b || !d.token_positions.empty()) rep.diffs.push_back(std::move(d));
  }
  rep.reviews = a.size();
  rep.tokens = ta.size();
  if (rep.reviews == 0) throw ValidationError("empty input");
  rep.doc_kappa = cohen_kappa(std::vector<int>(da.begin(), da.end()), std::vector<int>(db.begin(), db.end()));
  if (!ta.empty()) {
    rep.span_kappa = cohen_kappa(ba, bb);
    rep.span_kappa_iob = cohen_kappa(ta, tb);
  } else {
    rep.span_kappa = rep.span_kappa_iob = Metric::absent("no tokens");
  }
  if (rep.doc_kappa.defined()) {
    rep.doc_band = kappa_band(*rep.doc_kappa.value);
    rep.note = band_note(*rep.doc_kappa.value);
  }
  if (rep.span_kappa.defined()) rep.span_band = kappa_band(*rep.span_kappa.value);
  return rep;
}

inline std::string agreement_text(const AgreementReport& r, const std::vector<LabeledReview>& a = {}) {
  std::ostringstream os;
  os << "reviews: " << r.reviews << "  tokens: " << r.tokens << "\n";
  os << "document kappa:           " << r.doc_kappa.str() << (r.doc_band.empty() ? "" : "  (" + r.doc_band + ")") << "\n";
  os << "span kappa (in-span):     " << r.span_kappa.str() << (r.span_band.empty() ? "" : "  (" + r.span_band + ")")
     << "\n";
  os << "span kappa (B/I/O):       " << r.span_kappa_iob.str() << "\n";
  if (!r.note.empty()) os << "note: " << r.note << "\n";
  std::map<std::string, const LabeledReview*> by_id;
  for (const auto& lr : a) by_id[lr.review.review_id] = &lr;
  os << "disagreements: " << r.diffs.size() << "\n";
  for (const auto& d : r.diffs) {
    os << "  " << d.review_id << "  doc " << (d.doc_a ? "pos" : "neg") << "/" << (d.doc_b ? "pos" : "neg");
    if (!d.token_positions.empty()) {
      os << "  tokens";
      auto it = by_id.find(d.review_id);
      for (size_t i : d.token_positions) {
        os << ' ' << i;
        if (it != by_id.end() && i < it->second->tokens.size()) os << ":" << it->second->tokens[i].surface;
      }
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace pepper
