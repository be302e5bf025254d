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
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pepper/util/csv.hpp"
#include "pepper/util/error.hpp"
#include "pepper/util/strings.hpp"

namespace pepper {

enum class Vote { positive, negative, abstain };

inline std::string_view to_string(Vote v) {
  switch (v) {
    case Vote::positive: return "positive";
    case Vote::negative: return "negative";
    case Vote::abstain: return "abstain";
  }
  return "abstain";
}

inline std::optional<Vote> parse_vote(std::string_view s) {
  if (s == "positive") return Vote::positive;
  if (s == "negative") return Vote::negative;
  if (s == "abstain") return Vote::abstain;
  return std::nullopt;
}

struct Verdicts {
  bool ensemble1 = false;
  Vote ensemble2 = Vote::abstain;
  bool operator==(const Verdicts&) const = default;
};

// Ensemble 1 counts a disagreement as negative; ensemble 2 abstains on it.
inline Verdicts combine(bool chunker_label, bool doc_label) {
  if (chunker_label && doc_label) return {true, Vote::positive};
  if (!chunker_label && !doc_label) return {false, Vote::negative};
  return {false, Vote::abstain};
}

struct PredictionRecord {
  std::string review_id;
  bool chunker_label = false;
  bool doc_label = false;
  bool ensemble1 = false;
  Vote ensemble2 = Vote::abstain;
  std::optional<double> chunker_margin;  // triage only, never voted on
  std::optional<double> doc_margin;

  bool operator==(const PredictionRecord&) const = default;
};

inline PredictionRecord make_prediction(std::string review_id, bool chunker_label, bool doc_label) {
  auto v = combine(chunker_label, doc_label);
  return {std::move(review_id), chunker_label, doc_label, v.ensemble1, v.ensemble2, std::nullopt, std::nullopt};
}

struct PairedConfusion {
  long both_pos = 0;
  long chunk_pos_doc_neg = 0;
  long chunk_neg_doc_pos = 0;
  long both_neg = 0;

  long total() const { return both_pos + chunk_pos_doc_neg + chunk_neg_doc_pos + both_neg; }
  long disagreements() const { return chunk_pos_doc_neg + chunk_neg_doc_pos; }
  double disagreement_rate() const {
    if (total() == 0) throw ValidationError("empty input");
    return double(disagreements()) / double(total());
  }
  long ensemble2_retained() const { return both_pos + both_neg; }
  long chunker_positives() const { return both_pos + chunk_pos_doc_neg; }
  long doc_positives() const { return both_pos + chunk_neg_doc_pos; }
  bool operator==(const PairedConfusion&) const = default;
};

inline PairedConfusion paired_confusion(const std::vector<PredictionRecord>& records) {
  PairedConfusion c;
  for (const auto& r : records) {
    if (r.chunker_label && r.doc_label) ++c.both_pos;
    else if (r.chunker_label) ++c.chunk_pos_doc_neg;
    else if (r.doc_label) ++c.chunk_neg_doc_pos;
    else ++c.both_neg;
  }
  return c;
}

inline void write_predictions(std::ostream& os, const std::vector<PredictionRecord>& records) {
  csv::write_row(os, {"review_id", "chunker", "doc", "ensemble1", "ensemble2"});
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  for (const auto& r : records)
    csv::write_row(os, {r.review_id, b(r.chunker_label), b(r.doc_label), b(r.ensemble1), std::string(to_string(r.ensemble2))});
}

inline std::string predictions_csv(const std::vector<PredictionRecord>& records) {
  std::ostringstream os;
  write_predictions(os, records);
  return os.str();
}

// Reads a predictions CSV and checks each row against the voting rules.
inline std::vector<PredictionRecord> parse_predictions(std::string_view text) {
  auto t = csv::Table::parse(text);
  size_t id = t.column("review_id"), ch = t.column("chunker"), dc = t.column("doc");
  std::optional<size_t> e1, e2;
  if (t.has("ensemble1")) e1 = t.column("ensemble1");
  if (t.has("ensemble2")) e2 = t.column("ensemble2");
  std::vector<PredictionRecord> out;
  for (const auto& rec : t.rows()) {
    auto where = "predictions line " + std::to_string(rec.line) + ": ";
    if (rec.fields.size() != t.header().size()) throw ValidationError(where + "wrong number of columns");
    auto c = str::parse_bool(rec.fields[ch]), d = str::parse_bool(rec.fields[dc]);
    if (!c || !d) throw ValidationError(where + "chunker/doc must be true or false");
    auto p = make_prediction(rec.fields[id], *c, *d);
    if (e1) {
      auto v = str::parse_bool(rec.fields[*e1]);
      if (!v || *v != p.ensemble1) throw ValidationError(where + "ensemble1 inconsistent with chunker/doc");
    }
    if (e2) {
      auto v = parse_vote(str::trim(rec.fields[*e2]));
      if (!v || *v != p.ensemble2) throw ValidationError(where + "ensemble2 inconsistent with chunker/doc");
    }
    out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<PredictionRecord> load_predictions(const std::string& path) {
  return parse_predictions(str::read_file(path));
}

// Single-model output: one binary label per review, margin optional.
struct LabelRow {
  std::string review_id;
  bool label = false;
  std::optional<double> margin;
  bool operator==(const LabelRow&) const = default;
};

inline std::string labels_csv(const std::vector<LabelRow>& rows) {
  std::ostringstream os;
  csv::write_row(os, {"review_id", "label", "margin"});
  for (const auto& r : rows)
    csv::write_row(os, {r.review_id, r.label ? "true" : "false", r.margin ? nlohmann::json(*r.margin).dump() : ""});
  return os.str();
}

inline std::vector<LabelRow> parse_labels(std::string_view text) {
  auto t = csv::Table::parse(text);
  size_t id = t.column("review_id"), lab = t.column("label");
  std::optional<size_t> mar;
  if (t.has("margin")) mar = t.column("margin");
  std::vector<LabelRow> out;
  for (const auto& rec : t.rows()) {
    auto where = "labels line " + std::to_string(rec.line) + ": ";
    if (rec.fields.size() != t.header().size()) throw ValidationError(where + "wrong number of columns");
    auto v = str::parse_bool(rec.fields[lab]);
    if (!v) throw ValidationError(where + "label must be true or false");
    LabelRow r{rec.fields[id], *v, std::nullopt};
    if (mar && !str::trim(rec.fields[*mar]).empty()) {
      r.margin = str::parse_double(rec.fields[*mar]);
      if (!r.margin) throw ValidationError(where + "margin is not a number");
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Pairs the two base classifiers' outputs by review_id, in the chunker
// file's order. Both files must cover the same reviews exactly once.
inline std::vector<PredictionRecord> join_predictions(const std::vector<LabelRow>& chunker,
                                                      const std::vector<LabelRow>& doc) {
  std::map<std::string, const LabelRow*> by_id;
  for (const auto& d : doc)
    if (!by_id.emplace(d.review_id, &d).second) throw ValidationError("duplicate review_id " + d.review_id + " in doc labels");
  std::set<std::string> seen;
  std::vector<PredictionRecord> out;
  out.reserve(chunker.size());
  for (const auto& c : chunker) {
    if (!seen.insert(c.review_id).second) throw ValidationError("duplicate review_id " + c.review_id + " in chunker labels");
    auto it = by_id.find(c.review_id);
    if (it == by_id.end()) throw ValidationError("review " + c.review_id + " has a chunker label but no doc label");
    auto p = make_prediction(c.review_id, c.label, it->second->label);
    p.chunker_margin = c.margin;
    p.doc_margin = it->second->margin;
    out.push_back(std::move(p));
  }
  if (out.size() != doc.size()) {
    for (const auto& d : doc)
      if (!seen.count(d.review_id)) throw ValidationError("review " + d.review_id + " has a doc label but no chunker label");
  }
  return out;
}


}  // namespace pepper
