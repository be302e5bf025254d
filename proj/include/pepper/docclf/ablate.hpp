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

// Retrains the document classifier on feature-group subsets and scores each
// on the development split.

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pepper/docclf/model.hpp"
#include "pepper/eval/metrics.hpp"

namespace pepper {

struct AblationSubset {
  std::string name;
  std::set<std::string> groups;  // dense groups plus optionally "tfidf"
};

struct AblationRow {
  std::string subset;
  MetricReport report;
};

inline AblationSubset make_subset(std::set<std::string> groups) {
  std::string name;
  if (groups.count(std::string(kTfidfGroup))) name = kTfidfGroup;
  for (auto g : kDenseGroups) {
    if (!groups.count(std::string(g))) continue;
    if (!name.empty()) name += '+';
    name += g;
  }
  return {name.empty() ? "none" : name, std::move(groups)};
}

// Parses "tfidf+hot+accent"; "all" and "none" are shorthands.
inline AblationSubset parse_subset(std::string_view spec) {
  auto t = str::trim(spec);
  std::set<std::string> g;
  if (t == "all") {
    g.emplace(kTfidfGroup);
    for (auto n : kDenseGroups) g.emplace(n);
  } else if (t != "none" && !t.empty()) {
    for (const auto& part : str::split(t, '+')) {
      auto p = std::string(str::trim(part));
      if (p != kTfidfGroup && !is_dense_group(p)) throw ValidationError("unknown feature group '" + p + "'");
      g.insert(p);
    }
  }
  return make_subset(std::move(g));
}

// The nine columns of the published ablation table: everything, nothing,
// then progressively fewer groups down to the hot and accent lexicons.
inline std::vector<AblationSubset> table8_subsets() {
  auto with = [](std::initializer_list<const char*> names) {
    std::set<std::string> g{std::string(kTfidfGroup)};
    for (auto n : names) g.emplace(n);
    return make_subset(g);
  };
  return {
      parse_subset("all"),
      make_subset({}),
      with({"familiarity", "hot", "accent", "body", "polarity", "subjectivity", "formality", "pronouns", "style"}),
      with({"familiarity", "hot", "accent", "body", "polarity", "subjectivity", "pronouns", "style"}),
      with({"hot", "accent", "body", "polarity", "subjectivity", "style"}),
      with({"hot", "accent", "body", "style"}),
      with({"hot", "accent", "body"}),
      with({"hot"}),
      with({"hot", "accent"}),
  };
}

inline std::vector<AblationRow> ablate(const std::vector<LabeledReview>& train, const std::vector<LabeledReview>& dev,
                                       const DocConfig& base, const std::vector<AblationSubset>& subsets,
                                       const PosTagger* tagger = nullptr, const FeatureResources& res = {}) {
  if (dev.empty()) throw ValidationError("ablation needs a non-empty development split");
  std::vector<Tokens> train_docs, dev_docs;
  std::vector<int> y;
  std::vector<bool> gold;
  for (const auto& lr : train) {
    train_docs.push_back(annotated_tokens(lr, tagger));
    y.push_back(lr.doc_label ? 1 : -1);
  }
  for (const auto& lr : dev) {
    dev_docs.push_back(annotated_tokens(lr, tagger));
    gold.push_back(lr.doc_label);
  }
  std::vector<AblationRow> rows;
  for (const auto& s : subsets) {
    DocConfig cfg = base;
    cfg.use_tfidf = s.groups.count(std::string(kTfidfGroup)) != 0;
    std::set<std::string> dense;
    for (const auto& g : s.groups)
      if (g != kTfidfGroup) dense.insert(g);
    cfg.mask = FeatureMask(dense);
    auto m = DocModel::train_tokens(train_docs, y, cfg, res);
    std::vector<bool> pred;
    for (const auto& d : dev_docs) pred.push_back(m.predict(d).label);
    rows.push_back({s.name, score(pred, gold)});
  }
  return rows;
}

// CSV "subset,precision,recall,f1,accuracy"; undefined cells are empty.
inline std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  csv::write_row(os, {"subset", "precision", "recall", "f1", "accuracy"});
  auto cell = [](const Metric& m) {
    if (!m.value) return std::string();
    std::ostringstream s;
    s.precision(17);
    s << *m.value;
    return s.str();
  };
  for (const auto& r : rows)
    csv::write_row(os, {r.subset, cell(r.report.precision), cell(r.report.recall), cell(r.report.f1),
                        cell(r.report.accuracy)});
  return os.str();
}

}  // namespace pepper
