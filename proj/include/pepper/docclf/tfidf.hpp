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
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pepper/textproc/token.hpp"
#include "pepper/util/error.hpp"

namespace pepper {

using SparseVector = std::vector<std::pair<uint32_t, double>>;  // sorted by index

// Lower-cased unigrams and adjacent-pair bigrams ("a b") of a token sequence.
inline std::vector<std::string> ngram_terms(const Tokens& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size() * 2);
  for (size_t i = 0; i < tokens.size(); ++i) {
    out.push_back(tokens[i].lower);
    if (i + 1 < tokens.size()) out.push_back(tokens[i].lower + " " + tokens[i + 1].lower);
  }
  return out;
}

class TfidfVocabulary {
 public:
  TfidfVocabulary() = default;

  // Keeps terms found in at least `min_df` training documents. Term indices
  // follow lexicographic order.
  static TfidfVocabulary build(const std::vector<Tokens>& docs, size_t min_df = 2) {
    if (min_df == 0) throw ValidationError("min_df must be at least 1");
    std::map<std::string, size_t> df;
    for (const auto& d : docs) {
      auto terms = ngram_terms(d);
      for (const auto& t : std::set<std::string>(terms.begin(), terms.end())) ++df[t];
    }
    TfidfVocabulary v;
    v.n_docs_ = docs.size();
    for (const auto& [term, n] : df) {
      if (n < min_df) continue;
      v.add(term, n);
    }
    return v;
  }

  static TfidfVocabulary from_parts(size_t n_docs, const std::vector<std::string>& terms, const std::vector<size_t>& df) {
    if (terms.size() != df.size()) throw ValidationError("vocabulary terms and document frequencies differ in length");
    TfidfVocabulary v;
    v.n_docs_ = n_docs;
    for (size_t i = 0; i < terms.size(); ++i) {
      if (v.index_.count(terms[i])) throw ValidationError("duplicate vocabulary term '" + terms[i] + "'");
      v.add(terms[i], df[i]);
    }
    return v;
  }

  // Smoothed inverse document frequency ln((1 + N) / (1 + df)) + 1.
  static double idf_value(size_t n_docs, size_t df) {
    return std::log((1.0 + double(n_docs)) / (1.0 + double(df))) + 1.0;
  }

  size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  size_t n_docs() const { return n_docs_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<size_t>& document_frequencies() const { return df_; }
  const std::vector<double>& idf() const { return idf_; }

  std::optional<uint32_t> index(const std::string& term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Raw counts times idf, L2-normalised. Out-of-vocabulary terms are ignored.
  SparseVector transform(const Tokens& tokens) const {
    std::map<uint32_t, double> tf;
    for (const auto& t : ngram_terms(tokens)) {
      auto it = index_.find(t);
      if (it != index_.end()) tf[it->second] += 1.0;
    }
    SparseVector out;
    double norm = 0;
    for (auto [j, c] : tf) {
      double v = c * idf_[j];
      out.emplace_back(j, v);
      norm += v * v;
    }
    if (norm > 0) {
      norm = std::sqrt(norm);
      for (auto& [j, v] : out) v /= norm;
    }
    return out;
  }

  bool operator==(const TfidfVocabulary& o) const {
    return n_docs_ == o.n_docs_ && terms_ == o.terms_ && df_ == o.df_;
  }

 private:
  void add(const std::string& term, size_t df) {
    index_.emplace(term, uint32_t(terms_.size()));
    terms_.push_back(term);
    df_.push_back(df);
    idf_.push_back(idf_value(n_docs_, df));
  }

  size_t n_docs_ = 0;
  std::vector<std::string> terms_;
  std::vector<size_t> df_;
  std::vector<double> idf_;
  std::unordered_map<std::string, uint32_t> index_;
};

}  // namespace pepper
