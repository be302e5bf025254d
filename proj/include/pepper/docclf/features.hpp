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

// Engineered document features, grouped for masking and ablation.

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pepper/docclf/tfidf.hpp"
#include "pepper/textproc/lexicon.hpp"
#include "pepper/textproc/pronouns.hpp"
#include "pepper/textproc/sentiment.hpp"
#include "pepper/textproc/style.hpp"
#include "pepper/util/error.hpp"
#include "pepper/util/strings.hpp"

namespace pepper {

struct DenseFeatureDef {
  std::string_view name;
  std::string_view group;
};

inline constexpr std::array<DenseFeatureDef, 25> kDenseFeatures = {{
    {"first_third_pronoun_ratio", "familiarity"},
    {"hot_lexicon_count", "hot"},
    {"idiom_count", "hot"},
    {"accent_flag", "accent"},
    {"fashion_count", "body"},
    {"hair_count", "body"},
    {"body_count", "body"},
    {"avg_word_len", "readability"},
    {"avg_sent_len", "readability"},
    {"prop_words_gt4", "readability"},
    {"noun_verb_ratio", "formality"},
    {"nonstandard_punct", "formality"},
    {"nonstandard_caps", "formality"},
    {"title_dr", "formality"},
    {"title_professor", "formality"},
    {"title_mrs", "formality"},
    {"title_mr", "formality"},
    {"gender_male", "pronouns"},
    {"gender_female", "pronouns"},
    {"gender_unknown", "pronouns"},
    {"polarity", "polarity"},
    {"subjectivity", "subjectivity"},
    {"emoticon_count", "style"},
    {"repeated_exclaim_count", "style"},
    {"all_caps_word_count", "style"},
}};

inline constexpr std::array<std::string_view, 10> kDenseGroups = {
    "familiarity", "hot", "accent", "body", "readability", "formality", "pronouns", "polarity", "subjectivity", "style"};

// The sparse n-gram block is switched on and off under this name in
// ablation subsets.
inline constexpr std::string_view kTfidfGroup = "tfidf";

inline bool is_dense_group(std::string_view g) {
  return std::find(kDenseGroups.begin(), kDenseGroups.end(), g) != kDenseGroups.end();
}

inline std::vector<std::string> dense_feature_names() {
  std::vector<std::string> out;
  for (const auto& d : kDenseFeatures) out.emplace_back(d.name);
  return out;
}

// Set of enabled dense feature groups.
class FeatureMask {
 public:
  FeatureMask() = default;
  explicit FeatureMask(std::set<std::string> groups) : groups_(std::move(groups)) {
    for (const auto& g : groups_)
      if (!is_dense_group(g)) throw ValidationError("unknown feature group '" + g + "'");
  }

  static FeatureMask all() {
    std::set<std::string> g;
    for (auto n : kDenseGroups) g.emplace(n);
    return FeatureMask(g);
  }
  static FeatureMask none() { return FeatureMask(); }

  // Comma-separated group names; "all" and "none" are accepted.
  static FeatureMask parse(std::string_view spec) {
    auto t = str::trim(spec);
    if (t == "all") return all();
    if (t.empty() || t == "none") return none();
    std::set<std::string> g;
    for (const auto& part : str::split(t, ',')) g.emplace(str::trim(part));
    return FeatureMask(g);
  }

  bool has(std::string_view group) const { return groups_.count(std::string(group)) != 0; }
  const std::set<std::string>& groups() const { return groups_; }
  bool operator==(const FeatureMask&) const = default;

  std::string str() const {
    std::string out;
    for (auto n : kDenseGroups) {
      if (!has(n)) continue;
      if (!out.empty()) out += ',';
      out += n;
    }
    return out.empty() ? "none" : out;
  }

 private:
  std::set<std::string> groups_;
};

struct DocFeatureVector {
  SparseVector sparse;
  std::vector<double> dense;  // kDenseFeatures order, unscaled
  bool operator==(const DocFeatureVector&) const = default;
};

struct FeatureResources {
  const LexiconSet* lexicons = &LexiconSet::defaults();
  const SentimentScorer* sentiment = &LexiconSentiment::defaults();
};

inline bool is_word_token(const Token& t) { return !is_punct_token(t) && !is_emoticon(t.surface); }

// Raw engineered features of a tagged token sequence.
inline std::vector<double> dense_features(const Tokens& tokens, const FeatureResources& res = {}) {
  const auto& lex = *res.lexicons;
  std::vector<double> f(kDenseFeatures.size(), 0.0);
  size_t k = 0;
  auto forms = token_forms(tokens);

  auto prof = pronoun_profile(tokens, lex);
  f[k++] = (double(prof.first_count) + 1.0) / (double(prof.third_m_count + prof.third_f_count) + 1.0);

  f[k++] = double(lex.hot.match_spans(tokens, forms).size());
  f[k++] = double(lex.idioms.match_spans(tokens, forms).size());
  f[k++] = lex.accent.match_spans(tokens, forms).empty() ? 0.0 : 1.0;
  f[k++] = double(lex.fashion.match_spans(tokens, forms).size());
  f[k++] = double(lex.hair.match_spans(tokens, forms).size());
  f[k++] = double(lex.body.match_spans(tokens, forms).size());

  // Sentences end at runs of . ! ? and at the end of the text.
  double words = 0, chars = 0, long_words = 0, sentences = 0, nouns = 0, verbs = 0;
  bool open = false;
  for (const auto& t : tokens) {
    if (is_sentence_final(t)) {
      if (open) ++sentences;
      open = false;
      continue;
    }
    if (t.pos == "NOUN" || t.pos == "PROPN") ++nouns;
    if (t.pos == "VERB") ++verbs;
    if (!is_word_token(t)) continue;
    open = true;
    ++words;
    chars += double(t.surface.size());
    if (t.surface.size() > 4) ++long_words;
  }
  if (open) ++sentences;
  f[k++] = words > 0 ? chars / words : 0.0;
  f[k++] = sentences > 0 ? words / sentences : 0.0;
  f[k++] = words > 0 ? long_words / words : 0.0;

  f[k++] = (nouns + 1.0) / (verbs + 1.0);
  auto style = style_features(tokens);
  f[k++] = style.nonstandard_punct ? 1.0 : 0.0;
  f[k++] = style.nonstandard_caps ? 1.0 : 0.0;
  for (std::string_view title : {"dr", "professor", "mrs", "mr"}) {
    double n = 0;
    for (const auto& t : tokens) n += t.lower == title;
    f[k++] = n;
  }

  f[k++] = prof.inferred_gender == Gender::male;
  f[k++] = prof.inferred_gender == Gender::female;
  f[k++] = prof.inferred_gender == Gender::unknown;

  auto s = res.sentiment->score(tokens);
  f[k++] = s.polarity;
  f[k++] = s.subjectivity;

  f[k++] = style.emoticon_count;
  f[k++] = style.repeated_exclaim_count;
  f[k++] = style.all_caps_word_count;
  return f;
}

inline void apply_mask(std::vector<double>& dense, const FeatureMask& mask) {
  for (size_t i = 0; i < kDenseFeatures.size(); ++i)
    if (!mask.has(kDenseFeatures[i].group)) dense[i] = 0.0;
}

// Sparse tf-idf block plus the dense block with masked groups zeroed.
inline DocFeatureVector featurize(const Tokens& tokens, const TfidfVocabulary& vocab, const FeatureMask& mask,
                                  const FeatureResources& res = {}) {
  DocFeatureVector v;
  v.sparse = vocab.transform(tokens);
  v.dense = dense_features(tokens, res);
  apply_mask(v.dense, mask);
  return v;
}

}  // namespace pepper
