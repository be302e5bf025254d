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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pepper/corpus/split.hpp"
#include "pepper/corpus/synthetic.hpp"
#include "pepper/docclf/ablate.hpp"

using namespace pepper;

namespace {

size_t dense_index(std::string_view name) {
  for (size_t i = 0; i < kDenseFeatures.size(); ++i)
    if (kDenseFeatures[i].name == name) return i;
  ADD_FAILURE() << "no dense feature " << name;
  return 0;
}

std::vector<LabeledReview> synthetic(size_t n, uint64_t seed, double rate = 0.1) {
  SyntheticSpec spec;
  spec.n_reviews = n;
  spec.positive_rate = rate;
  spec.seed = seed;
  auto c = generate_synthetic_corpus(spec);
  for (auto& lr : c) annotate(lr.tokens);
  return c;
}

struct Fixture {
  std::vector<LabeledReview> train, dev;
  DocModel model;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture x;
    auto c = synthetic(1000, 3);
    auto s = split_train_dev(c, 1);
    std::tie(x.train, x.dev) = apply_split(c, s);
    x.model = DocModel::train(x.train);
    return x;
  }();
  return f;
}

}  // namespace

TEST(Tfidf, HandComputedToyCorpus) {
  std::vector<Tokens> docs = {tokenize("hot class"), tokenize("hard class")};
  auto v = TfidfVocabulary::build(docs, 1);
  ASSERT_EQ(v.size(), 5u);  // class, hard, hard class, hot, hot class
  double idf_hot = std::log(3.0 / 2.0) + 1.0, idf_class = std::log(3.0 / 3.0) + 1.0;
  EXPECT_DOUBLE_EQ(v.idf()[*v.index("hot")], idf_hot);
  EXPECT_DOUBLE_EQ(v.idf()[*v.index("class")], idf_class);
  auto x = v.transform(docs[0]);
  double norm = std::sqrt(2 * idf_hot * idf_hot + idf_class * idf_class);
  double hot = 0, cls = 0;
  for (auto [j, val] : x) {
    if (j == *v.index("hot")) hot = val;
    if (j == *v.index("class")) cls = val;
  }
  EXPECT_NEAR(hot, idf_hot / norm, 1e-15);
  EXPECT_NEAR(cls, idf_class / norm, 1e-15);
  EXPECT_GT(hot, cls);
}

TEST(Tfidf, MinDocumentFrequency) {
  std::vector<Tokens> docs = {tokenize("hot class"), tokenize("hard class"), tokenize("hard exam")};
  auto v = TfidfVocabulary::build(docs);
  EXPECT_EQ(v.terms(), (std::vector<std::string>{"class", "hard"}));
  EXPECT_TRUE(v.transform(tokenize("zebra")).empty());
  EXPECT_THROW(TfidfVocabulary::build(docs, 0), ValidationError);
}

TEST(Tfidf, UnitNormWhenAnyTermShared) {
  const auto& m = fixture().model;
  Rng rng(2);
  for (const auto& lr : fixture().dev) {
    auto x = m.vocabulary().transform(lr.tokens);
    if (x.empty()) continue;
    double n = 0;
    for (auto [j, v] : x) n += v * v;
    EXPECT_NEAR(n, 1.0, 1e-12);
  }
}

TEST(DocFeatures, TitleAndHotCounts) {
  auto f = dense_features(analyze("Dr. Smith is hot"));
  EXPECT_EQ(f[dense_index("title_dr")], 1.0);
  EXPECT_EQ(f[dense_index("title_mr")], 0.0);
  EXPECT_EQ(f[dense_index("hot_lexicon_count")], 1.0);
  EXPECT_EQ(f[dense_index("accent_flag")], 0.0);
}

TEST(DocFeatures, HandCountedReview) {
  // Words: He(2) is(2) so(2) HOT(3) I(1) love(4) his(3) accent(6) = 8 words,
  // 23 letters; sentences end at "!!!" and at the end of text.
  auto f = dense_features(analyze("He is so HOT!!! I love his accent :)"));
  EXPECT_DOUBLE_EQ(f[dense_index("avg_word_len")], 23.0 / 8.0);
  EXPECT_DOUBLE_EQ(f[dense_index("avg_sent_len")], 4.0);
  EXPECT_DOUBLE_EQ(f[dense_index("prop_words_gt4")], 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(f[dense_index("first_third_pronoun_ratio")], (1.0 + 1.0) / (2.0 + 1.0));
  EXPECT_EQ(f[dense_index("gender_male")], 1.0);
  EXPECT_EQ(f[dense_index("gender_unknown")], 0.0);
  EXPECT_EQ(f[dense_index("accent_flag")], 1.0);
  EXPECT_EQ(f[dense_index("emoticon_count")], 1.0);
  EXPECT_EQ(f[dense_index("repeated_exclaim_count")], 1.0);
  EXPECT_EQ(f[dense_index("all_caps_word_count")], 1.0);
  EXPECT_EQ(f[dense_index("nonstandard_punct")], 1.0);
  EXPECT_EQ(f[dense_index("nonstandard_caps")], 1.0);
  for (double v : f) EXPECT_TRUE(std::isfinite(v));
}

TEST(DocFeatures, EmptyTextIsFinite) {
  for (double v : dense_features({})) EXPECT_TRUE(std::isfinite(v));
}

TEST(DocFeatures, EmptyMaskZeroesDenseOnly) {
  const auto& vocab = fixture().model.vocabulary();
  auto toks = fixture().train.front().tokens;
  auto full = featurize(toks, vocab, FeatureMask::all());
  auto none = featurize(toks, vocab, FeatureMask::none());
  EXPECT_EQ(full.sparse, none.sparse);
  EXPECT_TRUE(std::all_of(none.dense.begin(), none.dense.end(), [](double v) { return v == 0.0; }));
  EXPECT_EQ(featurize(toks, vocab, FeatureMask::all()), full);
  EXPECT_THROW(FeatureMask::parse("hot,bogus"), ValidationError);
}

TEST(DocScaling, StandardizedOnTrainingSplit) {
  const auto& f = fixture();
  size_t d = kDenseFeatures.size();
  std::vector<double> mean(d, 0.0), sq(d, 0.0);
  for (const auto& lr : f.train) {
    auto x = f.model.scaling().apply(dense_features(lr.tokens));
    for (size_t j = 0; j < d; ++j) mean[j] += x[j];
  }
  for (auto& m : mean) m /= double(f.train.size());
  for (const auto& lr : f.train) {
    auto x = f.model.scaling().apply(dense_features(lr.tokens));
    for (size_t j = 0; j < d; ++j) sq[j] += (x[j] - mean[j]) * (x[j] - mean[j]);
  }
  for (size_t j = 0; j < d; ++j) {
    if (f.model.scaling().constant[j]) continue;
    EXPECT_NEAR(mean[j], 0.0, 1e-9) << kDenseFeatures[j].name;
    EXPECT_NEAR(std::sqrt(sq[j] / double(f.train.size())), 1.0, 1e-9) << kDenseFeatures[j].name;
  }
}

TEST(Svm, SubgradientMatchesFiniteDifferences) {
  Rng rng(8);
  std::vector<SvmExample> ex;
  for (int i = 0; i < 30; ++i) {
    SvmExample e;
    for (uint32_t j = 0; j < 5; ++j) e.x.emplace_back(j, rng.normal());
    e.y = rng.bernoulli(0.3) ? 1 : -1;
    ex.push_back(e);
  }
  auto cw = svm_class_weights(ex);
  const double lambda = 0.05, h = 1e-7;
  int checked = 0;
  while (checked < 100) {
    SvmParams p;
    for (int j = 0; j < 6; ++j) p.w.push_back(rng.normal());
    bool near_kink = false;
    for (const auto& e : ex) near_kink = near_kink || std::abs(1.0 - e.y * svm_margin(p, e.x)) < 1e-4;
    if (near_kink) continue;
    ++checked;
    auto g = svm_subgradient(ex, p, lambda, cw);
    for (size_t j = 0; j < p.w.size(); ++j) {
      auto hi = p, lo = p;
      hi.w[j] += h;
      lo.w[j] -= h;
      double fd = (svm_objective(ex, hi, lambda, cw) - svm_objective(ex, lo, lambda, cw)) / (2 * h);
      EXPECT_NEAR(g[j], fd, 1e-5);
    }
  }
}

TEST(Svm, ClassWeightsInverseFrequency) {
  std::vector<SvmExample> ex(100);
  for (size_t i = 0; i < ex.size(); ++i) ex[i].y = i < 10 ? 1 : -1;
  auto cw = svm_class_weights(ex);
  EXPECT_DOUBLE_EQ(cw.pos / cw.neg, 9.0);
  EXPECT_DOUBLE_EQ(cw.pos, 5.0);
}

TEST(DocTrain, FitsSeparableSynthetic) {
  const auto& f = fixture();
  size_t right = 0;
  for (const auto& lr : f.train) right += f.model.predict(lr.tokens).label == lr.doc_label;
  EXPECT_GE(double(right) / double(f.train.size()), 0.98);
  auto pos = std::find_if(f.train.begin(), f.train.end(), [](const LabeledReview& lr) { return lr.doc_label; });
  ASSERT_NE(pos, f.train.end());
  EXPECT_TRUE(f.model.predict_text(pos->review.text).label);
}

TEST(DocTrain, FinalObjectiveNearBestOfLastEpochs) {
  const auto& m = fixture().model;
  const auto& h = m.objective_history();
  ASSERT_GE(h.size(), 5u);
  double best = *std::min_element(h.end() - 5, h.end());
  std::vector<SvmExample> ex;
  for (const auto& lr : fixture().train) ex.push_back({m.vectorize(lr.tokens), lr.doc_label ? 1 : -1});
  double final_obj = svm_objective(ex, m.params(), m.lambda(), m.class_weights());
  EXPECT_LE(final_obj, best + 1e-3);
}

TEST(DocTrain, SameSeedSameWeights) {
  auto data = synthetic(200, 4, 0.2);
  DocConfig cfg;
  cfg.svm.epochs = 10;
  auto a = DocModel::train(data, cfg), b = DocModel::train(data, cfg);
  EXPECT_EQ(a.params(), b.params());
}

TEST(DocTrain, SingleClassRejected) {
  EXPECT_THROW(DocModel::train(synthetic(30, 1, 0.0)), ValidationError);
}

TEST(DocPredict, ZeroMarginIsNegative) {
  auto m = fixture().model;
  std::fill(m.mutable_params().w.begin(), m.mutable_params().w.end(), 0.0);
  auto p = m.predict(fixture().train.front().tokens);
  EXPECT_EQ(p.margin, 0.0);
  EXPECT_FALSE(p.label);
}

TEST(DocPredict, DenseOnlyModelIgnoresSentenceOrder) {
  DocConfig cfg;
  cfg.use_tfidf = false;
  auto m = DocModel::train(fixture().train, cfg);
  auto a = analyze("He is great. Plus, hello, HOT! The exams are hard.");
  // Same sentences in another order, keeping each token's tag.
  std::vector<std::vector<Token>> sents(1);
  for (const auto& t : a) {
    sents.back().push_back(t);
    if (is_sentence_final(t)) sents.emplace_back();
  }
  if (sents.back().empty()) sents.pop_back();
  std::reverse(sents.begin(), sents.end());
  Tokens b;
  for (const auto& s : sents) b.insert(b.end(), s.begin(), s.end());
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(m.predict(a).margin, m.predict(b).margin);
}

TEST(DocModelIo, JsonRoundTrip) {
  const auto& m = fixture().model;
  auto text = m.to_json().dump();
  auto back = DocModel::from_json(nlohmann::json::parse(text));
  EXPECT_EQ(back.params(), m.params());
  EXPECT_EQ(back.vocabulary(), m.vocabulary());
  EXPECT_EQ(back.to_json().dump(), text);
  for (const auto& lr : fixture().dev) EXPECT_EQ(back.predict(lr.tokens).margin, m.predict(lr.tokens).margin);
  auto bad = m.to_json();
  bad["weights"].erase(0);
  EXPECT_THROW(DocModel::from_json(bad), ValidationError);
}

TEST(Ablation, LexicalFeaturesCarryTheModel) {
  const auto& f = fixture();
  auto rows = ablate(f.train, f.dev, {},
                     {parse_subset("all"), parse_subset("familiarity+readability+formality+pronouns+polarity+subjectivity+style"),
                      parse_subset("none")});
  ASSERT_EQ(rows.size(), 3u);
  ASSERT_TRUE(rows[0].report.f1.defined());
  EXPECT_GE(*rows[0].report.f1.value, *rows[1].report.f1.value);
  EXPECT_EQ(rows[2].subset, "none");
  EXPECT_EQ(*rows[2].report.f1.value, 0.0);
  EXPECT_FALSE(rows[2].report.precision.defined());
}

TEST(Ablation, FormalityAndStyleBarelyMatter) {
  const auto& f = fixture();
  auto rows = ablate(f.train, f.dev, {},
                     {parse_subset("all"),
                      parse_subset("tfidf+familiarity+hot+accent+body+readability+pronouns+polarity+subjectivity")});
  EXPECT_LT(std::abs(*rows[0].report.f1.value - *rows[1].report.f1.value), 0.02);
}

TEST(Ablation, PublishedColumnsAndCsv) {
  auto subsets = table8_subsets();
  ASSERT_EQ(subsets.size(), 9u);
  EXPECT_EQ(subsets[1].name, "none");
  EXPECT_EQ(subsets[7].name, "tfidf+hot");
  const auto& f = fixture();
  auto rows = ablate(f.train, f.dev, {}, {subsets[0], subsets[7]});
  auto csv = ablation_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "subset,precision,recall,f1,accuracy");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_THROW(parse_subset("tfidf+bogus"), ValidationError);
}
