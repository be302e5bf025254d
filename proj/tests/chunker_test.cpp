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

#include <cmath>
#include <string>
#include <vector>

#include "pepper/chunker/chunker.hpp"
#include "pepper/corpus/synthetic.hpp"

using namespace pepper;

namespace {

Tokens tagged(std::string_view text, std::vector<std::string> tags) {
  auto toks = tokenize(text);
  EXPECT_EQ(toks.size(), tags.size());
  for (size_t i = 0; i < toks.size(); ++i) toks[i].pos = tags[i];
  lemmatize_all(toks);
  return toks;
}

std::vector<LabeledReview> synthetic(size_t n, uint64_t seed, double rate = 0.3) {
  SyntheticSpec spec;
  spec.n_reviews = n;
  spec.positive_rate = rate;
  spec.seed = seed;
  auto c = generate_synthetic_corpus(spec);
  for (auto& lr : c) annotate(lr.tokens);
  return c;
}

const ChunkModel& trained_model() {
  static const ChunkModel m = ChunkModel::train(synthetic(200, 1));
  return m;
}

double class_f1(const std::vector<LabeledReview>& data, const ChunkModel& m, Iob cls) {
  double tp = 0, fp = 0, fn = 0;
  for (const auto& lr : data) {
    auto pred = m.decode(lr.tokens);
    for (size_t i = 0; i < pred.size(); ++i) {
      tp += pred[i] == cls && lr.iob[i] == cls;
      fp += pred[i] == cls && lr.iob[i] != cls;
      fn += pred[i] != cls && lr.iob[i] == cls;
    }
  }
  return 2 * tp / (2 * tp + fp + fn);
}

}  // namespace

TEST(ChunkFeatures, ExampleSentence) {
  auto toks = tagged("He is CUT for a Stanford professor", {"PRON", "AUX", "NOUN", "ADP", "DET", "PROPN", "NOUN"});
  std::vector<Iob> gold = {Iob::O, Iob::O, Iob::B, Iob::O, Iob::O, Iob::O, Iob::O};
  auto f = extract_features(toks, gold, default_lexicon(LexiconName::hot));
  ASSERT_EQ(f.size(), 7u);
  const auto& cut = f[2];
  EXPECT_EQ(cut.word_lower, "cut");
  EXPECT_EQ(cut.lemma, "cut");
  EXPECT_EQ(cut.pos, "NOUN");
  EXPECT_FALSE(cut.has_hot);
  EXPECT_EQ(cut.prev_word, "is");
  EXPECT_EQ(cut.prev_pos, "AUX");
  EXPECT_EQ(cut.next_word, "for");
  EXPECT_EQ(cut.next_pos, "ADP");
  EXPECT_EQ(cut.prev_iob, Iob::O);
  EXPECT_TRUE(cut.all_caps);
  EXPECT_FALSE(cut.prev_all_caps);
  EXPECT_FALSE(cut.next_all_caps);

  EXPECT_EQ(f[0].prev_word, kStartSentinel);
  EXPECT_EQ(f[0].prev_pos, kStartSentinel);
  EXPECT_EQ(f[0].prev_iob, Iob::O);
  EXPECT_TRUE(f[1].next_all_caps);
  EXPECT_EQ(f[1].lemma, "is");
  EXPECT_EQ(f[3].prev_iob, Iob::B);
  EXPECT_TRUE(f[3].prev_all_caps);
  EXPECT_EQ(f[5].word_lower, "stanford");
  EXPECT_EQ(f[6].next_word, kEndSentinel);
  EXPECT_EQ(f[6].next_pos, kEndSentinel);
  for (const auto& x : f) EXPECT_FALSE(x.has_hot);
}

TEST(ChunkFeatures, SingleTokenBoundaries) {
  auto f = extract_features(tagged("hot", {"ADJ"}), std::vector<Iob>{}, default_lexicon(LexiconName::hot));
  ASSERT_EQ(f.size(), 1u);
  EXPECT_TRUE(f[0].has_hot);
  EXPECT_EQ(f[0].prev_word, kStartSentinel);
  EXPECT_EQ(f[0].next_word, kEndSentinel);
}

TEST(ChunkFeatures, ElongatedHotMatches) {
  auto f = extract_features(tagged("so HOOOTTT", {"ADV", "ADJ"}), std::vector<Iob>{Iob::O},
                            default_lexicon(LexiconName::hot));
  EXPECT_TRUE(f[1].has_hot);
}

TEST(ChunkFeatures, UntaggedRejected) {
  EXPECT_THROW(extract_features(tokenize("He is hot"), std::vector<Iob>{Iob::O, Iob::O},
                                default_lexicon(LexiconName::hot)),
               ValidationError);
}

TEST(ChunkFeatures, WindowRadiusOne) {
  Rng rng(3);
  const std::vector<std::string> words = {"he", "is", "HOT", "and", "cute", "smart", "!", "class", "GREAT", "she"};
  const std::vector<std::string> tags = {"PRON", "AUX", "ADJ", "CCONJ", "ADJ", "ADJ", "PUNCT", "NOUN", "ADJ", "PRON"};
  const auto& hot = default_lexicon(LexiconName::hot);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 3 + rng.index(8);
    std::string text;
    std::vector<std::string> t;
    for (size_t i = 0; i < n; ++i) {
      size_t k = rng.index(words.size());
      text += (i ? " " : "") + words[k];
      t.push_back(tags[k]);
    }
    auto toks = tagged(text, t);
    std::vector<Iob> labels(n, Iob::O);
    auto before = extract_features(toks, labels, hot);
    size_t pos = rng.index(n - 2);
    size_t k = rng.index(words.size());
    Tokens changed = toks;
    auto repl = tagged(words[k], {tags[k]});
    repl[0].char_start = changed[pos + 2].char_start;
    changed[pos + 2] = repl[0];
    auto after = extract_features(changed, labels, hot);
    EXPECT_EQ(before[pos], after[pos]);
  }
}

TEST(ChunkTrain, GradientMatchesFiniteDifferences) {
  ChunkDataset d;
  Rng rng(5);
  const size_t F = 6;
  for (int i = 0; i < 40; ++i) {
    ChunkExample ex;
    for (uint32_t j = 0; j < F; ++j)
      if (rng.bernoulli(0.4)) ex.features.push_back(j);
    ex.label = uint8_t(rng.index(3));
    d.examples.push_back(ex);
  }
  d.class_weight = inverse_frequency_weights(d.examples);
  ChunkParams p(F);
  for (auto& v : p.w) v = rng.normal();
  for (auto& v : p.bias) v = rng.normal();
  const double lambda = 0.3, h = 1e-6;
  auto g = chunk_gradient(d, p, lambda);
  for (size_t k = 0; k < p.w.size(); ++k) {
    auto hi = p, lo = p;
    hi.w[k] += h;
    lo.w[k] -= h;
    double fd = (chunk_objective(d, hi, lambda) - chunk_objective(d, lo, lambda)) / (2 * h);
    EXPECT_NEAR(g.w[k], fd, 1e-6);
  }
  for (size_t c = 0; c < 3; ++c) {
    auto hi = p, lo = p;
    hi.bias[c] += h;
    lo.bias[c] -= h;
    double fd = (chunk_objective(d, hi, lambda) - chunk_objective(d, lo, lambda)) / (2 * h);
    EXPECT_NEAR(g.bias[c], fd, 1e-6);
  }
}

TEST(ChunkTrain, FitsSyntheticCorpus) {
  auto data = synthetic(200, 1);
  const auto& m = trained_model();
  EXPECT_GE(class_f1(data, m, Iob::B), 0.95);
  EXPECT_GE(class_f1(data, m, Iob::I), 0.95);
  size_t right = 0, total = 0;
  for (const auto& lr : data) {
    auto pred = m.decode(lr.tokens);
    for (size_t i = 0; i < pred.size(); ++i) right += pred[i] == lr.iob[i];
    total += pred.size();
  }
  EXPECT_GE(double(right) / double(total), 0.99);
}

TEST(ChunkTrain, LossNeverIncreasesAcrossEpochs) {
  const auto& h = trained_model().loss_history();
  ASSERT_EQ(h.size(), 21u);
  for (size_t i = 1; i < h.size(); ++i) EXPECT_LE(h[i], h[i - 1]);
  EXPECT_LT(h.back(), h.front());
}

TEST(ChunkTrain, RefusesAllNegativeCorpus) {
  try {
    ChunkModel::train(synthetic(20, 2, 0.0));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "no positive spans");
  }
}

TEST(ChunkTrain, SameSeedSameWeights) {
  auto data = synthetic(60, 4);
  ChunkerConfig cfg;
  cfg.epochs = 5;
  cfg.seed = 9;
  auto a = ChunkModel::train(data, cfg), b = ChunkModel::train(data, cfg);
  EXPECT_EQ(a.params(), b.params());
  EXPECT_EQ(a.vocabulary(), b.vocabulary());
}

TEST(ChunkDecode, EmptyAndDeterministic) {
  const auto& m = trained_model();
  EXPECT_TRUE(m.decode({}).empty());
  auto toks = analyze("He is so hot and his class is hard.");
  EXPECT_EQ(m.decode(toks), m.decode(toks));
}

TEST(ChunkDecode, InjectedTermGetsB) {
  const auto& m = trained_model();
  std::vector<std::string> terms = {"sexy"};
  Rng rng(12);
  phrase_bank::RenderOptions opt;
  opt.hot_terms = &terms;
  auto r = phrase_bank::render("Everyone/PRON loves/VERB [ {HOT_ADJ} ] {NAME} !/PUNCT", rng, opt);
  auto pred = m.decode(analyze(r.text));
  ASSERT_EQ(r.token_spans.size(), 1u);
  EXPECT_EQ(pred[r.token_spans[0].first], Iob::B) << r.text;
}

TEST(ChunkDecode, RepairKeepsOutputWellFormed) {
  auto m = trained_model();
  Rng rng(21);
  auto& p = m.mutable_params();
  for (auto& v : p.w) v = rng.normal() * 3;
  p.bias[2] = 5.0;  // push I everywhere
  for (const auto& lr : synthetic(30, 6)) {
    auto pred = m.decode(lr.tokens);
    EXPECT_TRUE(iob_well_formed(pred));
    if (!pred.empty()) {
      EXPECT_NE(pred[0], Iob::I);
    }
  }
}

TEST(ChunkDecode, TiesPreferOutside) {
  auto m = trained_model();
  auto& p = m.mutable_params();
  std::fill(p.w.begin(), p.w.end(), 0.0);
  p.bias = {0.0, 0.0, 0.0};
  auto pred = m.decode(analyze("She is hot."));
  EXPECT_EQ(pred, std::vector<Iob>(pred.size(), Iob::O));
  p.bias = {0.0, 1.0, 1.0};
  pred = m.decode(analyze("She is hot."));
  EXPECT_EQ(pred, std::vector<Iob>(pred.size(), Iob::B));
}

TEST(ChunkDecode, LexiconHitAddsExactlyItsWeight) {
  const auto& m = trained_model();
  auto idx = m.feature_index("has_hot");
  ASSERT_TRUE(idx.has_value());
  double w = m.params().at(size_t(Iob::B), *idx);
  EXPECT_GT(w, 0.0);
  auto toks = analyze("He is zorpy.");
  std::vector<bool> off(toks.size(), false), on = off;
  on[2] = true;
  auto s0 = m.scores(features_at(toks, 2, Iob::O, off));
  auto s1 = m.scores(features_at(toks, 2, Iob::O, on));
  EXPECT_DOUBLE_EQ(s1[size_t(Iob::B)] - s0[size_t(Iob::B)], w);
}

TEST(ChunkDecode, UnseenValuesUseUnk) {
  const auto& m = trained_model();
  auto toks = analyze("Qwertyuiop asdf.");
  auto flags = hot_flags(toks, m.hot_lexicon());
  auto enc = m.encode(features_at(toks, 0, Iob::O, flags));
  auto unk = m.feature_index(unk_feature("word_lower"));
  ASSERT_TRUE(unk.has_value());
  EXPECT_NE(std::find(enc.begin(), enc.end(), *unk), enc.end());
}

TEST(ChunkModelIo, JsonRoundTripIsExact) {
  const auto& m = trained_model();
  auto text = m.to_json().dump();
  auto back = ChunkModel::from_json(nlohmann::json::parse(text));
  EXPECT_EQ(back.params(), m.params());
  EXPECT_EQ(back.vocabulary(), m.vocabulary());
  EXPECT_EQ(back.to_json().dump(), text);
  auto toks = analyze("Plus, hello, HOOOT! His exams are hard.");
  EXPECT_EQ(back.decode(toks), m.decode(toks));
}

TEST(ChunkModelIo, RejectsBadRecords) {
  auto j = trained_model().to_json();
  j["format_version"] = 99;
  EXPECT_THROW(ChunkModel::from_json(j), ValidationError);
  auto k = trained_model().to_json();
  k["weights"][0].erase(0);
  EXPECT_THROW(ChunkModel::from_json(k), ValidationError);
  EXPECT_THROW(ChunkModel::from_json(nlohmann::json::object()), ValidationError);
}

TEST(DocLabel, AnyChunk) {
  EXPECT_TRUE(doc_label({Iob::O, Iob::O, Iob::B, Iob::I, Iob::O}));
  EXPECT_FALSE(doc_label({Iob::O, Iob::O, Iob::O}));
  EXPECT_FALSE(doc_label({}));
}

TEST(DocLabel, MatchesStoredLabels) {
  for (const auto& lr : synthetic(300, 8)) EXPECT_EQ(doc_label(lr.iob), lr.doc_label);
}
