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

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "pepper/corpus/io.hpp"
#include "pepper/corpus/sample.hpp"
#include "pepper/corpus/split.hpp"
#include "pepper/corpus/synthetic.hpp"

using namespace pepper;

namespace {

std::string line(std::string_view id, std::string_view date, std::string_view extra = "") {
  std::string s = R"({"review_id":")" + std::string(id) + R"(","professor_id":"p1","school":"S","subject":"math",)" +
                  R"("text":"He is great.","date":")" + std::string(date) + "\"";
  s += extra;
  s += "}\n";
  return s;
}

std::vector<LabeledReview> toy_labeled(size_t n, size_t n_pos) {
  std::vector<LabeledReview> out;
  for (size_t i = 0; i < n; ++i) {
    LabeledReview lr;
    lr.review.review_id = "r" + std::to_string(i);
    lr.doc_label = i < n_pos;
    out.push_back(lr);
  }
  return out;
}

std::vector<PredictionRecord> pools(size_t pos, size_t neg, size_t dis) {
  std::vector<PredictionRecord> out;
  size_t id = 0;
  for (size_t i = 0; i < pos; ++i) out.push_back(make_prediction("a" + std::to_string(id++), true, true));
  for (size_t i = 0; i < neg; ++i) out.push_back(make_prediction("b" + std::to_string(id++), false, false));
  for (size_t i = 0; i < dis; ++i) out.push_back(make_prediction("c" + std::to_string(id++), i % 2 == 0, i % 2 == 1));
  return out;
}

}  // namespace

TEST(Load, SingleRecord) {
  auto c = parse_corpus(line("r1", "2015-03-01"), CorpusFormat::jsonl);
  ASSERT_EQ(c.reviews.size(), 1u);
  EXPECT_EQ(c.reviews[0].text, "He is great.");
  EXPECT_TRUE(c.reviews[0].pepper_present);
  EXPECT_FALSE(c.reviews[0].quality.has_value());
  EXPECT_TRUE(c.labeled.empty());
}

TEST(Load, PepperCutoff) {
  auto c = parse_corpus(line("a", "2018-06-27") + line("b", "2018-06-28"), CorpusFormat::jsonl);
  ASSERT_EQ(c.reviews.size(), 2u);
  EXPECT_TRUE(c.reviews[0].pepper_present);
  EXPECT_FALSE(c.reviews[1].pepper_present);

  LoadOptions opt;
  opt.cutoff = Date{2018, 6, 27};
  auto o = parse_corpus(line("a", "2018-06-27"), CorpusFormat::jsonl, opt);
  EXPECT_FALSE(o.reviews[0].pepper_present);
}

TEST(Load, PepperPresentMonotone) {
  long cut = kPepperCutoff.days_since_epoch();
  for (long d = cut - 400; d < cut + 400; ++d) EXPECT_EQ(pepper_present(Date::from_days(d)), d < cut);
}

TEST(Load, IobLengthMismatchRejectsRecord) {
  // "He is great." has 4 tokens; 5 tags and 3 tags are both wrong.
  auto text = line("bad", "2015-01-01", R"(,"iob":["O","O","B","O","O"])") + line("ok", "2015-01-01") +
              line("good", "2015-01-01", R"(,"iob":["O","O","B","O"])");
  auto c = parse_corpus(text, CorpusFormat::jsonl);
  ASSERT_EQ(c.rejected.size(), 1u);
  EXPECT_EQ(c.rejected[0].line, 1u);
  EXPECT_EQ(c.rejected[0].message, "iob length mismatch");
  ASSERT_EQ(c.reviews.size(), 2u);
  ASSERT_EQ(c.labeled.size(), 1u);
  EXPECT_EQ(c.labeled[0].iob, (std::vector<Iob>{Iob::O, Iob::O, Iob::B, Iob::O}));
  EXPECT_TRUE(c.labeled[0].doc_label);
  EXPECT_EQ(*c.reviews[1].spans, (std::vector<CharSpan>{{6, 11}}));
}

TEST(Load, IllFormedIobRejected) {
  auto c = parse_corpus(line("x", "2015-01-01", R"(,"iob":["I","O","O","O"])"), CorpusFormat::jsonl);
  EXPECT_TRUE(c.reviews.empty());
  ASSERT_EQ(c.rejected.size(), 1u);
}

TEST(Load, DocLabelMustAgreeWithSpans) {
  auto c = parse_corpus(line("x", "2015-01-01", R"(,"spans":[],"doc_label":true)"), CorpusFormat::jsonl);
  EXPECT_TRUE(c.reviews.empty());
  ASSERT_EQ(c.rejected.size(), 1u);
  auto ok = parse_corpus(line("x", "2015-01-01", R"(,"spans":[],"doc_label":false)"), CorpusFormat::jsonl);
  ASSERT_EQ(ok.labeled.size(), 1u);
  EXPECT_FALSE(ok.labeled[0].doc_label);
}

TEST(Load, MalformedLineStrictVersusLenient) {
  auto text = line("a", "2015-01-01") + "{not json\n" + line("b", "2015-13-01") + line("c", "2015-01-01");
  try {
    parse_corpus(text, CorpusFormat::jsonl);
    FAIL() << "expected CorpusError";
  } catch (const CorpusError& e) {
    ASSERT_EQ(e.issues().size(), 2u);
    EXPECT_EQ(e.issues()[0].line, 2u);
    EXPECT_EQ(e.issues()[1].line, 3u);
  }
  LoadOptions lenient;
  lenient.lenient = true;
  auto c = parse_corpus(text, CorpusFormat::jsonl, lenient);
  EXPECT_EQ(c.reviews.size(), 2u);
  EXPECT_EQ(c.skipped.size(), 2u);
}

TEST(Load, InvariantViolationsAreMalformed) {
  LoadOptions lenient;
  lenient.lenient = true;
  auto c = parse_corpus(line("a", "2015-01-01", R"(,"quality":5.5)") + line("b", "2015-01-01", R"(,"difficulty":0)") +
                            R"({"review_id":"c","professor_id":"p","text":"   ","date":"2015-01-01"})" "\n",
                        CorpusFormat::jsonl, lenient);
  EXPECT_TRUE(c.reviews.empty());
  EXPECT_EQ(c.skipped.size(), 3u);
}

TEST(Load, DuplicateIdIsFatalEvenWhenLenient) {
  LoadOptions lenient;
  lenient.lenient = true;
  EXPECT_THROW(parse_corpus(line("a", "2015-01-01") + line("a", "2016-01-01"), CorpusFormat::jsonl, lenient),
               CorpusError);
}

TEST(Load, CsvByHeader) {
  std::string csv =
      "text,review_id,date,professor_id,quality,spans,doc_label\n"
      "\"She is hot, and \"\"nice\"\"\nreally\",r1,2019-01-01,p9,4.5,7-10,true\n"
      "He is fine.,r2,2017-01-01,p9,,[],false\n";
  auto c = parse_corpus(csv, CorpusFormat::csv);
  ASSERT_EQ(c.reviews.size(), 2u);
  EXPECT_EQ(c.reviews[0].text, "She is hot, and \"nice\"\nreally");
  EXPECT_EQ(*c.reviews[0].quality, 4.5);
  EXPECT_FALSE(c.reviews[1].quality);
  EXPECT_FALSE(c.reviews[0].pepper_present);
  EXPECT_TRUE(c.reviews[1].pepper_present);
  ASSERT_EQ(c.labeled.size(), 2u);
  EXPECT_EQ(c.labeled[0].iob[2], Iob::B);
  EXPECT_FALSE(c.labeled[1].doc_label);
}

TEST(Load, RoundTripJsonlAndCsv) {
  SyntheticSpec spec;
  spec.n_reviews = 200;
  spec.seed = 5;
  spec.missing_rating_rate = 0.2;
  auto reviews = reviews_of(generate_synthetic_corpus(spec));
  reviews[0].text = "Commas, \"quotes\"\nand newlines";
  reviews[0].spans.reset();
  reviews[0].doc_label.reset();
  reviews[1].gender = Gender::female;
  reviews[2].quality = 3.3333333333333335;
  for (auto fmt : {CorpusFormat::jsonl, CorpusFormat::csv}) {
    auto back = parse_corpus(write_corpus_string(reviews, fmt), fmt);
    ASSERT_EQ(back.reviews.size(), reviews.size());
    EXPECT_TRUE(back.rejected.empty());
    for (size_t i = 0; i < reviews.size(); ++i) EXPECT_EQ(back.reviews[i], reviews[i]) << "record " << i;
  }
}

TEST(Load, TokenAndTypeCounts) {
  auto c = parse_corpus(line("a", "2015-01-01") + line("b", "2015-01-01"), CorpusFormat::jsonl);
  auto s = corpus_stats(c);
  EXPECT_EQ(s.token_count, 6u);
  EXPECT_EQ(s.type_count, 3u);
}

TEST(Professors, GenderFromPronounsOrMetadata) {
  auto c = parse_corpus(
      R"({"review_id":"1","professor_id":"p1","text":"She is great and her class is fun.","date":"2015-01-01"})" "\n"
      R"({"review_id":"2","professor_id":"p1","text":"Take him.","date":"2015-01-01"})" "\n"
      R"({"review_id":"3","professor_id":"p2","text":"He is great.","date":"2015-01-01","gender":"female"})" "\n"
      R"({"review_id":"4","professor_id":"p3","text":"Great class.","date":"2015-01-01"})" "\n",
      CorpusFormat::jsonl);
  auto ps = professors(c.reviews);
  ASSERT_EQ(ps.size(), 3u);
  EXPECT_EQ(ps[0].gender, Gender::female);
  EXPECT_EQ(ps[0].review_ids, (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(ps[1].gender, Gender::female);
  EXPECT_EQ(ps[2].gender, Gender::unknown);
}

TEST(Split, TenReviewsDeterministic) {
  auto l = toy_labeled(10, 3);
  auto a = split_train_dev(l, 7), b = split_train_dev(l, 7);
  EXPECT_EQ(a.train.size(), 8u);
  EXPECT_EQ(a.dev.size(), 2u);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.dev, b.dev);
}

TEST(Split, LabeledSetSize) {
  auto s = split_train_dev(toy_labeled(4050, 600), 1);
  EXPECT_EQ(s.train.size(), 3240u);
  EXPECT_EQ(s.dev.size(), 810u);
}

TEST(Split, TwoPositivesAcrossSeeds) {
  auto l = toy_labeled(10, 2);
  for (uint64_t seed = 0; seed < 100; ++seed) {
    auto s = split_train_dev(l, seed);
    int train_pos = int(s.train.count("r0") + s.train.count("r1"));
    int dev_pos = 2 - train_pos;
    EXPECT_LE(std::abs(train_pos - 1.6), 1.0) << seed;
    EXPECT_LE(std::abs(dev_pos - 0.4), 1.0) << seed;
    EXPECT_EQ(s.train.size(), 8u);
  }
}

TEST(Split, PartitionProperty) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 5 + rng.index(300);
    size_t p = rng.index(n + 1);
    auto l = toy_labeled(n, p);
    auto s = split_train_dev(l, rng.next());
    std::set<std::string> all;
    for (const auto& id : s.train) all.insert(id);
    for (const auto& id : s.dev) EXPECT_TRUE(all.insert(id).second);
    EXPECT_EQ(all.size(), n);
    EXPECT_LE(std::abs(double(s.train.size()) - 0.8 * double(n)), 1.0);
    size_t train_pos = 0;
    for (size_t i = 0; i < p; ++i) train_pos += s.train.count("r" + std::to_string(i));
    EXPECT_LE(std::abs(double(train_pos) - 0.8 * double(p)), 1.0);
  }
}

TEST(Split, TooFew) { EXPECT_THROW(split_train_dev(toy_labeled(4, 1), 0), ValidationError); }

TEST(Sample, DefaultStrata) {
  auto preds = pools(8573, 336242, 14153);
  TestSetRequest req;
  req.seed = 3;
  auto ids = sample_test_set(preds, req);
  ASSERT_EQ(ids.size(), 600u);
  std::map<char, int> by;
  for (const auto& id : ids) ++by[id[0]];
  EXPECT_EQ(by['a'], 150);
  EXPECT_EQ(by['b'], 150);
  EXPECT_EQ(by['c'], 300);
  EXPECT_EQ(std::set<std::string>(ids.begin(), ids.end()).size(), 600u);
  EXPECT_EQ(ids, sample_test_set(preds, req));
  EXPECT_LT(std::count_if(ids.begin(), ids.begin() + 150, [](const std::string& id) { return id[0] == 'a'; }), 150);
}

TEST(Sample, EmptyRequest) {
  TestSetRequest req{0, 0, 0, 0.0, 1};
  EXPECT_TRUE(sample_test_set(pools(3, 3, 3), req).empty());
  EXPECT_TRUE(sample_test_set({}, req).empty());
}

TEST(Sample, PoolTooSmall) {
  TestSetRequest req{1, 1, 5, 0.0, 1};
  EXPECT_THROW(sample_test_set(pools(3, 3, 4), req), ValidationError);
}

TEST(Sample, UniformWithoutBias) {
  auto preds = pools(0, 0, 10);
  std::map<std::string, Date> dates;
  for (size_t i = 0; i < preds.size(); ++i) dates[preds[i].review_id] = Date::from_days(15000 + long(i) * 100);
  std::map<std::string, int> counts;
  const int draws = 10000;
  for (int s = 0; s < draws; ++s) {
    TestSetRequest req{0, 0, 1, 0.0, uint64_t(s)};
    ++counts[sample_test_set(preds, req, dates).at(0)];
  }
  double chi2 = 0, e = draws / 10.0;
  for (const auto& p : preds) chi2 += (counts[p.review_id] - e) * (counts[p.review_id] - e) / e;
  boost::math::chi_squared dist(9);
  EXPECT_LT(chi2, boost::math::quantile(dist, 0.99));
}

TEST(Sample, RecencyBiasMatchesWeights) {
  // Two candidates with normalized dates 0 and 1: the later one has weight
  // 1 + b, so a single draw picks it with probability (1 + b) / (2 + b).
  auto preds = pools(0, 0, 2);
  std::map<std::string, Date> dates{{preds[0].review_id, Date{2012, 1, 1}}, {preds[1].review_id, Date{2019, 1, 1}}};
  for (double b : {1.0, 4.0}) {
    int later = 0;
    const int draws = 20000;
    for (int s = 0; s < draws; ++s) {
      TestSetRequest req{0, 0, 1, b, uint64_t(s)};
      later += sample_test_set(preds, req, dates).at(0) == preds[1].review_id;
    }
    double p = (1 + b) / (2 + b);
    double se = std::sqrt(p * (1 - p) / draws);
    EXPECT_NEAR(double(later) / draws, p, 4 * se) << "bias " << b;
  }
}

TEST(Sample, RejectsNegativeBias) {
  TestSetRequest req{0, 0, 1, -0.5, 0};
  EXPECT_THROW(sample_test_set(pools(0, 0, 2), req), ValidationError);
}

TEST(Synthetic, ExactPositiveCount) {
  SyntheticSpec spec;
  spec.n_reviews = 100;
  spec.positive_rate = 0.1;
  spec.seed = 11;
  auto c = generate_synthetic_corpus(spec);
  ASSERT_EQ(c.size(), 100u);
  int pos = 0;
  for (const auto& lr : c) {
    EXPECT_EQ(lr.iob.size(), lr.tokens.size());
    EXPECT_TRUE(iob_well_formed(lr.iob));
    EXPECT_EQ(lr.doc_label, any_chunk(lr.iob));
    if (lr.doc_label) {
      ++pos;
      EXPECT_NE(std::find(lr.iob.begin(), lr.iob.end(), Iob::B), lr.iob.end());
    }
    // Gold spans projected through the tokenizer give back the template tags.
    EXPECT_EQ(make_labeled(lr.review).iob, lr.iob) << lr.review.text;
    EXPECT_GE(lr.review.date, (Date{2010, 1, 1}));
    EXPECT_LE(lr.review.date, (Date{2019, 12, 31}));
    EXPECT_EQ(lr.review.pepper_present, pepper_present(lr.review.date));
  }
  EXPECT_EQ(pos, 10);
}

TEST(Synthetic, ZeroRate) {
  SyntheticSpec spec;
  spec.n_reviews = 50;
  spec.positive_rate = 0.0;
  for (const auto& lr : generate_synthetic_corpus(spec)) {
    EXPECT_FALSE(lr.doc_label);
    EXPECT_TRUE(std::all_of(lr.iob.begin(), lr.iob.end(), [](Iob t) { return t == Iob::O; }));
  }
}

TEST(Synthetic, ExclamationTemplateMarksLexiconToken) {
  SyntheticSpec spec;
  spec.n_reviews = 2000;
  spec.positive_rate = 0.5;
  spec.elongation_rate = 0.5;
  spec.seed = 2;
  const auto& hot = default_lexicon(LexiconName::hot);
  int seen = 0;
  for (const auto& lr : generate_synthetic_corpus(spec)) {
    const auto& text = lr.review.text;
    auto at = text.find("Plus, hello, ");
    if (at == std::string::npos) continue;
    ++seen;
    size_t b = at + 13, e = text.find('!', b);
    ASSERT_NE(e, std::string::npos);
    ASSERT_EQ(lr.review.spans->size(), 1u);
    EXPECT_EQ(lr.review.spans->front(), (CharSpan{b, e}));
    auto word = text.substr(b, e - b);
    EXPECT_TRUE(is_all_caps(word) || word.size() < 2) << word;
    auto toks = tokenize(word);
    EXPECT_EQ(lexicon_match(toks, hot).size(), 1u) << word;
  }
  EXPECT_GT(seen, 10);
}

TEST(Synthetic, NeutralTemplatesNeverHitLexicons) {
  Rng rng(4);
  auto lex = LexiconSet::defaults();
  for (auto pat : phrase_bank::kNeutral) {
    for (Gender g : {Gender::male, Gender::female}) {
      for (int k = 0; k < 20; ++k) {
        auto r = phrase_bank::render(pat, rng, {g, 0.0});
        auto toks = tokenize(r.text);
        EXPECT_TRUE(lexicon_match(toks, lex.hot).empty()) << r.text;
        EXPECT_TRUE(lexicon_match(toks, lex.idioms).empty()) << r.text;
      }
    }
  }
}

TEST(Synthetic, DeterministicAndSeedSensitive) {
  SyntheticSpec spec;
  spec.n_reviews = 30;
  spec.seed = 8;
  auto a = reviews_of(generate_synthetic_corpus(spec));
  auto b = reviews_of(generate_synthetic_corpus(spec));
  EXPECT_EQ(a, b);
  spec.seed = 9;
  EXPECT_NE(a, reviews_of(generate_synthetic_corpus(spec)));
}

TEST(Synthetic, CustomAndEmptyLexicon) {
  SyntheticSpec spec;
  spec.n_reviews = 40;
  spec.positive_rate = 1.0;
  spec.elongation_rate = 0.0;
  spec.hot_terms = {"zorp"};
  int zorp = 0;
  for (const auto& lr : generate_synthetic_corpus(spec)) zorp += lr.review.text.find("zorp") != std::string::npos ||
                                                              lr.review.text.find("ZORP") != std::string::npos;
  EXPECT_GT(zorp, 0);
  spec.hot_terms.clear();
  EXPECT_THROW(generate_synthetic_corpus(spec), ValidationError);
  spec.hot_terms = {"hot"};
  spec.positive_rate = 1.5;
  EXPECT_THROW(generate_synthetic_corpus(spec), ValidationError);
}
