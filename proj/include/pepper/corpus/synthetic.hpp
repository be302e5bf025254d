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

// Template-generated review corpora with known gold spans, standing in for
// real annotated data in tests and demos.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "pepper/corpus/review.hpp"
#include "pepper/textproc/lexicon.hpp"
#include "pepper/textproc/phrase_bank.hpp"
#include "pepper/util/error.hpp"
#include "pepper/util/rng.hpp"

namespace pepper {

inline std::vector<std::string> default_hot_terms() {
  auto lex = default_lexicon(LexiconName::hot);
  return {lex.singles().begin(), lex.singles().end()};
}

struct SyntheticSpec {
  size_t n_reviews = 1000;
  double positive_rate = 0.1;
  uint64_t seed = 0;
  std::vector<std::string> hot_terms = default_hot_terms();
  double elongation_rate = 0.1;
  double female_share = 0.4;
  size_t reviews_per_professor = 10;
  Date first_date{2010, 1, 1};
  Date last_date{2019, 12, 31};
  // Review volume density grows as t^volume_growth over the date range.
  double volume_growth = 0.0;
  double missing_rating_rate = 0.02;
  size_t min_sentences = 2;
  size_t max_sentences = 4;
  bool gender_metadata = false;
  Date cutoff = kPepperCutoff;
};

namespace detail {

inline constexpr std::string_view kSchools[] = {"North State University", "Lakeside College", "Riverside Tech",
                                                "Hillcrest University", "Bayview Community College"};


}  // namespace detail

inline std::vector<LabeledReview> generate_synthetic_corpus(const SyntheticSpec& spec) {
  if (!(spec.positive_rate >= 0.0 && spec.positive_rate <= 1.0))
    throw ValidationError("positive_rate must be in [0, 1]");
  std::vector<std::string> terms;
  for (const auto& t : spec.hot_terms) {
    auto l = str::to_lower(str::trim(t));
    if (!l.empty() && l.find(' ') == std::string::npos && tokenize(l).size() == 1) terms.push_back(l);
  }
  if (terms.empty()) throw ValidationError("empty lexicon");
  if (spec.min_sentences == 0 || spec.max_sentences < spec.min_sentences)
    throw ValidationError("sentence count range is empty");
  if (spec.reviews_per_professor == 0) throw ValidationError("reviews_per_professor must be positive");
  if (spec.last_date < spec.first_date) throw ValidationError("last_date precedes first_date");

  Rng rng(spec.seed);
  size_t n = spec.n_reviews;
  size_t n_pos = size_t(std::floor(double(n) * spec.positive_rate + 0.5));
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<bool> positive(n, false);
  for (size_t i = 0; i < n_pos; ++i) positive[order[i]] = true;

  struct Prof {
    Gender gender;
    std::string school, subject;
    double quality, difficulty;
  };
  size_t n_prof = std::max<size_t>(1, (n + spec.reviews_per_professor - 1) / spec.reviews_per_professor);
  const auto& subjects = phrase_bank::fillers().at("SUBJECT");
  std::vector<Prof> profs;
  for (size_t p = 0; p < n_prof; ++p) {
    Prof pr;
    pr.gender = rng.bernoulli(spec.female_share) ? Gender::female : Gender::male;
    pr.school = std::string(detail::kSchools[rng.index(std::size(detail::kSchools))]);
    pr.subject = phrase_bank::split_unit(subjects[rng.index(subjects.size())]).first;
    pr.quality = std::round((1.0 + 4.0 * rng.uniform()) * 10.0) / 10.0;
    pr.difficulty = std::round((1.0 + 4.0 * rng.uniform()) * 10.0) / 10.0;
    profs.push_back(pr);
  }

  long d0 = spec.first_date.days_since_epoch(), d1 = spec.last_date.days_since_epoch();
  phrase_bank::RenderOptions opt;
  opt.elongation_rate = spec.elongation_rate;
  opt.hot_terms = &terms;

  std::vector<LabeledReview> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    size_t pi = i % n_prof;
    const auto& prof = profs[pi];
    opt.gender = prof.gender;

    size_t k = spec.min_sentences + rng.index(spec.max_sentences - spec.min_sentences + 1);
    std::vector<size_t> picks(std::size(phrase_bank::kNeutral));
    for (size_t j = 0; j < picks.size(); ++j) picks[j] = j;
    rng.shuffle(picks);
    std::vector<phrase_bank::Rendered> sentences;
    for (size_t j = 0; j < std::min(k, picks.size()); ++j)
      sentences.push_back(phrase_bank::render(phrase_bank::kNeutral[picks[j]], rng, opt));
    if (positive[i]) {
      auto pat = phrase_bank::kPositive[rng.index(std::size(phrase_bank::kPositive))];
      size_t at = rng.index(sentences.size() + 1);
      sentences.insert(sentences.begin() + long(at), phrase_bank::render(pat, rng, opt));
    }

    LabeledReview lr;
    Review& r = lr.review;
    std::vector<CharSpan> spans;
    std::vector<std::pair<size_t, size_t>> token_spans;
    size_t words = 0;
    for (const auto& s : sentences) {
      if (!r.text.empty()) r.text += ' ';
      size_t off = r.text.size();
      r.text += s.text;
      for (auto [b, e] : s.char_spans) spans.push_back({off + b, off + e});
      for (auto [b, e] : s.token_spans) token_spans.emplace_back(words + b, words + e);
      words += s.words.size();
    }

    char id[32];
    std::snprintf(id, sizeof id, "r%06zu", i + 1);
    r.review_id = id;
    std::snprintf(id, sizeof id, "p%04zu", pi + 1);
    r.professor_id = id;
    r.school = prof.school;
    r.subject = prof.subject;
    double u = rng.uniform();
    if (spec.volume_growth > 0.0) u = std::pow(u, 1.0 / (1.0 + spec.volume_growth));
    r.date = Date::from_days(d0 + std::min(long(u * double(d1 - d0 + 1)), d1 - d0));
    r.pepper_present = pepper_present(r.date, spec.cutoff);
    if (!rng.bernoulli(spec.missing_rating_rate)) {
      r.quality = prof.quality;
      r.difficulty = prof.difficulty;
    }
    if (spec.gender_metadata) r.gender = prof.gender;
    r.spans = spans;
    r.doc_label = positive[i];

    lr.tokens = tokenize(r.text);
    lr.iob.assign(lr.tokens.size(), Iob::O);
    for (auto [b, e] : token_spans) {
      lr.iob[b] = Iob::B;
      for (size_t t = b + 1; t < e; ++t) lr.iob[t] = Iob::I;
    }
    lr.doc_label = positive[i];
    out.push_back(std::move(lr));
  }
  return out;
}

inline std::vector<Review> reviews_of(const std::vector<LabeledReview>& labeled) {
  std::vector<Review> out;
  out.reserve(labeled.size());
  for (const auto& lr : labeled) out.push_back(lr.review);
  return out;
}

}  // namespace pepper
