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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pepper/textproc/pronouns.hpp"
#include "pepper/textproc/tokenize.hpp"
#include "pepper/util/date.hpp"
#include "pepper/util/error.hpp"

namespace pepper {

// The review site removed its "hot" chili-pepper rating on this date.
inline constexpr Date kPepperCutoff{2018, 6, 28};

inline bool pepper_present(const Date& d, const Date& cutoff = kPepperCutoff) { return d < cutoff; }

enum class Iob : uint8_t { O = 0, B = 1, I = 2 };

inline std::string_view to_string(Iob t) {
  switch (t) {
    case Iob::O: return "O";
    case Iob::B: return "B";
    case Iob::I: return "I";
  }
  return "O";
}

inline std::optional<Iob> parse_iob(std::string_view s) {
  if (s == "O") return Iob::O;
  if (s == "B") return Iob::B;
  if (s == "I") return Iob::I;
  return std::nullopt;
}

// Half-open byte range into Review::text.
struct CharSpan {
  size_t begin = 0;
  size_t end = 0;
  bool operator==(const CharSpan&) const = default;
};

inline std::optional<Gender> parse_gender(std::string_view s) {
  if (s == "male") return Gender::male;
  if (s == "female") return Gender::female;
  if (s == "unknown") return Gender::unknown;
  return std::nullopt;
}

struct Review {
  std::string review_id;
  std::string professor_id;
  std::string school;
  std::string subject;
  std::string text;
  Date date;
  std::optional<double> quality;     // [1, 5] when present
  std::optional<double> difficulty;  // [1, 5] when present
  std::optional<Gender> gender;      // explicit professor metadata
  bool pepper_present = true;        // derived from date
  // Gold annotation, when the review has been labeled. Spans are character
  // offsets so gold data survives tokenizer changes.
  std::optional<std::vector<CharSpan>> spans;
  std::optional<bool> doc_label;

  bool operator==(const Review&) const = default;
};

// I may only continue a chunk (CoNLL IOB well-formedness).
inline bool iob_well_formed(const std::vector<Iob>& tags) {
  Iob prev = Iob::O;
  for (auto t : tags) {
    if (t == Iob::I && prev == Iob::O) return false;
    prev = t;
  }
  return true;
}

inline bool any_chunk(const std::vector<Iob>& tags) {
  for (auto t : tags)
    if (t != Iob::O) return true;
  return false;
}

// Projects character spans onto tokens: every token overlapping a span is
// inside it, the first such token gets B.
inline std::vector<Iob> project_spans(const Tokens& tokens, const std::vector<CharSpan>& spans) {
  std::vector<Iob> tags(tokens.size(), Iob::O);
  for (const auto& s : spans) {
    bool first = true;
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i].char_start < s.end && tokens[i].char_end > s.begin) {
        tags[i] = first ? Iob::B : Iob::I;
        first = false;
      }
    }
    if (first) throw ValidationError("span [" + std::to_string(s.begin) + "," + std::to_string(s.end) + ") covers no token");
  }
  return tags;
}

// Inverse of project_spans: one character span per chunk.
inline std::vector<CharSpan> chunks_to_spans(const Tokens& tokens, const std::vector<Iob>& tags) {
  if (tags.size() != tokens.size()) throw ValidationError("iob length mismatch");
  std::vector<CharSpan> out;
  for (size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] == Iob::O) continue;
    if (tags[i] == Iob::B || out.empty() || tags[i - 1] == Iob::O)
      out.push_back({tokens[i].char_start, tokens[i].char_end});
    else
      out.back().end = tokens[i].char_end;
  }
  return out;
}

// Token-indexed half-open ranges of each chunk.
inline std::vector<std::pair<size_t, size_t>> chunk_ranges(const std::vector<Iob>& tags) {
  std::vector<std::pair<size_t, size_t>> out;
  for (size_t i = 0; i < tags.size(); ++i) {
    if (tags[i] == Iob::O) continue;
    if (tags[i] == Iob::B || i == 0 || tags[i - 1] == Iob::O)
      out.emplace_back(i, i + 1);
    else
      out.back().second = i + 1;
  }
  return out;
}

struct LabeledReview {
  Review review;
  Tokens tokens;  // tokenization of review.text (tags filled by callers that need them)
  std::vector<Iob> iob;
  bool doc_label = false;
};

// Builds the token-level view of an annotated review and checks
// doc_label <=> at least one chunk.
inline LabeledReview make_labeled(const Review& r) {
  if (!r.spans) throw ValidationError("review " + r.review_id + " has no span annotation");
  LabeledReview lr;
  lr.review = r;
  lr.tokens = tokenize(r.text);
  lr.iob = project_spans(lr.tokens, *r.spans);
  lr.doc_label = any_chunk(lr.iob);
  if (r.doc_label && *r.doc_label != lr.doc_label)
    throw ValidationError("review " + r.review_id + ": doc_label disagrees with spans");
  lr.review.doc_label = lr.doc_label;
  return lr;
}

inline std::vector<LabeledReview> labeled_subset(const std::vector<Review>& reviews) {
  std::vector<LabeledReview> out;
  for (const auto& r : reviews)
    if (r.spans) out.push_back(make_labeled(r));
  return out;
}

struct Professor {
  std::string professor_id;
  Gender gender = Gender::unknown;
  std::vector<std::string> review_ids;
};

// Groups reviews by professor. Gender comes from explicit metadata when any
// review carries it, otherwise from third-person pronouns pooled across the
// professor's reviews.
inline std::vector<Professor> professors(const std::vector<Review>& reviews) {
  struct Acc {
    Professor p;
    std::optional<Gender> explicit_gender;
    long m = 0, f = 0;
  };
  std::map<std::string, Acc> by_id;
  for (const auto& r : reviews) {
    auto& a = by_id[r.professor_id];
    a.p.professor_id = r.professor_id;
    a.p.review_ids.push_back(r.review_id);
    if (r.gender && *r.gender != Gender::unknown) a.explicit_gender = r.gender;
    auto prof = pronoun_profile(tokenize(r.text));
    a.m += prof.third_m_count;
    a.f += prof.third_f_count;
  }
  std::vector<Professor> out;
  out.reserve(by_id.size());
  for (auto& [id, a] : by_id) {
    a.p.gender = a.explicit_gender ? *a.explicit_gender : gender_from_counts(a.m, a.f);
    out.push_back(std::move(a.p));
  }
  return out;
}

}  // namespace pepper
