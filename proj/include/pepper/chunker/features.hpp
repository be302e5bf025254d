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

// Per-token features of the chunk tagger: the token, its lemma and tag,
// lexicon membership, capitalisation, and the same facts about its two
// neighbours plus the previous IOB label.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pepper/corpus/review.hpp"
#include "pepper/textproc/lemma.hpp"
#include "pepper/textproc/lexicon.hpp"
#include "pepper/textproc/token.hpp"
#include "pepper/util/error.hpp"

namespace pepper {

inline constexpr std::string_view kStartSentinel = "[START]";
inline constexpr std::string_view kEndSentinel = "[END]";

struct TokenFeatures {
  std::string word_lower;
  std::string lemma;
  std::string pos;
  bool has_hot = false;
  std::string next_word;
  std::string next_pos;
  std::string prev_word;
  std::string prev_pos;
  Iob prev_iob = Iob::O;
  bool all_caps = false;
  bool prev_all_caps = false;
  bool next_all_caps = false;

  bool operator==(const TokenFeatures&) const = default;
};

inline constexpr std::array<std::string_view, 12> kChunkFeatureNames = {
    "word_lower", "lemma",     "pos",      "has_hot",  "next_word",     "next_pos",
    "prev_word",  "prev_pos",  "prev_iob", "all_caps", "prev_all_caps", "next_all_caps"};

inline constexpr std::array<std::string_view, 7> kCategoricalFeatures = {
    "word_lower", "lemma", "pos", "next_word", "next_pos", "prev_word", "prev_pos"};

// Lexicon hits per token, computed once per sequence.
inline std::vector<bool> hot_flags(const Tokens& tokens, const Lexicon& hot) {
  std::vector<bool> out(tokens.size(), false);
  for (auto [b, e] : hot.match_spans(tokens))
    for (size_t i = b; i < e; ++i) out[i] = true;
  return out;
}

inline void require_tagged(const Tokens& tokens) {
  for (const auto& t : tokens)
    if (t.pos.empty()) throw ValidationError("untagged tokens: '" + t.surface + "' has no POS tag");
}

inline TokenFeatures features_at(const Tokens& tokens, size_t i, Iob prev_iob, const std::vector<bool>& hot) {
  const Token& t = tokens[i];
  TokenFeatures f;
  f.word_lower = t.lower;
  f.lemma = t.lemma.empty() ? lemmatize(t) : t.lemma;
  f.pos = t.pos;
  f.has_hot = hot[i];
  f.all_caps = t.all_caps;
  if (i + 1 < tokens.size()) {
    f.next_word = tokens[i + 1].lower;
    f.next_pos = tokens[i + 1].pos;
    f.next_all_caps = tokens[i + 1].all_caps;
  } else {
    f.next_word = f.next_pos = kEndSentinel;
  }
  if (i > 0) {
    f.prev_word = tokens[i - 1].lower;
    f.prev_pos = tokens[i - 1].pos;
    f.prev_all_caps = tokens[i - 1].all_caps;
    f.prev_iob = prev_iob;
  } else {
    f.prev_word = f.prev_pos = kStartSentinel;
    f.prev_iob = Iob::O;
  }
  return f;
}

// Feature vectors for a whole sequence. `prev_labels` supplies the label
// history: gold labels when training, decoded labels when replaying a
// decode. It must cover every position before the last token.
inline std::vector<TokenFeatures> extract_features(const Tokens& tokens, std::span<const Iob> prev_labels,
                                                   const Lexicon& hot) {
  require_tagged(tokens);
  if (!tokens.empty() && prev_labels.size() + 1 < tokens.size())
    throw ValidationError("label history shorter than the sequence");
  auto flags = hot_flags(tokens, hot);
  std::vector<TokenFeatures> out;
  out.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i)
    out.push_back(features_at(tokens, i, i > 0 ? prev_labels[i - 1] : Iob::O, flags));
  return out;
}

// Indicator strings "name=value". Boolean features appear only when true,
// so each contributes exactly one weight per class.
inline std::vector<std::string> feature_strings(const TokenFeatures& f) {
  std::vector<std::string> out;
  out.reserve(12);
  out.push_back("word_lower=" + f.word_lower);
  out.push_back("lemma=" + f.lemma);
  out.push_back("pos=" + f.pos);
  out.push_back("next_word=" + f.next_word);
  out.push_back("next_pos=" + f.next_pos);
  out.push_back("prev_word=" + f.prev_word);
  out.push_back("prev_pos=" + f.prev_pos);
  out.push_back("prev_iob=" + std::string(to_string(f.prev_iob)));
  if (f.has_hot) out.push_back("has_hot");
  if (f.all_caps) out.push_back("all_caps");
  if (f.prev_all_caps) out.push_back("prev_all_caps");
  if (f.next_all_caps) out.push_back("next_all_caps");
  return out;
}

inline std::string unk_feature(std::string_view name) { return std::string(name) + "=<UNK>"; }

}  // namespace pepper
