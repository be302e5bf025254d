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

#include "pepper/textproc/token.hpp"
#include "pepper/textproc/tokenize.hpp"

namespace pepper {

struct StyleFeatures {
  int emoticon_count = 0;
  int repeated_exclaim_count = 0;
  int all_caps_word_count = 0;
  bool nonstandard_punct = false;
  bool nonstandard_caps = false;

  bool operator==(const StyleFeatures&) const = default;
};

inline bool is_sentence_final(const Token& t) {
  if (t.surface.empty()) return false;
  for (char c : t.surface)
    if (c != '.' && c != '!' && c != '?') return false;
  return true;
}

// Internet-style markers. Non-standard punctuation: emoticons or any run of
// two or more sentence-final marks ("!!", "?!", "..."). Non-standard
// capitalization: an all-caps word, a lower-case sentence start, or a bare
// lower-case "i".
inline StyleFeatures style_features(const Tokens& tokens) {
  StyleFeatures f;
  bool sentence_start = true;
  for (const auto& t : tokens) {
    if (is_emoticon(t.surface)) {
      ++f.emoticon_count;
      f.nonstandard_punct = true;
      sentence_start = true;
      continue;
    }
    if (is_sentence_final(t)) {
      if (t.surface.size() >= 2) f.nonstandard_punct = true;
      if (t.surface.size() >= 2 && t.surface.find_first_not_of('!') == std::string::npos)
        ++f.repeated_exclaim_count;
      sentence_start = true;
      continue;
    }
    if (t.all_caps) {
      ++f.all_caps_word_count;
      f.nonstandard_caps = true;
    }
    unsigned char first = t.surface.empty() ? 0 : t.surface[0];
    if (std::isalpha(first)) {
      if (sentence_start && std::islower(first)) f.nonstandard_caps = true;
      if (t.surface == "i") f.nonstandard_caps = true;
    }
    if (!is_punct_token(t)) sentence_start = false;
  }
  return f;
}

}  // namespace pepper
