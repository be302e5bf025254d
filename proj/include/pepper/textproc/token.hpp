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

#include <array>
#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pepper {

// Universal POS tag set (coarse tags).
inline constexpr std::array<std::string_view, 17> kUniversalTags = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

inline bool is_universal_tag(std::string_view tag) {
  return std::find(kUniversalTags.begin(), kUniversalTags.end(), tag) != kUniversalTags.end();
}

struct Token {
  std::string surface;
  std::string lower;
  std::string lemma;  // empty until lemmatized
  std::string pos;    // empty until tagged
  size_t char_start = 0;
  size_t char_end = 0;  // exclusive byte offset
  bool all_caps = false;

  bool operator==(const Token&) const = default;
};

using Tokens = std::vector<Token>;

inline bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

// True when the surface has at least two letters and every letter is upper
// case. Only ASCII letters are considered.
inline bool is_all_caps(std::string_view s) {
  size_t letters = 0;
  for (char c : s) {
    if (!is_ascii_letter(c)) continue;
    if (c >= 'a' && c <= 'z') return false;
    ++letters;
  }
  return letters >= 2;
}

// Token made only of punctuation / symbol characters.
inline bool is_punct_token(const Token& t) {
  for (unsigned char c : t.surface)
    if (std::isalnum(c) || c >= 0x80) return false;
  return !t.surface.empty();
}

inline std::vector<std::string> surfaces(const Tokens& toks) {
  std::vector<std::string> out;
  out.reserve(toks.size());
  for (const auto& t : toks) out.push_back(t.surface);
  return out;
}

}  // namespace pepper
