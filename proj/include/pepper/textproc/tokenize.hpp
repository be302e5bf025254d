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
#include <cctype>
#include <string>
#include <string_view>

#include "pepper/textproc/token.hpp"
#include "pepper/util/strings.hpp"

namespace pepper {

inline constexpr std::array<std::string_view, 12> kEmoticons = {
    ":'(", ":-)", ":-(", ";-)", ":-D", ":)", ";)", ":(", ":D", ":P", ":p", "<3"};

inline bool is_emoticon(std::string_view s) {
  return std::find(kEmoticons.begin(), kEmoticons.end(), s) != kEmoticons.end();
}

namespace detail {

inline bool word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

// U+2019 RIGHT SINGLE QUOTATION MARK, used as an apostrophe in pasted text.
inline size_t apostrophe_len(std::string_view text, size_t i) {
  if (i < text.size() && text[i] == '\'') return 1;
  if (text.substr(i, 3) == "\xE2\x80\x99") return 3;
  return 0;
}

inline bool is_clitic(std::string_view lower_suffix) {
  return lower_suffix == "s" || lower_suffix == "re" || lower_suffix == "ve" ||
         lower_suffix == "ll" || lower_suffix == "d" || lower_suffix == "m";
}

// Word byte at position i, treating the multi-byte apostrophe as punctuation.
inline bool word_at(std::string_view text, size_t i) {
  return i < text.size() && word_byte(text[i]) && apostrophe_len(text, i) == 0;
}

}  // namespace detail

// Splits on whitespace and punctuation. Words keep internal hyphens
// ("good-looking"); English clitics are split off ("He's" -> "He" "'s",
// "doesn't" -> "does" "n't"); emoticons and runs of ! ? or . stay whole.
// Offsets are byte offsets into `text`.
inline Tokens tokenize(std::string_view text) {
  Tokens out;
  auto emit = [&](size_t b, size_t e) {
    Token t;
    t.surface = std::string(text.substr(b, e - b));
    t.lower = str::to_lower(t.surface);
    t.char_start = b;
    t.char_end = e;
    t.all_caps = is_all_caps(t.surface);
    out.push_back(std::move(t));
  };

  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    unsigned char c = text[i];
    if (std::isspace(c)) {
      ++i;
      continue;
    }

    // Emoticons, longest first; must not run into a following word.
    bool matched = false;
    for (auto emo : kEmoticons) {
      if (text.substr(i, emo.size()) == emo) {
        size_t e = i + emo.size();
        bool letter_emo = std::isalnum(static_cast<unsigned char>(emo.back())) != 0;
        if (letter_emo && detail::word_at(text, e)) continue;
        emit(i, e);
        i = e;
        matched = true;
        break;
      }
    }
    if (matched) continue;

    if (detail::word_at(text, i)) {
      size_t b = i;
      bool numeric = std::isdigit(c) != 0;
      while (i < n) {
        unsigned char d = text[i];
        if (detail::word_at(text, i)) {
          ++i;
        } else if (d == '-' && detail::word_at(text, i + 1) && i > b) {
          ++i;
        } else if (numeric && (d == '.' || d == ',') && i + 1 < n &&
                   std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
          ++i;
        } else {
          break;
        }
      }
      // Apostrophe handling.
      size_t alen = detail::apostrophe_len(text, i);
      if (alen && i + alen < n && std::isalpha(static_cast<unsigned char>(text[i + alen]))) {
        size_t s = i + alen, e = s;
        while (detail::word_at(text, e)) ++e;
        std::string suffix = str::to_lower(text.substr(s, e - s));
        if (detail::is_clitic(suffix)) {
          emit(b, i);
          emit(i, e);
          i = e;
          continue;
        }
        if (suffix == "t" && i - b >= 2 && (text[i - 1] == 'n' || text[i - 1] == 'N')) {
          emit(b, i - 1);
          emit(i - 1, e);
          i = e;
          continue;
        }
        // o'clock and friends stay whole.
        emit(b, e);
        i = e;
        continue;
      }
      emit(b, i);
      continue;
    }

    if (c == '!' || c == '?') {
      size_t b = i;
      while (i < n && (text[i] == '!' || text[i] == '?')) ++i;
      emit(b, i);
      continue;
    }
    if (c == '.') {
      size_t b = i;
      while (i < n && text[i] == '.') ++i;
      emit(b, i);
      continue;
    }
    size_t alen = detail::apostrophe_len(text, i);
    if (alen) {
      emit(i, i + alen);
      i += alen;
      continue;
    }
    emit(i, i + 1);
    ++i;
  }
  return out;
}

}  // namespace pepper
