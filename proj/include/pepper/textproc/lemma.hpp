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

#include <string>
#include <string_view>
#include <unordered_map>

#include "pepper/textproc/token.hpp"
#include "pepper/util/strings.hpp"

namespace pepper {

namespace detail {

inline const std::unordered_map<std::string, std::string>& lemma_exceptions() {
  static const std::unordered_map<std::string, std::string> table = {
      {"men", "man"},         {"women", "woman"},     {"children", "child"},
      {"people", "person"},   {"feet", "foot"},       {"teeth", "tooth"},
      {"went", "go"},         {"gone", "go"},         {"taught", "teach"},
      {"thought", "think"},   {"bought", "buy"},      {"brought", "bring"},
      {"made", "make"},       {"making", "make"},     {"took", "take"},
      {"taken", "take"},      {"taking", "take"},     {"gave", "give"},
      {"given", "give"},      {"giving", "give"},     {"having", "have"},
      {"loving", "love"},     {"loved", "love"},      {"loves", "love"},
      {"came", "come"},       {"coming", "come"},     {"saw", "see"},
      {"seen", "see"},        {"knew", "know"},       {"known", "know"},
      {"said", "say"},        {"got", "get"},         {"gotten", "get"},
      {"told", "tell"},       {"wrote", "write"},     {"written", "write"},
      {"writing", "write"},   {"felt", "feel"},       {"left", "leave"},
      {"better", "good"},     {"best", "good"},       {"worse", "bad"},
      {"worst", "bad"},       {"grading", "grade"},   {"graded", "grade"},
      {"grades", "grade"},    {"lectures", "lecture"}, {"lectured", "lecture"},
      {"lecturing", "lecture"}, {"caring", "care"},   {"cared", "care"},
      {"cares", "care"},      {"dressed", "dress"},   {"dresses", "dress"},
      {"classes", "class"},   {"quizzes", "quiz"},    {"wears", "wear"},
      {"looking", "look"},    {"does", "do"},         {"did", "do"},
      {"doing", "do"},        {"has", "have"},        {"had", "have"},
  };
  return table;
}

inline bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

inline bool has_vowel(std::string_view s) {
  for (char c : s)
    if (is_vowel(c) || c == 'y') return true;
  return false;
}

// "runn" -> "run", "stopp" -> "stop"; l, s, z doubles are left alone
// ("spell", "pass", "buzz").
inline std::string undouble(std::string s) {
  size_t n = s.size();
  if (n >= 3 && s[n - 1] == s[n - 2] && !is_vowel(s[n - 1]) && s[n - 1] != 'l' && s[n - 1] != 's' &&
      s[n - 1] != 'z')
    s.pop_back();
  return s;
}

}  // namespace detail

// Rule-based English lemma. Lower-cases, consults an exception table, then
// strips inflectional suffixes. POS steers the rules when available:
// plural/3sg -s and -ing/-ed only for nouns, verbs and untagged tokens,
// comparative -er/-est only for adjectives and adverbs. Never returns empty.
inline std::string lemmatize(std::string_view surface, std::string_view pos = {}) {
  using namespace detail;
  std::string w = str::to_lower(surface);
  if (w.empty()) return w;
  const auto& ex = lemma_exceptions();
  if (auto it = ex.find(w); it != ex.end()) return it->second;
  if (w.size() <= 3) return w;

  const bool untagged = pos.empty();
  const bool nominal = untagged || pos == "NOUN" || pos == "VERB";
  const bool verbal = untagged || pos == "VERB";
  const bool gradable = pos == "ADJ" || pos == "ADV";
  if (pos == "PROPN") return w;

  auto stem = [&](size_t cut) { return w.substr(0, w.size() - cut); };

  if (nominal) {
    if (str::ends_with(w, "ies") && w.size() > 4) return stem(3) + "y";
    if (str::ends_with(w, "sses")) return stem(2);
    if (str::ends_with(w, "ches") || str::ends_with(w, "shes") || str::ends_with(w, "xes") ||
        str::ends_with(w, "zzes"))
      return stem(2);
    if (w.back() == 's' && !str::ends_with(w, "ss") && !str::ends_with(w, "us") &&
        !str::ends_with(w, "is") && !str::ends_with(w, "ous") && w.size() >= 4)
      return stem(1);
  }
  if (verbal) {
    if (str::ends_with(w, "ing") && w.size() >= 6 && has_vowel(stem(3))) return undouble(stem(3));
    if (str::ends_with(w, "ied") && w.size() > 4) return stem(3) + "y";
    if (str::ends_with(w, "ed") && w.size() >= 5 && has_vowel(stem(2))) {
      std::string s = stem(2);
      char last = s.back();
      if (last == 'v' || last == 'c' || last == 'u') return s + "e";
      return undouble(s);
    }
  }
  if (gradable) {
    if (str::ends_with(w, "est") && w.size() >= 6) {
      std::string s = stem(3);
      if (s.back() == 'i') s.back() = 'y';
      return undouble(s);
    }
    if (str::ends_with(w, "er") && w.size() >= 5) {
      std::string s = stem(2);
      if (s.back() == 'i') s.back() = 'y';
      return undouble(s);
    }
  }
  return w;
}

inline std::string lemmatize(const Token& t) { return lemmatize(t.surface, t.pos); }

// Fills Token::lemma for every token.
inline void lemmatize_all(Tokens& tokens) {
  for (auto& t : tokens) t.lemma = lemmatize(t);
}

}  // namespace pepper
