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

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pepper/textproc/elongation.hpp"
#include "pepper/textproc/token.hpp"
#include "pepper/util/error.hpp"
#include "pepper/util/strings.hpp"

namespace pepper {

enum class LexiconName {
  hot,
  fashion,
  hair,
  idioms,
  titles,
  pronouns_first,
  pronouns_third_m,
  pronouns_third_f,
  body,
  accent,
};

inline std::string_view to_string(LexiconName n) {
  switch (n) {
    case LexiconName::hot: return "hot";
    case LexiconName::fashion: return "fashion";
    case LexiconName::hair: return "hair";
    case LexiconName::idioms: return "idioms";
    case LexiconName::titles: return "titles";
    case LexiconName::pronouns_first: return "pronouns_first";
    case LexiconName::pronouns_third_m: return "pronouns_third_m";
    case LexiconName::pronouns_third_f: return "pronouns_third_f";
    case LexiconName::body: return "body";
    case LexiconName::accent: return "accent";
  }
  return "?";
}

// Per-token elongation candidate sets, computed once and reused across
// lexicons.
using TokenForms = std::vector<std::set<std::string>>;

inline TokenForms token_forms(const Tokens& tokens) {
  TokenForms out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(normalize_elongation(t.lower));
  return out;
}

class Lexicon {
 public:
  Lexicon(LexiconName name, std::span<const std::string_view> entries) : name_(name) {
    for (auto e : entries) add(e);
    if (size() == 0) throw ValidationError("lexicon '" + std::string(to_string(name)) + "' is empty");
  }

  Lexicon(LexiconName name, const std::vector<std::string>& entries) : name_(name) {
    for (const auto& e : entries) add(e);
    if (size() == 0) throw ValidationError("lexicon '" + std::string(to_string(name)) + "' is empty");
  }

  // One entry per line, '#' starts a comment, blank lines ignored.
  static Lexicon load(LexiconName name, const std::string& path) {
    std::vector<std::string> entries;
    for (auto& line : str::read_lines(path)) {
      auto hash = line.find('#');
      std::string_view body = std::string_view(line).substr(0, hash);
      body = str::trim(body);
      if (!body.empty()) entries.emplace_back(body);
    }
    return Lexicon(name, entries);
  }

  void add(std::string_view entry) {
    auto words = str::split(str::to_lower(str::trim(entry)), ' ');
    std::erase_if(words, [](const std::string& w) { return w.empty(); });
    if (words.empty()) return;
    if (words.size() == 1)
      singles_.insert(words[0]);
    else if (std::find(phrases_.begin(), phrases_.end(), words) == phrases_.end())
      phrases_.push_back(std::move(words));
  }

  LexiconName name() const { return name_; }
  size_t size() const { return singles_.size() + phrases_.size(); }
  bool contains(std::string_view lower_word) const { return singles_.count(std::string(lower_word)) != 0; }
  const std::set<std::string>& singles() const { return singles_; }
  const std::vector<std::vector<std::string>>& phrases() const { return phrases_; }

  std::vector<std::string> entries() const {
    std::vector<std::string> out(singles_.begin(), singles_.end());
    for (const auto& p : phrases_) {
      std::string s;
      for (const auto& w : p) s += (s.empty() ? "" : " ") + w;
      out.push_back(s);
    }
    return out;
  }

  // Half-open token spans [begin, end) matched by this lexicon. Single words
  // match when any elongation candidate of the token is an entry; phrases
  // match an exact token window after the same normalization, or a single
  // hyphenated token whose parts line up ("good-looking").
  std::vector<std::pair<size_t, size_t>> match_spans(const Tokens& tokens, const TokenForms& forms) const {
    std::vector<std::pair<size_t, size_t>> out;
    auto any_in = [](const std::set<std::string>& cands, const std::string& want) {
      return cands.count(want) != 0;
    };
    for (size_t i = 0; i < tokens.size(); ++i) {
      for (const auto& c : forms[i]) {
        if (singles_.count(c)) {
          out.emplace_back(i, i + 1);
          break;
        }
      }
      for (const auto& phrase : phrases_) {
        if (i + phrase.size() <= tokens.size()) {
          bool ok = true;
          for (size_t j = 0; j < phrase.size() && ok; ++j) ok = any_in(forms[i + j], phrase[j]);
          if (ok) out.emplace_back(i, i + phrase.size());
        }
        if (tokens[i].lower.find('-') != std::string::npos) {
          auto parts = str::split(tokens[i].lower, '-');
          if (parts.size() == phrase.size()) {
            bool ok = true;
            for (size_t j = 0; j < parts.size() && ok; ++j) ok = any_in(normalize_elongation(parts[j]), phrase[j]);
            if (ok) out.emplace_back(i, i + 1);
          }
        }
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<std::pair<size_t, size_t>> match_spans(const Tokens& tokens) const {
    return match_spans(tokens, token_forms(tokens));
  }

 private:
  LexiconName name_;
  std::set<std::string> singles_;
  std::vector<std::vector<std::string>> phrases_;
};

// Indices of all tokens covered by a lexicon match.
inline std::set<size_t> lexicon_match(const Tokens& tokens, const Lexicon& lex, const TokenForms& forms) {
  std::set<size_t> out;
  for (auto [b, e] : lex.match_spans(tokens, forms))
    for (size_t i = b; i < e; ++i) out.insert(i);
  return out;
}

inline std::set<size_t> lexicon_match(const Tokens& tokens, const Lexicon& lex) {
  return lexicon_match(tokens, lex, token_forms(tokens));
}

namespace lexicons {

// Attractiveness dictionary. The published list plus "hot" itself.
inline constexpr std::string_view kHot[] = {
    "adorable", "alluring", "appealing", "athletic", "attractive", "babe", "bangin", "banging",
    "beaut", "beautiful", "beauty", "becoming", "beguiling", "bewitched", "bewitching",
    "bootylicious", "breathtaking", "buxom", "charming", "chili", "comely", "cute", "dainty",
    "dazzling", "divine", "doll", "dork", "dorky", "dreamboat", "dreamy", "enchanting",
    "fetching", "fire", "flaming", "fox", "foxy", "gentle", "gentleness", "glamorous",
    "glorious", "gorgeous", "graceful", "handsome", "hottie", "hubba", "hunk", "hunky",
    "hypnotic", "irresistible", "looker", "lovely", "luscious", "magnetic", "marry", "nerdy",
    "ravishing", "seductive", "sensuous", "sexy", "smokin", "smoking", "soothing", "spiffy",
    "striking", "stunning", "sublime", "hot"};

inline constexpr std::string_view kFashion[] = {
    "boots", "clothes", "clothing", "dress", "dressed", "dresses", "fashion", "hip", "hipster",
    "jacket", "outfit", "outfits", "shoes", "socks", "stylish", "wardrobe", "wear", "wears"};

inline constexpr std::string_view kHair[] = {
    "bald", "baldness", "baldspot", "beard", "blond", "blonde", "brunette", "curly", "dreadlocks",
    "hair", "haircut", "moustache", "mustache", "shave", "sideburns", "toupee", "wavy"};

inline constexpr std::string_view kIdioms[] = {"easy on the eyes", "good looking"};

inline constexpr std::string_view kTitles[] = {"dr", "professor", "mrs", "mr"};

inline constexpr std::string_view kPronounsFirst[] = {"i",  "me",  "my",   "mine", "myself",
                                                      "we", "us",  "our",  "ours", "ourselves"};
inline constexpr std::string_view kPronounsThirdM[] = {"he", "him", "his", "himself"};
inline constexpr std::string_view kPronounsThirdF[] = {"she", "her", "hers", "herself"};

// Body parts and age words backing the "age, body part, clothing" feature.
inline constexpr std::string_view kBody[] = {
    "abs", "arms", "body", "butt", "chest", "eyes", "face", "figure", "legs", "lips",
    "muscles", "physique", "smile", "teeth", "young", "younger", "age"};

inline constexpr std::string_view kAccent[] = {"accent", "accents"};

}  // namespace lexicons

inline Lexicon default_lexicon(LexiconName name) {
  using namespace lexicons;
  switch (name) {
    case LexiconName::hot: return Lexicon(name, kHot);
    case LexiconName::fashion: return Lexicon(name, kFashion);
    case LexiconName::hair: return Lexicon(name, kHair);
    case LexiconName::idioms: return Lexicon(name, kIdioms);
    case LexiconName::titles: return Lexicon(name, kTitles);
    case LexiconName::pronouns_first: return Lexicon(name, kPronounsFirst);
    case LexiconName::pronouns_third_m: return Lexicon(name, kPronounsThirdM);
    case LexiconName::pronouns_third_f: return Lexicon(name, kPronounsThirdF);
    case LexiconName::body: return Lexicon(name, kBody);
    case LexiconName::accent: return Lexicon(name, kAccent);
  }
  throw Error("unknown lexicon");
}

// Immutable bundle of every lexicon the feature extractors consult.
struct LexiconSet {
  Lexicon hot = default_lexicon(LexiconName::hot);
  Lexicon fashion = default_lexicon(LexiconName::fashion);
  Lexicon hair = default_lexicon(LexiconName::hair);
  Lexicon idioms = default_lexicon(LexiconName::idioms);
  Lexicon titles = default_lexicon(LexiconName::titles);
  Lexicon pronouns_first = default_lexicon(LexiconName::pronouns_first);
  Lexicon pronouns_third_m = default_lexicon(LexiconName::pronouns_third_m);
  Lexicon pronouns_third_f = default_lexicon(LexiconName::pronouns_third_f);
  Lexicon body = default_lexicon(LexiconName::body);
  Lexicon accent = default_lexicon(LexiconName::accent);

  static const LexiconSet& defaults() {
    static const LexiconSet instance;
    return instance;
  }
};

}  // namespace pepper
