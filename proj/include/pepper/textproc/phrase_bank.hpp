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

// Tagged phrase bank of review-style sentences. Every entry is written as
// space-separated "word/TAG" units with universal POS tags; "{SLOT}" units
// expand from the filler tables and "[" / "]" delimit an attractiveness
// span. The bank bootstraps the POS tagger and drives synthetic corpora.

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pepper/textproc/pos_tagger.hpp"
#include "pepper/textproc/pronouns.hpp"
#include "pepper/util/error.hpp"
#include "pepper/util/rng.hpp"
#include "pepper/util/strings.hpp"

namespace pepper::phrase_bank {

inline constexpr std::string_view kNeutral[] = {
    "{He} is/AUX a/DET {TEACHER_ADJ} {TEACHER_NOUN} ./PUNCT",
    "The/DET lectures/NOUN are/AUX {LECTURE_ADJ} and/CCONJ the/DET exams/NOUN are/AUX {EXAM_ADJ} ./PUNCT",
    "{His} class/NOUN is/AUX {DEGREE} {CLASS_ADJ} ./PUNCT",
    "I/PRON learned/VERB a/DET lot/NOUN in/ADP {SUBJECT} ./PUNCT",
    "Homework/NOUN is/AUX due/ADJ every/DET week/NOUN ./PUNCT",
    "Make/VERB sure/ADJ you/PRON read/VERB the/DET book/NOUN before/ADP the/DET exam/NOUN ./PUNCT",
    "{He} grades/VERB fairly/ADV and/CCONJ answers/VERB emails/NOUN quickly/ADV ./PUNCT",
    "Go/VERB to/ADP office/NOUN hours/NOUN if/SCONJ you/PRON need/VERB help/NOUN ./PUNCT",
    "Attendance/NOUN is/AUX mandatory/ADJ and/CCONJ there/PRON are/VERB weekly/ADJ quizzes/NOUN ./PUNCT",
    "I/PRON would/AUX take/VERB {him} again/ADV ./PUNCT",
    "Avoid/VERB this/DET class/NOUN if/SCONJ you/PRON can/AUX !/PUNCT",
    "The/DET tests/NOUN are/AUX based/VERB on/ADP the/DET notes/NOUN ./PUNCT",
    "{He} really/ADV cares/VERB about/ADP the/DET students/NOUN ./PUNCT",
    "Not/PART an/DET easy/ADJ class/NOUN ,/PUNCT but/CCONJ worth/ADJ it/PRON ./PUNCT",
    "{His} accent/NOUN was/AUX difficult/ADJ to/PART understand/VERB ./PUNCT",
    "Best/ADJ professor/NOUN I/PRON have/AUX had/VERB so/ADV far/ADV ./PUNCT",
    "Lots/NOUN of/ADP reading/NOUN and/CCONJ two/NUM papers/NOUN ./PUNCT",
    "{He} knows/VERB {his} stuff/NOUN ./PUNCT",
    "WORST/ADJ CLASS/NOUN EVER/ADV !!!/PUNCT",
    "Great/ADJ class/NOUN :)/SYM",
    "{He} does/AUX n't/PART curve/VERB the/DET grades/NOUN ./PUNCT",
    "{He} 's/AUX pretty/ADV {CLASS_ADJ} but/CCONJ fair/ADJ ./PUNCT",
    "The/DET textbook/NOUN is/AUX {EXAM_ADJ} to/PART follow/VERB ./PUNCT",
    "Do/AUX the/DET practice/NOUN problems/NOUN and/CCONJ you/PRON will/AUX pass/VERB ./PUNCT",
    "{His} slides/NOUN are/AUX actually/ADV notes/NOUN ./PUNCT",
    "I/PRON love/VERB this/DET class/NOUN !/PUNCT",
    "{He} is/AUX a/DET {SUBJECT} god/NOUN !/PUNCT",
    "Damn/INTJ ,/PUNCT I/PRON love/VERB that/DET man/NOUN ./PUNCT",
    "The/DET professor/NOUN explains/VERB {SUBJECT} {DEGREE} well/ADV ./PUNCT",
    "{He} is/AUX always/ADV late/ADJ to/ADP class/NOUN ./PUNCT",
};

inline constexpr std::string_view kPositive[] = {
    "{He} 's/AUX also/ADV pretty/ADV [ {HOT_ADJ} ] which/PRON helps/VERB ./PUNCT :)/SYM",
    "Plus/CCONJ ,/PUNCT hello/INTJ ,/PUNCT [ {HOT_CAPS} ] !/PUNCT",
    "Everyone/PRON loves/VERB [ {HOT_ADJ} ] {NAME} !/PUNCT",
    "{He} is/AUX [ easy/ADJ on/ADP the/DET eyes/NOUN ] ./PUNCT",
    "{He} is/AUX so/ADV [ good/ADJ looking/VERB ] ./PUNCT",
    "I/PRON would/AUX totally/ADV [ marry/VERB ] {him} if/SCONJ I/PRON could/AUX ./PUNCT",
    "{He} has/VERB the/DET [ {HOT_ADJ} accent/NOUN ] ./PUNCT",
    "{He} is/AUX a/DET total/ADJ [ {HOT_NOUN} ] ./PUNCT",
    "Def/ADV did/AUX n't/PART mind/VERB [ looking/VERB at/ADP {him} ] for/ADP the/DET whole/ADJ hour/NOUN ./PUNCT",
    "{He} always/ADV wears/VERB [ {FASHION_ADJ} {CLOTHES} ] ./PUNCT",
    "Has/VERB a/DET [ {HOT_ADJ} {BODY} ] too/ADV ;)/SYM",
    "And/CCONJ [ {HOT_CAPS} ] too/ADV ;)/SYM",
};

// Extra hand-tagged sentences that widen the tagger's coverage beyond the
// templates.
inline constexpr std::string_view kTaggerExtra[] = {
    "She/PRON is/AUX the/DET best/ADJ professor/NOUN in/ADP the/DET department/NOUN ./PUNCT",
    "He/PRON is/AUX very/ADV smart/ADJ and/CCONJ funny/ADJ ./PUNCT",
    "This/DET professor/NOUN is/AUX great/ADJ ./PUNCT",
    "The/DET professor/NOUN gave/VERB us/PRON a/DET quiz/NOUN on/ADP Friday/PROPN ./PUNCT",
    "Professor/PROPN Smith/PROPN teaches/VERB at/ADP Stanford/PROPN ./PUNCT",
    "Dr/PROPN ./PUNCT Jones/PROPN was/AUX my/PRON favorite/ADJ teacher/NOUN ./PUNCT",
    "We/PRON had/VERB three/NUM exams/NOUN and/CCONJ a/DET final/ADJ project/NOUN ./PUNCT",
    "You/PRON have/VERB to/PART study/VERB for/ADP every/DET test/NOUN ./PUNCT",
    "It/PRON was/AUX not/PART worth/ADJ the/DET money/NOUN ./PUNCT",
    "They/PRON never/ADV answer/VERB questions/NOUN in/ADP class/NOUN ./PUNCT",
    "Her/PRON lectures/NOUN were/AUX clear/ADJ and/CCONJ helpful/ADJ ./PUNCT",
    "His/PRON tests/NOUN were/AUX very/ADV hard/ADJ ./PUNCT",
    "I/PRON got/VERB an/DET A/NOUN in/ADP her/PRON class/NOUN ./PUNCT",
    "The/DET class/NOUN was/AUX hard/ADJ ./PUNCT",
    "He/PRON is/AUX cut/ADJ for/ADP a/DET professor/NOUN ./PUNCT",
    "What/PRON a/DET great/ADJ guy/NOUN !/PUNCT",
    "Take/VERB her/PRON class/NOUN ,/PUNCT you/PRON will/AUX not/PART regret/VERB it/PRON ./PUNCT",
    "She/PRON helped/VERB me/PRON with/ADP my/PRON paper/NOUN ./PUNCT",
    "He/PRON talks/VERB too/ADV fast/ADV and/CCONJ mumbles/VERB ./PUNCT",
    "Lectures/NOUN are/AUX boring/ADJ but/CCONJ the/DET labs/NOUN are/AUX fun/ADJ ./PUNCT",
    "Professor/NOUN ./PUNCT",
    "The/DET best/ADJ !/PUNCT",
    "Easy/ADJ A/NOUN ./PUNCT",
    "She/PRON grades/VERB hard/ADV ./PUNCT",
    "He/PRON wants/VERB you/PRON to/PART learn/VERB ./PUNCT",
    "Our/PRON professor/NOUN was/AUX sick/ADJ for/ADP two/NUM weeks/NOUN ./PUNCT",
    "I/PRON ca/AUX n't/PART understand/VERB her/PRON heavy/ADJ accent/NOUN ./PUNCT",
    "Homework/NOUN is/AUX graded/VERB on/ADP completion/NOUN ./PUNCT",
};

inline const std::map<std::string, std::vector<std::string_view>>& fillers() {
  static const std::map<std::string, std::vector<std::string_view>> table = {
      {"TEACHER_ADJ",
       {"great/ADJ", "good/ADJ", "fair/ADJ", "tough/ADJ", "helpful/ADJ", "boring/ADJ", "clear/ADJ", "patient/ADJ",
        "knowledgeable/ADJ", "awful/ADJ", "decent/ADJ", "terrible/ADJ"}},
      {"TEACHER_NOUN", {"teacher/NOUN", "lecturer/NOUN", "professor/NOUN", "instructor/NOUN", "person/NOUN"}},
      {"LECTURE_ADJ",
       {"clear/ADJ", "long/ADJ", "confusing/ADJ", "interesting/ADJ", "dry/ADJ", "organized/ADJ"}},
      {"EXAM_ADJ", {"hard/ADJ", "fair/ADJ", "easy/ADJ", "long/ADJ", "tricky/ADJ", "difficult/ADJ"}},
      {"DEGREE", {"very/ADV", "really/ADV", "pretty/ADV", "super/ADV", "extremely/ADV", "quite/ADV"}},
      {"CLASS_ADJ",
       {"hard/ADJ", "easy/ADJ", "interesting/ADJ", "useful/ADJ", "demanding/ADJ", "boring/ADJ"}},
      {"SUBJECT",
       {"calculus/NOUN", "chemistry/NOUN", "physics/NOUN", "history/NOUN", "biology/NOUN", "economics/NOUN",
        "statistics/NOUN", "math/NOUN"}},
      {"HOT_ADJ",
       {"adorable/ADJ", "alluring/ADJ", "appealing/ADJ", "athletic/ADJ", "attractive/ADJ", "beautiful/ADJ",
        "bewitching/ADJ", "bootylicious/ADJ", "breathtaking/ADJ", "buxom/ADJ", "charming/ADJ", "comely/ADJ",
        "cute/ADJ", "dainty/ADJ", "dazzling/ADJ", "divine/ADJ", "dorky/ADJ", "dreamy/ADJ", "enchanting/ADJ",
        "fetching/ADJ", "flaming/ADJ", "foxy/ADJ", "gentle/ADJ", "glamorous/ADJ", "glorious/ADJ",
        "gorgeous/ADJ", "graceful/ADJ", "handsome/ADJ", "hot/ADJ", "hunky/ADJ", "hypnotic/ADJ",
        "irresistible/ADJ", "lovely/ADJ", "luscious/ADJ", "magnetic/ADJ", "nerdy/ADJ", "ravishing/ADJ",
        "seductive/ADJ", "sensuous/ADJ", "sexy/ADJ", "smokin/ADJ", "spiffy/ADJ", "striking/ADJ",
        "stunning/ADJ", "sublime/ADJ"}},
      {"HOT_NOUN",
       {"babe/NOUN", "beaut/NOUN", "beauty/NOUN", "dreamboat/NOUN", "fox/NOUN", "hottie/NOUN", "hunk/NOUN",
        "looker/NOUN", "doll/NOUN", "dork/NOUN"}},
      {"FASHION_ADJ", {"stylish/ADJ", "nice/ADJ", "fancy/ADJ"}},
      {"CLOTHES", {"boots/NOUN", "shoes/NOUN", "outfits/NOUN", "dresses/NOUN", "socks/NOUN", "clothes/NOUN"}},
      {"BODY", {"smile/NOUN", "face/NOUN", "eyes/NOUN", "legs/NOUN"}},
  };
  return table;
}

inline const std::vector<std::string_view>& gendered(std::string_view slot, Gender g) {
  static const std::map<std::string, std::pair<std::vector<std::string_view>, std::vector<std::string_view>>> table = {
      {"He", {{"He/PRON"}, {"She/PRON"}}},
      {"he", {{"he/PRON"}, {"she/PRON"}}},
      {"His", {{"His/PRON"}, {"Her/PRON"}}},
      {"his", {{"his/PRON"}, {"her/PRON"}}},
      {"him", {{"him/PRON"}, {"her/PRON"}}},
      {"NAME",
       {{"Jeff/PROPN", "Mark/PROPN", "Jason/PROPN", "David/PROPN", "Tom/PROPN"},
        {"Jenny/PROPN", "Sarah/PROPN", "Maria/PROPN", "Anna/PROPN", "Lisa/PROPN"}}},
  };
  auto it = table.find(std::string(slot));
  if (it == table.end()) throw Error("unknown gendered slot " + std::string(slot));
  return g == Gender::female ? it->second.second : it->second.first;
}

inline std::pair<std::string, std::string> split_unit(std::string_view unit) {
  auto slash = unit.rfind('/');
  if (slash == std::string_view::npos || slash == 0) throw Error("phrase bank unit without tag: " + std::string(unit));
  return {std::string(unit.substr(0, slash)), std::string(unit.substr(slash + 1))};
}

// Stretches one letter of `word` to a run of 3-6 ("hot" -> "hooot").
inline std::string elongate(std::string word, Rng& rng) {
  std::vector<size_t> letters;
  for (size_t i = 0; i < word.size(); ++i)
    if (std::isalpha(static_cast<unsigned char>(word[i]))) letters.push_back(i);
  if (letters.empty()) return word;
  size_t at = letters[rng.index(letters.size())];
  size_t extra = 2 + rng.index(4);
  word.insert(at, extra, word[at]);
  return word;
}

struct RenderOptions {
  Gender gender = Gender::male;
  double elongation_rate = 0.0;  // chance a lexicon filler gets stretched
  // When set, every HOT_* slot draws from these words instead of the
  // built-in fillers.
  const std::vector<std::string>* hot_terms = nullptr;
};

struct Rendered {
  std::string text;
  std::vector<std::string> words;
  std::vector<std::string> tags;
  std::vector<std::pair<size_t, size_t>> token_spans;  // [begin, end) token indices
  std::vector<std::pair<size_t, size_t>> char_spans;   // [begin, end) byte offsets
};

inline bool attaches_left(std::string_view w) {
  return w == "." || w == "," || w == "!" || w == "?" || w == "!!!" || w == ";" || w == ":" ||
         w == "n't" || (!w.empty() && w.front() == '\'');
}

// Expands one template. Text is built so that tokenize() recovers exactly
// `words`.
inline Rendered render(std::string_view pattern, Rng& rng, const RenderOptions& opt) {
  std::vector<std::pair<std::string, std::string>> units;
  std::vector<std::pair<size_t, size_t>> spans;
  size_t open = SIZE_MAX;
  for (const auto& raw : str::split(pattern, ' ')) {
    if (raw.empty()) continue;
    if (raw == "[") {
      open = units.size();
      continue;
    }
    if (raw == "]") {
      spans.emplace_back(open, units.size());
      open = SIZE_MAX;
      continue;
    }
    if (raw.front() == '{') {
      std::string slot = raw.substr(1, raw.size() - 2);
      bool caps = slot == "HOT_CAPS";
      std::string_view pick;
      std::string custom;
      if (opt.hot_terms && slot.starts_with("HOT")) {
        if (opt.hot_terms->empty()) throw ValidationError("empty lexicon");
        custom = (*opt.hot_terms)[rng.index(opt.hot_terms->size())] + (slot == "HOT_NOUN" ? "/NOUN" : "/ADJ");
        pick = custom;
      } else if (slot == "He" || slot == "he" || slot == "His" || slot == "his" || slot == "him" || slot == "NAME") {
        const auto& opts = gendered(slot, opt.gender);
        pick = opts[rng.index(opts.size())];
      } else {
        const auto& opts = fillers().at(caps ? "HOT_ADJ" : slot);
        pick = opts[rng.index(opts.size())];
      }
      auto [word, tag] = split_unit(pick);
      bool lexical = slot.starts_with("HOT");
      if (lexical && opt.elongation_rate > 0 && rng.bernoulli(opt.elongation_rate)) word = elongate(word, rng);
      if (caps)
        for (auto& c : word) c = char(std::toupper(static_cast<unsigned char>(c)));
      units.emplace_back(std::move(word), std::move(tag));
      continue;
    }
    units.push_back(split_unit(raw));
  }

  Rendered r;
  std::vector<size_t> starts;
  for (auto& [w, t] : units) {
    if (!r.text.empty() && !attaches_left(w)) r.text += ' ';
    starts.push_back(r.text.size());
    r.text += w;
    r.words.push_back(w);
    r.tags.push_back(t);
  }
  for (auto [b, e] : spans) {
    r.token_spans.emplace_back(b, e);
    r.char_spans.emplace_back(starts[b], starts[e - 1] + r.words[e - 1].size());
  }
  return r;
}

// Tagged training sentences for the default POS model: every template
// expanded `per_template` times for each gender, plus the extra sentences.
inline std::vector<TaggedSentence> tagger_corpus(uint64_t seed = 17, int per_template = 6) {
  std::vector<TaggedSentence> out;
  Rng rng(seed);
  auto add = [&](std::string_view pattern) {
    for (Gender g : {Gender::male, Gender::female}) {
      for (int k = 0; k < per_template; ++k) {
        auto r = render(pattern, rng, {g, 0.0});
        out.push_back({r.words, r.tags});
      }
    }
  };
  for (auto p : kNeutral) add(p);
  for (auto p : kPositive) add(p);
  for (auto p : kTaggerExtra) {
    TaggedSentence s;
    for (const auto& u : str::split(p, ' ')) {
      auto [w, t] = split_unit(u);
      s.words.push_back(w);
      s.tags.push_back(t);
    }
    for (int k = 0; k < 3; ++k) out.push_back(s);
  }
  return out;
}

}  // namespace pepper::phrase_bank

namespace pepper {

// Tagger trained on the built-in phrase bank. Built once per process.
inline const PosTagger& default_pos_tagger() {
  static const PosTagger tagger = PosTagger::train(phrase_bank::tagger_corpus());
  return tagger;
}

}  // namespace pepper
