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

#include <string_view>

#include "pepper/textproc/lexicon.hpp"
#include "pepper/textproc/token.hpp"

namespace pepper {

enum class Gender { male, female, unknown };

inline std::string_view to_string(Gender g) {
  switch (g) {
    case Gender::male: return "male";
    case Gender::female: return "female";
    case Gender::unknown: return "unknown";
  }
  return "unknown";
}

struct PronounProfile {
  int first_count = 0;
  int third_m_count = 0;
  int third_f_count = 0;
  Gender inferred_gender = Gender::unknown;

  bool operator==(const PronounProfile&) const = default;
};

inline Gender gender_from_counts(long third_m, long third_f) {
  if (third_m > third_f) return Gender::male;
  if (third_f > third_m) return Gender::female;
  return Gender::unknown;
}

inline PronounProfile pronoun_profile(const Tokens& tokens, const LexiconSet& lex = LexiconSet::defaults()) {
  PronounProfile p;
  for (const auto& t : tokens) {
    if (lex.pronouns_first.contains(t.lower)) ++p.first_count;
    if (lex.pronouns_third_m.contains(t.lower)) ++p.third_m_count;
    if (lex.pronouns_third_f.contains(t.lower)) ++p.third_f_count;
  }
  p.inferred_gender = gender_from_counts(p.third_m_count, p.third_f_count);
  return p;
}

}  // namespace pepper
