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

#include "pepper/textproc/lemma.hpp"
#include "pepper/textproc/phrase_bank.hpp"
#include "pepper/textproc/pos_tagger.hpp"
#include "pepper/textproc/tokenize.hpp"

namespace pepper {

// Tags and lemmatizes tokens in place. With no tagger the built-in one is
// used.
inline void annotate(Tokens& toks, const PosTagger* tagger = nullptr) {
  pos_tag(toks, tagger ? tagger : &default_pos_tagger());
  lemmatize_all(toks);
}

inline Tokens analyze(std::string_view text, const PosTagger* tagger = nullptr) {
  Tokens toks = tokenize(text);
  annotate(toks, tagger);
  return toks;
}

}  // namespace pepper
