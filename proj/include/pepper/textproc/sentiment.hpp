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
#include <sstream>
#include <string>
#include <string_view>

#include "pepper/textproc/token.hpp"
#include "pepper/textproc/tokenize.hpp"
#include "pepper/util/error.hpp"
#include "pepper/util/strings.hpp"

namespace pepper {

struct SentimentScore {
  double polarity = 0.0;      // [-1, 1]
  double subjectivity = 0.0;  // [0, 1]
};

// Anything that can score a token sequence. Document features only see this
// interface, so a richer scorer can be dropped in.
class SentimentScorer {
 public:
  virtual ~SentimentScorer() = default;
  virtual SentimentScore score(const Tokens& tokens) const = 0;
  SentimentScore score(std::string_view text) const { return score(tokenize(text)); }
};

struct SentimentEntry {
  double polarity = 0.0;
  double subjectivity = 0.0;
};

// Version tag of the built-in word list below; bump when entries change.
inline constexpr std::string_view kSentimentLexiconVersion = "1";

// word<TAB>polarity<TAB>subjectivity
inline constexpr std::string_view kDefaultSentimentLexicon = R"(# pepper sentiment lexicon v1
amazing	0.6	0.9
annoying	-0.8	0.9
awesome	1.0	1.0
awful	-1.0	1.0
bad	-0.7	0.667
beautiful	0.85	1.0
best	1.0	0.3
boring	-1.0	1.0
brilliant	0.9	1.0
clear	0.1	0.383
confusing	-0.3	0.4
cool	0.35	0.65
cute	0.5	1.0
difficult	-0.5	1.0
disorganized	-0.5	0.6
easy	0.433	0.833
excellent	1.0	1.0
fair	0.7	0.9
fantastic	0.4	0.9
fun	0.3	0.2
funny	0.25	1.0
good	0.7	0.6
gorgeous	0.7	1.0
great	0.8	0.75
handsome	0.5	0.7
happy	0.8	1.0
hard	-0.292	0.542
harsh	-0.2	0.5
helpful	0.5	0.5
horrible	-1.0	1.0
hot	0.25	0.85
inept	-0.5	0.5
interesting	0.5	0.5
kind	0.6	0.9
love	0.5	0.6
lovely	0.5	0.75
mean	-0.312	0.688
nice	0.6	1.0
picky	-0.2	0.5
poor	-0.4	0.6
pretty	0.25	1.0
rude	-0.3	0.6
sexy	0.5	1.0
smart	0.214	0.643
stunning	0.5	1.0
stupid	-0.8	1.0
terrible	-1.0	1.0
unclear	-0.2	0.4
unfair	-0.5	0.9
unhelpful	-0.5	0.5
useless	-0.5	0.2
wonderful	1.0	1.0
worst	-1.0	1.0
worthwhile	0.3	0.4
)";

// Averages the polarity and subjectivity of every lexicon word in the
// text. A negator within the three preceding tokens flips the word's
// polarity at half magnitude ("not great" = -0.4 when great = 0.8).
class LexiconSentiment final : public SentimentScorer {
 public:
  static LexiconSentiment parse(std::string_view tsv) {
    LexiconSentiment s;
    std::istringstream in{std::string(tsv)};
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      auto body = str::trim(line);
      if (body.empty() || body.front() == '#') continue;
      auto cols = str::split(body, '\t');
      auto pol = cols.size() == 3 ? str::parse_double(cols[1]) : std::nullopt;
      auto sub = cols.size() == 3 ? str::parse_double(cols[2]) : std::nullopt;
      if (!pol || !sub || *pol < -1 || *pol > 1 || *sub < 0 || *sub > 1)
        throw ValidationError("sentiment lexicon line " + std::to_string(lineno) +
                              ": expected word<TAB>polarity[-1,1]<TAB>subjectivity[0,1]");
      s.entries_[str::to_lower(cols[0])] = {*pol, *sub};
    }
    return s;
  }

  static LexiconSentiment load(const std::string& path) { return parse(str::read_file(path)); }

  static const LexiconSentiment& defaults() {
    static const LexiconSentiment instance = parse(kDefaultSentimentLexicon);
    return instance;
  }

  const std::map<std::string, SentimentEntry>& entries() const { return entries_; }

  using SentimentScorer::score;

  SentimentScore score(const Tokens& tokens) const override {
    double pol = 0, sub = 0;
    int n = 0;
    for (size_t i = 0; i < tokens.size(); ++i) {
      auto it = entries_.find(tokens[i].lower);
      if (it == entries_.end()) continue;
      double p = it->second.polarity;
      for (size_t back = 1; back <= 3 && back <= i; ++back) {
        if (is_negator(tokens[i - back].lower)) {
          p *= -0.5;
          break;
        }
      }
      pol += p;
      sub += it->second.subjectivity;
      ++n;
    }
    if (n == 0) return {};
    return {std::clamp(pol / n, -1.0, 1.0), std::clamp(sub / n, 0.0, 1.0)};
  }

  static bool is_negator(std::string_view w) {
    return w == "not" || w == "n't" || w == "no" || w == "never" || w == "nothing" || w == "hardly" ||
           w == "nobody" || w == "neither" || w == "nor";
  }

 private:
  std::map<std::string, SentimentEntry> entries_;
};

// Text-level convenience using the built-in lexicon.
inline SentimentScore sentiment_subjectivity(std::string_view text) {
  return LexiconSentiment::defaults().score(text);
}

}  // namespace pepper
