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
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pepper/textproc/token.hpp"
#include "pepper/util/error.hpp"
#include "pepper/util/rng.hpp"
#include "pepper/util/strings.hpp"

namespace pepper {

struct TaggedSentence {
  std::vector<std::string> words;
  std::vector<std::string> tags;
};

// Reads whitespace-separated columns, one token per line, blank line between
// sentences. `tag_column` selects the tag (CoNLL-2003 keeps POS in column 1);
// two-column files use column 1 as well. Lines starting with "-DOCSTART-" or
// '#' are skipped.
inline std::vector<TaggedSentence> read_conll_tagged(std::string_view text, size_t tag_column = 1) {
  std::vector<TaggedSentence> out;
  TaggedSentence cur;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t lineno = 0;
  auto flush = [&] {
    if (!cur.words.empty()) out.push_back(std::move(cur));
    cur = {};
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto body = str::trim(line);
    if (body.empty()) {
      flush();
      continue;
    }
    if (body.starts_with("-DOCSTART-") || body.front() == '#') continue;
    std::vector<std::string> cols;
    std::istringstream ls{std::string(body)};
    for (std::string c; ls >> c;) cols.push_back(c);
    if (cols.size() <= tag_column)
      throw ValidationError("conll line " + std::to_string(lineno) + ": missing tag column");
    if (!is_universal_tag(cols[tag_column]))
      throw ValidationError("conll line " + std::to_string(lineno) + ": '" + cols[tag_column] +
                            "' is not a universal POS tag");
    cur.words.push_back(cols[0]);
    cur.tags.push_back(cols[tag_column]);
  }
  flush();
  return out;
}

inline std::string write_conll_tagged(const std::vector<TaggedSentence>& data) {
  std::string out;
  for (const auto& s : data) {
    for (size_t i = 0; i < s.words.size(); ++i) out += s.words[i] + "\t" + s.tags[i] + "\n";
    out += "\n";
  }
  return out;
}

// Greedy averaged-perceptron POS tagger over the universal tag set.
// Immutable after training; tag() is safe to call concurrently.
class PosTagger {
 public:
  static constexpr size_t kClasses = kUniversalTags.size();
  using Scores = std::array<double, kClasses>;

  PosTagger() = default;

  bool trained() const { return !weights_.empty(); }

  static PosTagger train(const std::vector<TaggedSentence>& data, int iterations = 8, uint64_t seed = 0) {
    PosTagger m;
    m.build_tagdict(data);
    Trainer t;
    std::vector<size_t> order(data.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    for (int it = 0; it < iterations; ++it) {
      for (size_t idx : order) {
        const auto& s = data[idx];
        std::string prev = "-START-", prev2 = "-START2-";
        for (size_t i = 0; i < s.words.size(); ++i) {
          std::string guess;
          if (auto fixed = m.lookup_tagdict(s.words[i])) {
            guess = *fixed;
          } else {
            auto feats = features(s.words, i, prev, prev2);
            guess = std::string(kUniversalTags[m.argmax(feats)]);
            t.update(m.weights_, class_index(s.tags[i]), class_index(guess), feats);
          }
          prev2 = prev;
          prev = s.tags[i];  // teacher forcing on gold history
        }
      }
      rng.shuffle(order);
    }
    t.average(m.weights_);
    return m;
  }

  std::vector<std::string> tag_words(const std::vector<std::string>& words) const {
    if (!trained()) throw StateError("POS tagger is not trained");
    std::vector<std::string> tags;
    tags.reserve(words.size());
    std::string prev = "-START-", prev2 = "-START2-";
    for (size_t i = 0; i < words.size(); ++i) {
      std::string tag;
      if (auto fixed = lookup_tagdict(words[i]))
        tag = *fixed;
      else
        tag = std::string(kUniversalTags[argmax(features(words, i, prev, prev2))]);
      prev2 = prev;
      prev = tag;
      tags.push_back(tag);
    }
    return tags;
  }

  void tag(Tokens& tokens) const {
    auto tags = tag_words(surfaces(tokens));
    for (size_t i = 0; i < tokens.size(); ++i) tokens[i].pos = tags[i];
  }

  double accuracy(const std::vector<TaggedSentence>& data) const {
    size_t ok = 0, n = 0;
    for (const auto& s : data) {
      auto tags = tag_words(s.words);
      for (size_t i = 0; i < tags.size(); ++i, ++n) ok += tags[i] == s.tags[i];
    }
    return n ? double(ok) / double(n) : 0.0;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["format_version"] = 1;
    j["classes"] = std::vector<std::string>(kUniversalTags.begin(), kUniversalTags.end());
    std::map<std::string, std::string> td(tagdict_.begin(), tagdict_.end());
    j["tagdict"] = td;
    nlohmann::json w = nlohmann::json::object();
    std::map<std::string, const Scores*> sorted;
    for (const auto& [k, v] : weights_) sorted[k] = &v;
    for (const auto& [k, v] : sorted) {
      nlohmann::json row = nlohmann::json::object();
      for (size_t c = 0; c < kClasses; ++c)
        if ((*v)[c] != 0.0) row[std::string(kUniversalTags[c])] = (*v)[c];
      if (!row.empty()) w[k] = row;
    }
    j["weights"] = w;
    return j;
  }

  static PosTagger from_json(const nlohmann::json& j) {
    if (j.value("format_version", 0) != 1) throw ValidationError("POS model: unsupported format_version");
    PosTagger m;
    for (const auto& [k, v] : j.at("tagdict").items()) m.tagdict_[k] = v.get<std::string>();
    for (const auto& [feat, row] : j.at("weights").items()) {
      Scores s{};
      for (const auto& [tag, val] : row.items()) s[class_index(tag)] = val.get<double>();
      m.weights_[feat] = s;
    }
    return m;
  }

 private:
  static size_t class_index(std::string_view tag) {
    for (size_t c = 0; c < kClasses; ++c)
      if (kUniversalTags[c] == tag) return c;
    throw ValidationError("unknown POS tag '" + std::string(tag) + "'");
  }

  static std::string normalize(const std::string& w) {
    if (w.empty()) return w;
    bool digits = std::isdigit(static_cast<unsigned char>(w[0])) != 0;
    if (digits) return "!DIGITS";
    return str::to_lower(w);
  }

  static std::string shape(const std::string& w) {
    std::string s;
    for (unsigned char c : w) {
      char k = std::isupper(c) ? 'X' : std::islower(c) ? 'x' : std::isdigit(c) ? 'd' : char(c);
      if (s.empty() || s.back() != k) s += k;
    }
    return s;
  }

  static std::string suffix(const std::string& w, size_t n) { return w.size() <= n ? w : w.substr(w.size() - n); }

  static std::vector<std::string> features(const std::vector<std::string>& words, size_t i, const std::string& prev,
                                           const std::string& prev2) {
    auto word = [&](long k) -> std::string {
      long j = long(i) + k;
      if (j < 0) return "-START-";
      if (j >= long(words.size())) return "-END-";
      return normalize(words[size_t(j)]);
    };
    std::string w = word(0);
    std::vector<std::string> f;
    f.reserve(16);
    f.push_back("bias");
    f.push_back("i suffix " + suffix(w, 3));
    f.push_back("i suffix2 " + suffix(w, 2));
    f.push_back("i pref1 " + w.substr(0, 1));
    f.push_back("i shape " + shape(words[i]));
    f.push_back("i-1 tag " + prev);
    f.push_back("i-2 tag " + prev2);
    f.push_back("i tag+i-2 tag " + prev + " " + prev2);
    f.push_back("i word " + w);
    f.push_back("i-1 tag+i word " + prev + " " + w);
    f.push_back("i-1 word " + word(-1));
    f.push_back("i-1 suffix " + suffix(word(-1), 3));
    f.push_back("i-2 word " + word(-2));
    f.push_back("i+1 word " + word(1));
    f.push_back("i+1 suffix " + suffix(word(1), 3));
    f.push_back("i+2 word " + word(2));
    return f;
  }

  size_t argmax(const std::vector<std::string>& feats) const {
    Scores s{};
    for (const auto& f : feats) {
      auto it = weights_.find(f);
      if (it == weights_.end()) continue;
      for (size_t c = 0; c < kClasses; ++c) s[c] += it->second[c];
    }
    size_t best = 0;
    for (size_t c = 1; c < kClasses; ++c)
      if (s[c] > s[best]) best = c;
    return best;
  }

  void build_tagdict(const std::vector<TaggedSentence>& data) {
    std::unordered_map<std::string, std::map<std::string, int>> counts;
    for (const auto& s : data)
      for (size_t i = 0; i < s.words.size(); ++i) ++counts[s.words[i]][s.tags[i]];
    for (const auto& [word, tags] : counts) {
      int total = 0, best = 0;
      std::string best_tag;
      for (const auto& [t, c] : tags) {
        total += c;
        if (c > best) best = c, best_tag = t;
      }
      if (total >= 20 && double(best) / total >= 0.97) tagdict_[word] = best_tag;
    }
  }

  std::optional<std::string> lookup_tagdict(const std::string& word) const {
    auto it = tagdict_.find(word);
    if (it == tagdict_.end()) return std::nullopt;
    return it->second;
  }

  struct Trainer {
    std::unordered_map<std::string, Scores> totals;
    std::unordered_map<std::string, std::array<long, kClasses>> stamps;
    long instances = 0;

    void update(std::unordered_map<std::string, Scores>& w, size_t truth, size_t guess,
                const std::vector<std::string>& feats) {
      ++instances;
      if (truth == guess) return;
      for (const auto& f : feats) {
        auto& row = w[f];
        auto& tot = totals[f];
        auto& st = stamps[f];
        for (size_t c : {truth, guess}) {
          tot[c] += double(instances - st[c]) * row[c];
          st[c] = instances;
          row[c] += c == truth ? 1.0 : -1.0;
        }
      }
    }

    void average(std::unordered_map<std::string, Scores>& w) {
      for (auto& [f, row] : w) {
        auto& tot = totals[f];
        auto& st = stamps[f];
        for (size_t c = 0; c < kClasses; ++c) {
          double total = tot[c] + double(instances - st[c]) * row[c];
          row[c] = instances ? total / double(instances) : 0.0;
        }
      }
    }
  };

  std::unordered_map<std::string, Scores> weights_;
  std::unordered_map<std::string, std::string> tagdict_;
};

// Fills Token::pos. Pre-tagged input (every token already carries a tag)
// is validated and left alone; otherwise the model tags the sequence.
inline void pos_tag(Tokens& tokens, const PosTagger* model) {
  if (tokens.empty()) return;
  bool pretagged = true;
  for (const auto& t : tokens) pretagged = pretagged && !t.pos.empty();
  if (pretagged) {
    for (const auto& t : tokens)
      if (!is_universal_tag(t.pos)) throw ValidationError("token '" + t.surface + "' has non-universal tag " + t.pos);
    return;
  }
  if (model == nullptr || !model->trained()) throw StateError("untrained POS model and no external tags");
  model->tag(tokens);
}

}  // namespace pepper
