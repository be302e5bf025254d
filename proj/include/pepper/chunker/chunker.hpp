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

// IOB chunk tagger: multinomial logistic regression over sparse indicator
// features, trained with teacher forcing and decoded greedily left to right.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "pepper/chunker/features.hpp"
#include "pepper/corpus/review.hpp"
#include "pepper/textproc/analyze.hpp"
#include "pepper/util/error.hpp"
#include "pepper/util/rng.hpp"
#include "pepper/util/strings.hpp"

namespace pepper {

inline constexpr int kChunkFormatVersion = 1;
inline constexpr size_t kIobClasses = 3;  // O, B, I in this order

struct ChunkerConfig {
  double l2_lambda = 1e-4;
  int epochs = 20;
  double learning_rate = 0.1;
  uint64_t seed = 0;
  size_t batch_size = 4;
  bool class_weighting = true;  // inverse-frequency loss weights
};

struct ChunkExample {
  std::vector<uint32_t> features;
  uint8_t label = 0;
};

struct ChunkDataset {
  std::vector<ChunkExample> examples;
  std::array<double, kIobClasses> class_weight{1.0, 1.0, 1.0};
};

// Class-major weights: w[c * n_features + j].
struct ChunkParams {
  size_t n_features = 0;
  std::vector<double> w;
  std::array<double, kIobClasses> bias{};

  explicit ChunkParams(size_t f = 0) : n_features(f), w(kIobClasses * f, 0.0) {}
  double& at(size_t c, size_t j) { return w[c * n_features + j]; }
  double at(size_t c, size_t j) const { return w[c * n_features + j]; }
  bool operator==(const ChunkParams&) const = default;
};

inline std::array<double, kIobClasses> class_scores(const ChunkParams& p, const std::vector<uint32_t>& feats) {
  std::array<double, kIobClasses> s = p.bias;
  for (size_t c = 0; c < kIobClasses; ++c)
    for (auto j : feats) s[c] += p.at(c, j);
  return s;
}

inline std::array<double, kIobClasses> softmax(const std::array<double, kIobClasses>& s) {
  double m = *std::max_element(s.begin(), s.end());
  std::array<double, kIobClasses> p{};
  double z = 0;
  for (size_t c = 0; c < kIobClasses; ++c) z += (p[c] = std::exp(s[c] - m));
  for (auto& v : p) v /= z;
  return p;
}

// Weighted mean cross-entropy plus (lambda / 2) * ||w||^2; biases are not
// penalised.
inline double chunk_objective(const ChunkDataset& d, const ChunkParams& p, double lambda) {
  double loss = 0;
  for (const auto& ex : d.examples) {
    auto s = class_scores(p, ex.features);
    double m = *std::max_element(s.begin(), s.end());
    double z = 0;
    for (double v : s) z += std::exp(v - m);
    loss += d.class_weight[ex.label] * (m + std::log(z) - s[ex.label]);
  }
  if (!d.examples.empty()) loss /= double(d.examples.size());
  double reg = 0;
  for (double v : p.w) reg += v * v;
  return loss + 0.5 * lambda * reg;
}

inline ChunkParams chunk_gradient(const ChunkDataset& d, const ChunkParams& p, double lambda) {
  ChunkParams g(p.n_features);
  double inv_n = d.examples.empty() ? 0.0 : 1.0 / double(d.examples.size());
  for (const auto& ex : d.examples) {
    auto pr = softmax(class_scores(p, ex.features));
    for (size_t c = 0; c < kIobClasses; ++c) {
      double r = d.class_weight[ex.label] * (pr[c] - (c == ex.label ? 1.0 : 0.0)) * inv_n;
      g.bias[c] += r;
      for (auto j : ex.features) g.at(c, j) += r;
    }
  }
  for (size_t k = 0; k < p.w.size(); ++k) g.w[k] += lambda * p.w[k];
  return g;
}

inline std::array<double, kIobClasses> inverse_frequency_weights(const std::vector<ChunkExample>& ex) {
  std::array<double, kIobClasses> n{};
  for (const auto& e : ex) n[e.label] += 1;
  std::array<double, kIobClasses> w{1.0, 1.0, 1.0};
  for (size_t c = 0; c < kIobClasses; ++c)
    if (n[c] > 0) w[c] = double(ex.size()) / (double(kIobClasses) * n[c]);
  return w;
}

// Restores IOB well-formedness: an I with no open chunk starts one.
inline void repair_iob(std::vector<Iob>& tags) {
  Iob prev = Iob::O;
  for (auto& t : tags) {
    if (t == Iob::I && prev == Iob::O) t = Iob::B;
    prev = t;
  }
}

inline bool doc_label(const std::vector<Iob>& iob) { return any_chunk(iob); }

class ChunkModel {
 public:
  ChunkModel() = default;

  // Tokens of each review are tagged and lemmatized here when they are not
  // already.
  static ChunkModel train(const std::vector<LabeledReview>& corpus, const ChunkerConfig& cfg = {},
                          const Lexicon& hot = default_lexicon(LexiconName::hot), const PosTagger* tagger = nullptr) {
    if (cfg.epochs < 0 || !(cfg.learning_rate > 0) || !(cfg.l2_lambda >= 0) || cfg.batch_size == 0)
      throw ValidationError("invalid chunker configuration");
    ChunkModel m;
    m.cfg_ = cfg;
    m.hot_ = hot;
    bool any_pos = false;
    std::vector<std::vector<TokenFeatures>> feats;
    std::vector<const std::vector<Iob>*> gold;
    for (const auto& lr : corpus) {
      if (lr.iob.size() != lr.tokens.size()) throw ValidationError("iob length mismatch in " + lr.review.review_id);
      Tokens toks = lr.tokens;
      if (!toks.empty() && (toks.front().pos.empty() || toks.front().lemma.empty())) annotate(toks, tagger);
      feats.push_back(extract_features(toks, lr.iob, m.hot_));
      gold.push_back(&lr.iob);
      any_pos = any_pos || any_chunk(lr.iob);
    }
    if (!any_pos) throw ValidationError("no positive spans");

    for (auto name : kCategoricalFeatures) m.intern(unk_feature(name));
    for (const auto& seq : feats)
      for (const auto& f : seq)
        for (auto& s : feature_strings(f)) m.intern(s);

    ChunkDataset data;
    for (size_t r = 0; r < feats.size(); ++r)
      for (size_t i = 0; i < feats[r].size(); ++i)
        data.examples.push_back({m.encode(feats[r][i]), uint8_t((*gold[r])[i])});
    if (cfg.class_weighting) data.class_weight = inverse_frequency_weights(data.examples);
    m.class_weight_ = data.class_weight;
    m.params_ = ChunkParams(m.vocab_.size());
    m.fit(data);
    m.trained_ = true;
    return m;
  }

  bool trained() const { return trained_; }
  const ChunkerConfig& config() const { return cfg_; }
  const ChunkParams& params() const { return params_; }
  ChunkParams& mutable_params() { return params_; }
  const std::vector<std::string>& vocabulary() const { return vocab_; }
  const std::vector<double>& loss_history() const { return loss_history_; }
  const std::vector<double>& learning_rates() const { return lr_history_; }
  const std::array<double, kIobClasses>& class_weights() const { return class_weight_; }
  const Lexicon& hot_lexicon() const { return hot_; }

  std::optional<uint32_t> feature_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Unseen categorical values fall back to the UNK entry of their feature.
  std::vector<uint32_t> encode(const TokenFeatures& f) const {
    std::vector<uint32_t> out;
    for (const auto& s : feature_strings(f)) {
      auto it = index_.find(s);
      if (it != index_.end()) {
        out.push_back(it->second);
        continue;
      }
      auto eq = s.find('=');
      if (eq == std::string::npos) continue;
      auto unk = index_.find(unk_feature(std::string_view(s).substr(0, eq)));
      if (unk != index_.end()) out.push_back(unk->second);
    }
    return out;
  }

  std::array<double, kIobClasses> scores(const TokenFeatures& f) const { return class_scores(params_, encode(f)); }

  // Greedy decode over tagged tokens. Ties go to the earlier class in
  // O, B, I order; an I with no open chunk is emitted as B.
  std::vector<Iob> decode(const Tokens& tokens) const {
    if (!trained_) throw StateError("chunk model is not trained");
    require_tagged(tokens);
    auto flags = hot_flags(tokens, hot_);
    std::vector<Iob> out;
    out.reserve(tokens.size());
    for (size_t i = 0; i < tokens.size(); ++i) {
      Iob prev = i ? out.back() : Iob::O;
      auto s = scores(features_at(tokens, i, prev, flags));
      size_t best = 0;
      for (size_t c = 1; c < kIobClasses; ++c)
        if (s[c] > s[best]) best = c;
      Iob t = Iob(best);
      if (t == Iob::I && prev == Iob::O) t = Iob::B;
      out.push_back(t);
    }
    return out;
  }

  std::vector<Iob> decode_text(std::string_view text, const PosTagger* tagger = nullptr) const {
    return decode(analyze(text, tagger));
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["format_version"] = kChunkFormatVersion;
    j["kind"] = "chunk_model";
    j["feature_vocab"] = vocab_;
    j["class_order"] = {"O", "B", "I"};
    auto w = nlohmann::json::array();
    for (size_t c = 0; c < kIobClasses; ++c)
      w.push_back(std::vector<double>(params_.w.begin() + long(c * params_.n_features),
                                      params_.w.begin() + long((c + 1) * params_.n_features)));
    j["weights"] = w;
    j["bias"] = params_.bias;
    j["class_weights"] = class_weight_;
    j["config"] = {{"l2_lambda", cfg_.l2_lambda}, {"epochs", cfg_.epochs},         {"learning_rate", cfg_.learning_rate},
                   {"seed", cfg_.seed},           {"batch_size", cfg_.batch_size}, {"class_weighting", cfg_.class_weighting}};
    j["hot_lexicon"] = hot_.entries();
    j["loss_history"] = loss_history_;
    j["learning_rates"] = lr_history_;
    return j;
  }

  static ChunkModel from_json(const nlohmann::json& j) {
    try {
      if (j.at("format_version").get<int>() != kChunkFormatVersion) throw ValidationError("unsupported chunk model version");
      if (j.at("class_order") != nlohmann::json({"O", "B", "I"})) throw ValidationError("unexpected class order");
      ChunkModel m;
      m.vocab_ = j.at("feature_vocab").get<std::vector<std::string>>();
      for (size_t i = 0; i < m.vocab_.size(); ++i)
        if (!m.index_.emplace(m.vocab_[i], uint32_t(i)).second) throw ValidationError("duplicate feature in vocabulary");
      m.params_ = ChunkParams(m.vocab_.size());
      const auto& w = j.at("weights");
      if (w.size() != kIobClasses) throw ValidationError("weights must have 3 rows");
      for (size_t c = 0; c < kIobClasses; ++c) {
        auto row = w[c].get<std::vector<double>>();
        if (row.size() != m.vocab_.size()) throw ValidationError("weight row length differs from vocabulary");
        std::copy(row.begin(), row.end(), m.params_.w.begin() + long(c * m.vocab_.size()));
      }
      m.params_.bias = j.at("bias").get<std::array<double, kIobClasses>>();
      for (double v : m.params_.w)
        if (!std::isfinite(v)) throw ValidationError("non-finite weight");
      m.class_weight_ = j.at("class_weights").get<std::array<double, kIobClasses>>();
      const auto& c = j.at("config");
      m.cfg_.l2_lambda = c.at("l2_lambda").get<double>();
      m.cfg_.epochs = c.at("epochs").get<int>();
      m.cfg_.learning_rate = c.at("learning_rate").get<double>();
      m.cfg_.seed = c.at("seed").get<uint64_t>();
      m.cfg_.batch_size = c.at("batch_size").get<size_t>();
      m.cfg_.class_weighting = c.at("class_weighting").get<bool>();
      m.hot_ = Lexicon(LexiconName::hot, j.at("hot_lexicon").get<std::vector<std::string>>());
      m.loss_history_ = j.value("loss_history", std::vector<double>{});
      m.lr_history_ = j.value("learning_rates", std::vector<double>{});
      m.trained_ = true;
      return m;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("malformed chunk model: ") + e.what());
    }
  }

  void save(const std::string& path) const { str::write_file(path, to_json().dump() + "\n"); }
  static ChunkModel load(const std::string& path) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(str::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(path + ": " + e.what());
    }
    return from_json(j);
  }

 private:
  uint32_t intern(const std::string& s) {
    auto [it, fresh] = index_.emplace(s, uint32_t(vocab_.size()));
    if (fresh) vocab_.push_back(s);
    return it->second;
  }

  // Mini-batch gradient descent. Weight decay is applied through a shared
  // scale factor (weights = scale * stored values) so each step only touches
  // the batch's active features. After every epoch the full objective is
  // evaluated; an increase undoes the epoch and halves the learning rate.
  void fit(const ChunkDataset& data) {
    Rng rng(cfg_.seed);
    std::vector<size_t> order(data.examples.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    double lr = cfg_.learning_rate, lambda = cfg_.l2_lambda;
    double prev = chunk_objective(data, params_, lambda);
    loss_history_ = {prev};
    lr_history_.clear();
    const size_t F = params_.n_features;
    std::vector<std::array<double, kIobClasses>> resid;
    for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
      ChunkParams snapshot = params_;
      rng.shuffle(order);
      double scale = 1.0;
      for (size_t start = 0; start < order.size(); start += cfg_.batch_size) {
        size_t end = std::min(order.size(), start + cfg_.batch_size);
        double inv_b = 1.0 / double(end - start);
        resid.clear();
        for (size_t k = start; k < end; ++k) {
          const auto& ex = data.examples[order[k]];
          std::array<double, kIobClasses> sc = params_.bias;
          for (size_t c = 0; c < kIobClasses; ++c) {
            double dot = 0;
            for (auto j : ex.features) dot += params_.w[c * F + j];
            sc[c] += scale * dot;
          }
          auto p = softmax(sc);
          std::array<double, kIobClasses> r{};
          for (size_t c = 0; c < kIobClasses; ++c)
            r[c] = data.class_weight[ex.label] * (p[c] - (c == ex.label ? 1.0 : 0.0)) * inv_b;
          resid.push_back(r);
        }
        scale *= 1.0 - lr * lambda;
        for (size_t k = start; k < end; ++k) {
          const auto& ex = data.examples[order[k]];
          const auto& r = resid[k - start];
          for (size_t c = 0; c < kIobClasses; ++c) {
            params_.bias[c] -= lr * r[c];
            for (auto j : ex.features) params_.w[c * F + j] -= lr * r[c] / scale;
          }
        }
        if (scale < 1e-6) {
          for (auto& v : params_.w) v *= scale;
          scale = 1.0;
        }
      }
      for (auto& v : params_.w) v *= scale;
      double loss = chunk_objective(data, params_, lambda);
      if (!std::isfinite(loss))
        throw NumericError("chunker loss became non-finite at epoch " + std::to_string(epoch + 1) +
                           " (learning rate " + std::to_string(lr) + ", previous loss " + std::to_string(prev) + ")");
      if (loss > prev) {
        params_ = std::move(snapshot);
        lr *= 0.5;
        loss = prev;
      }
      lr_history_.push_back(lr);
      loss_history_.push_back(loss);
      prev = loss;
    }
  }

  ChunkerConfig cfg_;
  Lexicon hot_ = default_lexicon(LexiconName::hot);
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, uint32_t> index_;
  ChunkParams params_;
  std::array<double, kIobClasses> class_weight_{1.0, 1.0, 1.0};
  std::vector<double> loss_history_;
  std::vector<double> lr_history_;
  bool trained_ = false;
};

}  // namespace pepper
