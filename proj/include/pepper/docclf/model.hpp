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

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pepper/corpus/review.hpp"
#include "pepper/docclf/features.hpp"
#include "pepper/docclf/svm.hpp"
#include "pepper/docclf/tfidf.hpp"
#include "pepper/textproc/analyze.hpp"
#include "pepper/util/error.hpp"
#include "pepper/util/strings.hpp"

namespace pepper {

inline constexpr int kDocFormatVersion = 1;

struct DocConfig {
  SvmConfig svm;
  size_t min_df = 2;
  bool use_tfidf = true;
  FeatureMask mask = FeatureMask::all();
};

struct DocPrediction {
  bool label = false;
  double margin = 0.0;
};

// Mean and population standard deviation of each dense feature on the
// training split. Constant features scale to 0.
struct DenseScaling {
  std::vector<double> mean;
  std::vector<double> stdev;
  std::vector<bool> constant;

  static DenseScaling fit(const std::vector<std::vector<double>>& rows) {
    size_t d = kDenseFeatures.size();
    DenseScaling s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0), std::vector<bool>(d, false)};
    if (rows.empty()) throw ValidationError("cannot fit scaling on zero documents");
    for (const auto& r : rows)
      for (size_t j = 0; j < d; ++j) s.mean[j] += r[j];
    for (auto& m : s.mean) m /= double(rows.size());
    for (const auto& r : rows)
      for (size_t j = 0; j < d; ++j) s.stdev[j] += (r[j] - s.mean[j]) * (r[j] - s.mean[j]);
    for (size_t j = 0; j < d; ++j) {
      s.stdev[j] = std::sqrt(s.stdev[j] / double(rows.size()));
      s.constant[j] = s.stdev[j] <= 1e-12 * std::max(1.0, std::abs(s.mean[j]));
    }
    return s;
  }

  std::vector<double> apply(const std::vector<double>& raw) const {
    std::vector<double> out(raw.size());
    for (size_t j = 0; j < raw.size(); ++j) out[j] = constant[j] ? 0.0 : (raw[j] - mean[j]) / stdev[j];
    return out;
  }
};

inline Tokens annotated_tokens(const LabeledReview& lr, const PosTagger* tagger) {
  Tokens toks = lr.tokens.empty() && !lr.review.text.empty() ? tokenize(lr.review.text) : lr.tokens;
  if (!toks.empty() && (toks.front().pos.empty() || toks.front().lemma.empty())) annotate(toks, tagger);
  return toks;
}

class DocModel {
 public:
  DocModel() = default;

  static DocModel train(const std::vector<LabeledReview>& corpus, const DocConfig& cfg = {},
                        const PosTagger* tagger = nullptr, const FeatureResources& res = {}) {
    std::vector<Tokens> docs;
    std::vector<int> y;
    for (const auto& lr : corpus) {
      docs.push_back(annotated_tokens(lr, tagger));
      y.push_back(lr.doc_label ? 1 : -1);
    }
    return train_tokens(docs, y, cfg, res);
  }

  static DocModel train_tokens(const std::vector<Tokens>& docs, const std::vector<int>& y, const DocConfig& cfg,
                               const FeatureResources& res = {}) {
    if (docs.size() != y.size()) throw ValidationError("documents and labels differ in length");
    DocModel m;
    m.cfg_ = cfg;
    m.res_ = res;
    if (cfg.use_tfidf) m.vocab_ = TfidfVocabulary::build(docs, cfg.min_df);
    std::vector<std::vector<double>> raw;
    for (const auto& d : docs) raw.push_back(dense_features(d, res));
    m.scaling_ = DenseScaling::fit(raw);

    std::vector<SvmExample> ex;
    for (size_t i = 0; i < docs.size(); ++i) ex.push_back({m.combine(m.vocab_.transform(docs[i]), raw[i]), y[i]});
    auto fit = train_svm(ex, m.dim(), cfg.svm);
    m.params_ = fit.params;
    m.objective_history_ = fit.objective_history;
    m.lambda_ = fit.lambda;
    m.class_weights_ = fit.class_weights;
    if (m.vocab_.empty() && cfg.mask.groups().empty()) {
      // No features at all: the hinge objective is flat in the bias, so
      // fall back to the training majority class.
      long pos = 0;
      for (int v : y) pos += v > 0;
      std::fill(m.params_.w.begin(), m.params_.w.end(), 0.0);
      m.params_.w.back() = 2 * pos > long(y.size()) ? 1.0 : 0.0;
    }
    m.trained_ = true;
    return m;
  }

  bool trained() const { return trained_; }
  size_t dim() const { return vocab_.size() + kDenseFeatures.size(); }
  const TfidfVocabulary& vocabulary() const { return vocab_; }
  const DenseScaling& scaling() const { return scaling_; }
  const SvmParams& params() const { return params_; }
  SvmParams& mutable_params() { return params_; }
  const DocConfig& config() const { return cfg_; }
  const std::vector<double>& objective_history() const { return objective_history_; }
  const SvmWeights& class_weights() const { return class_weights_; }
  double lambda() const { return lambda_; }

  // Combined feature vector: tf-idf block then the scaled, masked dense block.
  SparseVector vectorize(const Tokens& tokens) const {
    return combine(vocab_.transform(tokens), dense_features(tokens, res_));
  }

  DocPrediction predict(const Tokens& tokens) const {
    if (!trained_) throw StateError("document model is not trained");
    double m = svm_margin(params_, vectorize(tokens));
    return {m > 0.0, m};
  }

  DocPrediction predict_text(std::string_view text, const PosTagger* tagger = nullptr) const {
    return predict(analyze(text, tagger));
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["format_version"] = kDocFormatVersion;
    j["kind"] = "doc_model";
    j["idf_formula"] = "ln((1+N)/(1+df))+1";
    j["vocab"] = vocab_.terms();
    j["document_frequencies"] = vocab_.document_frequencies();
    j["n_docs"] = vocab_.n_docs();
    j["idf"] = vocab_.idf();
    j["dense_feature_names"] = dense_feature_names();
    j["scaling"] = {{"mean", scaling_.mean}, {"stdev", scaling_.stdev}, {"constant", scaling_.constant}};
    j["weights"] = std::vector<double>(params_.w.begin(), params_.w.end() - 1);
    j["bias"] = params_.bias();
    j["config"] = {{"C", cfg_.svm.C},
                   {"epochs", cfg_.svm.epochs},
                   {"batch_size", cfg_.svm.batch_size},
                   {"seed", cfg_.svm.seed},
                   {"class_weighting", cfg_.svm.class_weighting},
                   {"min_df", cfg_.min_df},
                   {"use_tfidf", cfg_.use_tfidf},
                   {"feature_groups", cfg_.mask.groups()}};
    j["class_weights"] = {{"positive", class_weights_.pos}, {"negative", class_weights_.neg}};
    j["objective_history"] = objective_history_;
    return j;
  }

  static DocModel from_json(const nlohmann::json& j) {
    try {
      if (j.at("format_version").get<int>() != kDocFormatVersion) throw ValidationError("unsupported doc model version");
      if (j.at("dense_feature_names").get<std::vector<std::string>>() != dense_feature_names())
        throw ValidationError("dense feature layout differs from this build");
      DocModel m;
      m.vocab_ = TfidfVocabulary::from_parts(j.at("n_docs").get<size_t>(), j.at("vocab").get<std::vector<std::string>>(),
                                             j.at("document_frequencies").get<std::vector<size_t>>());
      const auto& s = j.at("scaling");
      m.scaling_.mean = s.at("mean").get<std::vector<double>>();
      m.scaling_.stdev = s.at("stdev").get<std::vector<double>>();
      m.scaling_.constant = s.at("constant").get<std::vector<bool>>();
      if (m.scaling_.mean.size() != kDenseFeatures.size() || m.scaling_.stdev.size() != kDenseFeatures.size() ||
          m.scaling_.constant.size() != kDenseFeatures.size())
        throw ValidationError("scaling vectors have the wrong length");
      auto w = j.at("weights").get<std::vector<double>>();
      if (w.size() != m.dim()) throw ValidationError("weight vector length differs from feature space");
      w.push_back(j.at("bias").get<double>());
      for (double v : w)
        if (!std::isfinite(v)) throw ValidationError("non-finite weight");
      m.params_.w = std::move(w);
      const auto& c = j.at("config");
      m.cfg_.svm.C = c.at("C").get<double>();
      m.cfg_.svm.epochs = c.at("epochs").get<int>();
      m.cfg_.svm.batch_size = c.at("batch_size").get<size_t>();
      m.cfg_.svm.seed = c.at("seed").get<uint64_t>();
      m.cfg_.svm.class_weighting = c.at("class_weighting").get<bool>();
      m.cfg_.min_df = c.at("min_df").get<size_t>();
      m.cfg_.use_tfidf = c.at("use_tfidf").get<bool>();
      m.cfg_.mask = FeatureMask(c.at("feature_groups").get<std::set<std::string>>());
      m.class_weights_ = {j.at("class_weights").at("positive").get<double>(),
                          j.at("class_weights").at("negative").get<double>()};
      m.objective_history_ = j.value("objective_history", std::vector<double>{});
      m.trained_ = true;
      return m;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("malformed doc model: ") + e.what());
    }
  }

  void save(const std::string& path) const { str::write_file(path, to_json().dump() + "\n"); }
  static DocModel load(const std::string& path) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(str::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(path + ": " + e.what());
    }
    return from_json(j);
  }

 private:
  SparseVector combine(SparseVector sparse, const std::vector<double>& raw_dense) const {
    auto dense = scaling_.apply(raw_dense);
    apply_mask(dense, cfg_.mask);
    uint32_t off = uint32_t(vocab_.size());
    for (size_t j = 0; j < dense.size(); ++j)
      if (dense[j] != 0.0) sparse.emplace_back(off + uint32_t(j), dense[j]);
    return sparse;
  }

  DocConfig cfg_;
  FeatureResources res_;
  TfidfVocabulary vocab_;
  DenseScaling scaling_;
  SvmParams params_;
  SvmWeights class_weights_;
  double lambda_ = 0;
  std::vector<double> objective_history_;
  bool trained_ = false;
};

}  // namespace pepper
