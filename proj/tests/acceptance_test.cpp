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

// Acceptance run: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pepper/chunker/chunker.hpp"
#include "pepper/corpus/io.hpp"
#include "pepper/corpus/split.hpp"
#include "pepper/corpus/synthetic.hpp"
#include "pepper/docclf/ablate.hpp"
#include "pepper/ensemble/ensemble.hpp"
#include "pepper/eval/metrics.hpp"
#include "pepper/stats/contingency.hpp"
#include "pepper/stats/gee.hpp"
#include "pepper/stats/simulate.hpp"

using namespace pepper;
using namespace pepper::stats;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// --- 1: paired-prediction arithmetic ---------------------------------------

Outcome paired_counts() {
  const long cells[4] = {8573, 9858, 4295, 336242};
  std::vector<PredictionRecord> records;
  records.reserve(358968);
  long id = 0;
  for (int c = 0; c < 4; ++c)
    for (long i = 0; i < cells[c]; ++i)
      records.push_back(make_prediction("r" + std::to_string(id++), c == 0 || c == 1, c == 0 || c == 2));
  auto pc = paired_confusion(records);
  long retained = 0;
  for (const auto& r : records) retained += r.ensemble2 != Vote::abstain;
  double pct = 100.0 * pc.disagreement_rate();
  bool ok = pc.total() == 358968 && std::abs(pct - 3.943) <= 0.001 && pc.ensemble2_retained() == 344815 &&
            retained == 344815;
  return {ok, fmt("rate %.4f%% (%ld / %ld), retained %ld", pct, pc.disagreements(), pc.total(), retained)};
}

// --- 2: gender x objectification chi-square --------------------------------

Outcome gender_chisq() {
  long f = 11192, m = 16967;
  long f_pos = std::lround(0.184 * double(f)), m_pos = std::lround(0.210 * double(m));
  std::vector<std::pair<Gender, bool>> flags;
  for (long i = 0; i < f; ++i) flags.emplace_back(Gender::female, i < f_pos);
  for (long i = 0; i < m; ++i) flags.emplace_back(Gender::male, i < m_pos);
  auto pt = professor_table_from_flags(flags);
  auto r = chi_square_independence(pt.table);
  bool ok = r.chi2 >= 16.5 && r.chi2 <= 19.0 && r.p_value < 0.01;
  return {ok, fmt("chi2 %.2f p %.2e on [[%ld, %ld], [%ld, %ld]], target [16.5, 19.0]", r.chi2, r.p_value,
                  pt.table.counts[0][0], pt.table.counts[0][1], pt.table.counts[1][0], pt.table.counts[1][1])};
}

// --- 3: GEE against an independent logistic fit -----------------------------

GeeData singleton_data(uint64_t seed, size_t n = 400) {
  Rng rng(seed);
  GeeData d;
  d.names = {"(Intercept)", "a", "b", "c"};
  d.X.resize(Eigen::Index(n), 4);
  d.y.resize(Eigen::Index(n));
  for (size_t i = 0; i < n; ++i) {
    double a = rng.normal(), b = rng.bernoulli(0.4), c = rng.uniform() * 3.0;
    d.X.row(Eigen::Index(i)) << 1.0, a, b, c;
    double mu = 1.0 / (1.0 + std::exp(-(-0.5 + 0.7 * a - 0.4 * b + 0.3 * c)));
    d.y[Eigen::Index(i)] = rng.bernoulli(mu);
    d.cluster.push_back(long(i));
  }
  return d;
}

Outcome gee_vs_glm() {
  double worst = 0;
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    auto d = singleton_data(seed);
    oracle::Matrix x(size_t(d.X.rows()), std::vector<double>(size_t(d.X.cols())));
    std::vector<double> y(size_t(d.X.rows()));
    for (Eigen::Index i = 0; i < d.X.rows(); ++i) {
      for (Eigen::Index j = 0; j < d.X.cols(); ++j) x[size_t(i)][size_t(j)] = d.X(i, j);
      y[size_t(i)] = d.y[i];
    }
    auto ref = oracle::logistic_mle(x, y);
    auto fit = fit_gee(d, {WorkingCorrelation::independence});
    for (size_t j = 0; j < ref.size(); ++j) worst = std::max(worst, std::abs(fit.coefficients[j].estimate - ref[j]));
  }
  return {worst <= 1e-6, fmt("max |diff| %.2e over 5 datasets", worst)};
}

// --- 4: clustered recovery ---------------------------------------------------

Outcome gee_recovery() {
  const int reps = 20;
  std::vector<int> covered(3, 0);
  int alpha_ok = 0;
  double amin = 1, amax = -1;
  for (int s = 1; s <= reps; ++s) {
    ClusteredSimSpec spec;
    spec.seed = uint64_t(1000 + s);
    auto fit = fit_gee(simulate_clustered(spec));
    for (size_t j = 0; j < 3; ++j)
      covered[j] += std::abs(fit.coefficients[j].estimate - spec.beta[j]) <= 3 * fit.coefficients[j].robust_se;
    alpha_ok += fit.alpha >= 0.1 && fit.alpha <= 0.3;
    amin = std::min(amin, fit.alpha);
    amax = std::max(amax, fit.alpha);
  }
  const int need = int(std::ceil(0.95 * reps));
  bool ok = alpha_ok >= need;
  for (int c : covered) ok = ok && c >= need;
  return {ok, fmt("within 3 SE %d/%d/%d of %d, alpha in range %d/%d (%.3f..%.3f)", covered[0], covered[1],
                  covered[2], reps, alpha_ok, reps, amin, amax)};
}

// --- 5: trend generator ------------------------------------------------------

Outcome trend_structure() {
  const int reps = 100;
  int hits = 0;
  for (int s = 1; s <= reps; ++s) {
    TrendSimSpec spec;
    spec.seed = uint64_t(5000 + s);
    auto fit = fit_gee(simulate_trend(spec));
    const auto& c = fit.at("pepperAbsent");
    hits += c.estimate < 0 && c.p_value < 0.05;
  }
  return {hits >= 95, fmt("pepperAbsent negative with p < .05 in %d/%d", hits, reps)};
}

// --- 6: metric and kappa oracles ---------------------------------------------

bool close(const Metric& m, std::optional<double> want) {
  if (m.defined() != want.has_value()) return false;
  return !want || std::abs(*m.value - *want) <= 1e-12;
}

Outcome metric_oracles() {
  Rng rng(42);
  int bad = 0;
  for (int t = 0; t < 1000; ++t) {
    long c[4];
    for (auto& v : c) v = long(rng.index(60));
    if (c[0] + c[1] + c[2] + c[3] == 0) c[3] = 1;
    std::vector<bool> pred, gold;
    for (int k = 0; k < 4; ++k)
      for (long i = 0; i < c[k]; ++i) {
        pred.push_back(k == 0 || k == 1);
        gold.push_back(k == 0 || k == 2);
      }
    std::vector<size_t> order(pred.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<bool> p(pred.size()), g(pred.size());
    for (size_t i = 0; i < order.size(); ++i) {
      p[i] = pred[order[i]];
      g[i] = gold[order[i]];
    }
    double tp = double(c[0]), fp = double(c[1]), fn = double(c[2]), tn = double(c[3]);
    double n = tp + fp + fn + tn;
    std::optional<double> prec, rec, f1, kappa;
    if (tp + fp > 0) prec = tp / (tp + fp);
    if (tp + fn > 0) rec = tp / (tp + fn);
    if (prec && rec && *prec + *rec > 0) f1 = 2 * *prec * *rec / (*prec + *rec);
    else if (tp + fp + fn > 0) f1 = 0.0;
    // Brute force over the 2x2 label grid.
    double po = 0, pe = 0;
    for (int la = 0; la < 2; ++la) {
      double na = 0, nb = 0, both = 0;
      for (size_t i = 0; i < p.size(); ++i) {
        na += p[i] == bool(la);
        nb += g[i] == bool(la);
        both += p[i] == bool(la) && g[i] == bool(la);
      }
      po += both / n;
      pe += (na / n) * (nb / n);
    }
    if (std::abs(1 - pe) > 1e-15) kappa = (po - pe) / (1 - pe);

    auto r = score(p, g);
    bool ok = r.tp == c[0] && r.fp == c[1] && r.fn == c[2] && r.tn == c[3];
    ok = ok && close(r.precision, prec) && close(r.recall, rec) && close(r.f1, f1) &&
         close(r.accuracy, (tp + tn) / n) && close(r.kappa, kappa) && close(cohen_kappa(p, g), kappa);

    auto ba = cohen_kappa(g, p);
    ok = ok && close(ba, cohen_kappa(p, g).value);
    std::vector<bool> pc(p.size()), gc(g.size());
    for (size_t i = 0; i < p.size(); ++i) {
      pc[i] = !p[i];
      gc[i] = !g[i];
    }
    ok = ok && close(cohen_kappa(pc, gc), kappa);
    auto rc = score(pc, gc);
    ok = ok && rc.tp == r.tn && rc.fp == r.fn && close(rc.accuracy, r.accuracy.value);
    auto self = cohen_kappa(p, p);
    bool constant = tp + fp == 0 || fn + tn == 0;
    ok = ok && (constant ? !self.defined() : close(self, 1.0));
    bad += !ok;
  }
  return {bad == 0, fmt("%d/1000 tables disagree", bad)};
}

// --- 7: pipeline on the synthetic corpus -------------------------------------

struct Pipeline {
  std::vector<LabeledReview> corpus, train, dev;
  ChunkModel chunker;
  DocModel doc;
};

std::vector<LabeledReview> synthetic(size_t n, uint64_t seed, double rate) {
  SyntheticSpec spec;
  spec.n_reviews = n;
  spec.positive_rate = rate;
  spec.seed = seed;
  auto c = generate_synthetic_corpus(spec);
  for (auto& lr : c) annotate(lr.tokens);
  return c;
}

const Pipeline& pipeline() {
  static const Pipeline p = [] {
    Pipeline x;
    x.corpus = synthetic(1000, 7, 0.1);
    std::tie(x.train, x.dev) = apply_split(x.corpus, split_train_dev(x.corpus, 7));
    x.chunker = ChunkModel::train(x.train);
    x.doc = DocModel::train(x.train);
    return x;
  }();
  return p;
}

Outcome pipeline_fit() {
  const auto& p = pipeline();
  std::vector<bool> tp, tg;
  for (const auto& lr : p.train) {
    auto tags = p.chunker.decode(lr.tokens);
    for (size_t i = 0; i < tags.size(); ++i) {
      tp.push_back(tags[i] != Iob::O);
      tg.push_back(lr.iob[i] != Iob::O);
    }
  }
  double token_f1 = *score(tp, tg).f1.value;

  std::vector<bool> dp, dg;
  std::set<std::string> chunk_pos, doc_pos, ens1_pos;
  for (const auto& lr : p.dev) {
    bool d = p.doc.predict(lr.tokens).label;
    bool c = any_chunk(p.chunker.decode(lr.tokens));
    dp.push_back(d);
    dg.push_back(lr.doc_label);
    auto rec = make_prediction(lr.review.review_id, c, d);
    if (c) chunk_pos.insert(rec.review_id);
    if (d) doc_pos.insert(rec.review_id);
    if (rec.ensemble1) ens1_pos.insert(rec.review_id);
  }
  auto dev_f1 = score(dp, dg).f1;
  std::set<std::string> both;
  std::set_intersection(chunk_pos.begin(), chunk_pos.end(), doc_pos.begin(), doc_pos.end(),
                        std::inserter(both, both.end()));

  auto rows = ablate(p.train, p.dev, {},
                     {parse_subset("all"),
                      parse_subset("familiarity+readability+formality+pronouns+polarity+subjectivity+style")});
  double full = rows[0].report.f1.value.value_or(0), nolex = rows[1].report.f1.value.value_or(0);

  bool ok = token_f1 >= 0.95 && dev_f1.defined() && *dev_f1.value >= 0.90 && ens1_pos == both && full >= nolex;
  return {ok, fmt("chunker train token F1 %.3f, doc dev F1 %s, ensemble-1 = intersection %s (%zu), "
                  "F1 full %.3f vs no-lexical %.3f",
                  token_f1, dev_f1.str().c_str(), ens1_pos == both ? "yes" : "no", both.size(), full, nolex)};
}

// --- 8: determinism and round trips -----------------------------------------

Outcome determinism() {
  auto data = synthetic(300, 11, 0.2);
  ChunkerConfig cc;
  cc.epochs = 5;
  cc.seed = 3;
  DocConfig dc;
  dc.svm.epochs = 10;
  dc.svm.seed = 3;
  auto dir = std::filesystem::temp_directory_path() / "pepper-acceptance";
  std::filesystem::create_directories(dir);
  auto path = [&](const char* n) { return (dir / n).string(); };
  ChunkModel::train(data, cc).save(path("c1.json"));
  ChunkModel::train(data, cc).save(path("c2.json"));
  DocModel::train(data, dc).save(path("d1.json"));
  DocModel::train(data, dc).save(path("d2.json"));
  bool bytes = str::read_file(path("c1.json")) == str::read_file(path("c2.json")) &&
               str::read_file(path("d1.json")) == str::read_file(path("d2.json"));

  bool models = ChunkModel::load(path("c1.json")).to_json().dump() + "\n" == str::read_file(path("c1.json")) &&
                DocModel::load(path("d1.json")).to_json().dump() + "\n" == str::read_file(path("d1.json"));
  std::filesystem::remove_all(dir);

  auto reviews = reviews_of(data);
  bool corpus = true;
  for (auto f : {CorpusFormat::jsonl, CorpusFormat::csv}) {
    auto back = parse_corpus(write_corpus_string(reviews, f), f);
    corpus = corpus && back.reviews == reviews && back.rejected.empty();
  }

  auto hot = default_lexicon(LexiconName::hot);
  bool elong = lexicon_match(tokenize("hoooottt"), hot) == std::set<size_t>{0} &&
               lexicon_match(tokenize("hotttttt"), hot) == std::set<size_t>{0};
  return {bytes && models && corpus && elong,
          fmt("byte-identical models %s, model round trip %s, corpus round trip %s, elongation %s",
              bytes ? "yes" : "no", models ? "yes" : "no", corpus ? "yes" : "no", elong ? "yes" : "no")};
}

// --- 9: gradients and scaling ------------------------------------------------

Outcome gradients() {
  Rng rng(9);
  const double h = 1e-6;
  double worst_svm = 0, worst_lr = 0;

  std::vector<SvmExample> ex;
  for (int i = 0; i < 30; ++i) {
    SvmExample e;
    for (uint32_t j = 0; j < 5; ++j) e.x.emplace_back(j, rng.normal());
    e.y = rng.bernoulli(0.3) ? 1 : -1;
    ex.push_back(e);
  }
  auto cw = svm_class_weights(ex);
  for (int checked = 0; checked < 100;) {
    SvmParams p;
    for (int j = 0; j < 6; ++j) p.w.push_back(rng.normal());
    bool near_kink = false;
    for (const auto& e : ex) near_kink = near_kink || std::abs(1.0 - e.y * svm_margin(p, e.x)) < 1e-4;
    if (near_kink) continue;
    ++checked;
    auto g = svm_subgradient(ex, p, 0.05, cw);
    for (size_t j = 0; j < p.w.size(); ++j) {
      auto hi = p, lo = p;
      hi.w[j] += h;
      lo.w[j] -= h;
      double fd = (svm_objective(ex, hi, 0.05, cw) - svm_objective(ex, lo, 0.05, cw)) / (2 * h);
      worst_svm = std::max(worst_svm, std::abs(g[j] - fd));
    }
  }

  ChunkDataset d;
  const size_t F = 6;
  for (int i = 0; i < 40; ++i) {
    ChunkExample e;
    for (uint32_t j = 0; j < F; ++j)
      if (rng.bernoulli(0.4)) e.features.push_back(j);
    e.label = uint8_t(rng.index(3));
    d.examples.push_back(e);
  }
  d.class_weight = inverse_frequency_weights(d.examples);
  for (int point = 0; point < 100; ++point) {
    ChunkParams p(F);
    for (auto& v : p.w) v = rng.normal();
    for (auto& v : p.bias) v = rng.normal();
    auto g = chunk_gradient(d, p, 0.3);
    auto check = [&](double& slot, double grad) {
      double keep = slot;
      slot = keep + h;
      double up = chunk_objective(d, p, 0.3);
      slot = keep - h;
      double down = chunk_objective(d, p, 0.3);
      slot = keep;
      worst_lr = std::max(worst_lr, std::abs(grad - (up - down) / (2 * h)));
    };
    for (size_t k = 0; k < p.w.size(); ++k) check(p.w[k], g.w[k]);
    for (size_t c = 0; c < p.bias.size(); ++c) check(p.bias[c], g.bias[c]);
  }

  const auto& pl = pipeline();
  size_t dim = kDenseFeatures.size();
  std::vector<double> mean(dim, 0.0), sq(dim, 0.0);
  for (const auto& lr : pl.train) {
    auto x = pl.doc.scaling().apply(dense_features(lr.tokens));
    for (size_t j = 0; j < dim; ++j) mean[j] += x[j];
  }
  for (auto& m : mean) m /= double(pl.train.size());
  for (const auto& lr : pl.train) {
    auto x = pl.doc.scaling().apply(dense_features(lr.tokens));
    for (size_t j = 0; j < dim; ++j) sq[j] += (x[j] - mean[j]) * (x[j] - mean[j]);
  }
  double worst_scale = 0;
  for (size_t j = 0; j < dim; ++j) {
    if (pl.doc.scaling().constant[j]) continue;
    worst_scale = std::max({worst_scale, std::abs(mean[j]),
                            std::abs(std::sqrt(sq[j] / double(pl.train.size())) - 1.0)});
  }
  bool ok = worst_svm <= 1e-5 && worst_lr <= 1e-5 && worst_scale <= 1e-9;
  return {ok, fmt("max FD gap svm %.1e, logistic %.1e; scaling error %.1e", worst_svm, worst_lr, worst_scale)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "paired predictions", 1, paired_counts},
      {2, "gender chi-square", 1, gender_chisq},
      {3, "GEE vs logistic oracle", 30, gee_vs_glm},
      {4, "GEE clustered recovery", 300, gee_recovery},
      {5, "trend generator", 600, trend_structure},
      {6, "metric and kappa oracles", 10, metric_oracles},
      {7, "synthetic pipeline", 120, pipeline_fit},
      {8, "determinism and round trips", 120, determinism},
      {9, "gradients and scaling", 120, gradients},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs < c.budget_s;
    bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("criterion %d %-28s %s  %.2fs  %s%s\n", c.id, c.name, pass ? "PASS" : "FAIL", secs, o.detail.c_str(),
                in_time ? "" : " (over time budget)");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
