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

// Command-line front end. run() parses argv, dispatches to one subcommand
// and maps failures onto exit codes: 0 success, 1 validation or data error,
// 2 usage error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "pepper/chunker/chunker.hpp"
#include "pepper/corpus/io.hpp"
#include "pepper/corpus/sample.hpp"
#include "pepper/corpus/split.hpp"
#include "pepper/corpus/synthetic.hpp"
#include "pepper/docclf/ablate.hpp"
#include "pepper/docclf/model.hpp"
#include "pepper/ensemble/ensemble.hpp"
#include "pepper/eval/agreement.hpp"
#include "pepper/eval/metrics.hpp"
#include "pepper/stats/contingency.hpp"
#include "pepper/stats/design.hpp"
#include "pepper/stats/gee.hpp"
#include "pepper/stats/trend.hpp"
#include "pepper/textproc/analyze.hpp"

// Last: httplib pulls in <resolv.h>, whose _res macro breaks Eigen headers
// included after it.
#include "pepper/serve/http.hpp"

namespace pepper::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

struct Options {
  // shared
  uint64_t seed = 0;
  int verbosity = 0;
  std::string lexicon_dir;
  std::string sentiment_path;
  std::string pos_model;
  // io
  std::string in;
  std::string out;
  std::string model;
  std::string corpus;
  std::string pred;
  std::string gold;
  std::string chunk;
  std::string doc;
  std::string labels_out;
  std::string second_annotator;
  bool lenient = false;
  bool holdout = false;
  // chunker
  int epochs = 20;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  size_t batch_size = 4;
  // doc classifier
  double svm_c = 1.0;
  int svm_epochs = 50;
  size_t min_df = 2;
  std::string mask = "all";
  bool no_tfidf = false;
  std::vector<std::string> subsets;
  // pos
  int pos_iterations = 8;
  size_t tag_column = 1;
  // sampling
  size_t n_pos = 150;
  size_t n_neg = 150;
  size_t n_dis = 300;
  double recency_bias = 0.0;
  // stats
  std::vector<double> bins = stats::default_rating_edges();
  bool yates = false;
  std::string correlation = "exchangeable";
  int max_iter = 50;
  double tol = 1e-8;
  double threshold = 3.5;
  std::string epoch = "2010-01-01";
  std::string cutoff = "2018-06-28";
  // synthetic corpus
  size_t n_reviews = 1000;
  double positive_rate = 0.1;
  size_t per_professor = 10;
  bool gender_metadata = false;
  // serve
  std::string journal;
  std::string host = "127.0.0.1";
  int port = 8080;
};

struct Context {
  const Options& opt;
  std::ostream& out;
  std::ostream& err;
  LexiconSet lexicons;
  std::unique_ptr<LexiconSentiment> sentiment;
  std::optional<PosTagger> tagger;

  const PosTagger* pos() const { return tagger ? &*tagger : nullptr; }
  FeatureResources resources() const {
    FeatureResources r;
    r.lexicons = &lexicons;
    if (sentiment) r.sentiment = sentiment.get();
    return r;
  }
  void log(const std::string& msg) const {
    if (opt.verbosity > 0) err << msg << '\n';
  }
};

inline Date parse_date_option(const std::string& s, const char* what) {
  auto d = parse_date(s);
  if (!d) throw ValidationError(std::string(what) + " must be YYYY-MM-DD, got '" + s + "'");
  return *d;
}

inline void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ValidationError(std::string("missing ") + what);
  if (!std::filesystem::is_regular_file(path)) throw ValidationError(std::string(what) + " not found: " + path);
}

inline std::string thousands(long v) {
  std::string s = std::to_string(v < 0 ? -v : v);
  for (int i = int(s.size()) - 3; i > 0; i -= 3) s.insert(size_t(i), ",");
  return v < 0 ? "-" + s : s;
}

inline void write_output(const std::string& path, const std::string& content, Context& ctx) {
  if (path.empty() || path == "-") {
    ctx.out << content;
    return;
  }
  str::write_file(path, content);
  ctx.log("wrote " + path);
}

// Effective configuration of the run, written next to each output file.
inline void write_sidecar(const CLI::App& root, const CLI::App& sub, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") return;
  nlohmann::json j;
  j["subcommand"] = sub.get_name();
  auto collect = [](const CLI::App& app, nlohmann::json& dst) {
    for (const auto* o : app.get_options()) {
      if (o->get_name() == "--help" || o->get_name() == "-h") continue;
      auto name = o->get_single_name();
      const auto& res = o->results();
      if (res.empty()) dst[name] = o->get_default_str();
      else if (res.size() == 1) dst[name] = res[0];
      else dst[name] = res;
    }
  };
  collect(root, j["global"]);
  collect(sub, j["options"]);
  str::write_file(out_path + ".run.json", j.dump(2) + "\n");
}

inline LoadedCorpus load(const std::string& path, Context& ctx, bool lenient = false) {
  require_file(path, "corpus file");
  LoadOptions lo;
  lo.lenient = lenient;
  lo.cutoff = parse_date_option(ctx.opt.cutoff, "--cutoff");
  auto c = load_corpus(path, lo);
  for (const auto& issue : c.rejected)
    ctx.err << "warning: line " << issue.line << " (" << issue.review_id << "): " << issue.message << '\n';
  ctx.log("loaded " + std::to_string(c.reviews.size()) + " reviews, " + std::to_string(c.labeled.size()) +
          " labeled");
  return c;
}

inline std::vector<PredictionRecord> load_preds(const std::string& path) {
  require_file(path, "predictions file");
  return load_predictions(path);
}

inline std::vector<LabeledReview> need_labeled(const LoadedCorpus& c) {
  if (c.labeled.empty()) throw ValidationError("corpus has no span-labeled reviews");
  return c.labeled;
}

inline std::pair<std::vector<LabeledReview>, std::vector<LabeledReview>> maybe_split(
    const std::vector<LabeledReview>& labeled, Context& ctx) {
  if (!ctx.opt.holdout) return {labeled, {}};
  auto split = split_train_dev(labeled, ctx.opt.seed);
  return apply_split(labeled, split);
}

// Token-level report on in-span tokens (tag B or I versus O).
inline MetricReport token_report(const ChunkModel& m, const std::vector<LabeledReview>& data, const PosTagger* tagger) {
  std::vector<bool> pred, gold;
  for (const auto& lr : data) {
    Tokens toks = lr.tokens;
    annotate(toks, tagger);
    auto tags = m.decode(toks);
    for (size_t i = 0; i < tags.size(); ++i) {
      pred.push_back(tags[i] != Iob::O);
      gold.push_back(lr.iob[i] != Iob::O);
    }
  }
  return score(pred, gold);
}

inline MetricReport doc_report(const DocModel& m, const std::vector<LabeledReview>& data, const PosTagger* tagger) {
  std::vector<bool> pred, gold;
  for (const auto& lr : data) {
    pred.push_back(m.predict(annotated_tokens(lr, tagger)).label);
    gold.push_back(lr.doc_label);
  }
  return score(pred, gold);
}

inline DocConfig doc_config(const Options& o) {
  DocConfig cfg;
  cfg.svm.C = o.svm_c;
  cfg.svm.epochs = o.svm_epochs;
  cfg.svm.seed = o.seed;
  cfg.min_df = o.min_df;
  cfg.use_tfidf = !o.no_tfidf;
  cfg.mask = FeatureMask::parse(o.mask);
  return cfg;
}

inline int cmd_ingest(Context& ctx) {
  auto c = load(ctx.opt.in, ctx, ctx.opt.lenient);
  auto s = corpus_stats(c);
  ctx.out << "reviews   " << thousands(long(s.reviews)) << '\n'
          << "labeled   " << thousands(long(s.labeled)) << '\n'
          << "positive  " << thousands(long(s.positives)) << '\n'
          << "tokens    " << thousands(long(s.token_count)) << '\n'
          << "types     " << thousands(long(s.type_count)) << '\n'
          << "skipped   " << c.skipped.size() << '\n'
          << "rejected  " << c.rejected.size() << '\n';
  if (!ctx.opt.out.empty()) write_corpus(ctx.opt.out, c.reviews);
  return kExitOk;
}

inline int cmd_synth(Context& ctx) {
  SyntheticSpec spec;
  spec.n_reviews = ctx.opt.n_reviews;
  spec.positive_rate = ctx.opt.positive_rate;
  spec.reviews_per_professor = ctx.opt.per_professor;
  spec.gender_metadata = ctx.opt.gender_metadata;
  spec.seed = ctx.opt.seed;
  spec.cutoff = parse_date_option(ctx.opt.cutoff, "--cutoff");
  auto reviews = reviews_of(generate_synthetic_corpus(spec));
  if (ctx.opt.out.empty()) throw ValidationError("missing --out");
  write_corpus(ctx.opt.out, reviews);
  ctx.out << "wrote " << reviews.size() << " reviews to " << ctx.opt.out << '\n';
  return kExitOk;
}

inline int cmd_train_pos(Context& ctx) {
  require_file(ctx.opt.in, "tagged input");
  auto data = read_conll_tagged(str::read_file(ctx.opt.in), ctx.opt.tag_column);
  if (data.empty()) throw ValidationError("no tagged sentences in " + ctx.opt.in);
  auto m = PosTagger::train(data, ctx.opt.pos_iterations, ctx.opt.seed);
  char buf[64];
  std::snprintf(buf, sizeof buf, "training accuracy %.4f\n", m.accuracy(data));
  ctx.out << buf;
  write_output(ctx.opt.out, m.to_json().dump() + "\n", ctx);
  return kExitOk;
}

inline int cmd_train_chunker(Context& ctx) {
  auto c = load(ctx.opt.in, ctx);
  auto [train, dev] = maybe_split(need_labeled(c), ctx);
  ChunkerConfig cfg;
  cfg.epochs = ctx.opt.epochs;
  cfg.learning_rate = ctx.opt.learning_rate;
  cfg.l2_lambda = ctx.opt.l2;
  cfg.batch_size = ctx.opt.batch_size;
  cfg.seed = ctx.opt.seed;
  auto m = ChunkModel::train(train, cfg, ctx.lexicons.hot, ctx.pos());
  std::vector<NamedReport> rows = {{"train tokens", token_report(m, train, ctx.pos())}};
  if (!dev.empty()) rows.push_back({"dev tokens", token_report(m, dev, ctx.pos())});
  ctx.out << metrics_table(rows);
  if (ctx.opt.out.empty()) throw ValidationError("missing --out for the model file");
  m.save(ctx.opt.out);
  return kExitOk;
}

inline int cmd_train_doc(Context& ctx) {
  auto c = load(ctx.opt.in, ctx);
  auto [train, dev] = maybe_split(need_labeled(c), ctx);
  auto m = DocModel::train(train, doc_config(ctx.opt), ctx.pos(), ctx.resources());
  std::vector<NamedReport> rows = {{"train", doc_report(m, train, ctx.pos())}};
  if (!dev.empty()) rows.push_back({"dev", doc_report(m, dev, ctx.pos())});
  ctx.out << metrics_table(rows);
  if (ctx.opt.out.empty()) throw ValidationError("missing --out for the model file");
  m.save(ctx.opt.out);
  return kExitOk;
}

inline int cmd_tag(Context& ctx) {
  auto c = load(ctx.opt.in, ctx);
  require_file(ctx.opt.model, "chunk model");
  auto m = ChunkModel::load(ctx.opt.model);
  std::ostringstream jsonl;
  std::vector<LabelRow> labels;
  for (const auto& r : c.reviews) {
    Tokens toks = analyze(r.text, ctx.pos());
    auto tags = m.decode(toks);
    nlohmann::json j;
    j["review_id"] = r.review_id;
    j["tokens"] = surfaces(toks);
    std::vector<std::string> iob;
    for (auto t : tags) iob.emplace_back(to_string(t));
    j["iob"] = iob;
    j["doc_label"] = any_chunk(tags);
    jsonl << j.dump() << '\n';
    labels.push_back({r.review_id, any_chunk(tags), std::nullopt});
  }
  write_output(ctx.opt.out, jsonl.str(), ctx);
  if (!ctx.opt.labels_out.empty()) write_output(ctx.opt.labels_out, labels_csv(labels), ctx);
  return kExitOk;
}

inline int cmd_classify(Context& ctx) {
  auto c = load(ctx.opt.in, ctx);
  require_file(ctx.opt.model, "doc model");
  auto m = DocModel::load(ctx.opt.model);
  std::vector<LabelRow> labels;
  for (const auto& r : c.reviews) {
    auto p = m.predict_text(r.text, ctx.pos());
    labels.push_back({r.review_id, p.label, p.margin});
  }
  write_output(ctx.opt.out, labels_csv(labels), ctx);
  return kExitOk;
}

inline std::string ensemble_summary(const PairedConfusion& pc) {
  std::ostringstream os;
  char rate[64];
  std::snprintf(rate, sizeof rate, "%.3f%%", 100.0 * pc.disagreement_rate());
  os << "reviews              " << thousands(pc.total()) << '\n'
     << "both positive        " << thousands(pc.both_pos) << '\n'
     << "chunker only         " << thousands(pc.chunk_pos_doc_neg) << '\n'
     << "doc only             " << thousands(pc.chunk_neg_doc_pos) << '\n'
     << "both negative        " << thousands(pc.both_neg) << '\n'
     << "disagreement rate    " << rate << " (" << thousands(pc.disagreements()) << " / " << thousands(pc.total())
     << ")\n"
     << "ensemble-2 retained  " << thousands(pc.ensemble2_retained()) << '\n';
  return os.str();
}

inline int cmd_ensemble(Context& ctx) {
  require_file(ctx.opt.chunk, "chunker labels");
  require_file(ctx.opt.doc, "doc labels");
  auto preds = join_predictions(parse_labels(str::read_file(ctx.opt.chunk)), parse_labels(str::read_file(ctx.opt.doc)));
  if (preds.empty()) throw ValidationError("empty input");
  ctx.out << ensemble_summary(paired_confusion(preds));
  if (!ctx.opt.out.empty()) write_output(ctx.opt.out, predictions_csv(preds), ctx);
  return kExitOk;
}

inline int cmd_eval(Context& ctx) {
  auto preds = load_preds(ctx.opt.pred);
  auto gold = load(ctx.opt.gold, ctx);
  std::map<std::string, bool> truth;
  for (const auto& r : gold.reviews)
    if (r.doc_label) truth[r.review_id] = *r.doc_label;
  std::vector<bool> g, ch, dc, e1, g2, e2;
  for (const auto& p : preds) {
    auto it = truth.find(p.review_id);
    if (it == truth.end()) continue;
    g.push_back(it->second);
    ch.push_back(p.chunker_label);
    dc.push_back(p.doc_label);
    e1.push_back(p.ensemble1);
    if (p.ensemble2 != Vote::abstain) {
      g2.push_back(it->second);
      e2.push_back(p.ensemble2 == Vote::positive);
    }
  }
  if (g.empty()) throw ValidationError("no predictions overlap the gold-labeled reviews");
  std::vector<NamedReport> rows = {{"chunker", score(ch, g)}, {"doc", score(dc, g)}, {"ensemble-1", score(e1, g)}};
  if (!g2.empty()) rows.push_back({"ensemble-2", score(e2, g2)});
  ctx.out << metrics_table(rows);
  char buf[96];
  std::snprintf(buf, sizeof buf, "evaluated %zu reviews; ensemble-2 covers %zu (%.1f%%)\n", g.size(), g2.size(),
                100.0 * double(g2.size()) / double(g.size()));
  ctx.out << buf;
  if (!ctx.opt.second_annotator.empty()) {
    auto other = load(ctx.opt.second_annotator, ctx);
    std::map<std::string, const LabeledReview*> b;
    for (const auto& lr : other.labeled) b[lr.review.review_id] = &lr;
    std::vector<LabeledReview> la, lb;
    for (const auto& lr : gold.labeled)
      if (auto it = b.find(lr.review.review_id); it != b.end()) {
        la.push_back(lr);
        lb.push_back(*it->second);
      }
    if (la.empty()) throw ValidationError("annotators share no labeled reviews");
    ctx.out << agreement_text(agreement_report(la, lb), la);
  }
  if (!ctx.opt.out.empty()) write_output(ctx.opt.out, metrics_csv(rows), ctx);
  return kExitOk;
}

inline int cmd_ablate(Context& ctx) {
  auto c = load(ctx.opt.in, ctx);
  auto labeled = need_labeled(c);
  auto split = split_train_dev(labeled, ctx.opt.seed);
  auto [train, dev] = apply_split(labeled, split);
  std::vector<AblationSubset> subsets;
  if (ctx.opt.subsets.empty()) subsets = table8_subsets();
  for (const auto& s : ctx.opt.subsets) subsets.push_back(parse_subset(s));
  auto rows = ablate(train, dev, doc_config(ctx.opt), subsets, ctx.pos(), ctx.resources());
  std::vector<NamedReport> named;
  for (const auto& r : rows) named.push_back({r.subset, r.report});
  ctx.out << metrics_table(named);
  if (!ctx.opt.out.empty()) write_output(ctx.opt.out, ablation_csv(rows), ctx);
  return kExitOk;
}

inline int cmd_sample_test(Context& ctx) {
  auto preds = load_preds(ctx.opt.pred);
  std::map<std::string, Date> dates;
  if (!ctx.opt.corpus.empty())
    for (const auto& r : load(ctx.opt.corpus, ctx).reviews) dates[r.review_id] = r.date;
  else if (ctx.opt.recency_bias > 0)
    throw ValidationError("--recency-bias needs --corpus for review dates");
  TestSetRequest req{ctx.opt.n_pos, ctx.opt.n_neg, ctx.opt.n_dis, ctx.opt.recency_bias, ctx.opt.seed};
  auto ids = sample_test_set(preds, req, dates);
  std::map<std::string, const PredictionRecord*> by_id;
  for (const auto& p : preds) by_id[p.review_id] = &p;
  std::ostringstream os;
  csv::write_row(os, {"review_id", "stratum", "chunker", "doc"});
  for (const auto& id : ids) {
    const auto& p = *by_id.at(id);
    std::string stratum = p.ensemble2 == Vote::positive ? "agree_pos" : p.ensemble2 == Vote::negative ? "agree_neg" : "disagree";
    csv::write_row(os, {id, stratum, p.chunker_label ? "true" : "false", p.doc_label ? "true" : "false"});
  }
  write_output(ctx.opt.out, os.str(), ctx);
  return kExitOk;
}

inline int cmd_trend(Context& ctx) {
  auto c = load(ctx.opt.corpus, ctx);
  auto series = stats::quarterly_logodds(c.reviews, load_preds(ctx.opt.pred));
  write_output(ctx.opt.out, stats::trend_csv(series), ctx);
  return kExitOk;
}

inline int cmd_rating_props(Context& ctx) {
  auto c = load(ctx.opt.corpus, ctx);
  auto t = stats::proportions_by_rating(c.reviews, load_preds(ctx.opt.pred), ctx.opt.bins);
  write_output(ctx.opt.out, stats::rating_csv(t), ctx);
  return kExitOk;
}

inline int cmd_gender_chisq(Context& ctx) {
  auto c = load(ctx.opt.corpus, ctx);
  auto pt = stats::professor_objectification_table(c.reviews, load_preds(ctx.opt.pred));
  auto r = stats::chi_square_independence(pt.table, ctx.opt.yates);
  const auto& n = pt.table.counts;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%-8s %10s %10s %8s\n%-8s %10ld %10ld %7.1f%%\n%-8s %10ld %10ld %7.1f%%\n", "", "has", "none", "rate",
                "female", n[0][0], n[0][1], 100.0 * pt.female_rate, "male", n[1][0], n[1][1], 100.0 * pt.male_rate);
  ctx.out << buf;
  std::snprintf(buf, sizeof buf, "chi2 = %.3f, dof = %d, p = %.3g%s\nunknown-gender professors excluded: %ld\n", r.chi2,
                r.dof, r.p_value, ctx.opt.yates ? " (Yates)" : "", pt.unknown_gender);
  ctx.out << buf;
  if (!ctx.opt.out.empty()) {
    std::ostringstream os;
    os << "gender,has_objectifying,none,rate\n";
    os << "female," << n[0][0] << ',' << n[0][1] << ',' << pt.female_rate << '\n';
    os << "male," << n[1][0] << ',' << n[1][1] << ',' << pt.male_rate << '\n';
    write_output(ctx.opt.out, os.str(), ctx);
  }
  return kExitOk;
}

inline int cmd_gee(Context& ctx) {
  auto c = load(ctx.opt.corpus, ctx);
  stats::DesignOptions dopt;
  dopt.high_threshold = ctx.opt.threshold;
  dopt.epoch = parse_date_option(ctx.opt.epoch, "--epoch");
  dopt.cutoff = parse_date_option(ctx.opt.cutoff, "--cutoff");
  auto design = stats::build_design(c.reviews, load_preds(ctx.opt.pred), dopt);
  stats::GeeOptions gopt;
  gopt.correlation = stats::parse_working_correlation(ctx.opt.correlation);
  gopt.max_iter = ctx.opt.max_iter;
  gopt.tol = ctx.opt.tol;
  auto fit = stats::fit_gee(design.data, gopt);
  ctx.out << stats::gee_table(fit);
  const auto& x = design.excluded;
  ctx.out << "excluded: abstained " << x.abstained << ", no prediction " << x.no_prediction << ", missing rating "
          << x.missing_rating << ", unknown gender " << x.unknown_gender << ", before epoch " << x.before_epoch << '\n';
  if (!ctx.opt.out.empty()) write_output(ctx.opt.out, stats::gee_csv(fit), ctx);
  return kExitOk;
}

inline int cmd_serve(Context& ctx) {
  auto c = load(ctx.opt.corpus, ctx);
  std::vector<PredictionRecord> preds;
  if (!ctx.opt.pred.empty()) preds = load_preds(ctx.opt.pred);
  std::string journal = ctx.opt.journal.empty() ? ctx.opt.corpus + ".journal.jsonl" : ctx.opt.journal;
  serve::AnnotationService svc(c.reviews, preds, serve::Journal(journal));
  httplib::Server srv;
  serve::mount(srv, svc);
  ctx.err << "serving " << c.reviews.size() << " reviews on http://" << ctx.opt.host << ':' << ctx.opt.port
          << "/api/v1 (journal " << journal << ")\n";
  if (!serve::listen(srv, ctx.opt.host, ctx.opt.port))
    throw Error("cannot listen on " + ctx.opt.host + ":" + std::to_string(ctx.opt.port) + " (port busy?)");
  return kExitOk;
}

inline void load_resources(Context& ctx) {
  if (!ctx.opt.lexicon_dir.empty()) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(ctx.opt.lexicon_dir)) throw ValidationError("lexicon directory not found: " + ctx.opt.lexicon_dir);
    auto maybe = [&](Lexicon& slot, LexiconName name) {
      auto path = fs::path(ctx.opt.lexicon_dir) / (std::string(to_string(name)) + ".txt");
      if (fs::is_regular_file(path)) slot = Lexicon::load(name, path.string());
    };
    auto& l = ctx.lexicons;
    maybe(l.hot, LexiconName::hot);
    maybe(l.fashion, LexiconName::fashion);
    maybe(l.hair, LexiconName::hair);
    maybe(l.idioms, LexiconName::idioms);
    maybe(l.titles, LexiconName::titles);
    maybe(l.body, LexiconName::body);
    maybe(l.accent, LexiconName::accent);
  }
  if (!ctx.opt.sentiment_path.empty()) {
    require_file(ctx.opt.sentiment_path, "sentiment lexicon");
    ctx.sentiment = std::make_unique<LexiconSentiment>(LexiconSentiment::load(ctx.opt.sentiment_path));
  }
  if (!ctx.opt.pos_model.empty()) {
    require_file(ctx.opt.pos_model, "POS model");
    ctx.tagger = PosTagger::from_json(nlohmann::json::parse(str::read_file(ctx.opt.pos_model)));
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Options o;
  CLI::App app{"Detect and analyze attractiveness commentary in professor reviews", "pepper"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.add_option("--seed", o.seed, "random seed for every stochastic step");
  app.add_flag("-v,--verbose", o.verbosity, "log progress to stderr");
  app.add_option("--lexicon-dir", o.lexicon_dir, "directory with <name>.txt lexicons overriding the built-ins");
  app.add_option("--sentiment", o.sentiment_path, "sentiment lexicon TSV overriding the built-in one");
  app.add_option("--pos-model", o.pos_model, "POS tagger model from train-pos (default: built-in)");
  app.add_option("--cutoff", o.cutoff, "date the hot rating was removed (YYYY-MM-DD)");

  using Handler = int (*)(Context&);
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto sub = [&](const char* name, const char* desc, Handler h) {
    auto* s = app.add_subcommand(name, desc);
    commands.emplace_back(s, h);
    return s;
  };

  auto* ingest = sub("ingest", "validate a corpus and print statistics", cmd_ingest);
  ingest->add_option("--in", o.in, "corpus (.jsonl or .csv)")->required();
  ingest->add_option("--out", o.out, "write the normalized corpus here");
  ingest->add_flag("--lenient", o.lenient, "skip malformed records instead of failing");

  auto* syn = sub("synth", "generate a labeled synthetic corpus", cmd_synth);
  syn->add_option("--out", o.out, "corpus file (.jsonl or .csv)")->required();
  syn->add_option("--n", o.n_reviews, "number of reviews")->check(CLI::PositiveNumber);
  syn->add_option("--positive-rate", o.positive_rate)->check(CLI::Range(0.0, 1.0));
  syn->add_option("--per-professor", o.per_professor, "reviews per professor")->check(CLI::PositiveNumber);
  syn->add_flag("--gender-metadata", o.gender_metadata, "store professor gender explicitly");

  auto* tpos = sub("train-pos", "train the POS tagger on CoNLL-style tagged text", cmd_train_pos);
  tpos->add_option("--in", o.in, "tagged sentences, one token per line")->required();
  tpos->add_option("--out", o.out, "model file")->required();
  tpos->add_option("--iterations", o.pos_iterations, "perceptron passes")->check(CLI::PositiveNumber);
  tpos->add_option("--tag-column", o.tag_column, "0-based column holding the tag")->check(CLI::PositiveNumber);

  auto* tch = sub("train-chunker", "train the IOB chunk tagger", cmd_train_chunker);
  tch->add_option("--in", o.in, "span-labeled corpus")->required();
  tch->add_option("--out", o.out, "model file")->required();
  tch->add_option("--epochs", o.epochs)->check(CLI::NonNegativeNumber);
  tch->add_option("--lr", o.learning_rate, "initial learning rate")->check(CLI::PositiveNumber);
  tch->add_option("--l2", o.l2, "L2 penalty")->check(CLI::NonNegativeNumber);
  tch->add_option("--batch-size", o.batch_size)->check(CLI::PositiveNumber);
  tch->add_flag("--holdout", o.holdout, "train on the 80% split and report the 20% development split");

  auto* tdoc = sub("train-doc", "train the document SVM", cmd_train_doc);
  tdoc->add_option("--in", o.in, "labeled corpus")->required();
  tdoc->add_option("--out", o.out, "model file")->required();
  tdoc->add_option("--C", o.svm_c, "SVM cost")->check(CLI::PositiveNumber);
  tdoc->add_option("--epochs", o.svm_epochs)->check(CLI::PositiveNumber);
  tdoc->add_option("--min-df", o.min_df, "minimum document frequency for n-grams");
  tdoc->add_option("--mask", o.mask, "dense feature groups: all, none or a comma list");
  tdoc->add_flag("--no-tfidf", o.no_tfidf, "drop the n-gram block");
  tdoc->add_flag("--holdout", o.holdout, "train on the 80% split and report the 20% development split");

  auto* tag = sub("tag", "chunk-tag reviews, emitting IOB tags and document labels", cmd_tag);
  tag->add_option("--in", o.in, "corpus")->required();
  tag->add_option("--model", o.model, "chunk model")->required();
  tag->add_option("--out", o.out, "JSONL with tokens and tags (default stdout)");
  tag->add_option("--labels", o.labels_out, "also write review_id,label CSV for the ensemble step");

  auto* cls = sub("classify", "label reviews with the document model", cmd_classify);
  cls->add_option("--in", o.in, "corpus")->required();
  cls->add_option("--model", o.model, "doc model")->required();
  cls->add_option("--out", o.out, "review_id,label,margin CSV (default stdout)");

  auto* ens = sub("ensemble", "pair the two classifiers and summarize their agreement", cmd_ensemble);
  ens->add_option("--chunk", o.chunk, "chunker labels CSV")->required();
  ens->add_option("--doc", o.doc, "doc labels CSV")->required();
  ens->add_option("--out", o.out, "predictions CSV");

  auto* ev = sub("eval", "score predictions against gold document labels", cmd_eval);
  ev->add_option("--pred", o.pred, "predictions CSV")->required();
  ev->add_option("--gold", o.gold, "gold corpus")->required();
  ev->add_option("--second-annotator", o.second_annotator, "second annotation of the gold reviews, for kappa");
  ev->add_option("--out", o.out, "metrics CSV");

  auto* abl = sub("ablate", "document classifier feature ablation", cmd_ablate);
  abl->add_option("--in", o.in, "labeled corpus")->required();
  abl->add_option("--out", o.out, "ablation CSV");
  abl->add_option("--subset", o.subsets, "feature groups joined by '+', repeatable (default: standard columns)");
  abl->add_option("--C", o.svm_c)->check(CLI::PositiveNumber);
  abl->add_option("--epochs", o.svm_epochs)->check(CLI::PositiveNumber);
  abl->add_option("--min-df", o.min_df);

  auto* smp = sub("sample-test", "draw the agree/disagree test sample for adjudication", cmd_sample_test);
  smp->add_option("--pred", o.pred, "predictions CSV")->required();
  smp->add_option("--corpus", o.corpus, "corpus supplying review dates");
  smp->add_option("--out", o.out, "sample CSV (default stdout)");
  smp->add_option("--n-pos", o.n_pos);
  smp->add_option("--n-neg", o.n_neg);
  smp->add_option("--n-dis", o.n_dis);
  smp->add_option("--recency-bias", o.recency_bias)->check(CLI::NonNegativeNumber);

  auto* trd = sub("trend", "quarterly log-odds of commentary", cmd_trend);
  trd->add_option("--corpus", o.corpus)->required();
  trd->add_option("--pred", o.pred)->required();
  trd->add_option("--out", o.out, "CSV quarter,n,k,log_odds (default stdout)");

  auto* rp = sub("rating-props", "commentary proportion by quality and difficulty bins", cmd_rating_props);
  rp->add_option("--corpus", o.corpus)->required();
  rp->add_option("--pred", o.pred)->required();
  rp->add_option("--bins", o.bins, "bin edges")->delimiter(',');
  rp->add_option("--out", o.out);

  auto* gc = sub("gender-chisq", "professor gender vs commentary chi-square test", cmd_gender_chisq);
  gc->add_option("--corpus", o.corpus)->required();
  gc->add_option("--pred", o.pred)->required();
  gc->add_flag("--yates", o.yates, "apply the continuity correction");
  gc->add_option("--out", o.out);

  auto* gee = sub("gee", "logistic GEE of commentary on interface, time, ratings and gender", cmd_gee);
  gee->add_option("--corpus", o.corpus)->required();
  gee->add_option("--pred", o.pred)->required();
  gee->add_option("--corr", o.correlation, "independence or exchangeable")
      ->check(CLI::IsMember({"independence", "exchangeable"}));
  gee->add_option("--max-iter", o.max_iter)->check(CLI::PositiveNumber);
  gee->add_option("--tol", o.tol)->check(CLI::PositiveNumber);
  gee->add_option("--threshold", o.threshold, "ratings at or above this count as high");
  gee->add_option("--epoch", o.epoch, "first day of quarter 0");
  gee->add_option("--out", o.out, "coefficient CSV");

  auto* srv = sub("serve", "HTTP annotation and adjudication API", cmd_serve);
  srv->add_option("--corpus", o.corpus)->required();
  srv->add_option("--pred", o.pred, "predictions CSV");
  srv->add_option("--journal", o.journal, "label journal (default <corpus>.journal.jsonl)");
  srv->add_option("--host", o.host);
  srv->add_option("--port", o.port)->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\nrun 'pepper --help' for usage\n";
    return kExitUsage;
  }

  try {
    for (auto& [s, handler] : commands) {
      if (!s->parsed()) continue;
      Context ctx{o, out, err, LexiconSet::defaults(), nullptr, std::nullopt};
      load_resources(ctx);
      int rc = handler(ctx);
      if (rc == kExitOk) write_sidecar(app, *s, o.out);
      return rc;
    }
  } catch (const CorpusError& e) {
    err << "error: " << e.what() << '\n';
    for (const auto& issue : e.issues()) err << "  line " << issue.line << ": " << issue.message << '\n';
    return kExitData;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace pepper::cli
