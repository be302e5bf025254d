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

// Annotation and adjudication backend: review queue, label submission,
// pairwise agreement and corpus export over an append-only JSONL journal.

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pepper/corpus/io.hpp"
#include "pepper/ensemble/ensemble.hpp"
#include "pepper/eval/agreement.hpp"
#include "pepper/textproc/tokenize.hpp"
#include "pepper/util/error.hpp"

namespace pepper::serve {

using json = nlohmann::json;

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

inline ApiResponse json_response(int status, const json& j) { return {status, j.dump(), "application/json"}; }

inline ApiResponse error_response(int status, const std::string& message, json detail = nullptr) {
  json j{{"error", message}};
  if (!detail.is_null()) j["detail"] = std::move(detail);
  return json_response(status, j);
}

struct TokenRange {
  size_t begin = 0;
  size_t end = 0;  // exclusive
  bool operator==(const TokenRange&) const = default;
};

struct LabelEvent {
  long seq = 0;
  std::string timestamp;
  std::string kind;  // "label" or "adjudicate"
  std::string review_id;
  std::string annotator;
  std::vector<TokenRange> spans;
  bool doc_label = false;
  std::optional<bool> verdict;

  bool same_submission(const LabelEvent& o) const {
    return kind == o.kind && review_id == o.review_id && annotator == o.annotator && spans == o.spans &&
           doc_label == o.doc_label && verdict == o.verdict;
  }

  json to_json() const {
    json j{{"seq", seq}, {"ts", timestamp}, {"kind", kind}, {"review_id", review_id}, {"annotator", annotator}};
    if (kind == "label") {
      auto a = json::array();
      for (const auto& s : spans) a.push_back({s.begin, s.end});
      j["spans"] = a;
      j["doc_label"] = doc_label;
    } else {
      j["verdict"] = verdict.value_or(false);
    }
    return j;
  }

  static LabelEvent from_json(const json& j) {
    LabelEvent e;
    e.seq = j.at("seq").get<long>();
    e.timestamp = j.at("ts").get<std::string>();
    e.kind = j.at("kind").get<std::string>();
    e.review_id = j.at("review_id").get<std::string>();
    e.annotator = j.at("annotator").get<std::string>();
    if (e.kind == "label") {
      for (const auto& s : j.at("spans")) e.spans.push_back({s.at(0).get<size_t>(), s.at(1).get<size_t>()});
      e.doc_label = j.at("doc_label").get<bool>();
    } else if (e.kind == "adjudicate") {
      e.verdict = j.at("verdict").get<bool>();
    } else {
      throw ValidationError("unknown journal event kind '" + e.kind + "'");
    }
    return e;
  }
};

class JournalError : public Error {
 public:
  using Error::Error;
};

// Append-only JSONL file. A failed append is rolled back to the previous
// file length so readers never see a half-written event.
class Journal {
 public:
  explicit Journal(std::string path) : path_(std::move(path)) {}

  const std::string& path() const { return path_; }

  // Reads existing events. A truncated final line (crash mid-write) is
  // dropped; any other malformed line is an error.
  std::vector<LabelEvent> load() const {
    std::vector<LabelEvent> out;
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path_, ec)) return out;
    std::ifstream in(path_);
    if (!in) return out;
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
      if (!str::trim(line).empty()) lines.push_back(line);
    for (size_t i = 0; i < lines.size(); ++i) {
      try {
        out.push_back(LabelEvent::from_json(json::parse(lines[i])));
      } catch (const std::exception& e) {
        if (i + 1 == lines.size()) break;
        throw ValidationError("journal " + path_ + " line " + std::to_string(i + 1) + ": " + e.what());
      }
    }
    return out;
  }

  void append(const LabelEvent& e) {
    std::string line = e.to_json().dump() + "\n";
    int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd < 0) throw JournalError("cannot open journal " + path_ + ": " + std::strerror(errno));
    off_t before = ::lseek(fd, 0, SEEK_END);
    size_t done = 0;
    int err = 0;
    while (done < line.size()) {
      ssize_t n = ::write(fd, line.data() + done, line.size() - done);
      if (n < 0) {
        if (errno == EINTR) continue;
        err = errno;
        break;
      }
      done += size_t(n);
    }
    if (!err && ::fsync(fd) != 0 && errno != EINVAL && errno != EROFS) err = errno;
    if (err && before >= 0 && ::ftruncate(fd, before) != 0) {
      // nothing more to undo; the append error is what gets reported
    }
    ::close(fd);
    if (err) throw JournalError("journal write failed: " + std::string(std::strerror(err)));
  }

 private:
  std::string path_;
};

inline std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

enum class QueueMode { disagreement, unlabeled, all };

inline std::optional<QueueMode> parse_queue_mode(std::string_view s) {
  if (s == "disagreement") return QueueMode::disagreement;
  if (s == "unlabeled") return QueueMode::unlabeled;
  if (s == "all") return QueueMode::all;
  return std::nullopt;
}

inline json kappa_json(const Metric& m) { return m.value ? json(*m.value) : json(nullptr); }

class AnnotationService {
 public:
  using Clock = std::function<std::string()>;

  AnnotationService(std::vector<Review> reviews, std::vector<PredictionRecord> predictions, Journal journal,
                    Clock clock = utc_now)
      : reviews_(std::move(reviews)), journal_(std::move(journal)), clock_(std::move(clock)) {
    for (size_t i = 0; i < reviews_.size(); ++i) {
      if (!index_.emplace(reviews_[i].review_id, i).second)
        throw ValidationError("duplicate review_id " + reviews_[i].review_id);
      tokens_.push_back(tokenize(reviews_[i].text));
    }
    for (auto& p : predictions) {
      if (!index_.count(p.review_id)) throw ValidationError("prediction for unknown review " + p.review_id);
      predictions_[p.review_id] = std::move(p);
    }
    events_ = journal_.load();
    for (const auto& e : events_) {
      if (!index_.count(e.review_id)) throw ValidationError("journal refers to unknown review " + e.review_id);
      next_seq_ = std::max(next_seq_, e.seq + 1);
    }
  }

  ApiResponse queue(std::string_view mode_text, std::optional<std::string> limit_text) const {
    auto mode = parse_queue_mode(mode_text.empty() ? "disagreement" : mode_text);
    if (!mode) return error_response(400, "mode must be one of disagreement, unlabeled, all");
    size_t limit = 50;
    if (limit_text) {
      auto v = str::parse_int(*limit_text);
      if (!v || *v < 1) return error_response(400, "limit must be a positive integer");
      limit = size_t(*v);
    }
    std::shared_lock lock(mu_);
    std::vector<size_t> picked;
    for (size_t i = 0; i < reviews_.size(); ++i) {
      const auto& id = reviews_[i].review_id;
      if (*mode == QueueMode::disagreement) {
        auto p = predictions_.find(id);
        if (p == predictions_.end() || p->second.ensemble2 != Vote::abstain || latest_verdict(id)) continue;
      } else if (*mode == QueueMode::unlabeled) {
        if (reviews_[i].spans || reviews_[i].doc_label || has_label(id) || latest_verdict(id)) continue;
      }
      picked.push_back(i);
    }
    // Disagreements are served newest first, matching the recency-weighted
    // test-set sampler.
    if (*mode == QueueMode::disagreement)
      std::stable_sort(picked.begin(), picked.end(), [&](size_t a, size_t b) {
        if (reviews_[a].date != reviews_[b].date) return reviews_[a].date > reviews_[b].date;
        return reviews_[a].review_id < reviews_[b].review_id;
      });
    json items = json::array();
    for (size_t k = 0; k < picked.size() && k < limit; ++k) items.push_back(summary(picked[k]));
    return json_response(200, {{"mode", std::string(mode_text.empty() ? "disagreement" : mode_text)},
                               {"remaining", picked.size()},
                               {"items", items}});
  }

  ApiResponse review(const std::string& id) const {
    std::shared_lock lock(mu_);
    auto it = index_.find(id);
    if (it == index_.end()) return error_response(404, "unknown review " + id);
    const auto& r = reviews_[it->second];
    const auto& toks = tokens_[it->second];
    json j = summary(it->second);
    j["text"] = r.text;
    j["school"] = r.school;
    j["subject"] = r.subject;
    json tj = json::array();
    for (size_t i = 0; i < toks.size(); ++i)
      tj.push_back({{"i", i}, {"text", toks[i].surface}, {"start", toks[i].char_start}, {"end", toks[i].char_end}});
    j["tokens"] = tj;
    if (r.spans) {
      json g = json::array();
      for (auto [b, e] : chunk_ranges(project_spans(toks, *r.spans))) g.push_back({b, e});
      j["gold"] = {{"spans", g}, {"doc_label", !r.spans->empty()}};
    } else if (r.doc_label) {
      j["gold"] = {{"spans", nullptr}, {"doc_label", *r.doc_label}};
    } else {
      j["gold"] = nullptr;
    }
    json labels = json::array();
    for (const auto& e : events_)
      if (e.review_id == id && e.kind == "label") labels.push_back(e.to_json());
    j["labels"] = labels;
    auto v = latest_verdict(id);
    j["adjudication"] = v ? json(*v) : json(nullptr);
    return json_response(200, j);
  }

  ApiResponse label(const std::string& body) {
    json j;
    if (auto err = parse_body(body, j)) return *err;
    LabelEvent e;
    e.kind = "label";
    if (auto err = common_fields(j, e)) return *err;
    if (!j.contains("doc_label") || !j["doc_label"].is_boolean())
      return error_response(422, "doc_label must be a boolean");
    e.doc_label = j["doc_label"].get<bool>();
    if (!j.contains("spans") || !j["spans"].is_array()) return error_response(422, "spans must be an array");
    const size_t n_tok = tokens_[index_.at(e.review_id)].size();
    for (const auto& s : j["spans"]) {
      if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer())
        return error_response(422, "each span must be [tok_start, tok_end_exclusive]", s);
      long b = s[0].get<long>(), en = s[1].get<long>();
      if (b < 0 || en <= b || size_t(en) > n_tok)
        return error_response(422, "span out of bounds for review with " + std::to_string(n_tok) + " tokens", s);
      e.spans.push_back({size_t(b), size_t(en)});
    }
    std::sort(e.spans.begin(), e.spans.end(), [](auto& a, auto& b) { return a.begin < b.begin; });
    for (size_t i = 1; i < e.spans.size(); ++i)
      if (e.spans[i].begin < e.spans[i - 1].end)
        return error_response(422, "spans overlap", json{{e.spans[i - 1].begin, e.spans[i - 1].end},
                                                         {e.spans[i].begin, e.spans[i].end}});
    if (e.doc_label != !e.spans.empty())
      return error_response(422, "doc_label must be true exactly when at least one span is given");
    return record(std::move(e));
  }

  ApiResponse adjudicate(const std::string& body) {
    json j;
    if (auto err = parse_body(body, j)) return *err;
    LabelEvent e;
    e.kind = "adjudicate";
    if (!j.contains("annotator")) j["annotator"] = "adjudicator";
    if (auto err = common_fields(j, e)) return *err;
    const json& v = j.contains("verdict") ? j["verdict"] : json(nullptr);
    if (v.is_boolean()) e.verdict = v.get<bool>();
    else if (v == "positive") e.verdict = true;
    else if (v == "negative") e.verdict = false;
    else return error_response(422, "verdict must be true, false, \"positive\" or \"negative\"");
    bool override_ok = j.contains("override") && j["override"] == true;
    return record(std::move(e), [&](const LabelEvent& ev) -> std::optional<ApiResponse> {
      auto prev = latest_verdict(ev.review_id);
      if (prev && *prev != *ev.verdict && !override_ok)
        return error_response(409, "review already adjudicated with a different verdict",
                              json{{"review_id", ev.review_id}, {"verdict", *prev}});
      return std::nullopt;
    });
  }

  ApiResponse agreement() const {
    std::shared_lock lock(mu_);
    auto latest = latest_labels();
    std::set<std::string> annotators;
    for (const auto& [key, ev] : latest) annotators.insert(key.first);
    json pairs = json::array();
    std::vector<std::string> names(annotators.begin(), annotators.end());
    for (size_t a = 0; a < names.size(); ++a) {
      for (size_t b = a + 1; b < names.size(); ++b) {
        std::vector<LabeledReview> la, lb;
        for (const auto& r : reviews_) {
          auto ea = latest.find({names[a], r.review_id}), eb = latest.find({names[b], r.review_id});
          if (ea == latest.end() || eb == latest.end()) continue;
          la.push_back(as_labeled(*ea->second));
          lb.push_back(as_labeled(*eb->second));
        }
        if (la.empty()) continue;
        auto rep = agreement_report(la, lb);
        pairs.push_back({{"a", names[a]},
                         {"b", names[b]},
                         {"reviews", rep.reviews},
                         {"tokens", rep.tokens},
                         {"doc_kappa", kappa_json(rep.doc_kappa)},
                         {"span_kappa", kappa_json(rep.span_kappa)},
                         {"span_kappa_iob", kappa_json(rep.span_kappa_iob)},
                         {"doc_band", rep.doc_band},
                         {"span_band", rep.span_band},
                         {"disagreements", rep.diffs.size()}});
      }
    }
    return json_response(200, {{"annotators", names}, {"pairs", pairs}});
  }

  ApiResponse export_corpus(std::string_view fmt) const {
    CorpusFormat f;
    if (fmt.empty() || fmt == "jsonl") f = CorpusFormat::jsonl;
    else if (fmt == "csv") f = CorpusFormat::csv;
    else return error_response(400, "fmt must be jsonl or csv");
    auto text = write_corpus_string(exported_reviews(), f);
    return {200, std::move(text), f == CorpusFormat::jsonl ? "application/x-ndjson" : "text/csv"};
  }

  // Corpus with journal labels applied: the newest label event per review
  // supplies spans; an adjudication verdict overrides the document label and
  // drops spans that contradict it.
  std::vector<Review> exported_reviews() const {
    std::shared_lock lock(mu_);
    std::map<std::string, const LabelEvent*> last_label;
    for (const auto& e : events_)
      if (e.kind == "label") last_label[e.review_id] = &e;
    std::vector<Review> out = reviews_;
    for (size_t i = 0; i < out.size(); ++i) {
      auto& r = out[i];
      if (auto it = last_label.find(r.review_id); it != last_label.end()) {
        std::vector<CharSpan> spans;
        for (const auto& s : it->second->spans)
          spans.push_back({tokens_[i][s.begin].char_start, tokens_[i][s.end - 1].char_end});
        r.spans = spans;
        r.doc_label = !spans.empty();
      }
      if (auto v = latest_verdict(r.review_id)) {
        if (r.spans && r.spans->empty() != !*v) r.spans = *v ? std::nullopt : std::optional(std::vector<CharSpan>{});
        r.doc_label = *v;
      }
    }
    return out;
  }

  std::vector<LabelEvent> events() const {
    std::shared_lock lock(mu_);
    return events_;
  }

 private:
  static std::optional<ApiResponse> parse_body(const std::string& body, json& j) {
    try {
      j = json::parse(body);
    } catch (const json::parse_error& e) {
      return error_response(400, std::string("request body is not JSON: ") + e.what());
    }
    if (!j.is_object()) return error_response(400, "request body must be a JSON object");
    return std::nullopt;
  }

  std::optional<ApiResponse> common_fields(const json& j, LabelEvent& e) const {
    if (!j.contains("review_id") || !j["review_id"].is_string()) return error_response(422, "review_id must be a string");
    e.review_id = j["review_id"].get<std::string>();
    if (!index_.count(e.review_id)) return error_response(404, "unknown review " + e.review_id);
    if (!j.contains("annotator") || !j["annotator"].is_string() || j["annotator"].get<std::string>().empty())
      return error_response(422, "annotator must be a non-empty string");
    e.annotator = j["annotator"].get<std::string>();
    return std::nullopt;
  }

  using Precheck = std::function<std::optional<ApiResponse>(const LabelEvent&)>;

  // Serialized write: identical resubmissions are acknowledged without a new
  // journal line, and memory changes only after the journal append succeeds.
  ApiResponse record(LabelEvent e, const Precheck& precheck = {}) {
    std::unique_lock lock(mu_);
    for (auto it = events_.rbegin(); it != events_.rend(); ++it) {
      if (it->kind != e.kind || it->review_id != e.review_id || it->annotator != e.annotator) continue;
      if (it->same_submission(e)) return json_response(200, {{"status", "unchanged"}, {"seq", it->seq}});
      break;
    }
    if (precheck)
      if (auto err = precheck(e)) return *err;
    e.seq = next_seq_;
    e.timestamp = clock_();
    try {
      journal_.append(e);
    } catch (const JournalError& err) {
      return error_response(503, err.what());
    }
    ++next_seq_;
    events_.push_back(e);
    return json_response(201, {{"status", "recorded"}, {"seq", e.seq}});
  }

  bool has_label(const std::string& id) const {
    return std::any_of(events_.begin(), events_.end(), [&](const auto& e) { return e.kind == "label" && e.review_id == id; });
  }

  std::optional<bool> latest_verdict(const std::string& id) const {
    for (auto it = events_.rbegin(); it != events_.rend(); ++it)
      if (it->kind == "adjudicate" && it->review_id == id) return it->verdict;
    return std::nullopt;
  }

  std::map<std::pair<std::string, std::string>, const LabelEvent*> latest_labels() const {
    std::map<std::pair<std::string, std::string>, const LabelEvent*> out;
    for (const auto& e : events_)
      if (e.kind == "label") out[{e.annotator, e.review_id}] = &e;
    return out;
  }

  LabeledReview as_labeled(const LabelEvent& e) const {
    size_t i = index_.at(e.review_id);
    LabeledReview lr;
    lr.review = reviews_[i];
    lr.tokens = tokens_[i];
    lr.iob.assign(lr.tokens.size(), Iob::O);
    for (const auto& s : e.spans) {
      lr.iob[s.begin] = Iob::B;
      for (size_t t = s.begin + 1; t < s.end; ++t) lr.iob[t] = Iob::I;
    }
    lr.doc_label = e.doc_label;
    return lr;
  }

  json summary(size_t i) const {
    const auto& r = reviews_[i];
    json j{{"review_id", r.review_id}, {"professor_id", r.professor_id}, {"date", r.date.str()}};
    auto p = predictions_.find(r.review_id);
    if (p != predictions_.end())
      j["prediction"] = {{"chunker", p->second.chunker_label},
                         {"doc", p->second.doc_label},
                         {"ensemble1", p->second.ensemble1},
                         {"ensemble2", std::string(to_string(p->second.ensemble2))}};
    else
      j["prediction"] = nullptr;
    return j;
  }

  std::vector<Review> reviews_;
  std::vector<Tokens> tokens_;
  std::map<std::string, size_t> index_;
  std::map<std::string, PredictionRecord> predictions_;
  Journal journal_;
  Clock clock_;
  std::vector<LabelEvent> events_;
  long next_seq_ = 1;
  mutable std::shared_mutex mu_;
};

}  // namespace pepper::serve
