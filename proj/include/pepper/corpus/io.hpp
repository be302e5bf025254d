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

// Corpus files: JSONL (canonical, one review per line) and CSV (columns
// mapped by header, spans as "start-end;start-end").

#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "pepper/corpus/review.hpp"
#include "pepper/util/csv.hpp"
#include "pepper/util/strings.hpp"

namespace pepper {

enum class CorpusFormat { jsonl, csv };

inline CorpusFormat format_for_path(const std::string& path) {
  return str::ends_with(str::to_lower(path), ".csv") ? CorpusFormat::csv : CorpusFormat::jsonl;
}

struct LoadOptions {
  bool lenient = false;  // skip malformed lines instead of failing
  Date cutoff = kPepperCutoff;
};

struct LoadIssue {
  size_t line = 0;
  std::string review_id;
  std::string message;
};

struct CorpusStats {
  size_t reviews = 0;
  size_t labeled = 0;
  size_t positives = 0;
  size_t token_count = 0;  // word tokens, punctuation excluded
  size_t type_count = 0;   // distinct lower-cased word tokens
};

struct LoadedCorpus {
  std::vector<Review> reviews;
  std::vector<LabeledReview> labeled;  // reviews that carry span annotation
  std::vector<LoadIssue> skipped;      // malformed lines dropped under lenient
  std::vector<LoadIssue> rejected;     // records dropped for annotation errors
};

class CorpusError : public ValidationError {
 public:
  CorpusError(const std::string& what, std::vector<LoadIssue> issues)
      : ValidationError(what), issues_(std::move(issues)) {}
  const std::vector<LoadIssue>& issues() const { return issues_; }

 private:
  std::vector<LoadIssue> issues_;
};

namespace detail {

struct RecordError : ValidationError {
  using ValidationError::ValidationError;
};
struct AnnotationError : ValidationError {
  using ValidationError::ValidationError;
};

inline std::optional<double> check_rating(std::optional<double> v, const char* name) {
  if (v && !(*v >= 1.0 && *v <= 5.0)) throw RecordError(std::string(name) + " outside [1,5]");
  return v;
}

inline void finish_review(Review& r, const Date& cutoff) {
  if (r.review_id.empty()) throw RecordError("empty review_id");
  if (str::trim(r.text).empty()) throw RecordError("empty text");
  r.pepper_present = pepper_present(r.date, cutoff);
  if (r.spans) {
    for (const auto& s : *r.spans)
      if (s.begin >= s.end || s.end > r.text.size()) throw AnnotationError("span out of range");
  }
}

inline std::vector<Iob> iob_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw RecordError("iob must be an array");
  std::vector<Iob> out;
  for (const auto& t : j) {
    auto v = t.is_string() ? parse_iob(t.get<std::string>()) : std::nullopt;
    if (!v) throw RecordError("iob tags must be \"B\", \"I\" or \"O\"");
    out.push_back(*v);
  }
  return out;
}

inline std::string get_string(const nlohmann::json& j, const char* key, bool required = true) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    if (required) throw RecordError(std::string("missing field ") + key);
    return {};
  }
  if (!it->is_string()) throw RecordError(std::string("field ") + key + " must be a string");
  return it->get<std::string>();
}

inline std::optional<double> get_number(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw RecordError(std::string("field ") + key + " must be a number or null");
  return it->get<double>();
}

inline Review review_from_json(const nlohmann::json& j, const Date& cutoff) {
  if (!j.is_object()) throw RecordError("record is not a JSON object");
  Review r;
  r.review_id = get_string(j, "review_id");
  r.professor_id = get_string(j, "professor_id");
  r.school = get_string(j, "school", false);
  r.subject = get_string(j, "subject", false);
  r.text = get_string(j, "text");
  auto d = parse_date(get_string(j, "date"));
  if (!d) throw RecordError("invalid date");
  r.date = *d;
  r.quality = check_rating(get_number(j, "quality"), "quality");
  r.difficulty = check_rating(get_number(j, "difficulty"), "difficulty");
  if (auto it = j.find("gender"); it != j.end() && !it->is_null()) {
    auto g = it->is_string() ? parse_gender(it->get<std::string>()) : std::nullopt;
    if (!g) throw RecordError("gender must be male, female, unknown or null");
    r.gender = g;
  }
  if (auto it = j.find("spans"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw RecordError("spans must be an array of [start, end] pairs");
    std::vector<CharSpan> spans;
    for (const auto& p : *it) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() || !p[1].is_number_unsigned())
        throw RecordError("spans must be an array of [start, end] pairs");
      spans.push_back({p[0].get<size_t>(), p[1].get<size_t>()});
    }
    r.spans = std::move(spans);
  }
  if (auto it = j.find("doc_label"); it != j.end() && !it->is_null()) {
    if (!it->is_boolean()) throw RecordError("doc_label must be a boolean or null");
    r.doc_label = it->get<bool>();
  }
  // Token-level tags are accepted as an alternative to spans.
  if (auto it = j.find("iob"); it != j.end() && !it->is_null()) {
    auto tags = iob_from_json(*it);
    auto toks = tokenize(r.text);
    if (tags.size() != toks.size()) throw AnnotationError("iob length mismatch");
    if (!iob_well_formed(tags)) throw AnnotationError("iob not well formed (I after O)");
    auto spans = chunks_to_spans(toks, tags);
    if (r.spans && *r.spans != spans) throw AnnotationError("iob disagrees with spans");
    r.spans = std::move(spans);
  }
  finish_review(r, cutoff);
  return r;
}

inline std::string spans_to_csv(const std::vector<CharSpan>& spans) {
  std::string out;
  for (const auto& s : spans) {
    if (!out.empty()) out += ';';
    out += std::to_string(s.begin) + "-" + std::to_string(s.end);
  }
  return out;
}

inline std::vector<CharSpan> spans_from_csv(std::string_view field) {
  std::vector<CharSpan> out;
  if (str::trim(field).empty()) return out;
  for (const auto& part : str::split(field, ';')) {
    auto dash = part.find('-');
    if (dash == std::string::npos) throw RecordError("spans must be start-end pairs");
    auto b = str::parse_int(std::string_view(part).substr(0, dash));
    auto e = str::parse_int(std::string_view(part).substr(dash + 1));
    if (!b || !e || *b < 0 || *e < 0) throw RecordError("spans must be start-end pairs");
    out.push_back({size_t(*b), size_t(*e)});
  }
  return out;
}

// CSV has no null: an empty cell is absent, the literal "[]" is an empty
// span list.
inline Review review_from_csv(const csv::Table& t, const csv::Record& rec, const Date& cutoff) {
  if (rec.fields.size() != t.header().size()) throw RecordError("wrong number of columns");
  auto cell = [&](const char* name) -> std::string {
    return t.has(name) ? rec.fields[t.column(name)] : std::string();
  };
  auto require = [&](const char* name) {
    if (!t.has(name)) throw RecordError(std::string("missing column ") + name);
    return cell(name);
  };
  Review r;
  r.review_id = std::string(str::trim(require("review_id")));
  r.professor_id = require("professor_id");
  r.school = cell("school");
  r.subject = cell("subject");
  r.text = require("text");
  auto d = parse_date(str::trim(require("date")));
  if (!d) throw RecordError("invalid date");
  r.date = *d;
  auto rating = [&](const char* name) -> std::optional<double> {
    auto c = cell(name);
    if (str::trim(c).empty()) return std::nullopt;
    auto v = str::parse_double(c);
    if (!v) throw RecordError(std::string(name) + " is not a number");
    return check_rating(v, name);
  };
  r.quality = rating("quality");
  r.difficulty = rating("difficulty");
  if (auto g = str::trim(cell("gender")); !g.empty()) {
    auto pg = parse_gender(g);
    if (!pg) throw RecordError("gender must be male, female or unknown");
    r.gender = pg;
  }
  if (auto s = str::trim(cell("spans")); !s.empty()) r.spans = s == "[]" ? std::vector<CharSpan>{} : spans_from_csv(s);
  if (auto b = str::trim(cell("doc_label")); !b.empty()) {
    auto v = str::parse_bool(b);
    if (!v) throw RecordError("doc_label must be true or false");
    r.doc_label = v;
  }
  finish_review(r, cutoff);
  return r;
}

}  // namespace detail

inline nlohmann::json to_json(const Review& r) {
  nlohmann::json j;
  j["review_id"] = r.review_id;
  j["professor_id"] = r.professor_id;
  j["school"] = r.school;
  j["subject"] = r.subject;
  j["text"] = r.text;
  j["date"] = r.date.str();
  j["quality"] = r.quality ? nlohmann::json(*r.quality) : nlohmann::json(nullptr);
  j["difficulty"] = r.difficulty ? nlohmann::json(*r.difficulty) : nlohmann::json(nullptr);
  j["gender"] = r.gender ? nlohmann::json(std::string(to_string(*r.gender))) : nlohmann::json(nullptr);
  if (r.spans) {
    auto a = nlohmann::json::array();
    for (const auto& s : *r.spans) a.push_back({s.begin, s.end});
    j["spans"] = a;
  } else {
    j["spans"] = nullptr;
  }
  j["doc_label"] = r.doc_label ? nlohmann::json(*r.doc_label) : nlohmann::json(nullptr);
  return j;
}

inline Review review_from_json(const nlohmann::json& j, const Date& cutoff = kPepperCutoff) {
  return detail::review_from_json(j, cutoff);
}

// Parses corpus text. Malformed records throw CorpusError listing every bad
// line unless `lenient`; annotation errors drop only the offending record;
// a duplicate review_id always throws.
inline LoadedCorpus parse_corpus(std::string_view text, CorpusFormat format, const LoadOptions& opt = {}) {
  LoadedCorpus out;
  std::vector<LoadIssue> malformed;
  std::unordered_set<std::string> seen;
  auto accept = [&](Review r, size_t line) {
    if (!seen.insert(r.review_id).second)
      throw CorpusError("line " + std::to_string(line) + ": duplicate review_id '" + r.review_id + "'",
                        {{line, r.review_id, "duplicate review_id"}});
    if (r.spans) {
      try {
        out.labeled.push_back(make_labeled(r));
        r.doc_label = out.labeled.back().doc_label;
      } catch (const ValidationError& e) {
        out.rejected.push_back({line, r.review_id, e.what()});
        return;
      }
    }
    out.reviews.push_back(std::move(r));
  };
  auto handle = [&](size_t line, auto&& parse_one) {
    try {
      accept(parse_one(), line);
    } catch (const detail::AnnotationError& e) {
      out.rejected.push_back({line, {}, e.what()});
    } catch (const detail::RecordError& e) {
      malformed.push_back({line, {}, e.what()});
    } catch (const nlohmann::json::exception& e) {
      malformed.push_back({line, {}, std::string("invalid JSON: ") + e.what()});
    }
  };

  if (format == CorpusFormat::jsonl) {
    size_t line = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
      ++line;
      if (str::trim(raw).empty()) continue;
      handle(line, [&] { return detail::review_from_json(nlohmann::json::parse(raw), opt.cutoff); });
    }
  } else {
    auto table = csv::Table::parse(text);
    for (const auto& rec : table.rows()) handle(rec.line, [&] { return detail::review_from_csv(table, rec, opt.cutoff); });
  }

  if (!malformed.empty()) {
    if (!opt.lenient) {
      std::string msg = "malformed records:";
      for (const auto& m : malformed) msg += "\n  line " + std::to_string(m.line) + ": " + m.message;
      throw CorpusError(msg, malformed);
    }
    out.skipped = std::move(malformed);
  }
  return out;
}

inline LoadedCorpus load_corpus(const std::string& path, CorpusFormat format, const LoadOptions& opt = {}) {
  return parse_corpus(str::read_file(path), format, opt);
}

inline LoadedCorpus load_corpus(const std::string& path, const LoadOptions& opt = {}) {
  return load_corpus(path, format_for_path(path), opt);
}

inline std::string format_double(double v) { return nlohmann::json(v).dump(); }

inline std::string write_corpus_string(const std::vector<Review>& reviews, CorpusFormat format) {
  std::ostringstream os;
  if (format == CorpusFormat::jsonl) {
    for (const auto& r : reviews) os << to_json(r).dump() << '\n';
    return os.str();
  }
  csv::write_row(os, {"review_id", "professor_id", "school", "subject", "text", "date", "quality", "difficulty",
                      "gender", "spans", "doc_label"});
  for (const auto& r : reviews) {
    std::string spans;
    if (r.spans) spans = r.spans->empty() ? "[]" : detail::spans_to_csv(*r.spans);
    csv::write_row(os, {r.review_id, r.professor_id, r.school, r.subject, r.text, r.date.str(),
                        r.quality ? format_double(*r.quality) : "", r.difficulty ? format_double(*r.difficulty) : "",
                        r.gender ? std::string(to_string(*r.gender)) : "", spans,
                        r.doc_label ? (*r.doc_label ? "true" : "false") : ""});
  }
  return os.str();
}

inline void write_corpus(const std::string& path, const std::vector<Review>& reviews, CorpusFormat format) {
  str::write_file(path, write_corpus_string(reviews, format));
}

inline void write_corpus(const std::string& path, const std::vector<Review>& reviews) {
  write_corpus(path, reviews, format_for_path(path));
}

inline CorpusStats corpus_stats(const LoadedCorpus& c) {
  CorpusStats s;
  s.reviews = c.reviews.size();
  s.labeled = c.labeled.size();
  std::set<std::string> types;
  for (const auto& lr : c.labeled) s.positives += lr.doc_label;
  for (const auto& r : c.reviews) {
    for (const auto& t : tokenize(r.text)) {
      if (is_punct_token(t) || is_emoticon(t.surface)) continue;
      ++s.token_count;
      types.insert(t.lower);
    }
  }
  s.type_count = types.size();
  return s;
}

}  // namespace pepper
