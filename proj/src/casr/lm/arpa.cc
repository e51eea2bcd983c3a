// casr/lm/arpa.cc

// Copyright 2026  CASR Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "casr/lm/arpa.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "casr/util/error.h"
#include "casr/util/io.h"

namespace casr {

namespace {

std::string join_words(const std::vector<std::string>& words, size_t begin, size_t end) {
  std::string key;
  for (size_t i = begin; i < end; ++i) {
    if (i > begin) key += ' ';
    key += words[i];
  }
  return key;
}

std::string strip(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

// %.7g keeps the fixtures' hand constants intact through a round trip.
std::string fmt_log10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.7g", v);
  return buf;
}

}  // namespace

const ArpaModel::Entry* ArpaModel::find(const std::vector<std::string>& words) const {
  size_t k = words.size();
  if (k == 0 || k > tables_.size()) return nullptr;
  const auto& table = tables_[k - 1];
  auto it = table.find(join_words(words, 0, k));
  return it == table.end() ? nullptr : &it->second;
}

double ArpaModel::score_word(const std::vector<std::string>& context, const std::string& word,
                             bool map_oov_to_unk) const {
  std::string w = word;
  if (!has_word(w)) {
    if (map_oov_to_unk && has_unk()) {
      w = kUnknownWord;
    } else {
      throw OovWord(word);
    }
  }
  // Truncate to the last order-1 context words.
  size_t max_ctx = static_cast<size_t>(order() - 1);
  std::vector<std::string> ctx(context);
  if (ctx.size() > max_ctx) ctx.erase(ctx.begin(), ctx.end() - static_cast<long>(max_ctx));

  // Backoff recursion, iterative over successively shorter contexts.
  double backoff_sum = 0.0;
  while (true) {
    std::vector<std::string> ngram(ctx);
    ngram.push_back(w);
    if (const Entry* e = find(ngram)) return backoff_sum + e->log10_prob;
    if (ctx.empty()) {
      // Unigram must exist for any in-vocab word.
      throw MalformedArpa("no unigram entry for in-vocabulary word '" + w + "'");
    }
    if (const Entry* c = find(ctx)) {
      if (c->has_backoff) backoff_sum += c->log10_backoff;
    }
    ctx.erase(ctx.begin());
  }
}

ArpaModel parse_arpa(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  auto next_line = [&](std::string* out) -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      *out = strip(line);
      return true;
    }
    return false;
  };

  std::string cur;
  // Skip anything before \data\ (ARPA files may carry a free-text preamble).
  bool saw_data = false;
  while (next_line(&cur)) {
    if (cur == "\\data\\") {
      saw_data = true;
      break;
    }
  }
  if (!saw_data) throw MalformedArpa("missing \\data\\ section");

  // Declared counts: "ngram k=N" lines until the first section header.
  std::map<int, size_t> declared;
  while (next_line(&cur)) {
    if (cur.empty()) continue;
    if (cur[0] == '\\') break;
    auto toks = split_ws(cur);
    if (toks.size() != 2 || toks[0] != "ngram")
      throw MalformedArpa("bad count line at " + std::to_string(lineno) + ": " + cur);
    size_t eq = toks[1].find('=');
    if (eq == std::string::npos)
      throw MalformedArpa("bad count line at " + std::to_string(lineno) + ": " + cur);
    int k = std::stoi(toks[1].substr(0, eq));
    size_t n = static_cast<size_t>(std::stoull(toks[1].substr(eq + 1)));
    if (k <= 0) throw MalformedArpa("non-positive n-gram order in counts");
    declared[k] = n;
  }
  if (declared.empty()) throw MalformedArpa("empty \\data\\ section");
  int order = declared.rbegin()->first;
  for (int k = 1; k <= order; ++k)
    if (declared.count(k) == 0)
      throw MalformedArpa("missing count declaration for order " + std::to_string(k));

  ArpaModel model;
  model.tables_.resize(static_cast<size_t>(order));

  // cur holds the first section header.
  while (cur != "\\end\\") {
    if (cur.empty() || cur[0] != '\\')
      throw MalformedArpa("expected section header at line " + std::to_string(lineno));
    int k = 0;
    if (std::sscanf(cur.c_str(), "\\%d-grams:", &k) != 1 || k < 1 || k > order)
      throw MalformedArpa("bad section header '" + cur + "'");
    auto& table = model.tables_[static_cast<size_t>(k - 1)];

    bool section_done = false;
    while (next_line(&cur)) {
      if (cur.empty()) continue;
      if (cur[0] == '\\') {
        section_done = true;
        break;
      }
      auto toks = split_ws(cur);
      // log10p w1..wk [backoff]
      if (toks.size() != static_cast<size_t>(k + 1) && toks.size() != static_cast<size_t>(k + 2))
        throw MalformedArpa("bad " + std::to_string(k) + "-gram line at " +
                            std::to_string(lineno) + ": " + cur);
      ArpaModel::Entry e;
      try {
        e.log10_prob = std::stod(toks[0]);
        if (toks.size() == static_cast<size_t>(k + 2)) {
          e.log10_backoff = std::stod(toks.back());
          e.has_backoff = true;
        }
      } catch (const std::exception&) {
        throw MalformedArpa("bad number at line " + std::to_string(lineno) + ": " + cur);
      }
      std::string key = join_words(toks, 1, static_cast<size_t>(k + 1));
      if (!table.emplace(key, e).second)
        throw MalformedArpa("duplicate " + std::to_string(k) + "-gram '" + key + "'");
      if (k == 1) model.vocab_.insert(toks[1]);
    }
    if (!section_done) throw MalformedArpa("missing \\end\\");
  }

  for (int k = 1; k <= order; ++k) {
    size_t actual = model.tables_[static_cast<size_t>(k - 1)].size();
    if (actual != declared[k])
      throw MalformedArpa("count mismatch for order " + std::to_string(k) + ": declared " +
                          std::to_string(declared[k]) + ", found " + std::to_string(actual));
  }

  // Prefix closure: every (k+1)-gram's first k words must be a k-gram entry,
  // otherwise its backoff weight could never be consulted.
  for (int k = 2; k <= order; ++k) {
    for (const auto& [key, e] : model.tables_[static_cast<size_t>(k - 1)]) {
      (void)e;
      size_t cut = key.rfind(' ');
      std::string prefix = key.substr(0, cut);
      if (model.tables_[static_cast<size_t>(k - 2)].count(prefix) == 0)
        throw MalformedArpa("missing prefix '" + prefix + "' for " + std::to_string(k) +
                            "-gram '" + key + "'");
    }
  }
  return model;
}

ArpaModel load_arpa(const std::string& path) { return parse_arpa(slurp_file(path)); }

std::string serialize_arpa(const ArpaModel& model) {
  std::ostringstream out;
  out << "\\data\\\n";
  for (int k = 1; k <= model.order(); ++k)
    out << "ngram " << k << "=" << model.ngram_count(k) << "\n";
  for (int k = 1; k <= model.order(); ++k) {
    out << "\n\\" << k << "-grams:\n";
    // Sorted keys keep the output stable across runs.
    std::map<std::string, ArpaModel::Entry> ordered;
    for (const auto& [key, e] : model.tables_[static_cast<size_t>(k - 1)]) ordered[key] = e;
    for (const auto& [key, e] : ordered) {
      out << fmt_log10(e.log10_prob) << "\t" << key;
      if (e.has_backoff) out << "\t" << fmt_log10(e.log10_backoff);
      out << "\n";
    }
  }
  out << "\n\\end\\\n";
  return out.str();
}

std::vector<std::string> tokenize(const std::string& text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return split_ws(lower);
}

SentenceScore score_sentence(const ArpaModel& model, const std::vector<std::string>& words,
                             bool map_oov_to_unk) {
  if (words.empty()) throw EmptySentence("cannot score an empty sentence");
  SentenceScore score;
  LmState state(model);
  for (const auto& w : words) {
    if (!model.has_word(w)) ++score.oov_count;
    score.log10_total += state.advance(w, map_oov_to_unk);
  }
  score.log10_total += state.end_sentence();
  return score;
}

double LmState::advance(const std::string& word, bool map_oov_to_unk) {
  double s = model_->score_word(context_, word, map_oov_to_unk);
  std::string w = word;
  if (!model_->has_word(w) && map_oov_to_unk && model_->has_unk()) w = kUnknownWord;
  context_.push_back(w);
  size_t max_ctx = static_cast<size_t>(model_->order() - 1);
  if (context_.size() > max_ctx)
    context_.erase(context_.begin(), context_.end() - static_cast<long>(max_ctx));
  return s;
}

double LmState::end_sentence() const { return model_->score_word(context_, kSentenceEnd); }

ArpaModel estimate_arpa(const std::vector<std::vector<std::string>>& sentences, int order,
                        double discount) {
  if (order < 1) throw ConfigError("n-gram order must be at least 1");
  if (discount <= 0.0 || discount >= 1.0)
    throw ConfigError("discount must lie strictly between 0 and 1");

  // Count n-grams over <s>-padded sentences.
  std::vector<std::map<std::string, int64_t>> counts(static_cast<size_t>(order));
  std::map<std::string, int64_t> context_totals;  // per (k-1)-context, k >= 2
  for (const auto& sent : sentences) {
    std::vector<std::string> padded;
    padded.push_back(kSentenceStart);
    for (const auto& w : sent) padded.push_back(w);
    padded.push_back(kSentenceEnd);
    for (size_t i = 0; i < padded.size(); ++i) {
      for (int k = 1; k <= order; ++k) {
        if (i + static_cast<size_t>(k) > padded.size()) break;
        // <s> is context only, never predicted as a unigram event.
        if (k == 1 && padded[i] == kSentenceStart) {
          counts[0][padded[i]] += 0;  // still enters the vocabulary
          continue;
        }
        std::string key = join_words(padded, i, i + static_cast<size_t>(k));
        counts[static_cast<size_t>(k - 1)][key] += 1;
        if (k >= 2)
          context_totals[join_words(padded, i, i + static_cast<size_t>(k) - 1)] += 1;
      }
    }
  }

  int64_t unigram_total = 0;
  for (const auto& [w, c] : counts[0])
    if (w != kSentenceStart) unigram_total += c;
  if (unigram_total == 0) throw ConfigError("no unigram events in training sentences");

  ArpaModel model;
  model.tables_.resize(static_cast<size_t>(order));
  size_t n_unigrams = counts[0].size();

  for (const auto& [w, c] : counts[0]) {
    ArpaModel::Entry e;
    if (w == kSentenceStart) {
      // Conventional placeholder: <s> carries no probability mass of its own.
      e.log10_prob = -99.0;
    } else {
      // Discounted ML with the held-out mass spread uniformly; keeps the
      // unigram distribution summing to one.
      double p = (1.0 - discount) * static_cast<double>(c) / static_cast<double>(unigram_total) +
                 discount / static_cast<double>(n_unigrams - 1);
      e.log10_prob = std::log10(p);
    }
    model.tables_[0][w] = e;
    model.vocab_.insert(w);
  }

  for (int k = 2; k <= order; ++k) {
    for (const auto& [key, c] : counts[static_cast<size_t>(k - 1)]) {
      size_t cut = key.rfind(' ');
      std::string context = key.substr(0, cut);
      int64_t ctx_total = context_totals[context];
      ArpaModel::Entry e;
      e.log10_prob =
          std::log10((1.0 - discount) * static_cast<double>(c) / static_cast<double>(ctx_total));
      model.tables_[static_cast<size_t>(k - 1)][key] = e;
    }
  }

  // Backoff weights so each context's conditionals sum to one:
  // bo(ctx) = discount / (1 - sum of lower-order scores of seen successors).
  for (int k = 1; k < order; ++k) {
    for (auto& [key, e] : model.tables_[static_cast<size_t>(k - 1)]) {
      std::vector<std::string> ctx = split_ws(key);
      double seen_lower = 0.0;
      bool any = false;
      std::string prefix = key + ' ';
      for (const auto& [hkey, hc] : counts[static_cast<size_t>(k)]) {
        (void)hc;
        if (hkey.compare(0, prefix.size(), prefix) != 0) continue;
        any = true;
        std::string word = hkey.substr(prefix.size());
        std::vector<std::string> shorter(ctx.begin() + 1, ctx.end());
        seen_lower += std::pow(10.0, model.score_word(shorter, word));
      }
      if (any) {
        e.has_backoff = true;
        e.log10_backoff = std::log10(discount / (1.0 - seen_lower));
      }
    }
  }
  return model;
}

}  // namespace casr
