// casr/decoder/beam_search.cc

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

#include "casr/decoder/beam_search.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "casr/ctc/ctc.h"
#include "casr/decoder/rescore.h"
#include "casr/util/error.h"

namespace casr {

namespace {

constexpr double kLn10 = 2.302585092994046;

struct Cell {
  double lb = kLogZero;   // blank-ending mass
  double lnb = kLogZero;  // non-blank-ending mass
  double log10_lm = 0.0;
  bool lm_set = false;

  double total() const { return log_add(lb, lnb); }
};

// Fusion bookkeeping: labels are a collapsed prefix, so the word closed by
// a space at the end of `prefix` is the suffix after the previous space.
double word_close_increment(const ArpaModel& lm, const Alphabet& alphabet,
                            const LabelSequence& prefix) {
  int space = alphabet.index_of(' ');
  std::vector<std::string> words;
  std::string cur;
  for (int label : prefix) {
    if (label == space) {
      if (!cur.empty()) words.push_back(cur);
      cur.clear();
    } else {
      cur += alphabet.char_at(label);
    }
  }
  if (!cur.empty()) words.push_back(cur);
  if (words.empty()) return 0.0;  // a leading or doubled space closes nothing
  std::string last = words.back();
  std::vector<std::string> context{kSentenceStart};
  for (size_t i = 0; i + 1 < words.size(); ++i) lenient_word_score(lm, &context, words[i]);
  return lenient_word_score(lm, &context, last);
}

}  // namespace

double BeamHypothesis::log_p_total() const { return log_add(log_p_blank, log_p_nonblank); }

GreedyResult greedy_decode(const Matrix& log_probs, const Alphabet& alphabet) {
  if (log_probs.rows() > 0 && log_probs.cols() != static_cast<int64_t>(alphabet.size()))
    throw ConfigError("frame width does not match the alphabet");
  GreedyResult result;
  LabelSequence path;
  path.reserve(static_cast<size_t>(log_probs.rows()));
  for (int64_t t = 0; t < log_probs.rows(); ++t) {
    int best = 0;
    for (int64_t a = 1; a < log_probs.cols(); ++a)
      if (log_probs(t, a) > log_probs(t, best)) best = static_cast<int>(a);
    path.push_back(best);
    result.log_p_best_path += log_probs(t, best);
  }
  result.labels = collapse(path, alphabet.blank());
  return result;
}

std::vector<BeamHypothesis> prefix_beam_search(const Matrix& log_probs, const Alphabet& alphabet,
                                               const DecodeConfig& cfg, const ArpaModel* lm) {
  if (cfg.beam_width < 1) throw ConfigError("beam width must be positive");
  if (cfg.top_n < 1) throw ConfigError("top_n must be positive");
  if (cfg.lm_fusion && lm == nullptr) throw ConfigError("fusion needs a language model");
  if (log_probs.rows() > 0 && log_probs.cols() != static_cast<int64_t>(alphabet.size()))
    throw ConfigError("frame width does not match the alphabet");

  int blank = alphabet.blank();
  // std::map keys by label sequence: iteration order is deterministic and
  // lexicographic, which also settles ranking ties without extra state.
  std::map<LabelSequence, Cell> beam;
  Cell root;
  root.lb = 0.0;  // the empty prefix starts with certainty
  root.lm_set = true;
  beam.emplace(LabelSequence{}, root);

  auto prune_score = [&](const Cell& c) {
    double s = c.total();
    if (cfg.lm_fusion) s += cfg.lm_alpha * kLn10 * c.log10_lm;
    return s;
  };

  for (int64_t t = 0; t < log_probs.rows(); ++t) {
    std::map<LabelSequence, Cell> next;

    auto touch = [&](const LabelSequence& labels, const Cell& parent,
                     bool extends) -> Cell& {
      auto [it, inserted] = next.try_emplace(labels);
      Cell& cell = it->second;
      if (inserted && cfg.lm_fusion && !cell.lm_set) {
        cell.log10_lm = parent.log10_lm;
        if (extends && labels.back() == alphabet.index_of(' '))
          cell.log10_lm += word_close_increment(*lm, alphabet, labels);
        cell.lm_set = true;
      }
      return cell;
    };

    for (const auto& [prefix, cell] : beam) {
      double total = cell.total();

      // Zero-mass contributions must not materialize cells: a prefix only
      // reachable with probability zero is not a hypothesis.
      double stay = total + log_probs(t, blank);
      if (stay != kLogZero) {
        Cell& same = touch(prefix, cell, false);
        same.lb = log_add(same.lb, stay);
      }

      for (int c = 0; c < static_cast<int>(alphabet.size()); ++c) {
        if (c == blank) continue;
        double lp = log_probs(t, c);
        if (!prefix.empty() && prefix.back() == c) {
          // A repeat without a blank in between collapses onto the prefix.
          double rep_mass = cell.lnb + lp;
          if (rep_mass != kLogZero) {
            Cell& rep = touch(prefix, cell, false);
            rep.lnb = log_add(rep.lnb, rep_mass);
          }
          // Only blank-separated mass grows the prefix by the same char.
          double ext_mass = cell.lb + lp;
          if (ext_mass != kLogZero) {
            LabelSequence longer(prefix);
            longer.push_back(c);
            Cell& ext = touch(longer, cell, true);
            ext.lnb = log_add(ext.lnb, ext_mass);
          }
        } else {
          double ext_mass = total + lp;
          if (ext_mass != kLogZero) {
            LabelSequence longer(prefix);
            longer.push_back(c);
            Cell& ext = touch(longer, cell, true);
            ext.lnb = log_add(ext.lnb, ext_mass);
          }
        }
      }
    }

    // Keep the beam_width best by pruned score; score ties keep the
    // shorter, then lexicographically smaller prefix.
    if (static_cast<int>(next.size()) > cfg.beam_width) {
      std::vector<std::map<LabelSequence, Cell>::iterator> order;
      order.reserve(next.size());
      for (auto it = next.begin(); it != next.end(); ++it) order.push_back(it);
      std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
        double sa = prune_score(a->second), sb = prune_score(b->second);
        if (sa != sb) return sa > sb;
        if (a->first.size() != b->first.size()) return a->first.size() < b->first.size();
        return a->first < b->first;
      });
      std::map<LabelSequence, Cell> kept;
      for (int i = 0; i < cfg.beam_width; ++i) kept.insert(*order[static_cast<size_t>(i)]);
      next.swap(kept);
    }
    beam.swap(next);
  }

  std::vector<BeamHypothesis> out;
  out.reserve(beam.size());
  for (const auto& [labels, cell] : beam) {
    BeamHypothesis h;
    h.labels = labels;
    h.log_p_blank = cell.lb;
    h.log_p_nonblank = cell.lnb;
    h.log10_p_lm = cell.log10_lm;
    out.push_back(h);
  }
  std::stable_sort(out.begin(), out.end(), [&](const BeamHypothesis& a, const BeamHypothesis& b) {
    double sa = a.log_p_total(), sb = b.log_p_total();
    if (cfg.lm_fusion) {
      sa += cfg.lm_alpha * kLn10 * a.log10_p_lm;
      sb += cfg.lm_alpha * kLn10 * b.log10_p_lm;
    }
    if (sa != sb) return sa > sb;
    if (a.labels.size() != b.labels.size()) return a.labels.size() < b.labels.size();
    return a.labels < b.labels;
  });
  if (static_cast<int>(out.size()) > cfg.top_n) out.resize(static_cast<size_t>(cfg.top_n));
  return out;
}

}  // namespace casr
