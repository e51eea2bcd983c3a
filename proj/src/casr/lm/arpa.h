// casr/lm/arpa.h

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

#ifndef CASR_LM_ARPA_H_
#define CASR_LM_ARPA_H_

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace casr {

inline constexpr const char* kSentenceStart = "<s>";
inline constexpr const char* kSentenceEnd = "</s>";
inline constexpr const char* kUnknownWord = "<unk>";

// Backoff n-gram model loaded from an ARPA text file. Probabilities and
// backoff weights stay in log10, the file's convention; conversion to
// natural log happens at the rescoring boundary.
class ArpaModel {
 public:
  struct Entry {
    double log10_prob = 0.0;
    double log10_backoff = 0.0;  // 0 when absent (no penalty)
    bool has_backoff = false;
  };

  int order() const { return static_cast<int>(tables_.size()); }
  bool has_word(const std::string& word) const { return vocab_.count(word) != 0; }
  bool has_unk() const { return has_word(kUnknownWord); }
  size_t vocab_size() const { return vocab_.size(); }
  const std::unordered_set<std::string>& vocabulary() const { return vocab_; }

  size_t ngram_count(int k) const { return tables_[static_cast<size_t>(k - 1)].size(); }
  const Entry* find(const std::vector<std::string>& words) const;

  // Conditional log10 probability of `word` after `context` with standard
  // backoff: stored n-gram if present, else context backoff weight plus the
  // score under the shortened context. The context is truncated to the last
  // order-1 words. An out-of-vocabulary word throws OovWord unless
  // map_oov_to_unk is set and the model has <unk>.
  double score_word(const std::vector<std::string>& context, const std::string& word,
                    bool map_oov_to_unk = false) const;

  friend ArpaModel parse_arpa(const std::string& text);
  friend std::string serialize_arpa(const ArpaModel& model);
  friend ArpaModel estimate_arpa(const std::vector<std::vector<std::string>>& sentences, int order,
                                 double discount);

 private:
  // tables_[k-1]: k-gram key (words joined by ' ') -> entry
  std::vector<std::unordered_map<std::string, Entry>> tables_;
  std::unordered_set<std::string> vocab_;
};

struct SentenceScore {
  double log10_total = 0.0;
  int oov_count = 0;
};

// Parses ARPA text: \data\ header with declared counts, one \k-grams:
// section per order, \end\. Throws MalformedArpa on count mismatches and on
// (k+1)-grams whose k-word prefix is missing.
ArpaModel parse_arpa(const std::string& text);
ArpaModel load_arpa(const std::string& path);

// Canonical ARPA text for the model; parse(serialize(parse(x))) is stable.
std::string serialize_arpa(const ArpaModel& model);

// Lowercased whitespace tokenization.
std::vector<std::string> tokenize(const std::string& text);

// Sum of conditional scores with <s> context padding and a final </s> term.
// Throws EmptySentence on an empty word list, and propagates OovWord.
SentenceScore score_sentence(const ArpaModel& model, const std::vector<std::string>& words,
                             bool map_oov_to_unk = false);

// Incremental scoring state for word-at-a-time fusion in the decoder.
class LmState {
 public:
  explicit LmState(const ArpaModel& model) : model_(&model), context_{kSentenceStart} {}
  // log10 score of the next word; advances the context.
  double advance(const std::string& word, bool map_oov_to_unk);
  double end_sentence() const;  // log10 of the final </s> term

 private:
  const ArpaModel* model_;
  std::vector<std::string> context_;
};

// Maximum-likelihood estimator with a fixed discount, for building small
// test models only: probability mass `discount` per seen context is
// reassigned to backoff so the conditional distributions stay proper.
ArpaModel estimate_arpa(const std::vector<std::vector<std::string>>& sentences, int order,
                        double discount = 0.1);

}  // namespace casr

#endif  // CASR_LM_ARPA_H_
