// casr/ctc/alphabet.h

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

#ifndef CASR_CTC_ALPHABET_H_
#define CASR_CTC_ALPHABET_H_

#include <string>
#include <vector>

namespace casr {

// Non-blank output labels; index values refer to an Alphabet.
using LabelSequence = std::vector<int>;

// Ordered output symbol set with exactly one blank. The default covers
// a-z, space, apostrophe and a trailing blank.
class Alphabet {
 public:
  // symbols: one character per non-blank symbol, in index order; blank is
  // appended last. Throws ConfigError on duplicates.
  static Alphabet from_chars(const std::string& symbols);
  static const Alphabet& default_english();
  // Letters 'a'.. up to n letters plus blank; used by the toy tone corpus.
  static Alphabet toy_letters(int n);

  int size() const { return static_cast<int>(chars_.size()) + 1; }
  int blank() const { return static_cast<int>(chars_.size()); }
  bool is_blank(int i) const { return i == blank(); }

  char char_at(int i) const { return chars_[static_cast<size_t>(i)]; }
  // Index of a character, or -1 when absent.
  int index_of(char c) const;

  // Lowercases input; throws ConfigError on characters outside the alphabet.
  LabelSequence encode(const std::string& text) const;
  std::string decode(const LabelSequence& labels) const;

 private:
  std::vector<char> chars_;   // non-blank symbols, index order
  std::vector<int> lookup_;   // 256-entry char -> index map
};

}  // namespace casr

#endif  // CASR_CTC_ALPHABET_H_
