// casr/ctc/alphabet.cc

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

#include "casr/ctc/alphabet.h"

#include <cctype>

#include "casr/util/error.h"

namespace casr {

Alphabet Alphabet::from_chars(const std::string& symbols) {
  Alphabet a;
  a.lookup_.assign(256, -1);
  for (char c : symbols) {
    const auto uc = static_cast<unsigned char>(c);
    if (a.lookup_[uc] >= 0) {
      throw ConfigError(std::string("duplicate alphabet symbol '") + c + "'");
    }
    a.lookup_[uc] = static_cast<int>(a.chars_.size());
    a.chars_.push_back(c);
  }
  if (a.chars_.empty()) throw ConfigError("alphabet needs at least one symbol");
  return a;
}

const Alphabet& Alphabet::default_english() {
  static const Alphabet a = from_chars("abcdefghijklmnopqrstuvwxyz '");
  return a;
}

Alphabet Alphabet::toy_letters(int n) {
  if (n < 1 || n > 26) throw ConfigError("toy alphabet needs 1..26 letters");
  std::string s;
  for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('a' + i));
  return from_chars(s);
}

int Alphabet::index_of(char c) const { return lookup_[static_cast<unsigned char>(c)]; }

LabelSequence Alphabet::encode(const std::string& text) const {
  LabelSequence out;
  out.reserve(text.size());
  for (char c : text) {
    const char lc = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const int idx = index_of(lc);
    if (idx < 0) {
      throw ConfigError(std::string("character '") + c + "' is not in the alphabet");
    }
    out.push_back(idx);
  }
  return out;
}

std::string Alphabet::decode(const LabelSequence& labels) const {
  std::string out;
  out.reserve(labels.size());
  for (int l : labels) {
    if (l < 0 || l >= size() || is_blank(l)) {
      throw ConfigError("label " + std::to_string(l) + " is not a printable symbol");
    }
    out.push_back(char_at(l));
  }
  return out;
}

}  // namespace casr
