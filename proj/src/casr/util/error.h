// casr/util/error.h

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

#ifndef CASR_UTIL_ERROR_H_
#define CASR_UTIL_ERROR_H_

#include <stdexcept>
#include <string>

namespace casr {

// Base class for every recoverable domain error raised by the library.
// The CLI maps these to exit code 1; pybind maps them to python exceptions.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DurationTooShort : public Error {
 public:
  using Error::Error;
};

class InvalidAudio : public Error {
 public:
  using Error::Error;
};

class InvalidAugmentation : public Error {
 public:
  using Error::Error;
};

class ImpossibleAlignment : public Error {
 public:
  using Error::Error;
};

class OracleTooLarge : public Error {
 public:
  using Error::Error;
};

class MalformedArpa : public Error {
 public:
  using Error::Error;
};

class OovWord : public Error {
 public:
  explicit OovWord(const std::string& word)
      : Error("out-of-vocabulary word: \"" + word + "\""), word_(word) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

class EmptySentence : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class InputTooShort : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  explicit ParseError(const std::string& msg) : Error(msg), line_(-1) {}
  int line() const { return line_; }

 private:
  int line_;
};

class CascadeDegenerate : public Error {
 public:
  using Error::Error;
};

}  // namespace casr

#endif  // CASR_UTIL_ERROR_H_
