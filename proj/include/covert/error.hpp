// Copyright 2026 The Covert Authors. All Rights Reserved.
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

#ifndef COVERT_ERROR_HPP_
#define COVERT_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace covert {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A text input (corpus, fixture, gold file, model) violated its format.
/// `line()` is 1-based; 0 means the error is not tied to a line.
class FormatError : public Error {
 public:
  FormatError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class NotInVocabulary : public Error {
 public:
  explicit NotInVocabulary(const std::string& word)
      : Error("not in vocabulary: '" + word + "'"), word_(word) {}

  const std::string& word() const noexcept { return word_; }

 private:
  std::string word_;
};

/// A quantity is mathematically undefined (zero norm, zero denominator).
class UndefinedResult : public Error {
 public:
  using Error::Error;
};

/// A caller broke a documented precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace covert

#endif  // COVERT_ERROR_HPP_
