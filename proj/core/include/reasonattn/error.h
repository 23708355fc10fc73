/* Copyright 2026 The ReasonAttn Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef REASONATTN_ERROR_H_
#define REASONATTN_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reasonattn {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// Malformed input text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Well-formed input that violates a domain invariant. `subject` names the
// offending entity (object id, step index, file path, ...).
class ValidationError : public Error {
 public:
  ValidationError(const std::string& message, std::string subject);

  const std::string& subject() const { return subject_; }

 private:
  std::string subject_;
};

}  // namespace reasonattn

#endif  // REASONATTN_ERROR_H_
