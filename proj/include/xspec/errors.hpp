// Copyright 2026 The xspec-eval Authors
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

#ifndef XSPEC_ERRORS_HPP
#define XSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace xspec {

/// Base class for all toolkit errors. `category()` is a stable
/// machine-readable tag; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}

  const std::string& category() const { return category_; }

 private:
  std::string category_;
};

/// Tensor/matrix extents do not match what an operation requires.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& message) : Error("shape", message) {}
};

/// An input file does not conform to its documented format.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error("parse", message) {}
};

/// An argument value is outside the operation's domain.
class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& message)
      : Error("argument", message) {}
};

/// Input is structurally valid but statistically degenerate
/// (empty class, zero spread, too few samples).
class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string& message)
      : Error("degenerate-input", message) {}
};

/// Two trial collections that must share keys do not line up.
class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string& message)
      : Error("alignment", message) {}
};

/// A numeric routine received input outside its mathematical domain
/// (asymmetry, negative eigenvalue, clamp violation).
class NumericDomainError : public Error {
 public:
  explicit NumericDomainError(const std::string& message)
      : Error("numeric-domain", message) {}
};

/// A file could not be opened or written.
class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io", message) {}
};

}  // namespace xspec

#endif  // XSPEC_ERRORS_HPP
