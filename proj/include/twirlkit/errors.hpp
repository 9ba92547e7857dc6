// Copyright 2026 The twirlkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace twirlkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (non-square, mismatched qubit counts, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar argument lies outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested qubit count exceeds what a dense representation supports.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An object fails a structural check (CPTP, Hermiticity, normalization).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Linear system is singular or its condition number exceeds the cap.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double condition)
      : Error(what + " (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Extracted generator has a substantially negative rate.
class NonMarkovianError : public Error {
 public:
  NonMarkovianError(const std::string& what, double rate)
      : Error(what + " (rate " + std::to_string(rate) + ")"), rate_(rate) {}

  double rate() const noexcept { return rate_; }

 private:
  double rate_;
};

/// Bad experiment configuration or unparseable input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace twirlkit
