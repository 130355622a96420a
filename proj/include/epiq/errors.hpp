// Copyright 2026 The epiq authors
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

#ifndef EPIQ_ERRORS_HPP_
#define EPIQ_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epiq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a protocol file violates the line grammar. Carries the
/// 1-based source position of the offending token.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("parse error at line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/// Raised when projecting a state onto an outcome whose probability is
/// below the reachability threshold.
class ZeroProbabilityError : public Error {
 public:
  ZeroProbabilityError(const std::string& what, double probability)
      : Error(what), probability_(probability) {}

  double probability() const { return probability_; }

 private:
  double probability_;
};

/// Raised when a derivation would rely on a trust edge that the trust
/// structure denies. Carries the offending pair.
class TrustDeniedError : public Error {
 public:
  TrustDeniedError(const std::string& truster, const std::string& trusted)
      : Error("trust denied: " + truster + " does not accept conclusions of " +
              trusted),
        truster_(truster),
        trusted_(trusted) {}

  const std::string& truster() const { return truster_; }
  const std::string& trusted() const { return trusted_; }

 private:
  std::string truster_;
  std::string trusted_;
};

namespace tol {

/// Per-amplitude tolerance for state equality checks.
inline constexpr double kAmplitude = 1e-10;
/// Tolerance on probabilities (certainty means P >= 1 - kProbability).
inline constexpr double kProbability = 1e-9;
/// Branches or rows below this probability are treated as unreachable.
inline constexpr double kUnreachable = 1e-12;
/// Default ceiling on qubits per allocation.
inline constexpr int kDefaultQubitCap = 24;

}  // namespace tol

}  // namespace epiq

#endif  // EPIQ_ERRORS_HPP_
