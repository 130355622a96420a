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

#ifndef EPIQ_TIME_TAG_HPP_
#define EPIQ_TIME_TAG_HPP_

#include <cstdint>
#include <numeric>
#include <string>

#include "epiq/errors.hpp"

namespace epiq {

/// Exact rational step time. Protocol files write times like "2.9" which are
/// not representable as binary floats; tags are kept as normalized fractions
/// so that ordering and equality are exact and the original text round-trips.
class TimeTag {
 public:
  TimeTag() : num_(0), den_(1) {}
  TimeTag(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    normalize();
  }

  /// Parses a non-negative decimal literal ("3", "2.9", "1.60").
  static TimeTag parse(const std::string& text) {
    if (text.empty()) throw Error("empty time tag");
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool seen_dot = false;
    bool seen_digit = false;
    for (char c : text) {
      if (c == '.') {
        if (seen_dot) throw Error("malformed time tag: " + text);
        seen_dot = true;
        continue;
      }
      if (c < '0' || c > '9') throw Error("malformed time tag: " + text);
      seen_digit = true;
      num = num * 10 + (c - '0');
      if (seen_dot) den *= 10;
    }
    if (!seen_digit) throw Error("malformed time tag: " + text);
    TimeTag tag(num, den);
    tag.text_ = text;
    return tag;
  }

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }

  /// Original literal when parsed from text, else a canonical rendering.
  std::string str() const {
    if (!text_.empty()) return text_;
    if (den_ == 1) return std::to_string(num_);
    // Scale the reduced fraction back to a power-of-ten denominator.
    std::int64_t probe = den_;
    while (probe % 2 == 0) probe /= 2;
    while (probe % 5 == 0) probe /= 5;
    if (probe != 1) return std::to_string(num_) + "/" + std::to_string(den_);
    std::int64_t num = num_;
    std::int64_t den = den_;
    while (true) {
      std::int64_t d = den;
      while (d % 10 == 0) d /= 10;
      if (d == 1) break;
      if (d % 2 == 0) {
        num *= 5;
        den *= 5;
      } else {
        num *= 2;
        den *= 2;
      }
    }
    std::string digits = std::to_string(num);
    std::size_t frac = 0;
    for (std::int64_t d = den; d > 1; d /= 10) ++frac;
    while (digits.size() <= frac) digits.insert(digits.begin(), '0');
    if (frac > 0) digits.insert(digits.size() - frac, 1, '.');
    return digits;
  }

  double value() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend bool operator==(const TimeTag& a, const TimeTag& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const TimeTag& a, const TimeTag& b) {
    return !(a == b);
  }
  friend bool operator<(const TimeTag& a, const TimeTag& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator<=(const TimeTag& a, const TimeTag& b) {
    return a.num_ * b.den_ <= b.num_ * a.den_;
  }
  friend bool operator>(const TimeTag& a, const TimeTag& b) { return b < a; }
  friend bool operator>=(const TimeTag& a, const TimeTag& b) { return b <= a; }

 private:
  void normalize() {
    if (den_ <= 0) throw Error("time tag denominator must be positive");
    std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_;
  std::int64_t den_;
  std::string text_;
};

}  // namespace epiq

#endif  // EPIQ_TIME_TAG_HPP_
