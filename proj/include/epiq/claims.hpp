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

#ifndef EPIQ_CLAIMS_HPP_
#define EPIQ_CLAIMS_HPP_

#include <map>
#include <string>
#include <vector>

#include "epiq/errors.hpp"

namespace epiq {

/// "Register <label> holds <value>". Values are outcome names: "0"/"1" for
/// one-qubit records, fail/ok/excess0/excess1 for entangled-basis records.
struct Claim {
  std::string register_label;
  std::string value;

  std::string str() const { return register_label + "=" + value; }

  friend bool operator==(const Claim& a, const Claim& b) {
    return a.register_label == b.register_label && a.value == b.value;
  }
  friend bool operator!=(const Claim& a, const Claim& b) { return !(a == b); }
  friend bool operator<(const Claim& a, const Claim& b) {
    if (a.register_label != b.register_label)
      return a.register_label < b.register_label;
    return a.value < b.value;
  }
};

/// Splits "P_A[W=fail]=1" at the last '=' into register and value.
inline Claim parse_claim(const std::string& text) {
  auto pos = text.rfind('=');
  if (pos == std::string::npos || pos == 0 || pos + 1 == text.size()) {
    throw Error("malformed claim (expected <register>=<value>): " + text);
  }
  return Claim{text.substr(0, pos), text.substr(pos + 1)};
}

enum class Verdict {
  kCertain,     // conditional probability 1 within tolerance
  kNotCertain,  // reachable but not deterministic
  kUnreachable  // conditioning outcome has (near-)zero probability
};

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kCertain: return "certain";
    case Verdict::kNotCertain: return "not-certain";
    case Verdict::kUnreachable: return "unreachable";
  }
  return "?";
}

/// One row of an inference table: "own outcome <own_value> implies
/// <hypothesis>", with the conditional distribution that produced the
/// verdict (empty for unreachable rows).
struct TableRow {
  std::string own_value;
  Claim hypothesis;
  Verdict verdict = Verdict::kNotCertain;
  std::map<std::string, double> distribution;
};

/// What one agent can conclude from each of their possible outcomes.
/// Antecedents range over values of the owner's outcome register.
struct InferenceTable {
  std::string owner;
  std::string own_register;
  std::vector<TableRow> rows;

  const TableRow* find(const std::string& own_value,
                       const Claim& hypothesis) const {
    for (const auto& r : rows) {
      if (r.own_value == own_value && r.hypothesis == hypothesis) return &r;
    }
    return nullptr;
  }

  Verdict verdict(const std::string& own_value, const Claim& hyp) const {
    const TableRow* r = find(own_value, hyp);
    if (r == nullptr) {
      throw Error("table of " + owner + " has no row " + own_register + "=" +
                  own_value + " => " + hyp.str());
    }
    return r->verdict;
  }

  bool has_certain_row() const {
    for (const auto& r : rows) {
      if (r.verdict == Verdict::kCertain) return true;
    }
    return false;
  }
};

}  // namespace epiq

#endif  // EPIQ_CLAIMS_HPP_
