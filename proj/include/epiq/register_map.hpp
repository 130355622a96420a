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

#ifndef EPIQ_REGISTER_MAP_HPP_
#define EPIQ_REGISTER_MAP_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "epiq/errors.hpp"

namespace epiq {

/// Index of a wire in the dense statevector. Qubit k is the k-th bit of a
/// basis-state index, with the first allocated qubit as the least
/// significant bit. That makes allocation order, ket printouts and bit
/// arithmetic agree.
using QubitId = int;

enum class RegisterRole {
  kSystem,      // a physical system under study
  kOutcome,     // an agent's measurement record
  kInference,   // one cell of an agent's inference bank
  kPrediction,  // one prediction qubit of an agent
};

inline const char* role_name(RegisterRole role) {
  switch (role) {
    case RegisterRole::kSystem: return "system";
    case RegisterRole::kOutcome: return "outcome";
    case RegisterRole::kInference: return "inference";
    case RegisterRole::kPrediction: return "prediction";
  }
  return "?";
}

/// One allocated qubit: who owns it, what it is for, and its unique label.
struct RegisterEntry {
  std::string owner;  // agent name, or empty for plain systems
  RegisterRole role;
  std::string label;  // globally unique, e.g. "R", "A", "U[1]", "P_A[W=fail]"
  QubitId qubit;
};

/// Bijection between human-readable labels and qubit indices.
///
/// Entries are appended in canonical order (systems first, then each agent's
/// outcome/inference/prediction block) and never reordered, so the map fixes
/// the basis-state bit layout of a run.
class RegisterMap {
 public:
  QubitId add(std::string owner, RegisterRole role, std::string label) {
    if (index_.count(label)) {
      throw Error("duplicate register label: " + label);
    }
    QubitId id = static_cast<QubitId>(entries_.size());
    index_.emplace(label, id);
    entries_.push_back({std::move(owner), role, std::move(label), id});
    return id;
  }

  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<RegisterEntry>& entries() const { return entries_; }
  const RegisterEntry& entry(QubitId q) const { return entries_.at(q); }

  bool contains(const std::string& label) const {
    return index_.count(label) != 0;
  }

  QubitId qubit(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw Error("unknown register label: " + label);
    return it->second;
  }

  /// All qubits owned by `owner` with the given role, in allocation order.
  std::vector<QubitId> qubits_of(const std::string& owner,
                                 RegisterRole role) const {
    std::vector<QubitId> out;
    for (const auto& e : entries_) {
      if (e.owner == owner && e.role == role) out.push_back(e.qubit);
    }
    return out;
  }

 private:
  std::vector<RegisterEntry> entries_;
  std::unordered_map<std::string, QubitId> index_;
};

}  // namespace epiq

#endif  // EPIQ_REGISTER_MAP_HPP_
