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

#ifndef EPIQ_CONSISTENCY_HPP_
#define EPIQ_CONSISTENCY_HPP_

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "epiq/claims.hpp"
#include "epiq/errors.hpp"
#include "epiq/plan.hpp"
#include "epiq/protocol.hpp"

namespace epiq {

// ---------------------------------------------------------------------------
// Chaining certainty across agents. An agent that is certain of a claim may
// hand it to the agent owning the claimed register, who may be certain of
// something further; a recorded prediction "X concluded c" collapses to c
// itself. Trust gates every handover. A run is consistent when nothing any
// chain or surviving prediction asserts contradicts an intact record.
// ---------------------------------------------------------------------------

struct TrustStructure {
  /// Pairs (truster, trusted) whose handovers are refused. Empty means the
  /// trivial structure: everyone accepts everyone's conclusions.
  std::set<std::pair<std::string, std::string>> denied;

  /// Reflexive by construction: no denylist entry can stop an agent from
  /// accepting its own conclusions.
  bool allows(const std::string& truster, const std::string& trusted) const {
    return truster == trusted || denied.count({truster, trusted}) == 0;
  }

  void deny(const std::string& truster, const std::string& trusted) {
    denied.insert({truster, trusted});
  }

  static TrustStructure from_protocol(const Protocol& p) {
    TrustStructure t;
    for (const auto& [a, b] : p.trust_denied) t.deny(a, b);
    return t;
  }
};

struct ChainLink {
  std::string owner;  // agent whose table row or prediction fired
  Claim antecedent;
  Claim consequent;
  bool via_prediction = false;  // collapsed a recorded "P_x[c]=1" into c
};

struct InferenceChain {
  Claim start;
  std::vector<ChainLink> links;

  const Claim& conclusion() const {
    return links.empty() ? start : links.back().consequent;
  }

  std::string str() const {
    std::string out = start.str();
    for (const auto& link : links) out += " => " + link.consequent.str();
    return out;
  }
};

namespace detail {

inline std::string register_owner_name(const Protocol& p,
                                       const std::string& label) {
  if (const AgentDecl* a = outcome_owner(p, label)) return a->name;
  if (auto [a, h] = prediction_owner(p, label); a != nullptr) {
    (void)h;
    return a->name;
  }
  return label;  // systems own themselves
}

}  // namespace detail

/// Every certainty chain grounded in `start`, one chain per claim reachable
/// through certain table rows and collapsed predictions. Each handover must
/// pass the trust structure; a claim already on the path is never revisited.
inline std::vector<InferenceChain> derive_chains(
    const Protocol& p, const std::map<std::string, InferenceTable>& tables,
    const TrustStructure& trust, const Claim& start) {
  struct Node {
    InferenceChain chain;
    std::string last_owner;
    std::set<Claim> visited;
  };
  std::vector<InferenceChain> out;
  std::deque<Node> queue;
  queue.push_back(
      {{start, {}}, detail::register_owner_name(p, start.register_label),
       {start}});
  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    const Claim& current = node.chain.conclusion();
    for (const auto& [name, table] : tables) {
      if (table.own_register != current.register_label) continue;
      if (!trust.allows(node.last_owner, name)) continue;
      for (const auto& row : table.rows) {
        if (row.own_value != current.value ||
            row.verdict != Verdict::kCertain) {
          continue;
        }
        if (node.visited.count(row.hypothesis) != 0) continue;
        Node next = node;
        next.chain.links.push_back({name, current, row.hypothesis, false});
        next.last_owner = name;
        next.visited.insert(row.hypothesis);
        out.push_back(next.chain);
        queue.push_back(std::move(next));
      }
    }
    if (current.value == "1") {
      if (auto [owner, h] = prediction_owner(p, current.register_label);
          owner != nullptr && trust.allows(node.last_owner, owner->name)) {
        const Claim& inner = owner->hypotheses[h];
        if (node.visited.count(inner) == 0) {
          Node next = node;
          next.chain.links.push_back({owner->name, current, inner, true});
          next.last_owner = owner->name;
          next.visited.insert(inner);
          out.push_back(next.chain);
          queue.push_back(std::move(next));
        }
      }
    }
  }
  return out;
}

/// The table every agent implicitly holds about its own register: seeing v
/// makes it certain the register reads v.
inline InferenceTable identity_table(const std::string& owner,
                                     const std::string& own_register,
                                     const std::vector<std::string>& values) {
  InferenceTable table;
  table.owner = owner;
  table.own_register = own_register;
  for (const auto& v : values) {
    TableRow row;
    row.own_value = v;
    row.hypothesis = Claim{own_register, v};
    row.verdict = Verdict::kCertain;
    for (const auto& w : values) row.distribution[w] = w == v ? 1.0 : 0.0;
    table.rows.push_back(std::move(row));
  }
  return table;
}

/// Transitive composition: rows of `first` that are certain of a value of
/// `second`'s own register pick up `second`'s certain conclusions. Anything
/// less than certainty does not compose. A handover the trust structure
/// refuses is an error here — callers that want silent pruning walk chains
/// with derive_chains instead.
inline InferenceTable combine(const InferenceTable& first,
                              const InferenceTable& second,
                              const TrustStructure& trust) {
  if (!trust.allows(first.owner, second.owner)) {
    throw TrustDeniedError(first.owner, second.owner);
  }
  InferenceTable table;
  table.owner = first.owner;
  table.own_register = first.own_register;
  for (const auto& row : first.rows) {
    if (row.verdict != Verdict::kCertain) continue;
    if (row.hypothesis.register_label != second.own_register) continue;
    for (const auto& next : second.rows) {
      if (next.own_value != row.hypothesis.value ||
          next.verdict != Verdict::kCertain) {
        continue;
      }
      TableRow combined;
      combined.own_value = row.own_value;
      combined.hypothesis = next.hypothesis;
      combined.verdict = Verdict::kCertain;
      combined.distribution = next.distribution;
      table.rows.push_back(std::move(combined));
    }
  }
  return table;
}

struct ObservedRecord {
  std::string register_label;
  std::string value;
};

struct ContradictionReport {
  std::string severity;  // prediction-vs-outcome | prediction-vs-prediction
  std::string owner;     // agent whose conclusion failed
  Claim predicted;
  std::string provenance;  // chain text or the recorded prediction register
  ObservedRecord observed;
};

inline bool operator<(const ContradictionReport& a,
                      const ContradictionReport& b) {
  auto key = [](const ContradictionReport& r) {
    return std::tie(r.severity, r.predicted, r.provenance,
                    r.observed.register_label, r.observed.value);
  };
  return key(a) < key(b);
}

inline bool operator==(const ContradictionReport& a,
                       const ContradictionReport& b) {
  return !(a < b) && !(b < a);
}

/// Checks one run snapshot. `values` carries the sampled value of every
/// recorded register; only intact records ground chains or stand as
/// evidence, and a conclusion about a rewritten register is skipped rather
/// than judged against a value that no longer attests to anything.
inline std::vector<ContradictionReport> check_consistency(
    const Protocol& p, const std::map<std::string, InferenceTable>& tables,
    const TrustStructure& trust,
    const std::map<std::string, RecordFate>& fates,
    const std::map<std::string, std::string>& values) {
  std::vector<ContradictionReport> reports;
  auto intact_value =
      [&](const std::string& label) -> std::optional<std::string> {
    auto fate = fates.find(label);
    if (fate == fates.end() || !fate->second.intact()) return std::nullopt;
    auto value = values.find(label);
    if (value == values.end()) return std::nullopt;
    return value->second;
  };
  std::set<std::pair<Claim, std::string>> seen;
  auto compare = [&](const Claim& predicted, const std::string& owner,
                     const std::string& provenance) {
    auto observed = intact_value(predicted.register_label);
    if (!observed.has_value() || *observed == predicted.value) return;
    if (!seen.insert({predicted, provenance}).second) return;
    bool vs_prediction =
        prediction_owner(p, predicted.register_label).first != nullptr;
    reports.push_back({vs_prediction ? "prediction-vs-prediction"
                                     : "prediction-vs-outcome",
                       owner, predicted, provenance,
                       {predicted.register_label, *observed}});
  };

  for (const auto& [label, fate] : fates) {
    if (!fate.prediction) continue;
    auto value = intact_value(label);
    if (!value.has_value() || *value != "1") continue;
    auto [owner, h] = prediction_owner(p, label);
    if (owner == nullptr) continue;
    compare(owner->hypotheses[h], owner->name, "recorded prediction " + label);
  }
  for (const auto& [label, fate] : fates) {
    if (fate.prediction) continue;
    auto value = intact_value(label);
    if (!value.has_value()) continue;
    for (const auto& chain :
         derive_chains(p, tables, trust, Claim{label, *value})) {
      if (chain.links.empty()) continue;
      compare(chain.conclusion(), chain.links.back().owner, chain.str());
    }
  }
  return reports;
}

}  // namespace epiq

#endif  // EPIQ_CONSISTENCY_HPP_
