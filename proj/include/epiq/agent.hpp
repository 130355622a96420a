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

#ifndef EPIQ_AGENT_HPP_
#define EPIQ_AGENT_HPP_

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "epiq/claims.hpp"
#include "epiq/errors.hpp"
#include "epiq/state_vector.hpp"

namespace epiq {

/// An agent's memory modeled as wires: an outcome register holding what they
/// measured, an inference bank I(b|h) holding which conclusions they accept,
/// and one prediction qubit per hypothesis.
///
/// The reasoning circuit is a bank of multi-controlled X gates: for every
/// (outcome value b, hypothesis h) cell, X on the prediction qubit of h,
/// controlled on I(b|h) being set and on the outcome register spelling b
/// (zero bits of b become negated controls). Firing therefore XORs
/// "outcome == b AND I(b|h)" into the prediction of h. On classical inputs
/// exactly one b matches, so the prediction of h ends up as I(b*|h) for the
/// recorded outcome b*.
struct AgentBrain {
  std::string name;
  std::string memory_label;
  std::vector<std::string> outcome_values;
  std::vector<Claim> hypotheses;

  std::vector<QubitId> outcome_qubits;
  // inference_qubits[h][b] guards "outcome b implies hypothesis h".
  std::vector<std::vector<QubitId>> inference_qubits;
  std::vector<QubitId> prediction_qubits;
  std::vector<Gate> reasoning;

  int total_qubits() const {
    int n = static_cast<int>(outcome_qubits.size() + prediction_qubits.size());
    for (const auto& bank : inference_qubits) {
      n += static_cast<int>(bank.size());
    }
    return n;
  }

  /// Label of the prediction qubit asserting hypothesis h, in the canonical
  /// form P_<memory>[<claim>], e.g. P_A[W=fail]. Protocol files may use these
  /// labels as hypothesis registers of other agents.
  std::string prediction_label(std::size_t h) const {
    return prediction_label_for(memory_label, hypotheses, h);
  }

  std::string inference_label(std::size_t h, std::size_t b) const {
    return "I_" + memory_label + "[" + outcome_values[b] + "|" +
           hypotheses[h].str() + "]";
  }

  static std::string prediction_label_for(const std::string& memory_label,
                                          const std::vector<Claim>& hypotheses,
                                          std::size_t h) {
    return "P_" + memory_label + "[" + hypotheses[h].str() + "]";
  }
};

inline int outcome_register_width(std::size_t outcome_count) {
  if (outcome_count < 2) throw Error("an agent needs at least two outcomes");
  int w = 0;
  while ((std::size_t(1) << w) < outcome_count) ++w;
  return w;
}

/// Qubit budget of a brain before allocation.
inline int brain_qubit_count(std::size_t outcomes, std::size_t hypotheses) {
  return outcome_register_width(outcomes) +
         static_cast<int>(outcomes * hypotheses + hypotheses);
}

/// Allocates the brain's registers on `map` (outcome block, then the
/// inference bank in hypothesis-major order, then predictions) and builds
/// the reasoning gate bank. Hypotheses must be nonempty; use a bare outcome
/// register instead for agents that only record.
inline AgentBrain build_brain(RegisterMap& map, const std::string& name,
                              const std::string& memory_label,
                              std::vector<std::string> outcome_values,
                              std::vector<Claim> hypotheses) {
  if (hypotheses.empty()) {
    throw Error("build_brain: agent " + name + " has no hypotheses");
  }
  AgentBrain brain;
  brain.name = name;
  brain.memory_label = memory_label;
  brain.outcome_values = std::move(outcome_values);
  brain.hypotheses = std::move(hypotheses);

  const int width = outcome_register_width(brain.outcome_values.size());
  for (int k = 0; k < width; ++k) {
    std::string label = width == 1
                            ? brain.memory_label
                            : brain.memory_label + "[" + std::to_string(k) + "]";
    brain.outcome_qubits.push_back(
        map.add(name, RegisterRole::kOutcome, std::move(label)));
  }
  brain.inference_qubits.resize(brain.hypotheses.size());
  for (std::size_t h = 0; h < brain.hypotheses.size(); ++h) {
    for (std::size_t b = 0; b < brain.outcome_values.size(); ++b) {
      brain.inference_qubits[h].push_back(
          map.add(name, RegisterRole::kInference, brain.inference_label(h, b)));
    }
  }
  for (std::size_t h = 0; h < brain.hypotheses.size(); ++h) {
    brain.prediction_qubits.push_back(
        map.add(name, RegisterRole::kPrediction, brain.prediction_label(h)));
  }

  for (std::size_t h = 0; h < brain.hypotheses.size(); ++h) {
    for (std::size_t b = 0; b < brain.outcome_values.size(); ++b) {
      std::vector<ControlSpec> controls;
      controls.push_back({brain.inference_qubits[h][b], true});
      for (int k = 0; k < width; ++k) {
        controls.push_back({brain.outcome_qubits[k], ((b >> k) & 1) != 0});
      }
      brain.reasoning.push_back(
          Gate::mcx(std::move(controls), brain.prediction_qubits[h]));
    }
  }
  return brain;
}

/// Writes an inference table into the bank: the cell I(b|h) is set exactly
/// when the table row (b => h) is certain. The bank qubits must still be
/// fresh.
inline void init_inference_qubits(StateVector& state, const AgentBrain& brain,
                                  const InferenceTable& table) {
  if (table.owner != brain.name) {
    throw Error("inference table of " + table.owner +
                " used for the brain of " + brain.name);
  }
  for (std::size_t h = 0; h < brain.hypotheses.size(); ++h) {
    for (std::size_t b = 0; b < brain.outcome_values.size(); ++b) {
      const TableRow* row =
          table.find(brain.outcome_values[b], brain.hypotheses[h]);
      if (row != nullptr && row->verdict == Verdict::kCertain) {
        state.apply_gate(Gate::x(brain.inference_qubits[h][b]));
      }
    }
  }
}

/// Runs the reasoning bank, tagging each gate with the step that fired it.
inline void run_reasoning(StateVector& state, const AgentBrain& brain,
                          std::optional<TimeTag> tag = std::nullopt) {
  for (const auto& g : brain.reasoning) state.apply_gate(g, tag);
}

/// Samples the prediction qubits jointly. Returns, per hypothesis, whether
/// the prediction qubit came out asserted.
inline std::map<Claim, bool> read_predictions(const StateVector& state,
                                              const AgentBrain& brain,
                                              std::uint64_t seed) {
  std::uint64_t joint =
      state.sample(brain.prediction_qubits, Basis::kComputational, seed);
  std::map<Claim, bool> out;
  for (std::size_t h = 0; h < brain.hypotheses.size(); ++h) {
    out[brain.hypotheses[h]] = ((joint >> h) & 1) != 0;
  }
  return out;
}

}  // namespace epiq

#endif  // EPIQ_AGENT_HPP_
