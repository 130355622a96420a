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

#ifndef EPIQ_INTERPRETATION_HPP_
#define EPIQ_INTERPRETATION_HPP_

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "epiq/claims.hpp"
#include "epiq/errors.hpp"
#include "epiq/plan.hpp"
#include "epiq/protocol.hpp"

namespace epiq {

// ---------------------------------------------------------------------------
// An interpretation answers one question: given a protocol and the value an
// agent saw on its own register, what may that agent be certain of? Each
// implementation fills the agent's inference table its own way. New
// interpretations plug in through register_interpretation(); the two
// built-ins live in neo_copenhagen.hpp and collapse.hpp.
// ---------------------------------------------------------------------------

struct InterpretationContext {
  const Protocol& protocol;
  const AgentDecl& agent;
  /// Tables of agents declared earlier, already computed. Used to load
  /// their inference banks when their reasoning runs inside the slice.
  const std::map<std::string, InferenceTable>& tables;
};

class Interpretation {
 public:
  virtual ~Interpretation() = default;
  virtual std::string name() const = 0;
  virtual InferenceTable infer(const InterpretationContext& ctx) const = 0;
};

using InterpretationFactory =
    std::function<std::unique_ptr<Interpretation>()>;

inline std::map<std::string, InterpretationFactory>&
interpretation_registry() {
  static std::map<std::string, InterpretationFactory> registry;
  return registry;
}

/// Extension point: makes `name` usable in protocol text and on the command
/// line. Returns false when the name was already taken.
inline bool register_interpretation(const std::string& name,
                                    InterpretationFactory factory) {
  return interpretation_registry().emplace(name, std::move(factory)).second;
}

inline std::unique_ptr<Interpretation> make_interpretation(
    const std::string& name) {
  auto& registry = interpretation_registry();
  auto it = registry.find(name);
  if (it == registry.end()) {
    std::string known;
    for (const auto& [key, factory] : registry) {
      (void)factory;
      if (!known.empty()) known += ", ";
      known += key;
    }
    throw Error("unknown interpretation: " + name + " (known: " + known + ")");
  }
  return it->second();
}

/// Computes the inference table of every agent that declares hypotheses, in
/// declaration order, each under the interpretation the protocol assigns to
/// it. Later tables may build on earlier ones through loaded inference
/// banks. Declaring hypotheses is what gives an agent an inference rule;
/// whether its reasoning also runs physically is a separate matter of the
/// timetable.
inline std::map<std::string, InferenceTable> compute_all_tables(
    const Protocol& p) {
  std::map<std::string, InferenceTable> tables;
  for (const auto& a : p.agents) {
    if (a.hypotheses.empty()) continue;
    auto interpretation = make_interpretation(p.interpretation_for(a.name));
    tables.emplace(a.name,
                   interpretation->infer(InterpretationContext{p, a, tables}));
  }
  return tables;
}

namespace detail {

/// Shared inference scaffolding: the slice, the agents whose machinery runs
/// inside it, and the bank tables (never the reasoner's own: its own
/// conclusions are exactly what is being computed).
struct InferenceSetup {
  Slice slice;
  std::set<std::string> brain_agents;
  std::map<std::string, InferenceTable> bank_tables;
  std::vector<std::string> own_values;
};

inline InferenceSetup make_inference_setup(const InterpretationContext& ctx) {
  InferenceSetup setup;
  setup.slice = inference_slice(
      ctx.protocol, ctx.agent, find_infer_step(ctx.protocol, ctx.agent.name));
  setup.brain_agents = reasoning_agents_in(ctx.protocol, setup.slice);
  setup.bank_tables = ctx.tables;
  setup.bank_tables.erase(ctx.agent.name);
  setup.own_values = agent_value_names(ctx.protocol, ctx.agent);
  return setup;
}

/// Distribution over a register's named values, all names present.
inline std::map<std::string, double> named_distribution(
    const StateVector& state, const ResolvedRegister& reg) {
  if (reg.qubits.empty()) {
    throw Error("register " + reg.label +
                " is not materialized in this simulation");
  }
  auto probs = state.measure_probabilities(reg.qubits);
  std::map<std::string, double> out;
  for (std::uint64_t v = 0; v < reg.values.size(); ++v) {
    auto it = probs.find(v);
    double p = it == probs.end() ? 0.0 : it->second;
    // Rounding dust below the reachability threshold reads as zero.
    out[reg.values[v]] = p < tol::kUnreachable ? 0.0 : p;
  }
  return out;
}

}  // namespace detail

}  // namespace epiq

#endif  // EPIQ_INTERPRETATION_HPP_
