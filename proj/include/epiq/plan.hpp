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

#ifndef EPIQ_PLAN_HPP_
#define EPIQ_PLAN_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "epiq/agent.hpp"
#include "epiq/errors.hpp"
#include "epiq/protocol.hpp"
#include "epiq/register_map.hpp"
#include "epiq/state_vector.hpp"
#include "epiq/time_tag.hpp"

namespace epiq {

// ---------------------------------------------------------------------------
// Lowering of a protocol onto concrete qubits. Arenas allocate the registers
// (systems first, then each agent's block in declaration order), and
// replay_step turns timetable entries into logged gates. Both the
// interpretation simulators and the runtime drive the same lowering, so a
// step means exactly one thing everywhere.
// ---------------------------------------------------------------------------

/// Names for the packed values of an outcome register. Computational
/// registers count in decimal; the entangled basis uses its four named
/// outcomes.
inline std::vector<std::string> outcome_value_names(int count, Basis basis) {
  std::vector<std::string> names;
  if (basis == Basis::kBell) {
    if (count != 4) {
      throw Error("entangled-basis measurements have exactly four outcomes");
    }
    for (std::uint64_t v = 0; v < 4; ++v) names.push_back(bell_outcome_name(v));
    return names;
  }
  for (int v = 0; v < count; ++v) names.push_back(std::to_string(v));
  return names;
}

/// Basis an agent records in: taken from its first measure step,
/// computational when it never measures.
inline Basis measure_basis_for(const Protocol& p, const std::string& agent) {
  for (const auto& st : p.steps) {
    if (st.kind == StepKind::kMeasure && st.agent == agent) return st.basis;
  }
  return Basis::kComputational;
}

inline std::vector<std::string> agent_value_names(const Protocol& p,
                                                  const AgentDecl& a) {
  return outcome_value_names(a.outcome_count, measure_basis_for(p, a.name));
}

/// Agent whose outcome register carries `label`, if any.
inline const AgentDecl* outcome_owner(const Protocol& p,
                                      const std::string& label) {
  for (const auto& a : p.agents) {
    if (a.memory_label == label) return &a;
  }
  return nullptr;
}

/// Agent and hypothesis index whose prediction register carries `label`;
/// {nullptr, 0} if the label is not a prediction register.
inline std::pair<const AgentDecl*, std::size_t> prediction_owner(
    const Protocol& p, const std::string& label) {
  for (const auto& a : p.agents) {
    for (std::size_t h = 0; h < a.hypotheses.size(); ++h) {
      if (AgentBrain::prediction_label_for(a.memory_label, a.hypotheses, h) ==
          label) {
        return {&a, h};
      }
    }
  }
  return {nullptr, 0};
}

/// Time at which the record in `label` takes its value: the owner's last
/// measure step for outcome registers, the owner's last reason step for
/// prediction registers. Systems never settle.
inline std::optional<TimeTag> settle_tag(const Protocol& p,
                                         const std::string& label) {
  if (const AgentDecl* a = outcome_owner(p, label)) {
    std::optional<TimeTag> t;
    for (const auto& st : p.steps) {
      if (st.kind == StepKind::kMeasure && st.agent == a->name) t = st.at;
    }
    return t;
  }
  if (auto [a, h] = prediction_owner(p, label); a != nullptr) {
    (void)h;
    std::optional<TimeTag> t;
    for (const auto& st : p.steps) {
      if (st.kind == StepKind::kReason && st.agent == a->name) t = st.at;
    }
    return t;
  }
  return std::nullopt;
}

/// Closed time window of steps, unbounded on either side when empty.
struct Slice {
  std::optional<TimeTag> from;
  std::optional<TimeTag> to;

  bool contains(const TimeTag& t) const {
    if (from.has_value() && t < *from) return false;
    if (to.has_value() && *to < t) return false;
    return true;
  }
};

inline const Step* find_infer_step(const Protocol& p,
                                   const std::string& agent) {
  for (const auto& st : p.steps) {
    if (st.kind == StepKind::kInferAbout && st.agent == agent) return &st;
  }
  return nullptr;
}

/// Steps replayed when computing `agent`'s inference table: an explicit
/// via-range when the infer step names one, otherwise from the start
/// through the later of the agent's own measurement and the settling of its
/// hypothesis registers.
inline Slice inference_slice(const Protocol& p, const AgentDecl& agent,
                             const Step* infer_step) {
  if (infer_step != nullptr) {
    switch (infer_step->slice.kind) {
      case SliceSpec::Kind::kFull:
        return {};
      case SliceSpec::Kind::kRange:
        return {infer_step->slice.from, infer_step->slice.to};
      case SliceSpec::Kind::kDefault:
        break;
    }
  }
  std::optional<TimeTag> to = settle_tag(p, agent.memory_label);
  for (const auto& h : agent.hypotheses) {
    auto s = settle_tag(p, h.register_label);
    if (s.has_value() && (!to.has_value() || *to < *s)) to = s;
  }
  return {std::nullopt, to};
}

/// Agents whose reasoning machinery acts within `slice` (a reason step of
/// their own or a reversal naming them as subject).
inline std::set<std::string> reasoning_agents_in(const Protocol& p,
                                                 const Slice& slice) {
  std::set<std::string> out;
  for (const auto& st : p.steps) {
    if (!slice.contains(st.at)) continue;
    if (st.kind == StepKind::kReason) out.insert(st.agent);
    if (st.kind == StepKind::kReverseReason) out.insert(st.subject);
  }
  return out;
}

inline std::set<std::string> reasoning_agents(const Protocol& p) {
  return reasoning_agents_in(p, Slice{});
}

/// Register labels a step rewrites. Registers that only control a gate keep
/// their computational-basis statistics, so they are not listed; an
/// entangled-basis measurement rewrites the measured registers themselves.
inline std::vector<std::string> step_write_targets(const Protocol& p,
                                                   const Step& st) {
  std::vector<std::string> out;
  switch (st.kind) {
    case StepKind::kPrepare:
    case StepKind::kCPrepare:
      out.push_back(st.target);
      break;
    case StepKind::kMeasure: {
      if (const AgentDecl* a = p.find_agent(st.agent)) {
        out.push_back(a->memory_label);
      }
      if (st.basis == Basis::kBell) {
        for (const auto& t : st.targets) out.push_back(t);
      }
      break;
    }
    case StepKind::kReason: {
      if (const AgentDecl* a = p.find_agent(st.agent)) {
        for (std::size_t h = 0; h < a->hypotheses.size(); ++h) {
          out.push_back(AgentBrain::prediction_label_for(a->memory_label,
                                                         a->hypotheses, h));
        }
      }
      break;
    }
    case StepKind::kReverseReason: {
      if (const AgentDecl* a = p.find_agent(st.subject)) {
        for (std::size_t h = 0; h < a->hypotheses.size(); ++h) {
          out.push_back(AgentBrain::prediction_label_for(a->memory_label,
                                                         a->hypotheses, h));
        }
      }
      break;
    }
    default:
      break;
  }
  return out;
}

/// What became of a record by the end of the run.
struct RecordFate {
  std::string label;
  std::string owner;         // agent name
  bool prediction = false;   // prediction register rather than an outcome
  std::optional<TimeTag> settle;
  bool reversed = false;     // undone by a reverse step
  bool disturbed = false;    // a later step rewrote its qubits

  /// The value still reflects what was recorded when it settled.
  bool intact() const {
    return settle.has_value() && !reversed && !disturbed;
  }
};

/// Static fate analysis over the whole timetable. Keyed by register label;
/// covers the outcome register of every measuring agent and the prediction
/// registers of every reasoning agent.
inline std::map<std::string, RecordFate> record_fates(const Protocol& p) {
  std::map<std::string, RecordFate> fates;
  for (const auto& st : p.steps) {
    if (st.kind == StepKind::kMeasure) {
      if (const AgentDecl* a = p.find_agent(st.agent)) {
        RecordFate& f = fates[a->memory_label];
        f.label = a->memory_label;
        f.owner = a->name;
        f.settle = st.at;
        f.disturbed = false;
      }
    } else if (st.kind == StepKind::kReason) {
      if (const AgentDecl* a = p.find_agent(st.agent)) {
        for (std::size_t h = 0; h < a->hypotheses.size(); ++h) {
          RecordFate& f = fates[AgentBrain::prediction_label_for(
              a->memory_label, a->hypotheses, h)];
          f.label = AgentBrain::prediction_label_for(a->memory_label,
                                                     a->hypotheses, h);
          f.owner = a->name;
          f.prediction = true;
          f.settle = st.at;
          f.reversed = false;
          f.disturbed = false;
        }
      }
    } else if (st.kind == StepKind::kReverseReason) {
      if (const AgentDecl* a = p.find_agent(st.subject)) {
        for (std::size_t h = 0; h < a->hypotheses.size(); ++h) {
          auto it = fates.find(AgentBrain::prediction_label_for(
              a->memory_label, a->hypotheses, h));
          if (it != fates.end()) it->second.reversed = true;
        }
      }
    }
  }
  for (const auto& st : p.steps) {
    for (const auto& label : step_write_targets(p, st)) {
      auto it = fates.find(label);
      if (it != fates.end() && it->second.settle.has_value() &&
          *it->second.settle < st.at) {
        it->second.disturbed = true;
      }
    }
  }
  return fates;
}

// ---------------------------------------------------------------------------
// Arena: a protocol's registers materialized on a state vector.
// ---------------------------------------------------------------------------

struct Arena {
  const Protocol* protocol;  // not owned; must outlive the arena
  RegisterMap map;
  StateVector state;
  std::map<std::string, AgentBrain> brains;  // agents with machinery here
  std::map<std::string, std::vector<QubitId>> outcome_qubits;  // by agent
  std::map<std::string, std::vector<std::string>> value_names;  // by agent
  std::map<std::string, QubitId> system_qubits;

  QubitId single_qubit(const std::string& label) const {
    return map.qubit(label);
  }
};

/// A register as seen through claims: its qubits (LSB first; empty when the
/// arena did not materialize it) and the names of its packed values.
struct ResolvedRegister {
  std::string label;
  std::string owner;
  std::vector<QubitId> qubits;
  std::vector<std::string> values;
};

inline ResolvedRegister resolve_register(const Arena& a,
                                         const std::string& label) {
  const Protocol& p = *a.protocol;
  if (auto it = a.system_qubits.find(label); it != a.system_qubits.end()) {
    return {label, label, {it->second}, {"0", "1"}};
  }
  if (const AgentDecl* ag = outcome_owner(p, label)) {
    return {label, ag->name, a.outcome_qubits.at(ag->name),
            a.value_names.at(ag->name)};
  }
  if (auto [ag, h] = prediction_owner(p, label); ag != nullptr) {
    std::vector<QubitId> qubits;
    if (auto it = a.brains.find(ag->name); it != a.brains.end()) {
      qubits.push_back(it->second.prediction_qubits[h]);
    }
    return {label, ag->name, std::move(qubits), {"0", "1"}};
  }
  throw Error("unknown register: " + label);
}

inline std::optional<std::uint64_t> value_index(const ResolvedRegister& r,
                                                const std::string& value) {
  for (std::uint64_t i = 0; i < r.values.size(); ++i) {
    if (r.values[i] == value) return i;
  }
  return std::nullopt;
}

/// Builds the arena: systems in declaration order, then one block per agent
/// (full brain for agents in `brain_agents` that declare hypotheses, a bare
/// outcome register otherwise). Inference banks are loaded from `tables`
/// where a table for the agent is present, and stay zero otherwise.
inline Arena make_arena(const Protocol& p,
                        const std::set<std::string>& brain_agents,
                        const std::map<std::string, InferenceTable>& tables,
                        int qubit_cap = tol::kDefaultQubitCap) {
  RegisterMap map;
  std::map<std::string, AgentBrain> brains;
  std::map<std::string, std::vector<QubitId>> outcome_qubits;
  std::map<std::string, std::vector<std::string>> value_names;
  std::map<std::string, QubitId> system_qubits;

  for (const auto& s : p.systems) {
    system_qubits[s.name] = map.add(s.name, RegisterRole::kSystem, s.name);
  }
  for (const auto& a : p.agents) {
    value_names[a.name] = agent_value_names(p, a);
    if (brain_agents.count(a.name) != 0 && !a.hypotheses.empty()) {
      AgentBrain brain = build_brain(map, a.name, a.memory_label,
                                     value_names[a.name], a.hypotheses);
      outcome_qubits[a.name] = brain.outcome_qubits;
      brains.emplace(a.name, std::move(brain));
    } else {
      const int width = outcome_register_width(a.outcome_count);
      for (int k = 0; k < width; ++k) {
        std::string label =
            width == 1 ? a.memory_label
                       : a.memory_label + "[" + std::to_string(k) + "]";
        outcome_qubits[a.name].push_back(
            map.add(a.name, RegisterRole::kOutcome, std::move(label)));
      }
    }
  }
  if (static_cast<int>(map.size()) > qubit_cap) {
    throw Error("register budget exceeded: " + std::to_string(map.size()) +
                " qubits needed, cap is " + std::to_string(qubit_cap));
  }

  StateVector state(map.size());
  for (const auto& s : p.systems) {
    state.prepare_qubit(system_qubits.at(s.name), s.amp0, s.amp1);
  }
  for (auto& [name, brain] : brains) {
    auto it = tables.find(name);
    if (it != tables.end()) init_inference_qubits(state, brain, it->second);
  }
  return Arena{&p,
               std::move(map),
               std::move(state),
               std::move(brains),
               std::move(outcome_qubits),
               std::move(value_names),
               std::move(system_qubits)};
}

/// Applies one timetable entry to the arena. Measurements copy coherently
/// into the agent's outcome register; reasoning runs the gate bank; a
/// reversal replays the inverses of the subject's most recent reasoning
/// gates in reverse order. Steps of agents whose machinery is not
/// materialized here are skipped. infer/halt_if/compare do not act on the
/// state.
inline void replay_step(Arena& a, const Step& st) {
  switch (st.kind) {
    case StepKind::kPrepare: {
      auto it = a.system_qubits.find(st.target);
      if (it == a.system_qubits.end()) {
        throw Error("prepare of unknown system: " + st.target);
      }
      a.state.prepare_qubit(it->second, st.amp0, st.amp1, st.at);
      break;
    }
    case StepKind::kCPrepare: {
      QubitId target = a.single_qubit(st.target);
      QubitId control = a.single_qubit(st.control);
      a.state.apply_gate(st.gate == 'X' ? Gate::cnot(control, target)
                                        : Gate::controlled_h(control, target),
                         st.at);
      break;
    }
    case StepKind::kMeasure: {
      const auto& outs = a.outcome_qubits.at(st.agent);
      std::vector<QubitId> targets;
      targets.reserve(st.targets.size());
      for (const auto& label : st.targets) {
        targets.push_back(a.single_qubit(label));
      }
      if (st.basis == Basis::kBell) {
        a.state.apply_gate(
            Gate::bell_basis_change(targets[0], targets[1], false), st.at);
      }
      for (std::size_t k = 0; k < targets.size(); ++k) {
        a.state.apply_gate(Gate::cnot(targets[k], outs[k]), st.at);
      }
      if (st.basis == Basis::kBell) {
        a.state.apply_gate(
            Gate::bell_basis_change(targets[0], targets[1], true), st.at);
      }
      break;
    }
    case StepKind::kReason: {
      auto it = a.brains.find(st.agent);
      if (it != a.brains.end()) run_reasoning(a.state, it->second, st.at);
      break;
    }
    case StepKind::kReverseReason: {
      auto it = a.brains.find(st.subject);
      if (it == a.brains.end()) break;
      std::optional<TimeTag> reason_tag;
      for (const auto& prior : a.protocol->steps) {
        if (prior.kind == StepKind::kReason && prior.agent == st.subject &&
            prior.at < st.at) {
          reason_tag = prior.at;
        }
      }
      if (!reason_tag.has_value()) {
        throw Error("reverse of " + st.subject +
                    " without a prior reason step");
      }
      std::vector<Gate> undo;
      for (const auto& op : a.state.log()) {
        if (op.op_kind == CircuitOp::Kind::kGate && op.tag.has_value() &&
            *op.tag == *reason_tag) {
          undo.push_back(op.gate);
        }
      }
      for (auto g = undo.rbegin(); g != undo.rend(); ++g) {
        a.state.apply_gate(g->inverse(), st.at);
      }
      break;
    }
    case StepKind::kInferAbout:
    case StepKind::kHaltIf:
    case StepKind::kCompare:
      break;
  }
}

}  // namespace epiq

#endif  // EPIQ_PLAN_HPP_
