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

#ifndef EPIQ_NEO_COPENHAGEN_HPP_
#define EPIQ_NEO_COPENHAGEN_HPP_

#include <map>
#include <memory>
#include <string>

#include "epiq/interpretation.hpp"
#include "epiq/plan.hpp"

namespace epiq {

// ---------------------------------------------------------------------------
// Restricted coherent simulation. The reasoner replays the slice with every
// measurement kept as a coherent copy, conditions on its own record by
// projecting its outcome register at its own measurement step, and reads
// the hypothesis register's distribution at the end of the slice. A row is
// certain when that conditional probability reaches one.
// ---------------------------------------------------------------------------

/// Distribution of `target` at the end of `slice`, conditioned on the
/// reasoner's own register reading `own_index` at its own measurement.
/// Throws ZeroProbabilityError when that reading cannot occur.
inline std::map<std::string, double> conditional_distribution(
    const Protocol& p, const AgentDecl& reasoner, std::uint64_t own_index,
    const std::string& target, const Slice& slice,
    const std::set<std::string>& brain_agents,
    const std::map<std::string, InferenceTable>& bank_tables) {
  Arena arena = make_arena(p, brain_agents, bank_tables);
  for (const auto& st : p.steps) {
    if (!slice.contains(st.at)) continue;
    replay_step(arena, st);
    if (st.kind == StepKind::kMeasure && st.agent == reasoner.name) {
      arena.state.project(arena.outcome_qubits.at(reasoner.name), own_index,
                          Basis::kComputational, st.at);
    }
  }
  return detail::named_distribution(arena.state,
                                    resolve_register(arena, target));
}

class NeoCopenhagenInterpretation final : public Interpretation {
 public:
  std::string name() const override { return "neo-copenhagen"; }

  InferenceTable infer(const InterpretationContext& ctx) const override {
    const auto setup = detail::make_inference_setup(ctx);
    InferenceTable table;
    table.owner = ctx.agent.name;
    table.own_register = ctx.agent.memory_label;
    for (std::uint64_t v = 0; v < setup.own_values.size(); ++v) {
      // One conditioned replay per own value serves every hypothesis.
      std::map<std::string, std::map<std::string, double>> by_register;
      bool reachable = true;
      for (const auto& h : ctx.agent.hypotheses) {
        if (by_register.count(h.register_label) != 0 || !reachable) continue;
        try {
          by_register[h.register_label] = conditional_distribution(
              ctx.protocol, ctx.agent, v, h.register_label, setup.slice,
              setup.brain_agents, setup.bank_tables);
        } catch (const ZeroProbabilityError&) {
          reachable = false;
        }
      }
      for (const auto& h : ctx.agent.hypotheses) {
        TableRow row;
        row.own_value = setup.own_values[v];
        row.hypothesis = h;
        if (!reachable) {
          row.verdict = Verdict::kUnreachable;
        } else {
          row.distribution = by_register.at(h.register_label);
          auto it = row.distribution.find(h.value);
          if (it == row.distribution.end()) {
            throw Error("hypothesis " + h.str() + " names a value " +
                        h.register_label + " can never take");
          }
          row.verdict = it->second >= 1.0 - tol::kProbability
                            ? Verdict::kCertain
                            : Verdict::kNotCertain;
        }
        table.rows.push_back(std::move(row));
      }
    }
    return table;
  }
};

inline const bool kNeoCopenhagenRegistered = register_interpretation(
    "neo-copenhagen",
    [] { return std::make_unique<NeoCopenhagenInterpretation>(); });

}  // namespace epiq

#endif  // EPIQ_NEO_COPENHAGEN_HPP_
