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

#ifndef EPIQ_COLLAPSE_HPP_
#define EPIQ_COLLAPSE_HPP_

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "epiq/interpretation.hpp"
#include "epiq/plan.hpp"

namespace epiq {

// ---------------------------------------------------------------------------
// Collapse dynamics. Every measurement first copies coherently, then splits
// the run into one branch per outcome of non-negligible probability; the
// branch keeps the projected state and the recorded value. Tables follow
// the branch statistics, with one proviso: a record that later steps
// rewrite cannot ground a deterministic forward inference, because by the
// time the hypothesis settles the record no longer attests to anything.
// ---------------------------------------------------------------------------

struct BranchNode {
  double probability = 1.0;     // absolute, not conditional on the parent
  std::string split_register;   // record taken when this branch split off
  std::string split_value;
  std::map<std::string, std::string> records;  // accumulated along the path
  std::optional<StateVector> state;  // kept at leaves, released once split
  std::vector<BranchNode> children;

  bool leaf() const { return children.empty(); }
};

inline void collect_leaves(BranchNode& node, std::vector<BranchNode*>& out) {
  if (node.leaf()) {
    out.push_back(&node);
    return;
  }
  for (auto& child : node.children) collect_leaves(child, out);
}

inline void collect_leaves(const BranchNode& node,
                           std::vector<const BranchNode*>& out) {
  if (node.leaf()) {
    out.push_back(&node);
    return;
  }
  for (const auto& child : node.children) collect_leaves(child, out);
}

/// A finished branch evolution. The arena keeps the register map the
/// branches were built on; its own state is spent.
struct CollapseRun {
  Arena arena;
  BranchNode root;

  std::vector<const BranchNode*> leaves() const {
    std::vector<const BranchNode*> out;
    collect_leaves(root, out);
    return out;
  }

  double total_probability() const {
    double sum = 0.0;
    for (const BranchNode* leaf : leaves()) sum += leaf->probability;
    return sum;
  }
};

/// Replays the slice splitting at every measurement.
inline CollapseRun collapse_run(
    const Protocol& p, const std::set<std::string>& brain_agents,
    const std::map<std::string, InferenceTable>& tables,
    const Slice& slice = {}) {
  CollapseRun run{make_arena(p, brain_agents, tables), BranchNode{}};
  run.root.state = std::move(run.arena.state);
  for (const auto& st : p.steps) {
    if (!slice.contains(st.at)) continue;
    std::vector<BranchNode*> leaves;
    collect_leaves(run.root, leaves);
    for (BranchNode* leaf : leaves) {
      run.arena.state = std::move(*leaf->state);
      replay_step(run.arena, st);
      if (st.kind != StepKind::kMeasure) {
        *leaf->state = std::move(run.arena.state);
        continue;
      }
      const AgentDecl* agent = p.find_agent(st.agent);
      const auto& outs = run.arena.outcome_qubits.at(st.agent);
      const auto& names = run.arena.value_names.at(st.agent);
      auto probs = run.arena.state.measure_probabilities(outs);
      for (const auto& [value, prob] : probs) {
        if (prob < tol::kUnreachable) continue;
        BranchNode child;
        child.probability = leaf->probability * prob;
        child.split_register = agent->memory_label;
        child.split_value = names[value];
        child.records = leaf->records;
        child.records[agent->memory_label] = names[value];
        child.state = run.arena.state;  // copy, then collapse the copy
        child.state->project(outs, value, Basis::kComputational, st.at);
        leaf->children.push_back(std::move(child));
      }
      leaf->state.reset();
      if (leaf->children.empty()) {
        throw Error("measurement by " + st.agent +
                    " found no branch above the reachability threshold");
      }
    }
  }
  return run;
}

/// Whether a deterministic forward inference from `agent`'s record to
/// `hypothesis` survives: between the agent's own measurement and the
/// settling of the hypothesis register, no step may rewrite the agent's
/// record. Backward inferences are always stable.
inline bool record_stable_for(const Protocol& p, const AgentDecl& agent,
                              const Claim& hypothesis) {
  auto own = settle_tag(p, agent.memory_label);
  auto target = settle_tag(p, hypothesis.register_label);
  if (!own.has_value() || !target.has_value() || !(*own < *target)) {
    return true;
  }
  for (const auto& st : p.steps) {
    if (!(*own < st.at) || *target < st.at) continue;
    for (const auto& label : step_write_targets(p, st)) {
      if (label == agent.memory_label) return false;
    }
  }
  return true;
}

class CollapseInterpretation final : public Interpretation {
 public:
  std::string name() const override { return "collapse"; }

  InferenceTable infer(const InterpretationContext& ctx) const override {
    const auto setup = detail::make_inference_setup(ctx);
    CollapseRun run = collapse_run(ctx.protocol, setup.brain_agents,
                                   setup.bank_tables, setup.slice);
    const auto leaves = run.leaves();
    const std::string& own = ctx.agent.memory_label;

    InferenceTable table;
    table.owner = ctx.agent.name;
    table.own_register = own;
    for (const auto& own_value : setup.own_values) {
      double total = 0.0;
      for (const BranchNode* leaf : leaves) {
        auto it = leaf->records.find(own);
        if (it != leaf->records.end() && it->second == own_value) {
          total += leaf->probability;
        }
      }
      for (const auto& h : ctx.agent.hypotheses) {
        TableRow row;
        row.own_value = own_value;
        row.hypothesis = h;
        if (total < tol::kUnreachable) {
          row.verdict = Verdict::kUnreachable;
          table.rows.push_back(std::move(row));
          continue;
        }
        ResolvedRegister reg = resolve_register(run.arena, h.register_label);
        for (const auto& name : reg.values) row.distribution[name] = 0.0;
        for (const BranchNode* leaf : leaves) {
          auto it = leaf->records.find(own);
          if (it == leaf->records.end() || it->second != own_value) continue;
          auto rec = leaf->records.find(h.register_label);
          if (rec != leaf->records.end()) {
            row.distribution.at(rec->second) += leaf->probability / total;
          } else {
            auto dist = detail::named_distribution(*leaf->state, reg);
            for (const auto& [name, prob] : dist) {
              row.distribution.at(name) += leaf->probability * prob / total;
            }
          }
        }
        auto it = row.distribution.find(h.value);
        if (it == row.distribution.end()) {
          throw Error("hypothesis " + h.str() + " names a value " +
                      h.register_label + " can never take");
        }
        row.verdict = it->second >= 1.0 - tol::kProbability &&
                              record_stable_for(ctx.protocol, ctx.agent, h)
                          ? Verdict::kCertain
                          : Verdict::kNotCertain;
        table.rows.push_back(std::move(row));
      }
    }
    return table;
  }
};

inline const bool kCollapseRegistered = register_interpretation(
    "collapse", [] { return std::make_unique<CollapseInterpretation>(); });

}  // namespace epiq

#endif  // EPIQ_COLLAPSE_HPP_
