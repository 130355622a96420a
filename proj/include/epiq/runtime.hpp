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

#ifndef EPIQ_RUNTIME_HPP_
#define EPIQ_RUNTIME_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "epiq/collapse.hpp"
#include "epiq/consistency.hpp"
#include "epiq/interpretation.hpp"
#include "epiq/neo_copenhagen.hpp"
#include "epiq/plan.hpp"
#include "epiq/protocol.hpp"

namespace epiq {

// ---------------------------------------------------------------------------
// Running a protocol end to end: compute every inference table, evolve the
// state under the protocol's dynamics, read the records at the end of each
// run, and check what the agents asserted against what actually happened.
// Sampling mode draws shots; exact mode enumerates the full distribution of
// end-of-run records instead.
// ---------------------------------------------------------------------------

struct ExecuteOptions {
  std::optional<std::uint64_t> shots;
  std::optional<std::uint64_t> seed;
  bool exact = false;
};

struct ShotOutcome {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  bool halted = true;  // all halt_if conditions held (or none declared)
  std::map<std::string, std::string> values;  // register label -> value name
  std::vector<ContradictionReport> reports;
};

/// One point of the exact end-of-run record distribution.
struct ExactPoint {
  double probability = 0.0;
  bool halted = true;
  std::map<std::string, std::string> values;
  std::vector<ContradictionReport> reports;
};

struct AggregatedReport {
  ContradictionReport report;
  std::uint64_t occurrences = 0;  // shots (or exact points) showing it
  double probability = 0.0;       // exact weight, or occurrences/shots
};

struct ExecutionResult {
  std::string mode;      // "sampling" | "exact"
  std::string dynamics;  // interpretation driving the evolution
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::uint64_t halted_count = 0;
  double halt_probability = 0.0;  // exact mode only
  std::map<std::string, InferenceTable> tables;
  std::map<std::string, RecordFate> fates;
  std::vector<ShotOutcome> shot_outcomes;  // sampling mode
  std::vector<ExactPoint> points;          // exact mode
  std::map<std::string, std::map<std::string, double>>
      marginals;  // exact mode: per outcome register
  std::vector<AggregatedReport> reports;
  std::optional<Arena> arena;           // final state under coherent dynamics
  std::optional<CollapseRun> branches;  // branch tree under collapse dynamics

  bool consistent() const { return reports.empty(); }
};

namespace detail {

/// Portable uniform draw in [0, 1); the same recipe on every platform.
inline double uniform_from_seed(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct RecordedRegister {
  std::string label;
  ResolvedRegister reg;
  int offset = 0;  // bit offset within the packed joint value
};

inline std::vector<RecordedRegister> recorded_registers(
    const Arena& arena, const std::map<std::string, RecordFate>& fates) {
  std::vector<RecordedRegister> out;
  int offset = 0;
  for (const auto& [label, fate] : fates) {
    (void)fate;
    ResolvedRegister reg = resolve_register(arena, label);
    if (reg.qubits.empty()) continue;
    out.push_back({label, std::move(reg), offset});
    offset += static_cast<int>(out.back().reg.qubits.size());
  }
  return out;
}

inline std::map<std::string, std::string> unpack_values(
    const std::vector<RecordedRegister>& recorded, std::uint64_t packed) {
  std::map<std::string, std::string> values;
  for (const auto& r : recorded) {
    const std::uint64_t width = r.reg.qubits.size();
    const std::uint64_t v = (packed >> r.offset) & ((std::uint64_t(1) << width) - 1);
    if (v >= r.reg.values.size()) {
      throw Error("register " + r.label +
                  " read a value outside its declared outcomes");
    }
    values[r.label] = r.reg.values[v];
  }
  return values;
}

inline bool conditions_hold(const std::vector<Claim>& conditions,
                            const std::map<std::string, std::string>& values) {
  for (const auto& c : conditions) {
    auto it = values.find(c.register_label);
    if (it == values.end() || it->second != c.value) return false;
  }
  return true;
}

template <typename Key>
inline Key pick_from_distribution(const std::map<Key, double>& probs,
                                  double u) {
  double acc = 0.0;
  Key last{};
  bool any = false;
  for (const auto& [key, p] : probs) {
    acc += p;
    last = key;
    any = true;
    if (u < acc) return key;
  }
  if (!any) throw Error("empty distribution");
  return last;
}

}  // namespace detail

/// Runs `p`. The returned result borrows the protocol (through its arena or
/// branch tree), so `p` must outlive it.
inline ExecutionResult execute(const Protocol& p,
                               const ExecuteOptions& opt = {}) {
  ExecutionResult result;
  result.mode = opt.exact ? "exact" : "sampling";
  result.dynamics = p.interpretation;
  result.shots = opt.exact ? 0 : opt.shots.value_or(p.shots);
  result.seed = opt.seed.value_or(p.seed);
  result.tables = compute_all_tables(p);
  result.fates = record_fates(p);
  const TrustStructure trust = TrustStructure::from_protocol(p);

  std::vector<Claim> halt_conditions;
  for (const auto& st : p.steps) {
    if (st.kind == StepKind::kHaltIf) {
      halt_conditions.insert(halt_conditions.end(), st.conditions.begin(),
                             st.conditions.end());
    }
  }

  const std::set<std::string> brain_agents = reasoning_agents(p);
  const bool collapse_dynamics = p.interpretation == "collapse";

  std::vector<detail::RecordedRegister> recorded;
  auto validate_halt = [&]() {
    for (const auto& c : halt_conditions) {
      const detail::RecordedRegister* found = nullptr;
      for (const auto& r : recorded) {
        if (r.label == c.register_label) found = &r;
      }
      if (found == nullptr) {
        throw Error("halt condition " + c.str() +
                    " references an unrecorded register");
      }
      if (!value_index(found->reg, c.value).has_value()) {
        throw Error("halt condition " + c.str() + " names a value " +
                    c.register_label + " can never take");
      }
    }
  };
  auto check_point = [&](const std::map<std::string, std::string>& values) {
    return check_consistency(p, result.tables, trust, result.fates, values);
  };

  if (!collapse_dynamics) {
    Arena arena = make_arena(p, brain_agents, result.tables);
    for (const auto& st : p.steps) replay_step(arena, st);
    recorded = detail::recorded_registers(arena, result.fates);
    validate_halt();
    std::vector<QubitId> all_qubits;
    for (const auto& r : recorded) {
      all_qubits.insert(all_qubits.end(), r.reg.qubits.begin(),
                        r.reg.qubits.end());
    }
    const auto joint = arena.state.measure_probabilities(all_qubits);
    if (opt.exact) {
      for (const auto& [packed, prob] : joint) {
        if (prob < tol::kUnreachable) continue;
        ExactPoint point;
        point.probability = prob;
        point.values = detail::unpack_values(recorded, packed);
        point.halted = detail::conditions_hold(halt_conditions, point.values);
        if (point.halted) {
          result.halt_probability += prob;
          point.reports = check_point(point.values);
        }
        result.points.push_back(std::move(point));
      }
      for (const auto& r : recorded) {
        if (result.fates.at(r.label).prediction) continue;
        result.marginals[r.label] =
            detail::named_distribution(arena.state, r.reg);
      }
    } else {
      result.shot_outcomes.reserve(result.shots);
      for (std::uint64_t i = 0; i < result.shots; ++i) {
        ShotOutcome shot;
        shot.index = i;
        shot.seed = derive_seed(result.seed, i);
        const double u = detail::uniform_from_seed(shot.seed);
        shot.values = detail::unpack_values(
            recorded, detail::pick_from_distribution(joint, u));
        shot.halted = detail::conditions_hold(halt_conditions, shot.values);
        if (shot.halted) {
          ++result.halted_count;
          shot.reports = check_point(shot.values);
        }
        result.shot_outcomes.push_back(std::move(shot));
      }
    }
    result.arena = std::move(arena);
  } else {
    CollapseRun run = collapse_run(p, brain_agents, result.tables, Slice{});
    recorded = detail::recorded_registers(run.arena, result.fates);
    validate_halt();
    const auto leaves = run.leaves();
    std::vector<const detail::RecordedRegister*> prediction_regs;
    std::vector<QubitId> prediction_qubits;
    for (const auto& r : recorded) {
      if (!result.fates.at(r.label).prediction) continue;
      prediction_regs.push_back(&r);
      prediction_qubits.insert(prediction_qubits.end(), r.reg.qubits.begin(),
                               r.reg.qubits.end());
    }
    auto leaf_values = [&](const BranchNode* leaf, std::uint64_t predictions) {
      std::map<std::string, std::string> values = leaf->records;
      std::uint64_t shift = 0;
      for (const auto* r : prediction_regs) {
        values[r->label] = (predictions >> shift) & 1 ? "1" : "0";
        ++shift;
      }
      return values;
    };
    if (opt.exact) {
      std::map<std::map<std::string, std::string>, double> merged;
      for (const BranchNode* leaf : leaves) {
        std::map<std::uint64_t, double> preds{{0, 1.0}};
        if (!prediction_qubits.empty()) {
          preds = leaf->state->measure_probabilities(prediction_qubits);
        }
        for (const auto& [packed, q] : preds) {
          const double prob = leaf->probability * q;
          if (prob < tol::kUnreachable) continue;
          merged[leaf_values(leaf, packed)] += prob;
        }
      }
      for (const auto& [values, prob] : merged) {
        ExactPoint point;
        point.probability = prob;
        point.values = values;
        point.halted = detail::conditions_hold(halt_conditions, values);
        if (point.halted) {
          result.halt_probability += prob;
          point.reports = check_point(values);
        }
        result.points.push_back(std::move(point));
      }
      for (const auto& r : recorded) {
        if (result.fates.at(r.label).prediction) continue;
        auto& marginal = result.marginals[r.label];
        for (const auto& name : r.reg.values) marginal[name] = 0.0;
        for (const auto& [values, prob] : merged) {
          marginal.at(values.at(r.label)) += prob;
        }
      }
    } else {
      std::map<std::size_t, double> leaf_probs;
      for (std::size_t k = 0; k < leaves.size(); ++k) {
        leaf_probs[k] = leaves[k]->probability;
      }
      result.shot_outcomes.reserve(result.shots);
      for (std::uint64_t i = 0; i < result.shots; ++i) {
        ShotOutcome shot;
        shot.index = i;
        shot.seed = derive_seed(result.seed, i);
        const double u = detail::uniform_from_seed(shot.seed);
        const BranchNode* leaf =
            leaves[detail::pick_from_distribution(leaf_probs, u)];
        std::uint64_t predictions = 0;
        if (!prediction_qubits.empty()) {
          predictions = leaf->state->sample(prediction_qubits,
                                            Basis::kComputational,
                                            derive_seed(shot.seed, 1));
        }
        shot.values = leaf_values(leaf, predictions);
        shot.halted = detail::conditions_hold(halt_conditions, shot.values);
        if (shot.halted) {
          ++result.halted_count;
          shot.reports = check_point(shot.values);
        }
        result.shot_outcomes.push_back(std::move(shot));
      }
    }
    result.branches = std::move(run);
  }

  // Summing point probabilities can land an ulp above 1.
  result.halt_probability = std::min(result.halt_probability, 1.0);

  std::map<ContradictionReport, std::pair<std::uint64_t, double>> aggregated;
  for (const auto& shot : result.shot_outcomes) {
    for (const auto& r : shot.reports) ++aggregated[r].first;
  }
  for (const auto& point : result.points) {
    for (const auto& r : point.reports) {
      ++aggregated[r].first;
      aggregated[r].second += point.probability;
    }
  }
  for (const auto& [report, stats] : aggregated) {
    AggregatedReport agg;
    agg.report = report;
    agg.occurrences = stats.first;
    agg.probability = opt.exact ? stats.second
                      : result.shots == 0
                          ? 0.0
                          : static_cast<double>(stats.first) /
                                static_cast<double>(result.shots);
    result.reports.push_back(std::move(agg));
  }
  return result;
}

}  // namespace epiq

#endif  // EPIQ_RUNTIME_HPP_
