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

#ifndef EPIQ_GATE_HPP_
#define EPIQ_GATE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "epiq/errors.hpp"
#include "epiq/register_map.hpp"
#include "epiq/time_tag.hpp"

namespace epiq {

/// The closed gate alphabet of the simulator. Every kind is its own inverse
/// except the Bell basis change, whose inverse is the same kind with the
/// adjoint flag toggled.
enum class GateKind {
  kX,
  kH,
  kCnot,
  kControlledH,
  kMultiControlledX,
  kBellBasisChange,
};

inline const char* gate_kind_name(GateKind k) {
  switch (k) {
    case GateKind::kX: return "X";
    case GateKind::kH: return "H";
    case GateKind::kCnot: return "CNOT";
    case GateKind::kControlledH: return "CH";
    case GateKind::kMultiControlledX: return "MCX";
    case GateKind::kBellBasisChange: return "BELL";
  }
  return "?";
}

/// A control wire together with the value that activates the gate.
/// polarity=false means the gate fires when the wire is |0>.
struct ControlSpec {
  QubitId qubit;
  bool polarity;
};

struct Gate {
  GateKind kind;
  std::vector<QubitId> targets;
  std::vector<ControlSpec> controls;
  bool adjoint = false;  // only meaningful for kBellBasisChange

  static Gate x(QubitId t) { return {GateKind::kX, {t}, {}, false}; }
  static Gate h(QubitId t) { return {GateKind::kH, {t}, {}, false}; }
  static Gate cnot(QubitId control, QubitId target) {
    return {GateKind::kCnot, {target}, {{control, true}}, false};
  }
  static Gate controlled_h(QubitId control, QubitId target) {
    return {GateKind::kControlledH, {target}, {{control, true}}, false};
  }
  static Gate mcx(std::vector<ControlSpec> controls, QubitId target) {
    return {GateKind::kMultiControlledX, {target}, std::move(controls), false};
  }
  /// Rotates the (first, second) pair from the entangled-pair basis to the
  /// computational basis: CNOT(first -> second) then H(first). After the
  /// change, (0,0) encodes "fail", (1,0) encodes "ok".
  static Gate bell_basis_change(QubitId first, QubitId second,
                                bool adjoint = false) {
    return {GateKind::kBellBasisChange, {first, second}, {}, adjoint};
  }

  Gate inverse() const {
    Gate g = *this;
    if (kind == GateKind::kBellBasisChange) g.adjoint = !g.adjoint;
    return g;  // every other kind is self-inverse
  }

  std::string str() const {
    std::string out = gate_kind_name(kind);
    if (kind == GateKind::kBellBasisChange && adjoint) out += "'";
    out += "(";
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (i) out += ",";
      out += "t" + std::to_string(targets[i]);
    }
    for (const auto& c : controls) {
      out += ",";
      out += c.polarity ? "c" : "nc";
      out += std::to_string(c.qubit);
    }
    out += ")";
    return out;
  }
};

/// One entry of a state's circuit log. Gates may carry the protocol step tag
/// that emitted them; preparations and projections are logged too so that
/// suffix inversion can refuse to cross a non-unitary event.
struct CircuitOp {
  enum class Kind { kGate, kPrepare, kProjection };
  Kind op_kind;
  Gate gate;                     // valid when op_kind == kGate
  std::vector<QubitId> qubits;   // touched qubits for prepare/projection
  std::optional<TimeTag> tag;

  static CircuitOp for_gate(Gate g, std::optional<TimeTag> tag) {
    return {Kind::kGate, std::move(g), {}, std::move(tag)};
  }
  static CircuitOp for_prepare(QubitId q, std::optional<TimeTag> tag) {
    return {Kind::kPrepare, {}, {q}, std::move(tag)};
  }
  static CircuitOp for_projection(std::vector<QubitId> qs,
                                  std::optional<TimeTag> tag) {
    return {Kind::kProjection, {}, std::move(qs), std::move(tag)};
  }
};

}  // namespace epiq

#endif  // EPIQ_GATE_HPP_
