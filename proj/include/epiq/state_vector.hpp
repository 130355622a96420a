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

#ifndef EPIQ_STATE_VECTOR_HPP_
#define EPIQ_STATE_VECTOR_HPP_

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "epiq/errors.hpp"
#include "epiq/gate.hpp"
#include "epiq/register_map.hpp"
#include "epiq/time_tag.hpp"

namespace epiq {

using Amplitude = std::complex<double>;

/// Measurement bases supported by measure/project/sample.
enum class Basis { kComputational, kBell };

/// Names of the four outcomes of a two-qubit entangled-basis measurement,
/// indexed by the computational pattern left behind by the basis change
/// (first measured qubit is the low bit): 0 -> fail, 1 -> ok, 2/3 -> excess.
inline const char* bell_outcome_name(std::uint64_t value) {
  switch (value) {
    case 0: return "fail";
    case 1: return "ok";
    case 2: return "excess0";
    case 3: return "excess1";
  }
  return "?";
}

inline std::optional<std::uint64_t> bell_outcome_value(const std::string& n) {
  if (n == "fail") return 0;
  if (n == "ok") return 1;
  if (n == "excess0") return 2;
  if (n == "excess1") return 3;
  return std::nullopt;
}

/// Deterministic stream-splitting for per-shot seeds.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Dense simulator state over n qubits: 2^n complex amplitudes plus a log of
/// every operation applied, so reasoning circuits can later be replayed in
/// reverse. Copies carry the log with them; a branch of a measurement tree
/// therefore knows its own history.
class StateVector {
 public:
  StateVector() : n_(0), amps_(1, Amplitude(1.0, 0.0)) {}

  explicit StateVector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 0 || n_qubits > 62) {
      throw Error("unsupported qubit count: " + std::to_string(n_qubits));
    }
    amps_.assign(std::uint64_t(1) << n_qubits, Amplitude(0.0, 0.0));
    amps_[0] = Amplitude(1.0, 0.0);
  }

  int num_qubits() const { return n_; }
  std::uint64_t dimension() const { return amps_.size(); }
  const std::vector<Amplitude>& amplitudes() const { return amps_; }
  Amplitude amplitude(std::uint64_t index) const { return amps_.at(index); }
  const std::vector<CircuitOp>& log() const { return log_; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  /// Largest per-amplitude deviation from another state of equal size.
  double distance(const StateVector& other) const {
    if (other.n_ != n_) throw Error("state size mismatch");
    double d = 0.0;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      d = std::max(d, std::abs(amps_[i] - other.amps_[i]));
    }
    return d;
  }

  /// Loads a fresh qubit with (amp0, amp1). The qubit must still be in |0>
  /// in every branch and the amplitudes must be normalized.
  void prepare_qubit(QubitId q, Amplitude amp0, Amplitude amp1,
                     std::optional<TimeTag> tag = std::nullopt) {
    check_qubit(q);
    double n2 = std::norm(amp0) + std::norm(amp1);
    if (std::abs(n2 - 1.0) > tol::kAmplitude) {
      throw Error("preparation amplitudes are not normalized");
    }
    if (!qubit_is_fresh(q)) {
      throw Error("prepare on a qubit that is not in |0>: qubit " +
                  std::to_string(q));
    }
    const std::uint64_t bit = std::uint64_t(1) << q;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) continue;
      Amplitude a = amps_[i];
      if (a == Amplitude(0.0, 0.0)) continue;
      amps_[i] = amp0 * a;
      amps_[i | bit] = amp1 * a;
    }
    log_.push_back(CircuitOp::for_prepare(q, std::move(tag)));
  }

  void apply_gate(const Gate& g, std::optional<TimeTag> tag = std::nullopt) {
    apply_gate_unlogged(g);
    log_.push_back(CircuitOp::for_gate(g, std::move(tag)));
  }

  /// Undoes every logged operation at or after the first occurrence of
  /// `from_tag`, restoring the state it had just before that step. Refuses
  /// if the suffix contains a projection or preparation (not unitary).
  void invert_suffix(const TimeTag& from_tag) {
    std::size_t start = log_.size();
    for (std::size_t i = 0; i < log_.size(); ++i) {
      if (log_[i].tag && *log_[i].tag == from_tag) {
        start = i;
        break;
      }
    }
    if (start == log_.size()) {
      throw Error("invert_suffix: no logged op carries tag " + from_tag.str());
    }
    for (std::size_t i = start; i < log_.size(); ++i) {
      if (log_[i].op_kind == CircuitOp::Kind::kProjection) {
        throw Error("invert_suffix: a projection lies inside the suffix");
      }
      if (log_[i].op_kind == CircuitOp::Kind::kPrepare) {
        throw Error("invert_suffix: a preparation lies inside the suffix");
      }
    }
    for (std::size_t i = log_.size(); i-- > start;) {
      apply_gate_unlogged(log_[i].gate.inverse());
    }
    log_.resize(start);
  }

  /// Probability of each joint outcome of `qubits`, keyed by the packed
  /// value with qubits[0] as the least significant bit. For the Bell basis
  /// exactly two qubits are rotated through the basis change first.
  std::map<std::uint64_t, double> measure_probabilities(
      const std::vector<QubitId>& qubits,
      Basis basis = Basis::kComputational) const {
    if (basis == Basis::kBell) {
      StateVector rotated = *this;
      rotated.apply_bell_change(qubits, /*adjoint=*/false);
      return rotated.measure_probabilities(qubits, Basis::kComputational);
    }
    for (QubitId q : qubits) check_qubit(q);
    std::map<std::uint64_t, double> probs;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      double p = std::norm(amps_[i]);
      if (p == 0.0) continue;
      probs[extract_bits(i, qubits)] += p;
    }
    return probs;
  }

  /// Projects onto `outcome` of `qubits` and renormalizes. Returns the
  /// probability mass of the branch. Throws ZeroProbabilityError when the
  /// branch is below the reachability threshold.
  double project(const std::vector<QubitId>& qubits, std::uint64_t outcome,
                 Basis basis = Basis::kComputational,
                 std::optional<TimeTag> tag = std::nullopt) {
    if (basis == Basis::kBell) {
      apply_bell_change(qubits, /*adjoint=*/false, tag);
      double p = project(qubits, outcome, Basis::kComputational, tag);
      apply_bell_change(qubits, /*adjoint=*/true, tag);
      return p;
    }
    for (QubitId q : qubits) check_qubit(q);
    double p = 0.0;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if (extract_bits(i, qubits) == outcome) p += std::norm(amps_[i]);
    }
    if (p < tol::kUnreachable) {
      throw ZeroProbabilityError(
          "projection onto an outcome of probability " + std::to_string(p), p);
    }
    const double scale = 1.0 / std::sqrt(p);
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if (extract_bits(i, qubits) == outcome) {
        amps_[i] *= scale;
      } else {
        amps_[i] = Amplitude(0.0, 0.0);
      }
    }
    log_.push_back(CircuitOp::for_projection(qubits, std::move(tag)));
    return p;
  }

  /// Draws one joint outcome of `qubits` from the Born distribution.
  /// Deterministic for a fixed seed.
  std::uint64_t sample(const std::vector<QubitId>& qubits, Basis basis,
                       std::uint64_t seed) const {
    auto probs = measure_probabilities(qubits, basis);
    std::mt19937_64 rng(seed);
    // Uniform double in [0, 1) built from the top 53 bits; identical on
    // every platform, unlike uniform_real_distribution.
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double acc = 0.0;
    std::uint64_t last = 0;
    for (const auto& [value, p] : probs) {
      acc += p;
      last = value;
      if (u < acc) return value;
    }
    return last;  // guard against rounding at the tail
  }

  /// One line per nonzero amplitude: |bitstring> re im, with qubit k at
  /// string position k (allocation order, low bit first).
  std::string dump(const RegisterMap* registers = nullptr) const {
    std::ostringstream out;
    if (registers != nullptr) {
      out << "# qubits:";
      for (const auto& e : registers->entries()) out << " " << e.label;
      out << "\n";
    }
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if (std::abs(amps_[i]) <= 1e-13) continue;
      out << "|";
      for (int q = 0; q < n_; ++q) out << ((i >> q) & 1 ? '1' : '0');
      out << "> ";
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.12g %.12g", amps_[i].real(),
                    amps_[i].imag());
      out << buf << "\n";
    }
    return out.str();
  }

  static std::uint64_t extract_bits(std::uint64_t index,
                                    const std::vector<QubitId>& qubits) {
    std::uint64_t v = 0;
    for (std::size_t k = 0; k < qubits.size(); ++k) {
      v |= ((index >> qubits[k]) & 1) << k;
    }
    return v;
  }

 private:
  void check_qubit(QubitId q) const {
    if (q < 0 || q >= n_) {
      throw Error("qubit index out of range: " + std::to_string(q));
    }
  }

  bool qubit_is_fresh(QubitId q) const {
    const std::uint64_t bit = std::uint64_t(1) << q;
    double mass = 0.0;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) mass += std::norm(amps_[i]);
    }
    return mass <= tol::kAmplitude;
  }

  void apply_bell_change(const std::vector<QubitId>& qubits, bool adjoint,
                         std::optional<TimeTag> tag = std::nullopt) {
    if (qubits.size() != 2) {
      throw Error("entangled-basis operations need exactly 2 qubits");
    }
    apply_gate(Gate::bell_basis_change(qubits[0], qubits[1], adjoint), tag);
  }

  void apply_gate_unlogged(const Gate& g) {
    switch (g.kind) {
      case GateKind::kX:
        expect_arity(g, 1, 0);
        kernel_1q(g.targets[0], g.controls, 0.0, 1.0, 1.0, 0.0);
        break;
      case GateKind::kH: {
        expect_arity(g, 1, 0);
        const double s = 1.0 / std::sqrt(2.0);
        kernel_1q(g.targets[0], g.controls, s, s, s, -s);
        break;
      }
      case GateKind::kCnot:
        expect_arity(g, 1, 1);
        kernel_1q(g.targets[0], g.controls, 0.0, 1.0, 1.0, 0.0);
        break;
      case GateKind::kControlledH: {
        expect_arity(g, 1, 1);
        const double s = 1.0 / std::sqrt(2.0);
        kernel_1q(g.targets[0], g.controls, s, s, s, -s);
        break;
      }
      case GateKind::kMultiControlledX:
        expect_arity(g, 1, -1);
        kernel_1q(g.targets[0], g.controls, 0.0, 1.0, 1.0, 0.0);
        break;
      case GateKind::kBellBasisChange: {
        if (g.targets.size() != 2 || !g.controls.empty()) {
          throw Error("malformed basis-change gate");
        }
        QubitId a = g.targets[0];
        QubitId b = g.targets[1];
        if (a == b) throw Error("basis change needs two distinct qubits");
        if (!g.adjoint) {
          kernel_1q(b, {{a, true}}, 0.0, 1.0, 1.0, 0.0);  // CNOT a->b
          const double s = 1.0 / std::sqrt(2.0);
          kernel_1q(a, {}, s, s, s, -s);  // H on a
        } else {
          const double s = 1.0 / std::sqrt(2.0);
          kernel_1q(a, {}, s, s, s, -s);
          kernel_1q(b, {{a, true}}, 0.0, 1.0, 1.0, 0.0);
        }
        break;
      }
    }
  }

  void expect_arity(const Gate& g, std::size_t targets, int controls) const {
    if (g.targets.size() != targets ||
        (controls >= 0 && g.controls.size() != std::size_t(controls))) {
      throw Error(std::string("malformed gate: ") + g.str());
    }
  }

  /// Applies a real 2x2 matrix to `target`, restricted to basis states whose
  /// control wires match their polarities.
  void kernel_1q(QubitId target, const std::vector<ControlSpec>& controls,
                 double m00, double m01, double m10, double m11) {
    check_qubit(target);
    std::uint64_t cmask = 0;
    std::uint64_t cval = 0;
    for (const auto& c : controls) {
      check_qubit(c.qubit);
      if (c.qubit == target) {
        throw Error("gate control and target overlap on qubit " +
                    std::to_string(c.qubit));
      }
      const std::uint64_t bit = std::uint64_t(1) << c.qubit;
      if (cmask & bit) throw Error("duplicate control qubit");
      cmask |= bit;
      if (c.polarity) cval |= bit;
    }
    const std::uint64_t tbit = std::uint64_t(1) << target;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if (i & tbit) continue;
      if ((i & cmask) != cval) continue;
      const std::uint64_t j = i | tbit;
      const Amplitude a = amps_[i];
      const Amplitude b = amps_[j];
      amps_[i] = m00 * a + m01 * b;
      amps_[j] = m10 * a + m11 * b;
    }
  }

  int n_;
  std::vector<Amplitude> amps_;
  std::vector<CircuitOp> log_;
};

/// Builds the canonical register map and the |0...0> state for a run.
/// Throws when labels collide or the allocation exceeds the qubit cap.
inline std::pair<RegisterMap, StateVector> allocate(
    const std::vector<RegisterEntry>& specs, int cap = tol::kDefaultQubitCap) {
  RegisterMap map;
  for (const auto& s : specs) map.add(s.owner, s.role, s.label);
  if (map.size() > cap) {
    throw Error("allocation of " + std::to_string(map.size()) +
                " qubits exceeds the cap of " + std::to_string(cap));
  }
  StateVector state(map.size());
  return {std::move(map), std::move(state)};
}

}  // namespace epiq

#endif  // EPIQ_STATE_VECTOR_HPP_
