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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <set>
#include <vector>

#include "epiq/state_vector.hpp"
#include "oracle.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using epiq::Basis;
using epiq::Gate;
using epiq::StateVector;
using epiq::TimeTag;

namespace {

const double kSqrtHalf = 1.0 / std::sqrt(2.0);

double vec_distance(const StateVector& s, const oracle::Vec& v) {
  double d = 0.0;
  for (std::uint64_t i = 0; i < s.dimension(); ++i) {
    d = std::max(d, std::abs(s.amplitude(i) - v[i]));
  }
  return d;
}

}  // namespace

TEST_CASE("time tags parse, compare exactly and round-trip",
          "[statevector]") {
  REQUIRE(TimeTag::parse("2.9").str() == "2.9");
  REQUIRE(TimeTag::parse("3").str() == "3");
  REQUIRE_THAT(TimeTag::parse("2.9").value(), WithinAbs(2.9, 1e-15));

  // Trailing zeros normalize away for comparison but survive printing.
  REQUIRE(TimeTag::parse("1.60") == TimeTag::parse("1.6"));
  REQUIRE(TimeTag::parse("1.60").str() == "1.60");
  REQUIRE(TimeTag(29, 10).str() == "2.9");
  REQUIRE(TimeTag(1, 3).str() == "1/3");

  // Ordering is exact rational arithmetic, immune to binary rounding.
  const char* ordered[] = {"1", "1.6", "2", "2.5", "2.9", "3", "3.5", "4"};
  for (int i = 0; i + 1 < 8; ++i) {
    CAPTURE(ordered[i], ordered[i + 1]);
    REQUIRE(TimeTag::parse(ordered[i]) < TimeTag::parse(ordered[i + 1]));
    REQUIRE(TimeTag::parse(ordered[i + 1]) > TimeTag::parse(ordered[i]));
    REQUIRE(TimeTag::parse(ordered[i]) != TimeTag::parse(ordered[i + 1]));
  }
  REQUIRE(TimeTag::parse("0.1") <= TimeTag::parse("0.10"));

  REQUIRE_THROWS_AS(TimeTag::parse(""), epiq::Error);
  REQUIRE_THROWS_AS(TimeTag::parse("x"), epiq::Error);
  REQUIRE_THROWS_AS(TimeTag::parse("1.2.3"), epiq::Error);
  REQUIRE_THROWS_AS(TimeTag::parse("."), epiq::Error);
}

TEST_CASE("register map assigns wires in allocation order", "[statevector]") {
  epiq::RegisterMap map;
  REQUIRE(map.add("", epiq::RegisterRole::kSystem, "R") == 0);
  REQUIRE(map.add("Alice", epiq::RegisterRole::kOutcome, "A") == 1);
  REQUIRE(map.add("Alice", epiq::RegisterRole::kPrediction, "P_A[W=ok]") == 2);
  REQUIRE(map.size() == 3);
  REQUIRE(map.qubit("A") == 1);
  REQUIRE(map.contains("P_A[W=ok]"));
  REQUIRE_FALSE(map.contains("B"));
  REQUIRE(map.entry(0).label == "R");
  REQUIRE(map.qubits_of("Alice", epiq::RegisterRole::kOutcome) ==
          std::vector<epiq::QubitId>{1});

  REQUIRE_THROWS_WITH(map.add("", epiq::RegisterRole::kSystem, "R"),
                      ContainsSubstring("duplicate register label"));
  REQUIRE_THROWS_WITH(map.qubit("Z"),
                      ContainsSubstring("unknown register label"));
}

TEST_CASE("allocation enforces the wire budget", "[statevector]") {
  std::vector<epiq::RegisterEntry> specs = {
      {"", epiq::RegisterRole::kSystem, "R", 0},
      {"", epiq::RegisterRole::kSystem, "S", 0},
      {"", epiq::RegisterRole::kSystem, "T", 0},
  };
  auto [map, state] = epiq::allocate(specs);
  REQUIRE(map.size() == 3);
  REQUIRE(state.num_qubits() == 3);
  REQUIRE(state.amplitude(0) == epiq::Amplitude(1.0, 0.0));

  REQUIRE_THROWS_WITH(epiq::allocate(specs, 2),
                      ContainsSubstring("exceeds the cap"));
}

TEST_CASE("preparing a fresh qubit loads exact amplitudes", "[statevector]") {
  const double a0 = std::sqrt(1.0 / 3.0);
  const double a1 = std::sqrt(2.0 / 3.0);

  StateVector s(1);
  s.prepare_qubit(0, a0, a1);
  REQUIRE_THAT(s.amplitude(0).real(), WithinAbs(a0, 1e-12));
  REQUIRE_THAT(s.amplitude(1).real(), WithinAbs(a1, 1e-12));
  REQUIRE_THAT(s.norm_squared(), WithinAbs(1.0, 1e-12));

  SECTION("two preparations build the tensor product") {
    StateVector t(2);
    t.prepare_qubit(0, a0, a1);
    t.prepare_qubit(1, kSqrtHalf, -kSqrtHalf);
    oracle::Vec v = oracle::zero_state(2);
    v = oracle::prepare(v, 0, a0, a1);
    v = oracle::prepare(v, 1, kSqrtHalf, -kSqrtHalf);
    REQUIRE(vec_distance(t, v) < 1e-12);
  }

  SECTION("preparation refuses bad input") {
    StateVector t(2);
    REQUIRE_THROWS_WITH(t.prepare_qubit(0, 0.9, 0.1),
                        ContainsSubstring("not normalized"));
    t.prepare_qubit(0, 0.0, 1.0);
    REQUIRE_THROWS_WITH(t.prepare_qubit(0, 1.0, 0.0),
                        ContainsSubstring("not in |0>"));
    REQUIRE_THROWS_WITH(t.prepare_qubit(5, 1.0, 0.0),
                        ContainsSubstring("out of range"));
  }
}

TEST_CASE("gates move amplitudes exactly where they should", "[statevector]") {
  SECTION("X flips") {
    StateVector s(1);
    s.apply_gate(Gate::x(0));
    REQUIRE(s.amplitude(0) == epiq::Amplitude(0.0, 0.0));
    REQUIRE(s.amplitude(1) == epiq::Amplitude(1.0, 0.0));
  }

  SECTION("H splits and is self-inverse") {
    StateVector s(1);
    s.apply_gate(Gate::h(0));
    REQUIRE_THAT(s.amplitude(0).real(), WithinAbs(kSqrtHalf, 1e-12));
    REQUIRE_THAT(s.amplitude(1).real(), WithinAbs(kSqrtHalf, 1e-12));
    s.apply_gate(Gate::h(0));
    REQUIRE_THAT(s.amplitude(0).real(), WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(std::abs(s.amplitude(1)), WithinAbs(0.0, 1e-12));
  }

  SECTION("CNOT copies the control onto the target") {
    StateVector s(2);
    s.apply_gate(Gate::x(0));
    s.apply_gate(Gate::cnot(0, 1));
    REQUIRE(s.amplitude(3) == epiq::Amplitude(1.0, 0.0));  // |11>
  }

  SECTION("controlled H fires only when the control is set") {
    StateVector idle(2);
    idle.apply_gate(Gate::controlled_h(0, 1));
    REQUIRE(idle.amplitude(0) == epiq::Amplitude(1.0, 0.0));

    StateVector hot(2);
    hot.apply_gate(Gate::x(0));
    hot.apply_gate(Gate::controlled_h(0, 1));
    REQUIRE_THAT(hot.amplitude(1).real(), WithinAbs(kSqrtHalf, 1e-12));
    REQUIRE_THAT(hot.amplitude(3).real(), WithinAbs(kSqrtHalf, 1e-12));
  }

  SECTION("multi-controlled X honors per-wire polarity") {
    // Fires on (q0, q1) == (1, 0): flip q2.
    const Gate g = Gate::mcx({{0, true}, {1, false}}, 2);
    for (std::uint64_t pattern = 0; pattern < 4; ++pattern) {
      StateVector s(3);
      if (pattern & 1) s.apply_gate(Gate::x(0));
      if (pattern & 2) s.apply_gate(Gate::x(1));
      s.apply_gate(g);
      const std::uint64_t expected =
          pattern == 1 ? (pattern | 4) : pattern;
      CAPTURE(pattern);
      REQUIRE(s.amplitude(expected) == epiq::Amplitude(1.0, 0.0));
    }
  }

  SECTION("malformed wiring is rejected") {
    StateVector s(2);
    REQUIRE_THROWS_WITH(s.apply_gate(Gate::cnot(1, 1)),
                        ContainsSubstring("overlap"));
    REQUIRE_THROWS_WITH(s.apply_gate(Gate::mcx({{0, true}, {0, false}}, 1)),
                        ContainsSubstring("duplicate control"));
    REQUIRE_THROWS_AS(s.apply_gate(Gate::x(7)), epiq::Error);
  }

  SECTION("gate text names wiring") {
    REQUIRE(Gate::cnot(0, 1).str() == "CNOT(t1,c0)");
    REQUIRE(Gate::mcx({{2, false}}, 4).str() == "MCX(t4,nc2)");
    REQUIRE(Gate::bell_basis_change(0, 1, true).str() == "BELL'(t0,t1)");
  }
}

TEST_CASE("the pair-basis change encodes the four entangled outcomes",
          "[statevector]") {
  REQUIRE(std::string(epiq::bell_outcome_name(0)) == "fail");
  REQUIRE(std::string(epiq::bell_outcome_name(1)) == "ok");
  REQUIRE(std::string(epiq::bell_outcome_name(2)) == "excess0");
  REQUIRE(std::string(epiq::bell_outcome_name(3)) == "excess1");
  REQUIRE(epiq::bell_outcome_value("ok") == 1);
  REQUIRE_FALSE(epiq::bell_outcome_value("nope").has_value());

  auto single_outcome = [](StateVector& s) {
    auto probs = s.measure_probabilities({0, 1}, Basis::kBell);
    std::uint64_t best = 0;
    double mass = 0.0;
    for (const auto& [value, p] : probs) {
      if (p > mass) {
        mass = p;
        best = value;
      }
    }
    REQUIRE_THAT(mass, WithinAbs(1.0, 1e-12));
    return best;
  };

  SECTION("(|00>+|11>)/sqrt2 reads fail") {
    StateVector s(2);
    s.prepare_qubit(0, kSqrtHalf, kSqrtHalf);
    s.apply_gate(Gate::cnot(0, 1));
    REQUIRE(single_outcome(s) == 0);
  }
  SECTION("(|00>-|11>)/sqrt2 reads ok") {
    StateVector s(2);
    s.prepare_qubit(0, kSqrtHalf, -kSqrtHalf);
    s.apply_gate(Gate::cnot(0, 1));
    REQUIRE(single_outcome(s) == 1);
  }
  SECTION("(|01>+|10>)/sqrt2 reads excess0") {
    StateVector s(2);
    s.apply_gate(Gate::x(1));
    s.apply_gate(Gate::h(0));
    s.apply_gate(Gate::cnot(0, 1));
    REQUIRE(single_outcome(s) == 2);
  }
  SECTION("(|01>-|10>)/sqrt2 reads excess1") {
    StateVector s(2);
    s.prepare_qubit(0, kSqrtHalf, -kSqrtHalf);
    s.apply_gate(Gate::x(1));
    s.apply_gate(Gate::cnot(0, 1));
    REQUIRE(single_outcome(s) == 3);
  }

  SECTION("the change and its adjoint cancel") {
    StateVector s(2);
    s.prepare_qubit(0, 0.6, 0.8);
    s.apply_gate(Gate::cnot(0, 1));
    StateVector before = s;
    s.apply_gate(Gate::bell_basis_change(0, 1));
    s.apply_gate(Gate::bell_basis_change(0, 1, /*adjoint=*/true));
    REQUIRE(s.distance(before) < 1e-12);
  }
}

TEST_CASE("pair measurement of a tilted state has closed-form weights",
          "[statevector]") {
  // sqrt(1/3)|00> + sqrt(2/3)|11>: the even-parity pair outcomes carry
  // (1 +- 2*sqrt(2)/3)/2, the odd ones nothing.
  StateVector s(2);
  s.prepare_qubit(0, std::sqrt(1.0 / 3.0), std::sqrt(2.0 / 3.0));
  s.apply_gate(Gate::cnot(0, 1));
  auto probs = s.measure_probabilities({0, 1}, Basis::kBell);
  const double cross = std::sqrt(2.0) / 3.0;
  REQUIRE_THAT(probs[0], WithinAbs(0.5 + cross, 1e-12));
  REQUIRE_THAT(probs[1], WithinAbs(0.5 - cross, 1e-12));
  REQUIRE(probs.count(2) == 0);
  REQUIRE(probs.count(3) == 0);

  // Measuring in the pair basis must not move the state itself.
  StateVector copy = s;
  (void)copy.measure_probabilities({0, 1}, Basis::kBell);
  REQUIRE(copy.distance(s) < 1e-15);
}

TEST_CASE("projection renormalizes and reports the branch weight",
          "[statevector]") {
  StateVector s(2);
  s.apply_gate(Gate::h(0));
  s.apply_gate(Gate::cnot(0, 1));

  SECTION("projecting a fair branch") {
    const double p = s.project({0}, 1);
    REQUIRE_THAT(p, WithinAbs(0.5, 1e-12));
    REQUIRE_THAT(s.norm_squared(), WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(std::abs(s.amplitude(3)), WithinAbs(1.0, 1e-12));
  }

  SECTION("an empty branch raises a typed error") {
    s.project({0}, 1);
    try {
      s.project({1}, 0);  // after q0=1, q1 is surely 1
      FAIL("expected ZeroProbabilityError");
    } catch (const epiq::ZeroProbabilityError& e) {
      REQUIRE(e.probability() < epiq::tol::kUnreachable);
    }
  }

  SECTION("pair-basis projection keeps the surviving branch intact") {
    StateVector t(2);
    t.prepare_qubit(0, kSqrtHalf, -kSqrtHalf);
    t.apply_gate(Gate::cnot(0, 1));
    StateVector before = t;
    const double p = t.project({0, 1}, 1, Basis::kBell);
    REQUIRE_THAT(p, WithinAbs(1.0, 1e-12));
    REQUIRE(t.distance(before) < 1e-10);
  }

  SECTION("projection agrees with the oracle") {
    StateVector t(3);
    t.prepare_qubit(0, 0.6, 0.8);
    t.apply_gate(Gate::cnot(0, 1));
    t.apply_gate(Gate::controlled_h(1, 2));
    oracle::Vec v = oracle::zero_state(3);
    v = oracle::prepare(v, 0, 0.6, 0.8);
    v = oracle::apply(oracle::controlled(3, oracle::x_matrix(), 1, {{0, 1}}),
                      v);
    v = oracle::apply(oracle::controlled(3, oracle::h_matrix(), 2, {{1, 1}}),
                      v);
    const double p = t.project({2}, 1);
    auto [w, q] = oracle::project(v, {2}, 1);
    REQUIRE_THAT(p, WithinAbs(q, 1e-12));
    REQUIRE(vec_distance(t, w) < 1e-12);
  }
}

TEST_CASE("sampling is seed-deterministic and unbiased", "[statevector]") {
  StateVector s(1);
  s.apply_gate(Gate::h(0));

  SECTION("same seed, same draw") {
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 987654321ULL}) {
      REQUIRE(s.sample({0}, Basis::kComputational, seed) ==
              s.sample({0}, Basis::kComputational, seed));
    }
  }

  SECTION("a certain outcome ignores the seed") {
    StateVector t(1);
    t.apply_gate(Gate::x(0));
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
      REQUIRE(t.sample({0}, Basis::kComputational, seed) == 1);
    }
  }

  SECTION("frequencies over many seeds match the Born weight") {
    int ones = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
      ones += static_cast<int>(s.sample({0}, Basis::kComputational, seed));
    }
    const double freq = ones / 10000.0;
    REQUIRE(freq > 0.48);
    REQUIRE(freq < 0.52);
  }

  SECTION("derived per-shot seeds do not collide") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) {
      seen.insert(epiq::derive_seed(3, i));
    }
    REQUIRE(seen.size() == 1000);
    REQUIRE(epiq::derive_seed(3, 0) != epiq::derive_seed(4, 0));
  }
}

TEST_CASE("suffix inversion rewinds tagged operations", "[statevector]") {
  StateVector s(2);
  s.apply_gate(Gate::h(0), TimeTag::parse("1"));
  StateVector checkpoint = s;
  s.apply_gate(Gate::cnot(0, 1), TimeTag::parse("2"));
  s.apply_gate(Gate::x(1), TimeTag::parse("2"));
  s.apply_gate(Gate::h(1), TimeTag::parse("3"));

  SECTION("inverting from a tag restores the checkpoint and trims the log") {
    s.invert_suffix(TimeTag::parse("2"));
    REQUIRE(s.distance(checkpoint) < 1e-12);
    REQUIRE(s.log().size() == 1);
  }

  SECTION("an unknown tag is refused") {
    REQUIRE_THROWS_WITH(s.invert_suffix(TimeTag::parse("9")),
                        ContainsSubstring("no logged op"));
  }

  SECTION("a projection in the suffix blocks inversion") {
    s.project({0}, 0, Basis::kComputational, TimeTag::parse("4"));
    REQUIRE_THROWS_WITH(s.invert_suffix(TimeTag::parse("2")),
                        ContainsSubstring("projection"));
  }

  SECTION("a preparation in the suffix blocks inversion") {
    StateVector t(2);
    t.apply_gate(Gate::h(0), TimeTag::parse("1"));
    t.prepare_qubit(1, 0.0, 1.0, TimeTag::parse("2"));
    REQUIRE_THROWS_WITH(t.invert_suffix(TimeTag::parse("1")),
                        ContainsSubstring("preparation"));
  }
}

TEST_CASE("state printing shows kets in wire order", "[statevector]") {
  epiq::RegisterMap map;
  map.add("", epiq::RegisterRole::kSystem, "R");
  map.add("Alice", epiq::RegisterRole::kOutcome, "A");
  StateVector s(2);
  s.apply_gate(Gate::h(0));
  s.apply_gate(Gate::cnot(0, 1));

  REQUIRE(s.dump() ==
          "|00> 0.707106781187 0\n"
          "|11> 0.707106781187 0\n");
  REQUIRE(s.dump(&map) ==
          "# qubits: R A\n"
          "|00> 0.707106781187 0\n"
          "|11> 0.707106781187 0\n");
}

TEST_CASE("packed outcome bits follow the wire list order", "[statevector]") {
  // Index 0b110 read through the wire list {2, 1} packs qubit 2 into bit 0.
  REQUIRE(StateVector::extract_bits(0b110, {2, 1}) == 0b11);
  REQUIRE(StateVector::extract_bits(0b110, {0, 2}) == 0b10);
  REQUIRE(StateVector::extract_bits(0b001, {0}) == 1);
}

TEST_CASE("random circuits agree with a dense-matrix oracle",
          "[statevector][property]") {
  std::mt19937_64 rng(20260815);
  auto pick = [&rng](int n) {
    return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
  };

  for (int n = 2; n <= 4; ++n) {
    for (int trial = 0; trial < 60; ++trial) {
      StateVector s(n);
      oracle::Vec v = oracle::zero_state(n);
      std::vector<Gate> gates;

      for (int depth = 0; depth < 12; ++depth) {
        const int t = pick(n);
        int c = pick(n);
        while (c == t) c = pick(n);
        Gate g = Gate::x(t);
        oracle::Mat m;
        switch (pick(6)) {
          case 0:
            g = Gate::x(t);
            m = oracle::embed(n, oracle::x_matrix(), t);
            break;
          case 1:
            g = Gate::h(t);
            m = oracle::embed(n, oracle::h_matrix(), t);
            break;
          case 2:
            g = Gate::cnot(c, t);
            m = oracle::controlled(
                n, oracle::x_matrix(), t,
                {{static_cast<std::size_t>(c), 1}});
            break;
          case 3:
            g = Gate::controlled_h(c, t);
            m = oracle::controlled(
                n, oracle::h_matrix(), t,
                {{static_cast<std::size_t>(c), 1}});
            break;
          case 4: {
            // Every other wire becomes a control with random polarity.
            std::vector<epiq::ControlSpec> specs;
            std::vector<oracle::Control> octrl;
            for (int q = 0; q < n; ++q) {
              if (q == t) continue;
              const bool polarity = pick(2) == 1;
              specs.push_back({q, polarity});
              octrl.push_back(
                  {static_cast<std::size_t>(q), polarity ? 1 : 0});
            }
            g = Gate::mcx(specs, t);
            m = oracle::controlled(n, oracle::x_matrix(), t, octrl);
            break;
          }
          case 5: {
            const bool adjoint = pick(2) == 1;
            g = Gate::bell_basis_change(t, c, adjoint);
            m = oracle::bell_change(n, t, c, adjoint);
            break;
          }
        }
        s.apply_gate(g);
        gates.push_back(g);
        v = oracle::apply(m, v);
      }

      CAPTURE(n, trial);
      REQUIRE(vec_distance(s, v) < 1e-10);
      REQUIRE_THAT(s.norm_squared(), WithinAbs(1.0, 1e-10));

      // Joint outcome weights through a random wire subset.
      std::vector<epiq::QubitId> qubits;
      std::vector<std::size_t> oqubits;
      for (int q = 0; q < n; ++q) {
        if (pick(2) == 1 || (qubits.empty() && q == n - 1)) {
          qubits.push_back(q);
          oqubits.push_back(static_cast<std::size_t>(q));
        }
      }
      const auto probs = s.measure_probabilities(qubits);
      const auto oprobs = oracle::probabilities(v, oqubits);
      for (const auto& [value, p] : oprobs) {
        const auto it = probs.find(value);
        const double got = it == probs.end() ? 0.0 : it->second;
        REQUIRE_THAT(got, WithinAbs(p, 1e-10));
      }

      // Unwinding the circuit gate by gate lands back on |0...0>.
      for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        s.apply_gate(it->inverse());
      }
      REQUIRE(vec_distance(s, oracle::zero_state(n)) < 1e-10);
    }
  }
}
