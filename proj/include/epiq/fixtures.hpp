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

#ifndef EPIQ_FIXTURES_HPP_
#define EPIQ_FIXTURES_HPP_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "epiq/errors.hpp"

namespace epiq {

// ---------------------------------------------------------------------------
// Built-in protocols, mirrored one-to-one by the files under protocols/.
// Each is runnable as `epiq --fixture <name>`.
// ---------------------------------------------------------------------------

namespace fixtures {

/// Two agents measure the halves of a correlated pair; the first reasons
/// about the second's record before that record exists.
inline constexpr std::string_view kBell = R"(# Correlated pair, one reasoner.
system R amp 0.7071067811865476 0 0.7071067811865476 0
system S amp 1 0 0 0
agent Alice memory A outcomes 2 hypotheses B=0,B=1
agent Bob memory B outcomes 2
step 0.5 cprepare S control R gate X
step 1 measure Alice targets R
step 2 reason Alice
step 3 measure Bob targets S
interpretation neo-copenhagen
trust trivial
shots 1000
seed 7
)";

/// The same system measured twice in a row; each record pins the other, so
/// forward and backward inference both close.
inline constexpr std::string_view kSequential = R"(# One system, two readers.
system R amp 0.7071067811865476 0 0.7071067811865476 0
agent Alice memory A outcomes 2 hypotheses B=0,B=1
agent Bob memory B outcomes 2 hypotheses A=0,A=1
step 1 measure Alice targets R
step 2 measure Bob targets R
step 3 reason Alice
step 3.5 reason Bob
step 4 compare
interpretation neo-copenhagen
trust trivial
shots 1000
seed 11
)";

/// The second observer reads the first observer's memory directly, after an
/// intervening kick re-correlates that memory with the system.
inline constexpr std::string_view kBobMeasuresAlice =
    R"(# A memory that is itself measured.
system R amp 0.7071067811865476 0 0.7071067811865476 0
agent Alice memory A outcomes 2 hypotheses B=0,B=1
agent Bob memory B outcomes 2
step 1 measure Alice targets R
step 2 reason Alice
step 3 cprepare A control R gate X
step 4 measure Bob targets A
interpretation neo-copenhagen
trust trivial
shots 1000
seed 5
)";

/// One sealed lab: a single observer records a superposed system and the
/// global state keeps both branches.
inline constexpr std::string_view kWignerFriend = R"(# One sealed lab.
system R amp 0.7071067811865476 0 0.7071067811865476 0
agent Alice memory A outcomes 2
step 1 measure Alice targets R
interpretation neo-copenhagen
trust trivial
shots 100
seed 1
)";

/// Four observers, two nested labs, entangled-basis measurements of whole
/// labs, and a halting condition on the pair of outer records. On every
/// halting run the chained conclusions contradict what is observed.
inline constexpr std::string_view kFr = R"(# Nested labs, chained certainty.
system R amp 0.5773502691896258 0 0.816496580927726 0
system S amp 1 0 0 0
agent Alice memory A outcomes 2 hypotheses W=ok,W=fail
agent Bob memory B outcomes 2 hypotheses A=0,A=1
agent Ursula memory U outcomes 4 hypotheses B=0,B=1
agent Wigner memory W outcomes 4
step 1 measure Alice targets R
step 1.6 reason Alice
step 2 cprepare S control A gate H
step 2.5 measure Bob targets S
step 2.9 reverse Ursula reason Alice
step 3 measure Ursula targets R,A basis bell
step 3.5 infer Ursula about B via 1..3
step 4 measure Wigner targets S,B basis bell
step 5 halt_if U=ok & W=ok
interpretation neo-copenhagen
trust trivial
shots 12000
seed 3
)";

}  // namespace fixtures

inline const std::map<std::string, std::string_view>& fixture_index() {
  static const std::map<std::string, std::string_view> index = {
      {"bell", fixtures::kBell},
      {"sequential", fixtures::kSequential},
      {"bob-measures-alice", fixtures::kBobMeasuresAlice},
      {"wigner-friend", fixtures::kWignerFriend},
      {"fr", fixtures::kFr},
  };
  return index;
}

inline std::vector<std::string> fixture_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : fixture_index()) {
    (void)text;
    names.push_back(name);
  }
  return names;
}

inline std::string fixture_text(const std::string& name) {
  const auto& index = fixture_index();
  auto it = index.find(name);
  if (it == index.end()) {
    std::string known;
    for (const auto& n : fixture_names()) {
      if (!known.empty()) known += ", ";
      known += n;
    }
    throw Error("unknown fixture: " + name + " (known: " + known + ")");
  }
  return std::string(it->second);
}

}  // namespace epiq

#endif  // EPIQ_FIXTURES_HPP_
