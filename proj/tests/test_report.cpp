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

#include <fstream>
#include <sstream>
#include <string>

#include "epiq/fixtures.hpp"
#include "epiq/protocol.hpp"
#include "epiq/report.hpp"
#include "epiq/runtime.hpp"

using Catch::Matchers::ContainsSubstring;
using epiq::ExecutionResult;
using epiq::Protocol;
using epiq::RecordFate;
using epiq::TimeTag;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string golden_path(const std::string& name) {
  return std::string(EPIQ_GOLDEN_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("record statuses name what happened to the evidence", "[report]") {
  RecordFate fate;
  REQUIRE(epiq::record_status(fate) == "never recorded");

  fate.settle = TimeTag::parse("3");
  REQUIRE(epiq::record_status(fate) == "intact since t=3");

  fate.reversed = true;
  REQUIRE(epiq::record_status(fate) == "reversed");

  fate.reversed = false;
  fate.settle = TimeTag::parse("1");
  fate.disturbed = true;
  REQUIRE(epiq::record_status(fate) == "rewritten after t=1");

  fate.reversed = true;
  REQUIRE(epiq::record_status(fate) == "reversed, rewritten after t=1");
}

TEST_CASE("structured reports parse back to the same document", "[report]") {
  for (const bool exact : {false, true}) {
    const Protocol p =
        epiq::parse_protocol(epiq::fixture_text(exact ? "fr" : "bell"));
    const ExecutionResult result = epiq::execute(p, {.exact = exact});
    const nlohmann::json doc = epiq::render_structured(p, result);
    const std::string text = epiq::render_structured_text(p, result);
    REQUIRE(nlohmann::json::parse(text) == doc);
  }
}

TEST_CASE("rendering is a pure function of protocol, seed and mode",
          "[report]") {
  const Protocol p = epiq::parse_protocol(epiq::fixture_text("fr"));

  const ExecutionResult first = epiq::execute(p);
  const ExecutionResult second = epiq::execute(p);
  REQUIRE(epiq::render_structured_text(p, first) ==
          epiq::render_structured_text(p, second));
  REQUIRE(epiq::render_text(p, first) == epiq::render_text(p, second));

  const ExecutionResult exact_a = epiq::execute(p, {.exact = true});
  const ExecutionResult exact_b = epiq::execute(p, {.exact = true});
  REQUIRE(epiq::render_structured_text(p, exact_a) ==
          epiq::render_structured_text(p, exact_b));
}

TEST_CASE("structured output matches the committed goldens", "[report]") {
  for (const char* name : {"bell", "fr"}) {
    const Protocol p = epiq::parse_protocol(epiq::fixture_text(name));
    const ExecutionResult result = epiq::execute(p, {.exact = true});
    CAPTURE(name);
    REQUIRE(epiq::render_structured_text(p, result) ==
            read_file(golden_path(std::string(name) + "-exact.json")));
  }
}

TEST_CASE("the structured schema carries the whole run", "[report]") {
  const Protocol p = epiq::parse_protocol(epiq::fixture_text("fr"));

  SECTION("sampling documents carry shots, not marginals") {
    const nlohmann::json doc =
        epiq::render_structured(p, epiq::execute(p));
    REQUIRE(doc["format"] == "epiq-report");
    REQUIRE(doc["version"] == 1);
    REQUIRE(doc["mode"] == "sampling");
    REQUIRE(doc["shots"] == 12000);
    REQUIRE(doc["seed"] == 3);
    REQUIRE(doc["halted"] == 958);
    REQUIRE_FALSE(doc.contains("halt_probability"));
    REQUIRE_FALSE(doc.contains("marginals"));
    REQUIRE(doc["consistent"] == false);
  }

  SECTION("exact documents carry the law, not the draws") {
    const nlohmann::json doc =
        epiq::render_structured(p, epiq::execute(p, {.exact = true}));
    REQUIRE(doc["mode"] == "exact");
    REQUIRE_FALSE(doc.contains("shots"));
    REQUIRE(doc.contains("halt_probability"));
    REQUIRE(doc["marginals"].contains("U"));
    REQUIRE_FALSE(doc["marginals"].contains("P_A[W=ok]"));

    REQUIRE(doc["records"]["U"]["intact"] == true);
    REQUIRE(doc["records"]["U"]["settled"] == "3");
    REQUIRE(doc["records"]["U"]["owner"] == "Ursula");
    REQUIRE(doc["records"]["A"]["disturbed"] == true);
    REQUIRE(doc["records"]["A"]["intact"] == false);
    REQUIRE(doc["records"]["P_A[W=ok]"]["prediction"] == true);
    REQUIRE(doc["records"]["P_A[W=ok]"]["reversed"] == true);
    REQUIRE(doc["records"]["P_A[W=ok]"]["owner"] == "Alice");

    const auto& ursula = doc["tables"]["Ursula"];
    REQUIRE(ursula["register"] == "U");
    REQUIRE(ursula["interpretation"] == "neo-copenhagen");
    bool saw_certain_row = false;
    for (const auto& row : ursula["rows"]) {
      if (row["verdict"] != "certain") continue;
      saw_certain_row = true;
      REQUIRE(row["own"] == "ok");
      REQUIRE(row["hypothesis"] == "B=1");
      REQUIRE(row["distribution"]["1"].get<double>() > 1.0 - 1e-9);
    }
    REQUIRE(saw_certain_row);
    int unreachable = 0;
    for (const auto& row : ursula["rows"]) {
      if (row["verdict"] == "unreachable") {
        REQUIRE(row["distribution"].empty());
        ++unreachable;
      }
    }
    REQUIRE(unreachable == 4);  // both entangled-basis excess values

    REQUIRE(doc["contradictions"].size() == 1);
    REQUIRE(doc["contradictions"][0]["predicted"] == "W=fail");
    REQUIRE(doc["contradictions"][0]["observed"]["register"] == "W");
    REQUIRE(doc["contradictions"][0]["observed"]["value"] == "ok");
  }
}

TEST_CASE("the text report reads like a run summary", "[report]") {
  SECTION("a consistent run") {
    const Protocol p = epiq::parse_protocol(epiq::fixture_text("bell"));
    const std::string text =
        epiq::render_text(p, epiq::execute(p, {.exact = true}));
    REQUIRE_THAT(text, ContainsSubstring("interpretation: neo-copenhagen\n"));
    REQUIRE_THAT(text, ContainsSubstring("mode: exact\n"));
    REQUIRE_THAT(text, ContainsSubstring("halt probability: 1\n"));
    REQUIRE_THAT(text, ContainsSubstring("inference tables\n"));
    REQUIRE_THAT(text,
                 ContainsSubstring("Alice (register A, neo-copenhagen)\n"));
    REQUIRE_THAT(text, ContainsSubstring("A=0 => B=0: certain"));
    REQUIRE_THAT(text, ContainsSubstring("records\n"));
    REQUIRE_THAT(text, ContainsSubstring("A: intact since t=1\n"));
    REQUIRE_THAT(text, ContainsSubstring("marginals\n"));
    REQUIRE_THAT(text, ContainsSubstring("contradictions\n  none\n"));
    REQUIRE_THAT(text, ContainsSubstring("verdict: consistent\n"));
  }

  SECTION("an inconsistent run") {
    const Protocol p = epiq::parse_protocol(epiq::fixture_text("fr"));
    const std::string text = epiq::render_text(p, epiq::execute(p));
    REQUIRE_THAT(text, ContainsSubstring("mode: sampling\n"));
    REQUIRE_THAT(text, ContainsSubstring("shots: 12000\n"));
    REQUIRE_THAT(text, ContainsSubstring("seed: 3\n"));
    REQUIRE_THAT(text, ContainsSubstring("halted: 958\n"));
    const std::string expected =
        "[prediction-vs-outcome] predicted W=fail via "
        "U=ok => B=1 => A=1 => W=fail; observed W=ok (x958, p=" +
        epiq::format_number(958.0 / 12000.0) + ")";
    REQUIRE_THAT(text, ContainsSubstring(expected));
    REQUIRE_THAT(text, ContainsSubstring(
                           "verdict: inconsistent (1 distinct contradiction)"));
    REQUIRE_THAT(text, ContainsSubstring("reversed"));
    REQUIRE_THAT(text, ContainsSubstring("rewritten after t="));
  }
}
