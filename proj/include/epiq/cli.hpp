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

#ifndef EPIQ_CLI_HPP_
#define EPIQ_CLI_HPP_

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "epiq/fixtures.hpp"
#include "epiq/report.hpp"
#include "epiq/runtime.hpp"

namespace epiq {

// ---------------------------------------------------------------------------
// Command line front end. Exit codes: 0 when the run is consistent, 2 when
// contradictions were found, 1 on usage or protocol errors. Reports go to
// stdout (or --output); timing goes to stderr so the report stays
// byte-stable.
// ---------------------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"epiq: agents reasoning about each other inside a simulated "
               "quantum experiment"};
  std::string protocol_path;
  std::string fixture;
  std::string interpretation;
  std::string format = "text";
  std::string output_path;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  bool exact = false;
  bool dump_state = false;
  bool list_fixtures = false;

  auto* protocol_opt =
      app.add_option("--protocol", protocol_path, "Protocol file to run");
  auto* fixture_opt =
      app.add_option("--fixture", fixture, "Built-in protocol to run");
  protocol_opt->excludes(fixture_opt);
  auto* shots_opt = app.add_option(
      "--shots", shots, "Override the protocol's declared shot count");
  auto* seed_opt =
      app.add_option("--seed", seed, "Override the protocol's declared seed");
  app.add_option("--interpretation", interpretation,
                 "Override the protocol's global interpretation");
  app.add_flag("--exact", exact,
               "Enumerate the end-of-run record distribution instead of "
               "sampling shots");
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--output", output_path,
                 "Write the report to this file instead of stdout");
  app.add_flag("--dump-state", dump_state,
               "Append the final state's nonzero amplitudes to the report");
  app.add_flag("--list-fixtures", list_fixtures,
               "List built-in protocols and exit");

  std::vector<const char*> argv;
  argv.push_back("epiq");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  if (list_fixtures) {
    for (const auto& name : fixture_names()) out << name << "\n";
    return 0;
  }

  std::string text;
  if (fixture_opt->count() > 0) {
    try {
      text = fixture_text(fixture);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
  } else if (protocol_opt->count() > 0) {
    std::ifstream in(protocol_path);
    if (!in) {
      err << "error: cannot read " << protocol_path << "\n";
      return 1;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  } else {
    err << "error: one of --protocol or --fixture is required\n";
    return 1;
  }

  Protocol protocol;
  try {
    protocol = parse_protocol(text);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (!interpretation.empty()) protocol.interpretation = interpretation;

  ExecuteOptions options;
  if (shots_opt->count() > 0) options.shots = shots;
  if (seed_opt->count() > 0) options.seed = seed;
  options.exact = exact;

  const auto started = std::chrono::steady_clock::now();
  ExecutionResult result;
  try {
    result = execute(protocol, options);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  err << "elapsed: " << elapsed.count() << " ms\n";

  std::string rendered = format == "structured"
                             ? render_structured_text(protocol, result)
                             : render_text(protocol, result);
  if (dump_state && result.arena.has_value()) {
    rendered += "\nfinal state\n";
    rendered += result.arena->state.dump(&result.arena->map);
  }

  if (!output_path.empty()) {
    std::ofstream file(output_path);
    if (!file) {
      err << "error: cannot write " << output_path << "\n";
      return 1;
    }
    file << rendered;
  } else {
    out << rendered;
  }
  return result.consistent() ? 0 : 2;
}

}  // namespace epiq

#endif  // EPIQ_CLI_HPP_
