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

#ifndef EPIQ_REPORT_HPP_
#define EPIQ_REPORT_HPP_

#include <cstdio>
#include <map>
#include <sstream>
#include <string>

#include "json.hpp"

#include "epiq/protocol.hpp"
#include "epiq/runtime.hpp"

namespace epiq {

// ---------------------------------------------------------------------------
// Run reports. Both renderings are byte-stable for a fixed protocol, seed
// and mode: keys and rows come out in a fixed order and nothing
// time-of-day-dependent is included. See docs/report-schema.md for the
// structured layout.
// ---------------------------------------------------------------------------

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::string(buf);
}

inline std::string format_distribution(
    const std::map<std::string, double>& dist) {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, p] : dist) {
    if (!first) out += ", ";
    first = false;
    out += name + ": " + format_number(p);
  }
  return out + "}";
}

inline std::string record_status(const RecordFate& fate) {
  if (!fate.settle.has_value()) return "never recorded";
  if (fate.intact()) return "intact since t=" + fate.settle->str();
  std::string out;
  if (fate.reversed) out = "reversed";
  if (fate.disturbed) {
    if (!out.empty()) out += ", ";
    out += "rewritten after t=" + fate.settle->str();
  }
  return out;
}

inline std::string render_text(const Protocol& p, const ExecutionResult& r) {
  std::ostringstream out;
  out << "interpretation: " << p.interpretation << "\n";
  for (const auto& [agent, name] : p.interpretation_overrides) {
    out << "interpretation: " << agent << " uses " << name << "\n";
  }
  out << "mode: " << r.mode << "\n";
  if (r.mode == "sampling") {
    out << "shots: " << r.shots << "\n";
    out << "seed: " << r.seed << "\n";
    out << "halted: " << r.halted_count << "\n";
  } else {
    out << "halt probability: " << format_number(r.halt_probability) << "\n";
  }

  out << "\ninference tables\n";
  for (const auto& a : p.agents) {
    auto it = r.tables.find(a.name);
    if (it == r.tables.end()) continue;
    const InferenceTable& table = it->second;
    out << "  " << a.name << " (register " << table.own_register << ", "
        << p.interpretation_for(a.name) << ")\n";
    for (const auto& row : table.rows) {
      out << "    " << table.own_register << "=" << row.own_value << " => "
          << row.hypothesis.str() << ": " << verdict_name(row.verdict);
      if (row.verdict != Verdict::kUnreachable) {
        out << "  " << format_distribution(row.distribution);
      }
      out << "\n";
    }
  }

  out << "\nrecords\n";
  for (const auto& [label, fate] : r.fates) {
    out << "  " << label << ": " << record_status(fate) << "\n";
  }

  if (!r.marginals.empty()) {
    out << "\nmarginals\n";
    for (const auto& [label, dist] : r.marginals) {
      out << "  " << label << ": " << format_distribution(dist) << "\n";
    }
  }

  out << "\ncontradictions\n";
  if (r.reports.empty()) {
    out << "  none\n";
  }
  for (const auto& agg : r.reports) {
    out << "  [" << agg.report.severity << "] predicted "
        << agg.report.predicted.str() << " via " << agg.report.provenance
        << "; observed " << agg.report.observed.register_label << "="
        << agg.report.observed.value << " (";
    if (r.mode == "sampling") out << "x" << agg.occurrences << ", ";
    out << "p=" << format_number(agg.probability) << ")\n";
  }

  out << "\nverdict: ";
  if (r.consistent()) {
    out << "consistent\n";
  } else {
    out << "inconsistent (" << r.reports.size() << " distinct contradiction"
        << (r.reports.size() == 1 ? "" : "s") << ")\n";
  }
  return out.str();
}

inline nlohmann::json render_structured(const Protocol& p,
                                        const ExecutionResult& r) {
  nlohmann::json doc;
  doc["format"] = "epiq-report";
  doc["version"] = 1;
  doc["mode"] = r.mode;
  doc["dynamics"] = r.dynamics;
  doc["interpretation"]["global"] = p.interpretation;
  doc["interpretation"]["overrides"] = nlohmann::json::object();
  for (const auto& [agent, name] : p.interpretation_overrides) {
    doc["interpretation"]["overrides"][agent] = name;
  }
  if (r.mode == "sampling") {
    doc["shots"] = r.shots;
    doc["seed"] = r.seed;
    doc["halted"] = r.halted_count;
  } else {
    doc["halt_probability"] = r.halt_probability;
    doc["marginals"] = nlohmann::json::object();
    for (const auto& [label, dist] : r.marginals) {
      for (const auto& [name, prob] : dist) {
        doc["marginals"][label][name] = prob;
      }
    }
  }

  doc["tables"] = nlohmann::json::object();
  for (const auto& [name, table] : r.tables) {
    nlohmann::json t;
    t["register"] = table.own_register;
    t["interpretation"] = p.interpretation_for(name);
    t["rows"] = nlohmann::json::array();
    for (const auto& row : table.rows) {
      nlohmann::json j;
      j["own"] = row.own_value;
      j["hypothesis"] = row.hypothesis.str();
      j["verdict"] = verdict_name(row.verdict);
      j["distribution"] = nlohmann::json::object();
      for (const auto& [value, prob] : row.distribution) {
        j["distribution"][value] = prob;
      }
      t["rows"].push_back(std::move(j));
    }
    doc["tables"][name] = std::move(t);
  }

  doc["records"] = nlohmann::json::object();
  for (const auto& [label, fate] : r.fates) {
    nlohmann::json f;
    f["owner"] = fate.owner;
    f["prediction"] = fate.prediction;
    f["settled"] = fate.settle.has_value() ? fate.settle->str() : "";
    f["reversed"] = fate.reversed;
    f["disturbed"] = fate.disturbed;
    f["intact"] = fate.intact();
    doc["records"][label] = std::move(f);
  }

  doc["contradictions"] = nlohmann::json::array();
  for (const auto& agg : r.reports) {
    nlohmann::json c;
    c["severity"] = agg.report.severity;
    c["owner"] = agg.report.owner;
    c["predicted"] = agg.report.predicted.str();
    c["provenance"] = agg.report.provenance;
    c["observed"]["register"] = agg.report.observed.register_label;
    c["observed"]["value"] = agg.report.observed.value;
    c["occurrences"] = agg.occurrences;
    c["probability"] = agg.probability;
    doc["contradictions"].push_back(std::move(c));
  }
  doc["consistent"] = r.consistent();
  return doc;
}

inline std::string render_structured_text(const Protocol& p,
                                          const ExecutionResult& r) {
  return render_structured(p, r).dump(2) + "\n";
}

}  // namespace epiq

#endif  // EPIQ_REPORT_HPP_
