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

#ifndef EPIQ_PROTOCOL_HPP_
#define EPIQ_PROTOCOL_HPP_

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "epiq/agent.hpp"
#include "epiq/claims.hpp"
#include "epiq/errors.hpp"
#include "epiq/state_vector.hpp"
#include "epiq/time_tag.hpp"

namespace epiq {

// ---------------------------------------------------------------------------
// Declarative experiment protocols: a line-oriented text format declaring
// systems, agents and a timetable of steps. See docs/protocol-format.md for
// the grammar; the shipped fixture files under protocols/ are normative
// examples.
// ---------------------------------------------------------------------------

struct SystemDecl {
  std::string name;
  Amplitude amp0{1.0, 0.0};
  Amplitude amp1{0.0, 0.0};
  std::size_t source_line = 0;
};

struct AgentDecl {
  std::string name;
  std::string memory_label;  // defaults to the agent name
  int outcome_count = 2;
  std::vector<Claim> hypotheses;  // empty: records outcomes, never reasons
  std::size_t source_line = 0;
};

enum class StepKind {
  kPrepare,
  kCPrepare,
  kMeasure,
  kReason,
  kReverseReason,
  kInferAbout,
  kHaltIf,
  kCompare,
};

struct SliceSpec {
  enum class Kind { kDefault, kFull, kRange };
  Kind kind = Kind::kDefault;
  TimeTag from;
  TimeTag to;
};

/// One timetable entry. Only the fields of its kind are meaningful.
struct Step {
  TimeTag at;
  StepKind kind;
  std::size_t source_line = 0;

  std::string target;              // prepare/cprepare: register acted on
  Amplitude amp0, amp1;            // prepare
  std::string control;             // cprepare
  char gate = 'H';                 // cprepare: H or X
  std::string agent;               // measure/reason/reverse/infer
  std::vector<std::string> targets;  // measure
  Basis basis = Basis::kComputational;
  std::string subject;             // reverse: whose reasoning is undone
  std::vector<std::string> about;  // infer: hypothesis registers
  SliceSpec slice;                 // infer
  std::vector<Claim> conditions;   // halt_if
};

struct Protocol {
  std::vector<SystemDecl> systems;
  std::vector<AgentDecl> agents;
  std::vector<Step> steps;
  std::string interpretation = "neo-copenhagen";
  std::map<std::string, std::string> interpretation_overrides;
  bool trust_trivial = true;
  std::vector<std::pair<std::string, std::string>> trust_denied;
  std::uint64_t shots = 1;
  std::uint64_t seed = 0;

  const AgentDecl* find_agent(const std::string& name) const {
    for (const auto& a : agents) {
      if (a.name == name) return &a;
    }
    return nullptr;
  }

  const SystemDecl* find_system(const std::string& name) const {
    for (const auto& s : systems) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }

  std::string interpretation_for(const std::string& agent) const {
    auto it = interpretation_overrides.find(agent);
    return it == interpretation_overrides.end() ? interpretation : it->second;
  }
};

namespace detail {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize_line(const std::string& line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
           line[i] != '\r') {
      ++i;
    }
    tokens.push_back({line.substr(start, i - start), start + 1});
  }
  return tokens;
}

/// Cursor over one line's tokens with positioned error reporting.
class LineReader {
 public:
  LineReader(std::size_t line_no, std::vector<Token> tokens)
      : line_(line_no), tokens_(std::move(tokens)) {}

  bool done() const { return next_ >= tokens_.size(); }

  const Token& peek() const {
    if (done()) fail("unexpected end of line");
    return tokens_[next_];
  }

  std::string take(const char* what) {
    if (done()) fail(std::string("expected ") + what);
    return tokens_[next_++].text;
  }

  void expect(const std::string& literal) {
    std::string got = take(("'" + literal + "'").c_str());
    if (got != literal) {
      --next_;
      fail("expected '" + literal + "', got '" + got + "'");
    }
  }

  bool accept(const std::string& literal) {
    if (!done() && tokens_[next_].text == literal) {
      ++next_;
      return true;
    }
    return false;
  }

  /// Steps back one token so a following `fail` points at what was just
  /// taken rather than past it.
  void rewind() {
    if (next_ > 0) --next_;
  }

  double take_number(const char* what) {
    std::string t = take(what);
    try {
      std::size_t used = 0;
      double v = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      --next_;
      fail(std::string("expected ") + what + ", got '" + t + "'");
    }
    return 0.0;
  }

  std::uint64_t take_count(const char* what) {
    std::string t = take(what);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
      --next_;
      fail(std::string("expected ") + what + ", got '" + t + "'");
    }
    return std::stoull(t);
  }

  void finish() {
    if (!done()) fail("trailing tokens: '" + tokens_[next_].text + "'");
  }

  [[noreturn]] void fail(const std::string& message) const {
    std::size_t col =
        next_ < tokens_.size() ? tokens_[next_].column
                               : (tokens_.empty() ? 1
                                                  : tokens_.back().column +
                                                        tokens_.back().text.size());
    throw ParseError(line_, col, message);
  }

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
  std::vector<Token> tokens_;
  std::size_t next_ = 0;
};

inline std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  int bracket_depth = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] == '[') ++bracket_depth;
    if (i < text.size() && text[i] == ']') --bracket_depth;
    if (i == text.size() || (text[i] == ',' && bracket_depth == 0)) {
      if (i > start) parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

/// Register labels a protocol can legally reference: systems, agent memory
/// labels, and the prediction qubits implied by declared hypotheses.
inline std::set<std::string> known_register_labels(const Protocol& p) {
  std::set<std::string> labels;
  for (const auto& s : p.systems) labels.insert(s.name);
  for (const auto& a : p.agents) {
    labels.insert(a.memory_label);
    for (std::size_t h = 0; h < a.hypotheses.size(); ++h) {
      labels.insert(
          AgentBrain::prediction_label_for(a.memory_label, a.hypotheses, h));
    }
  }
  return labels;
}

inline void validate(const Protocol& p) {
  std::vector<std::string> errors;
  auto complain = [&errors](std::size_t line, const std::string& msg) {
    errors.push_back("line " + std::to_string(line) + ": " + msg);
  };

  if (p.systems.empty()) errors.push_back("no systems declared");

  std::set<std::string> names;
  std::set<std::string> memory_labels;
  for (const auto& s : p.systems) {
    if (!names.insert(s.name).second) {
      complain(s.source_line, "duplicate name: " + s.name);
    }
  }
  for (const auto& a : p.agents) {
    if (!names.insert(a.name).second) {
      complain(a.source_line, "duplicate name: " + a.name);
    }
    if (names.count(a.memory_label) && a.memory_label != a.name) {
      complain(a.source_line, "memory label collides: " + a.memory_label);
    }
    if (!memory_labels.insert(a.memory_label).second) {
      complain(a.source_line, "duplicate memory label: " + a.memory_label);
    }
    if (a.outcome_count < 2) {
      complain(a.source_line, "agent " + a.name + " needs >= 2 outcomes");
    }
  }

  const std::set<std::string> labels = known_register_labels(p);
  auto check_label = [&](std::size_t line, const std::string& label) {
    if (!labels.count(label)) {
      complain(line, "unknown register: " + label);
    }
  };
  auto check_agent = [&](std::size_t line,
                         const std::string& name) -> const AgentDecl* {
    const AgentDecl* a = p.find_agent(name);
    if (a == nullptr) complain(line, "unknown agent: " + name);
    return a;
  };

  // Hypotheses may reference any system or outcome register, but a
  // prediction register only of an agent declared earlier: tables are
  // computed in declaration order, so later conclusions cannot feed back.
  {
    std::set<std::string> visible;
    for (const auto& s : p.systems) visible.insert(s.name);
    for (const auto& a : p.agents) visible.insert(a.memory_label);
    for (const auto& a : p.agents) {
      for (const auto& h : a.hypotheses) {
        if (!visible.count(h.register_label) &&
            labels.count(h.register_label)) {
          complain(a.source_line, "hypothesis of " + a.name +
                                      " references a prediction of an agent "
                                      "declared later: " +
                                      h.register_label);
        } else if (!labels.count(h.register_label)) {
          complain(a.source_line, "hypothesis of " + a.name +
                                      " references an unknown register: " +
                                      h.register_label);
        }
      }
      for (std::size_t h = 0; h < a.hypotheses.size(); ++h) {
        visible.insert(
            AgentBrain::prediction_label_for(a.memory_label, a.hypotheses, h));
      }
    }
  }

  const TimeTag* previous = nullptr;
  std::set<std::string> reasoned;
  for (const auto& st : p.steps) {
    if (previous != nullptr && !(*previous < st.at)) {
      complain(st.source_line,
               "step times must be strictly increasing (t=" + st.at.str() +
                   " after t=" + previous->str() + ")");
    }
    previous = &st.at;
    switch (st.kind) {
      case StepKind::kPrepare:
        if (p.find_system(st.target) == nullptr) {
          complain(st.source_line, "unknown system: " + st.target);
        }
        break;
      case StepKind::kCPrepare:
        check_label(st.source_line, st.target);
        check_label(st.source_line, st.control);
        if (st.gate != 'H' && st.gate != 'X') {
          complain(st.source_line, "cprepare gate must be H or X");
        }
        break;
      case StepKind::kMeasure: {
        const AgentDecl* a = check_agent(st.source_line, st.agent);
        for (const auto& t : st.targets) check_label(st.source_line, t);
        if (a != nullptr && a->outcome_count >= 2) {
          int width = outcome_register_width(a->outcome_count);
          if (static_cast<int>(st.targets.size()) != width) {
            complain(st.source_line,
                     "measure by " + st.agent + " needs " +
                         std::to_string(width) + " target(s) for " +
                         std::to_string(a->outcome_count) + " outcomes");
          }
          if (st.basis == Basis::kBell &&
              (st.targets.size() != 2 || a->outcome_count != 4)) {
            complain(st.source_line,
                     "an entangled-basis measurement has 4 outcomes over "
                     "2 targets");
          }
        }
        break;
      }
      case StepKind::kReason: {
        const AgentDecl* a = check_agent(st.source_line, st.agent);
        if (a != nullptr && a->hypotheses.empty()) {
          complain(st.source_line,
                   "agent " + st.agent + " reasons but has no hypotheses");
        }
        if (a != nullptr) reasoned.insert(st.agent);
        break;
      }
      case StepKind::kReverseReason:
        check_agent(st.source_line, st.agent);
        check_agent(st.source_line, st.subject);
        if (!reasoned.count(st.subject)) {
          complain(st.source_line, "reverse of " + st.subject +
                                       " without a prior reason step");
        }
        reasoned.erase(st.subject);
        break;
      case StepKind::kInferAbout: {
        const AgentDecl* a = check_agent(st.source_line, st.agent);
        if (a != nullptr && a->hypotheses.empty()) {
          complain(st.source_line,
                   "agent " + st.agent + " has no declared hypotheses");
        }
        for (const auto& t : st.about) check_label(st.source_line, t);
        break;
      }
      case StepKind::kHaltIf:
        for (const auto& c : st.conditions) {
          check_label(st.source_line, c.register_label);
        }
        break;
      case StepKind::kCompare:
        break;
    }
  }

  for (const auto& [agent, name] : p.interpretation_overrides) {
    if (p.find_agent(agent) == nullptr) {
      errors.push_back("interpretation override for unknown agent: " + agent);
    }
    (void)name;
  }
  for (const auto& [a, b] : p.trust_denied) {
    if (p.find_agent(a) == nullptr) {
      errors.push_back("trust entry for unknown agent: " + a);
    }
    if (p.find_agent(b) == nullptr) {
      errors.push_back("trust entry for unknown agent: " + b);
    }
  }

  if (!errors.empty()) {
    std::string msg = "invalid protocol:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw Error(msg);
  }
}

}  // namespace detail

/// Parses protocol text. Grammar errors raise ParseError with line/column;
/// reference errors (unknown agents, bad arities, non-increasing times)
/// raise Error listing every problem found.
inline Protocol parse_protocol(const std::string& text) {
  Protocol p;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool interpretation_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = detail::tokenize_line(line);
    if (tokens.empty()) continue;
    detail::LineReader r(line_no, std::move(tokens));
    std::string head = r.take("directive");
    if (head == "system") {
      SystemDecl s;
      s.source_line = line_no;
      s.name = r.take("system name");
      r.expect("amp");
      double re0 = r.take_number("amplitude");
      double im0 = r.take_number("amplitude");
      double re1 = r.take_number("amplitude");
      double im1 = r.take_number("amplitude");
      s.amp0 = Amplitude(re0, im0);
      s.amp1 = Amplitude(re1, im1);
      r.finish();
      p.systems.push_back(std::move(s));
    } else if (head == "agent") {
      AgentDecl a;
      a.source_line = line_no;
      a.name = r.take("agent name");
      a.memory_label = a.name;
      if (r.accept("memory")) a.memory_label = r.take("memory label");
      r.expect("outcomes");
      a.outcome_count = static_cast<int>(r.take_count("outcome count"));
      if (r.accept("hypotheses")) {
        std::string list = r.take("hypothesis list");
        for (const auto& part : detail::split_commas(list)) {
          try {
            a.hypotheses.push_back(parse_claim(part));
          } catch (const Error& e) {
            r.rewind();
            r.fail(e.what());
          }
        }
        if (a.hypotheses.empty()) r.fail("empty hypothesis list");
      }
      r.finish();
      p.agents.push_back(std::move(a));
    } else if (head == "step") {
      Step st;
      st.source_line = line_no;
      try {
        st.at = TimeTag::parse(r.take("time"));
      } catch (const Error& e) {
        r.rewind();
        r.fail(e.what());
      }
      std::string kind = r.take("step kind");
      if (kind == "prepare") {
        st.kind = StepKind::kPrepare;
        st.target = r.take("system name");
        r.expect("amp");
        double re0 = r.take_number("amplitude");
        double im0 = r.take_number("amplitude");
        double re1 = r.take_number("amplitude");
        double im1 = r.take_number("amplitude");
        st.amp0 = Amplitude(re0, im0);
        st.amp1 = Amplitude(re1, im1);
      } else if (kind == "cprepare") {
        st.kind = StepKind::kCPrepare;
        st.target = r.take("target register");
        r.expect("control");
        st.control = r.take("control register");
        r.expect("gate");
        std::string g = r.take("gate (H or X)");
        if (g != "H" && g != "X") {
          r.rewind();
          r.fail("gate must be H or X, got '" + g + "'");
        }
        st.gate = g[0];
      } else if (kind == "measure") {
        st.kind = StepKind::kMeasure;
        st.agent = r.take("agent name");
        r.expect("targets");
        for (const auto& t : detail::split_commas(r.take("target list"))) {
          st.targets.push_back(t);
        }
        if (r.accept("basis")) {
          std::string b = r.take("basis name");
          if (b == "computational") {
            st.basis = Basis::kComputational;
          } else if (b == "bell") {
            st.basis = Basis::kBell;
          } else {
            r.rewind();
            r.fail("basis must be computational or bell, got '" + b + "'");
          }
        }
      } else if (kind == "reason") {
        st.kind = StepKind::kReason;
        st.agent = r.take("agent name");
      } else if (kind == "reverse") {
        st.kind = StepKind::kReverseReason;
        st.agent = r.take("agent name");
        r.expect("reason");
        st.subject = r.take("subject agent");
      } else if (kind == "infer") {
        st.kind = StepKind::kInferAbout;
        st.agent = r.take("agent name");
        r.expect("about");
        for (const auto& t : detail::split_commas(r.take("register list"))) {
          st.about.push_back(t);
        }
        if (r.accept("via")) {
          std::string s = r.take("slice");
          if (s == "default") {
            st.slice.kind = SliceSpec::Kind::kDefault;
          } else if (s == "full") {
            st.slice.kind = SliceSpec::Kind::kFull;
          } else {
            auto dots = s.find("..");
            if (dots == std::string::npos) {
              r.rewind();
              r.fail("slice must be default, full or <t1>..<t2>");
            }
            try {
              st.slice.kind = SliceSpec::Kind::kRange;
              st.slice.from = TimeTag::parse(s.substr(0, dots));
              st.slice.to = TimeTag::parse(s.substr(dots + 2));
            } catch (const Error& e) {
              r.rewind();
              r.fail(e.what());
            }
          }
        }
      } else if (kind == "halt_if") {
        st.kind = StepKind::kHaltIf;
        while (true) {
          std::string c = r.take("condition");
          try {
            st.conditions.push_back(parse_claim(c));
          } catch (const Error& e) {
            r.rewind();
            r.fail(e.what());
          }
          if (!r.accept("&")) break;
        }
      } else if (kind == "compare") {
        st.kind = StepKind::kCompare;
      } else {
        r.rewind();
      r.fail("unknown step kind: '" + kind + "'");
      }
      r.finish();
      p.steps.push_back(std::move(st));
    } else if (head == "interpretation") {
      std::string first = r.take("interpretation name");
      if (!r.done()) {
        std::string second = r.take("interpretation name");
        p.interpretation_overrides[first] = second;
      } else if (!interpretation_seen) {
        p.interpretation = first;
        interpretation_seen = true;
      } else {
        r.fail("global interpretation declared twice");
      }
      r.finish();
    } else if (head == "trust") {
      if (r.accept("trivial")) {
        p.trust_trivial = true;
      } else {
        r.expect("deny");
        auto pair = detail::split_commas(r.take("agent pair"));
        if (pair.size() != 2) r.fail("trust deny needs <truster>,<trusted>");
        p.trust_denied.emplace_back(pair[0], pair[1]);
      }
      r.finish();
    } else if (head == "shots") {
      p.shots = r.take_count("shot count");
      r.finish();
    } else if (head == "seed") {
      p.seed = r.take_count("seed");
      r.finish();
    } else {
      r.rewind();
      r.fail("unknown directive: '" + head + "'");
    }
  }
  detail::validate(p);
  return p;
}

/// Canonical text form. parse(serialize(p)) reproduces the declaration and
/// step lists exactly.
inline std::string serialize_protocol(const Protocol& p) {
  std::ostringstream out;
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& s : p.systems) {
    out << "system " << s.name << " amp " << num(s.amp0.real()) << " "
        << num(s.amp0.imag()) << " " << num(s.amp1.real()) << " "
        << num(s.amp1.imag()) << "\n";
  }
  for (const auto& a : p.agents) {
    out << "agent " << a.name;
    if (a.memory_label != a.name) out << " memory " << a.memory_label;
    out << " outcomes " << a.outcome_count;
    if (!a.hypotheses.empty()) {
      out << " hypotheses ";
      for (std::size_t i = 0; i < a.hypotheses.size(); ++i) {
        if (i) out << ",";
        out << a.hypotheses[i].str();
      }
    }
    out << "\n";
  }
  for (const auto& st : p.steps) {
    out << "step " << st.at.str() << " ";
    switch (st.kind) {
      case StepKind::kPrepare:
        out << "prepare " << st.target << " amp " << num(st.amp0.real()) << " "
            << num(st.amp0.imag()) << " " << num(st.amp1.real()) << " "
            << num(st.amp1.imag());
        break;
      case StepKind::kCPrepare:
        out << "cprepare " << st.target << " control " << st.control
            << " gate " << st.gate;
        break;
      case StepKind::kMeasure:
        out << "measure " << st.agent << " targets ";
        for (std::size_t i = 0; i < st.targets.size(); ++i) {
          if (i) out << ",";
          out << st.targets[i];
        }
        out << " basis "
            << (st.basis == Basis::kBell ? "bell" : "computational");
        break;
      case StepKind::kReason:
        out << "reason " << st.agent;
        break;
      case StepKind::kReverseReason:
        out << "reverse " << st.agent << " reason " << st.subject;
        break;
      case StepKind::kInferAbout:
        out << "infer " << st.agent << " about ";
        for (std::size_t i = 0; i < st.about.size(); ++i) {
          if (i) out << ",";
          out << st.about[i];
        }
        switch (st.slice.kind) {
          case SliceSpec::Kind::kDefault:
            out << " via default";
            break;
          case SliceSpec::Kind::kFull:
            out << " via full";
            break;
          case SliceSpec::Kind::kRange:
            out << " via " << st.slice.from.str() << ".." << st.slice.to.str();
            break;
        }
        break;
      case StepKind::kHaltIf:
        out << "halt_if ";
        for (std::size_t i = 0; i < st.conditions.size(); ++i) {
          if (i) out << " & ";
          out << st.conditions[i].str();
        }
        break;
      case StepKind::kCompare:
        out << "compare";
        break;
    }
    out << "\n";
  }
  out << "interpretation " << p.interpretation << "\n";
  for (const auto& [agent, name] : p.interpretation_overrides) {
    out << "interpretation " << agent << " " << name << "\n";
  }
  if (p.trust_trivial && p.trust_denied.empty()) out << "trust trivial\n";
  for (const auto& [a, b] : p.trust_denied) {
    out << "trust deny " << a << "," << b << "\n";
  }
  out << "shots " << p.shots << "\n";
  out << "seed " << p.seed << "\n";
  return out.str();
}

}  // namespace epiq

#endif  // EPIQ_PROTOCOL_HPP_
