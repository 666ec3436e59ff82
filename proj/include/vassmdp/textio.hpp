/*
 * Copyright 2026 The vassmdp authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cctype>
#include <cstring>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vassmdp/encoders.hpp"
#include "vassmdp/formula.hpp"
#include "vassmdp/limitsure.hpp"
#include "vassmdp/model.hpp"
#include "vassmdp/upset.hpp"

namespace vassmdp {

// --- the system text format -------------------------------------------------
//
//   # comment
//   vassmdp d=<nat>
//   state <id> owner=<1|P>
//   trans <id> <src> -> <dst> [ <int> ... <int> ] w=<nat>     (w optional)
//   init <state> [ <nat> ... <nat> ]
//   target <state>                                            (repeatable)

struct ParsedSystem {
  VassMdp sys;
  std::optional<Config> init;
  std::set<int> targets;
};

namespace detail {

[[noreturn]] inline void parse_fail(int line, const std::string& msg) {
  throw VassError(Err::Parse, "line " + std::to_string(line) + ": " + msg);
}

inline std::vector<std::string> tokenize_line(std::string s) {
  if (auto pos = s.find('#'); pos != std::string::npos) s.erase(pos);
  for (char br : {'[', ']'}) {
    std::string out;
    for (char c : s) {
      if (c == br) {
        out += ' ';
        out += c;
        out += ' ';
      } else {
        out += c;
      }
    }
    s = out;
  }
  std::istringstream is(s);
  std::vector<std::string> toks;
  std::string t;
  while (is >> t) toks.push_back(t);
  return toks;
}

inline long long parse_int(const std::string& t, int line, bool allow_negative) {
  size_t i = 0;
  bool neg = false;
  if (i < t.size() && (t[i] == '-' || t[i] == '+')) {
    neg = t[i] == '-';
    i++;
  }
  if (neg && !allow_negative) parse_fail(line, "expected a natural number, got " + t);
  if (i == t.size()) parse_fail(line, "expected a number, got " + t);
  long long v = 0;
  for (; i < t.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(t[i])))
      parse_fail(line, "expected a number, got " + t);
    v = v * 10 + (t[i] - '0');
  }
  return neg ? -v : v;
}

/// [ n1 n2 ... ] starting at toks[pos]; returns the position past ']'.
inline size_t parse_vec(const std::vector<std::string>& toks, size_t pos, int line,
                        bool allow_negative, Vec& out) {
  if (pos >= toks.size() || toks[pos] != "[") parse_fail(line, "expected '['");
  pos++;
  while (pos < toks.size() && toks[pos] != "]") {
    out.push_back(parse_int(toks[pos], line, allow_negative));
    pos++;
  }
  if (pos >= toks.size()) parse_fail(line, "missing ']'");
  return pos + 1;
}

}  // namespace detail

inline ParsedSystem parse_system(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  int dim = 0;
  std::vector<VassMdp::State> states;
  std::vector<std::pair<int, Transition>> trans;  // keep line for late checks
  std::map<std::string, int> idx;
  std::optional<std::pair<std::string, Vec>> init;
  std::vector<std::string> target_names;
  int init_line = 0;

  auto state_ref = [&](const std::string& name, int ln) {
    auto it = idx.find(name);
    if (it == idx.end()) detail::parse_fail(ln, "unknown state " + name);
    return it->second;
  };

  while (std::getline(is, line)) {
    lineno++;
    auto toks = detail::tokenize_line(line);
    if (toks.empty()) continue;
    if (!header_seen) {
      if (toks[0] != "vassmdp" || toks.size() != 2 || toks[1].rfind("d=", 0) != 0)
        detail::parse_fail(lineno, "expected header 'vassmdp d=<nat>'");
      dim = static_cast<int>(detail::parse_int(toks[1].substr(2), lineno, false));
      header_seen = true;
      continue;
    }
    const std::string& kw = toks[0];
    if (kw == "state") {
      if (toks.size() != 3 || toks[2].rfind("owner=", 0) != 0)
        detail::parse_fail(lineno, "expected 'state <id> owner=<1|P>'");
      std::string o = toks[2].substr(6);
      if (o != "1" && o != "P") detail::parse_fail(lineno, "owner must be 1 or P");
      if (idx.count(toks[1])) detail::parse_fail(lineno, "duplicate state " + toks[1]);
      idx[toks[1]] = static_cast<int>(states.size());
      states.push_back({toks[1], o == "1" ? Owner::One : Owner::Prob});
    } else if (kw == "trans") {
      if (toks.size() < 5 || toks[3] != "->")
        detail::parse_fail(lineno, "expected 'trans <id> <src> -> <dst> [ ... ]'");
      Transition t;
      t.id = toks[1];
      t.source = state_ref(toks[2], lineno);
      t.target = state_ref(toks[4], lineno);
      size_t pos = detail::parse_vec(toks, 5, lineno, true, t.effect);
      t.weight = 1;
      if (pos < toks.size()) {
        if (toks[pos].rfind("w=", 0) != 0 || pos + 1 != toks.size())
          detail::parse_fail(lineno, "unexpected trailing tokens");
        t.weight = detail::parse_int(toks[pos].substr(2), lineno, false);
        if (t.weight < 1) detail::parse_fail(lineno, "weight must be >= 1");
      }
      if (static_cast<int>(t.effect.size()) != dim)
        detail::parse_fail(lineno, "effect has length " + std::to_string(t.effect.size()) +
                                       ", system dimension is " + std::to_string(dim));
      trans.emplace_back(lineno, std::move(t));
    } else if (kw == "init") {
      if (init) detail::parse_fail(lineno, "duplicate init");
      if (toks.size() < 3) detail::parse_fail(lineno, "expected 'init <state> [ ... ]'");
      Vec v;
      detail::parse_vec(toks, 2, lineno, false, v);
      if (static_cast<int>(v.size()) != dim)
        detail::parse_fail(lineno, "init vector has wrong length");
      init = {toks[1], std::move(v)};
      init_line = lineno;
    } else if (kw == "target") {
      if (toks.size() != 2) detail::parse_fail(lineno, "expected 'target <state>'");
      target_names.push_back(toks[1]);
    } else {
      detail::parse_fail(lineno, "unknown directive " + kw);
    }
  }
  if (!header_seen) detail::parse_fail(lineno, "missing 'vassmdp d=<nat>' header");

  std::vector<Transition> ts;
  for (auto& [ln, t] : trans) ts.push_back(std::move(t));
  ParsedSystem p{VassMdp(dim, std::move(states), std::move(ts)), std::nullopt, {}};
  if (init) p.init = Config{state_ref(init->first, init_line), init->second};
  for (const auto& n : target_names) p.targets.insert(p.sys.state_index(n));
  return p;
}

inline std::string vec_str(const Vec& v) {
  std::string s = "[";
  for (long long x : v) s += " " + (x == STAR ? std::string("*") : std::to_string(x));
  return s + " ]";
}

/// Canonical serialization: declaration order, explicit weights, one space
/// between tokens. parse(serialize(s)) == s and serialize is idempotent
/// through a parse round-trip.
inline std::string serialize_system(const VassMdp& sys, const std::optional<Config>& init,
                                    const std::set<int>& targets) {
  std::string out = "vassmdp d=" + std::to_string(sys.dimension()) + "\n";
  for (const auto& s : sys.states())
    out += "state " + s.name + " owner=" + (s.owner == Owner::One ? "1" : "P") + "\n";
  for (const Transition& t : sys.transitions())
    out += "trans " + t.id + " " + sys.name(t.source) + " -> " + sys.name(t.target) + " " +
           vec_str(t.effect) + " w=" + std::to_string(t.weight) + "\n";
  if (init) out += "init " + sys.name(init->state) + " " + vec_str(init->counters) + "\n";
  for (int q : targets) out += "target " + sys.name(q) + "\n";
  return out;
}

// --- the Minsky machine text format ------------------------------------------
//
//   minsky
//   state <id> [init|final]
//   inc|dec|zero <q> <c1|c2> <q'>

inline MinskyMachine parse_minsky(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  MinskyMachine m;
  while (std::getline(is, line)) {
    lineno++;
    auto toks = detail::tokenize_line(line);
    if (toks.empty()) continue;
    if (!header_seen) {
      if (toks[0] != "minsky" || toks.size() != 1)
        detail::parse_fail(lineno, "expected header 'minsky'");
      header_seen = true;
      continue;
    }
    const std::string& kw = toks[0];
    if (kw == "state") {
      if (toks.size() < 2 || toks.size() > 3)
        detail::parse_fail(lineno, "expected 'state <id> [init|final]'");
      m.states.push_back(toks[1]);
      if (toks.size() == 3) {
        if (toks[2] == "init")
          m.initial = toks[1];
        else if (toks[2] == "final")
          m.final = toks[1];
        else
          detail::parse_fail(lineno, "expected init or final");
      }
    } else if (kw == "inc" || kw == "dec" || kw == "zero") {
      if (toks.size() != 4) detail::parse_fail(lineno, "expected '<op> <q> <c1|c2> <q2>'");
      MinskyMachine::Instr i;
      i.op = kw == "inc" ? MinskyMachine::Op::Inc
                         : kw == "dec" ? MinskyMachine::Op::Dec : MinskyMachine::Op::Zero;
      i.src = toks[1];
      if (toks[2] == "c1")
        i.counter = 0;
      else if (toks[2] == "c2")
        i.counter = 1;
      else
        detail::parse_fail(lineno, "counter must be c1 or c2");
      i.dst = toks[3];
      m.instrs.push_back(std::move(i));
    } else {
      detail::parse_fail(lineno, "unknown directive " + kw);
    }
  }
  if (!header_seen) detail::parse_fail(lineno, "missing 'minsky' header");
  validate_minsky(m);
  return m;
}

inline std::string serialize_minsky(const MinskyMachine& m) {
  std::string out = "minsky\n";
  for (const auto& q : m.states) {
    out += "state " + q;
    if (q == m.initial) out += " init";
    if (q == m.final) out += " final";
    out += "\n";
  }
  for (const auto& i : m.instrs) {
    const char* op = i.op == MinskyMachine::Op::Inc ? "inc"
                     : i.op == MinskyMachine::Op::Dec ? "dec" : "zero";
    out += std::string(op) + " " + i.src + " c" + std::to_string(i.counter + 1) + " " + i.dst +
           "\n";
  }
  return out;
}

// --- formula text -------------------------------------------------------------
//
//   phi := 'mu' X '.' phi | 'nu' X '.' phi
//        | phi '|' phi | phi '&' phi
//        | '<1>' phi | '<P>' phi | '<any>' phi | '[1]' phi | '[P]' phi
//        | '(' phi ')' | 'true' | 'false' | <state or variable id>
//
// Identifiers bound by an enclosing mu/nu are variables; all others are
// state atoms. '&' binds tighter than '|'; unary operators and binders
// extend as far right as possible.

namespace detail {

struct FormulaParser {
  std::vector<std::string> toks;
  size_t pos = 0;
  std::set<std::string> bound;

  explicit FormulaParser(const std::string& text) {
    std::string src = text;
    for (const char* op : {"<1>", "<P>", "<any>", "[1]", "[P]"}) {
      std::string padded = std::string(" ") + op + " ";
      size_t at = 0;
      while ((at = src.find(op, at)) != std::string::npos) {
        src = src.substr(0, at) + padded + src.substr(at + std::strlen(op));
        at += padded.size();
      }
    }
    std::string spaced;
    for (char c : src) {
      if (c == '(' || c == ')' || c == '.' || c == '&' || c == '|') {
        spaced += ' ';
        spaced += c;
        spaced += ' ';
      } else {
        spaced += c;
      }
    }
    std::istringstream is(spaced);
    std::string t;
    while (is >> t) toks.push_back(t);
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw VassError(Err::Parse, "formula, token " + std::to_string(pos) + ": " + msg);
  }

  bool eat(const std::string& t) {
    if (pos < toks.size() && toks[pos] == t) {
      pos++;
      return true;
    }
    return false;
  }

  FormulaPtr parse() {
    FormulaPtr f = parse_or();
    if (pos != toks.size()) fail("unexpected trailing input '" + toks[pos] + "'");
    return f;
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (eat("|")) f = f_or(f, parse_and());
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_unary();
    while (eat("&")) f = f_and(f, parse_unary());
    return f;
  }

  FormulaPtr parse_unary() {
    if (eat("<1>")) return f_diamond(TransFilter::One, parse_unary());
    if (eat("<P>")) return f_diamond(TransFilter::Prob, parse_unary());
    if (eat("<any>")) return f_diamond(TransFilter::Any, parse_unary());
    if (eat("[1]")) return f_box(Owner::One, parse_unary());
    if (eat("[P]")) return f_box(Owner::Prob, parse_unary());
    if (eat("mu") || eat("nu")) {
      bool is_mu = toks[pos - 1] == "mu";
      if (pos >= toks.size()) fail("expected a variable after mu/nu");
      std::string var = toks[pos++];
      if (!eat(".")) fail("expected '.' after the bound variable");
      bool fresh = bound.insert(var).second;
      FormulaPtr body = parse_or();
      if (fresh) bound.erase(var);
      return is_mu ? f_mu(var, body) : f_nu(var, body);
    }
    return parse_primary();
  }

  FormulaPtr parse_primary() {
    if (eat("(")) {
      FormulaPtr f = parse_or();
      if (!eat(")")) fail("expected ')'");
      return f;
    }
    if (eat("true")) return f_top();
    if (eat("false")) return f_bottom();
    if (pos >= toks.size()) fail("unexpected end of formula");
    std::string id = toks[pos++];
    return bound.count(id) ? f_var(id) : f_atom(id);
  }
};

}  // namespace detail

inline FormulaPtr parse_formula(const std::string& text) {
  detail::FormulaParser p(text);
  return p.parse();
}

// --- certificates --------------------------------------------------------------

/// One line per generator, `state [ v1 ... vd ]`, sorted by state name then
/// lexicographically by vector.
inline std::string serialize_upset(const VassMdp& sys, const Upset& u) {
  std::vector<std::pair<std::string, Vec>> rows;
  for (int q = 0; q < sys.num_states(); ++q)
    for (const Vec& g : u.basis(q)) rows.emplace_back(sys.name(q), g);
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (const auto& [name, g] : rows) out += name + " " + vec_str(g) + "\n";
  return out;
}

/// `node λ=(state,[c or *,...])` listing of an exploration trace.
inline std::string serialize_reduction_trace(const ReducedSystem& red) {
  std::string out;
  for (const auto& n : red.trace) {
    std::string vec = "[";
    for (size_t i = 0; i < n.label.size(); ++i) {
      if (i) vec += " ";
      vec += n.label[i] == STAR ? std::string("*") : std::to_string(n.label[i]);
    }
    vec += "]";
    out += n.node + " \xce\xbb=(" + n.label_state + "," + vec + ")\n";
  }
  return out;
}

}  // namespace vassmdp
