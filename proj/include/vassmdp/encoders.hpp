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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "vassmdp/finitemdp.hpp"
#include "vassmdp/model.hpp"

namespace vassmdp {

/// Two-counter Minsky machine. Well-formed machines are deterministic: a
/// state carries one increment, or a decrement, or a zero-test, or a
/// decrement/zero-test pair on the same counter (the conditional-decrement
/// idiom); the final state's only transition, if any, is its self-increment.
struct MinskyMachine {
  enum class Op { Inc, Dec, Zero };
  struct Instr {
    Op op;
    std::string src;
    int counter = 0;  // 0 or 1
    std::string dst;
  };

  std::vector<std::string> states;
  std::vector<Instr> instrs;
  std::string initial, final;
};

inline void validate_minsky(const MinskyMachine& m) {
  std::set<std::string> declared(m.states.begin(), m.states.end());
  if (declared.size() != m.states.size())
    throw VassError(Err::Parse, "duplicate machine state");
  if (!declared.count(m.initial) || !declared.count(m.final))
    throw VassError(Err::Parse, "initial/final state undeclared");
  std::map<std::string, std::vector<const MinskyMachine::Instr*>> out;
  for (const auto& i : m.instrs) {
    if (!declared.count(i.src) || !declared.count(i.dst))
      throw VassError(Err::UnknownState, "instruction references undeclared state");
    if (i.counter != 0 && i.counter != 1)
      throw VassError(Err::Parse, "counter must be c1 or c2");
    out[i.src].push_back(&i);
  }
  for (const auto& [q, is] : out) {
    bool ok = false;
    if (is.size() == 1) {
      ok = true;
    } else if (is.size() == 2) {
      // a decrement paired with a zero-test on the same counter is the one
      // deterministic two-way branch
      const auto *a = is[0], *b = is[1];
      if (a->op == MinskyMachine::Op::Zero) std::swap(a, b);
      ok = a->op == MinskyMachine::Op::Dec && b->op == MinskyMachine::Op::Zero &&
           a->counter == b->counter;
    }
    if (!ok)
      throw VassError(Err::Parse, "state " + q + " is not deterministic");
  }
  auto fit = out.find(m.final);
  if (fit != out.end()) {
    for (const auto* i : fit->second)
      if (i->op != MinskyMachine::Op::Inc || i->dst != m.final)
        throw VassError(Err::Parse, "final state may only carry its self-increment");
  }
}

enum class SimOutcome { Reached, StepCap, Stuck };

struct SimResult {
  SimOutcome outcome;
  long steps = 0;
};

/// Exact simulation from (q_I, 0, 0) up to the step cap.
inline SimResult simulate_minsky(const MinskyMachine& m, long step_cap) {
  validate_minsky(m);
  std::string q = m.initial;
  long long c[2] = {0, 0};
  if (q == m.final) return {SimOutcome::Reached, 0};
  for (long s = 1; s <= step_cap; ++s) {
    const MinskyMachine::Instr* chosen = nullptr;
    for (const auto& i : m.instrs) {
      if (i.src != q) continue;
      bool applicable = (i.op == MinskyMachine::Op::Inc) ||
                        (i.op == MinskyMachine::Op::Dec && c[i.counter] > 0) ||
                        (i.op == MinskyMachine::Op::Zero && c[i.counter] == 0);
      if (applicable) {
        chosen = &i;
        break;
      }
    }
    if (!chosen) return {SimOutcome::Stuck, s - 1};
    if (chosen->op == MinskyMachine::Op::Inc) c[chosen->counter]++;
    if (chosen->op == MinskyMachine::Op::Dec) c[chosen->counter]--;
    q = chosen->dst;
    if (q == m.final) return {SimOutcome::Reached, s};
  }
  return {SimOutcome::StepCap, step_cap};
}

namespace detail {

struct EncoderBuild {
  std::vector<VassMdp::State> states;
  std::vector<Transition> trans;
  std::map<std::string, int> idx;

  int add_state(const std::string& name, Owner o) {
    idx[name] = static_cast<int>(states.size());
    states.push_back({name, o});
    return idx[name];
  }
  void edge(const std::string& id, const std::string& src, Vec eff, const std::string& dst) {
    trans.push_back({id, idx.at(src), std::move(eff), idx.at(dst), 1});
  }
};

inline Vec unit(int counter, long long sign) {
  Vec v(2, 0);
  v[static_cast<size_t>(counter)] = sign;
  return v;
}

inline std::string fresh(const std::set<std::string>& used, std::string base) {
  while (used.count(base)) base += "_";
  return base;
}

}  // namespace detail

/// General VASS-MDP encoding: increments and decrements are direct Player-1
/// edges; a zero-test runs through a probabilistic node that can punish a
/// positive counter by moving to the absorbing state `bot`.
///
///   q --(0,0)--> z --(0,0)--> q'       z --(-1,0)--> bot --(0,0)--> bot
///
/// All weights are 1.
inline VassMdp encode_general(const MinskyMachine& m) {
  validate_minsky(m);
  detail::EncoderBuild b;
  std::set<std::string> used(m.states.begin(), m.states.end());
  const std::string bot = detail::fresh(used, "bot");
  for (const auto& q : m.states) b.add_state(q, Owner::One);
  std::map<size_t, std::string> aux;
  for (size_t k = 0; k < m.instrs.size(); ++k)
    if (m.instrs[k].op == MinskyMachine::Op::Zero) {
      aux[k] = detail::fresh(used, "z" + std::to_string(k));
      b.add_state(aux[k], Owner::Prob);
    }
  b.add_state(bot, Owner::One);
  for (size_t k = 0; k < m.instrs.size(); ++k) {
    const auto& i = m.instrs[k];
    const std::string tk = "t" + std::to_string(k);
    switch (i.op) {
      case MinskyMachine::Op::Inc:
        b.edge(tk, i.src, detail::unit(i.counter, 1), i.dst);
        break;
      case MinskyMachine::Op::Dec:
        b.edge(tk, i.src, detail::unit(i.counter, -1), i.dst);
        break;
      case MinskyMachine::Op::Zero: {
        const std::string& z = aux.at(k);
        b.edge(tk + "a", i.src, Vec(2, 0), z);
        b.edge(tk + "b", z, Vec(2, 0), i.dst);
        b.edge(tk + "c", z, detail::unit(i.counter, -1), bot);
        break;
      }
    }
  }
  b.edge("tbot", bot, Vec(2, 0), bot);
  return VassMdp(2, std::move(b.states), std::move(b.trans));
}

namespace detail {

/// Shared shape of the two P-VASS-MDP encodings: Player 1 announces the
/// instruction with a zero-effect edge into a probabilistic node which then
/// performs the counter change. `dec_self_loop` adds the deadlock-avoiding
/// self-loop on decrement nodes (the Fig. 4 variant).
inline VassMdp encode_pvass(const MinskyMachine& m, bool dec_self_loop) {
  validate_minsky(m);
  EncoderBuild b;
  std::set<std::string> used(m.states.begin(), m.states.end());
  const std::string bot = fresh(used, "bot");
  for (const auto& q : m.states) b.add_state(q, Owner::One);
  std::map<size_t, std::string> aux;
  for (size_t k = 0; k < m.instrs.size(); ++k) {
    aux[k] = fresh(used, "a" + std::to_string(k));
    b.add_state(aux[k], Owner::Prob);
  }
  b.add_state(bot, Owner::One);
  for (size_t k = 0; k < m.instrs.size(); ++k) {
    const auto& i = m.instrs[k];
    const std::string tk = "t" + std::to_string(k);
    const std::string& a = aux.at(k);
    b.edge(tk + "a", i.src, Vec(2, 0), a);
    switch (i.op) {
      case MinskyMachine::Op::Inc:
        b.edge(tk + "b", a, unit(i.counter, 1), i.dst);
        break;
      case MinskyMachine::Op::Dec:
        b.edge(tk + "b", a, unit(i.counter, -1), i.dst);
        if (dec_self_loop) b.edge(tk + "s", a, Vec(2, 0), a);
        break;
      case MinskyMachine::Op::Zero:
        b.edge(tk + "b", a, Vec(2, 0), i.dst);
        b.edge(tk + "c", a, unit(i.counter, -1), bot);
        break;
    }
  }
  b.edge("tbot", bot, Vec(2, 0), bot);
  return VassMdp(2, std::move(b.states), std::move(b.trans));
}

}  // namespace detail

/// P-VASS-MDP encoding with deadlocks: the decrement node has the bare
/// decrement edge and deadlocks when the counter is 0.
inline VassMdp encode_pvass_deadlock(const MinskyMachine& m) {
  return detail::encode_pvass(m, false);
}

/// Deadlock-free P-VASS-MDP encoding: the decrement node carries a (0,0)
/// self-loop, so at counter 0 the play stays there with probability 1
/// instead of deadlocking.
inline VassMdp encode_pvass_deadlockfree(const MinskyMachine& m) {
  return detail::encode_pvass(m, true);
}

// --- fixture gadgets --------------------------------------------------------

struct Gadget {
  std::string name;
  VassMdp sys;
  Config init;
  std::set<int> targets;
  std::map<Problem, Answer> expected;
};

/// Hand-built fixtures with analytically derived verdict tables.
///  - FIX-PUMP: limit-sure but not almost-sure reachable (counter must be
///    pumped before entering the coin-flip loop; success from (p,n) is
///    1 - (1/2)^{n+1}).
///  - FIX-COIN: almost-sure but not sure (a fair coin eventually lands).
///  - FIX-DEC: a single decrement; everything fails from counter 0.
inline Gadget gen_gadget(const std::string& name) {
  using P = Problem;
  using A = Answer;
  if (name == "FIX-PUMP") {
    std::vector<VassMdp::State> st{{"s", Owner::One},
                                   {"p", Owner::Prob},
                                   {"t", Owner::One},
                                   {"f", Owner::One}};
    std::vector<Transition> tr{{"t1", 0, {1}, 0, 1},
                               {"t2", 0, {0}, 1, 1},
                               {"t3", 1, {0}, 3, 1},
                               {"t4", 1, {0}, 2, 1},
                               {"t5", 2, {-1}, 1, 1}};
    Gadget g{name, VassMdp(1, st, tr), Config{0, {0}}, {3}, {}};
    g.expected = {{P::SureReach, A::No},  {P::AsReach, A::No},
                  {P::LsReach, A::Yes},   {P::SureBuchi, A::No},
                  {P::AsBuchi, A::No},    {P::LsBuchi, A::OpenProblem}};
    return g;
  }
  if (name == "FIX-COIN") {
    std::vector<VassMdp::State> st{{"c", Owner::Prob}, {"g", Owner::One}};
    std::vector<Transition> tr{{"t1", 0, {0}, 1, 1}, {"t2", 0, {0}, 0, 1}, {"t3", 1, {0}, 1, 1}};
    Gadget g{name, VassMdp(1, st, tr), Config{0, {0}}, {1}, {}};
    g.expected = {{P::SureReach, A::No},  {P::AsReach, A::Yes},
                  {P::LsReach, A::Yes},   {P::SureBuchi, A::No},
                  {P::AsBuchi, A::Yes},   {P::LsBuchi, A::OpenProblem}};
    return g;
  }
  if (name == "FIX-DEC") {
    std::vector<VassMdp::State> st{{"q0", Owner::One}, {"f", Owner::One}};
    std::vector<Transition> tr{{"t1", 0, {-1}, 1, 1}};
    Gadget g{name, VassMdp(1, st, tr), Config{0, {0}}, {1}, {}};
    g.expected = {{P::SureReach, A::No},  {P::AsReach, A::No},
                  {P::LsReach, A::No},    {P::SureBuchi, A::No},
                  {P::AsBuchi, A::No},    {P::LsBuchi, A::OpenProblem}};
    return g;
  }
  throw VassError(Err::UnknownGadget, "unknown gadget: " + name);
}

inline const std::vector<std::string>& gadget_names() {
  static const std::vector<std::string> names{"FIX-PUMP", "FIX-COIN", "FIX-DEC"};
  return names;
}

}  // namespace vassmdp
