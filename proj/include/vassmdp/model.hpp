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

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace vassmdp {

using Rat = boost::rational<long long>;

/// Counter and effect vectors. Counters are nonnegative, effects arbitrary
/// integers; both always have length == the owning system's dimension.
using Vec = std::vector<long long>;

enum class Owner { One, Prob };

enum class Err {
  NotEnabled,
  Deadlock,
  WrongOwner,
  DimensionMismatch,
  NotZeroEffectSide,
  NotOneVass,
  WrongSubclass,
  NotDeadlockFree,
  MixedGuards,
  NotSingleSided,
  NoWitness,
  CapNotClosed,
  SafetyCap,
  UnknownGadget,
  UnknownState,
  Parse,
  Usage,
};

class VassError : public std::runtime_error {
 public:
  VassError(Err code, const std::string& what)
      : std::runtime_error(what), code(code) {}
  Err code;
};

inline std::string rat_str(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// --- vector helpers ------------------------------------------------------

inline bool vec_leq(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Vec vec_add(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec vec_max(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

/// max(0, a - b) componentwise: the least v with v >= a - b and v >= 0.
inline Vec vec_sub_clamp(const Vec& a, const Vec& b) {
  assert(a.size() == b.size());
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = std::max<long long>(0, a[i] - b[i]);
  return r;
}

inline bool vec_nonneg(const Vec& a) {
  for (long long x : a)
    if (x < 0) return false;
  return true;
}

// --- the system ----------------------------------------------------------

struct Transition {
  std::string id;
  int source = -1;
  Vec effect;
  int target = -1;
  long long weight = 1;
};

struct Config {
  int state = -1;
  Vec counters;

  bool operator==(const Config& o) const = default;
  auto operator<=>(const Config& o) const = default;
};

/// A VASS-MDP: a finite control graph over Player-1 and Player-P states,
/// with integer effect vectors and positive weights on transitions.
/// Values are immutable after construction; all operations below are pure.
class VassMdp {
 public:
  struct State {
    std::string name;
    Owner owner = Owner::One;
  };

  VassMdp() = default;
  VassMdp(int dimension, std::vector<State> states, std::vector<Transition> transitions)
      : dimension_(dimension), states_(std::move(states)), transitions_(std::move(transitions)) {
    validate();
    build_index();
  }

  int dimension() const { return dimension_; }
  const std::vector<State>& states() const { return states_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  int num_states() const { return static_cast<int>(states_.size()); }

  const State& state(int i) const { return states_.at(static_cast<size_t>(i)); }
  Owner owner(int i) const { return state(i).owner; }
  const std::string& name(int i) const { return state(i).name; }

  int state_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
      throw VassError(Err::UnknownState, "unknown state: " + name);
    return it->second;
  }
  bool has_state(const std::string& name) const { return index_.count(name) > 0; }

  /// Outgoing transition indices of a control state.
  const std::vector<int>& out(int state) const { return out_.at(static_cast<size_t>(state)); }

  bool valid_config(const Config& c) const {
    return c.state >= 0 && c.state < num_states() &&
           static_cast<int>(c.counters.size()) == dimension_ && vec_nonneg(c.counters);
  }

 private:
  void validate() const {
    std::set<std::string> seen_states, seen_trans;
    for (const auto& s : states_) {
      if (!seen_states.insert(s.name).second)
        throw VassError(Err::Parse, "duplicate state id: " + s.name);
    }
    for (const auto& t : transitions_) {
      if (!seen_trans.insert(t.id).second)
        throw VassError(Err::Parse, "duplicate transition id: " + t.id);
      if (t.source < 0 || t.source >= static_cast<int>(states_.size()) ||
          t.target < 0 || t.target >= static_cast<int>(states_.size()))
        throw VassError(Err::UnknownState, "transition " + t.id + " references undeclared state");
      if (static_cast<int>(t.effect.size()) != dimension_)
        throw VassError(Err::DimensionMismatch, "transition " + t.id + " effect length mismatch");
      if (t.weight < 1)
        throw VassError(Err::Parse, "transition " + t.id + " weight must be >= 1");
    }
  }

  void build_index() {
    index_.clear();
    out_.assign(states_.size(), {});
    for (size_t i = 0; i < states_.size(); ++i) index_[states_[i].name] = static_cast<int>(i);
    for (size_t j = 0; j < transitions_.size(); ++j)
      out_[static_cast<size_t>(transitions_[j].source)].push_back(static_cast<int>(j));
  }

  int dimension_ = 0;
  std::vector<State> states_;
  std::vector<Transition> transitions_;
  std::map<std::string, int> index_;
  std::vector<std::vector<int>> out_;
};

// --- step semantics of the induced MDP -----------------------------------

inline bool is_enabled(const VassMdp& sys, const Config& c, const Transition& t) {
  if (t.source != c.state) return false;
  for (size_t i = 0; i < c.counters.size(); ++i)
    if (c.counters[i] + t.effect[i] < 0) return false;
  return true;
}

/// Transition indices enabled at c: source matches and counters + effect >= 0.
inline std::vector<int> enabled(const VassMdp& sys, const Config& c) {
  assert(sys.valid_config(c));
  std::vector<int> r;
  for (int j : sys.out(c.state))
    if (is_enabled(sys, c, sys.transitions()[static_cast<size_t>(j)])) r.push_back(j);
  return r;
}

inline Config step(const VassMdp& sys, const Config& c, const Transition& t) {
  if (!is_enabled(sys, c, t))
    throw VassError(Err::NotEnabled, "transition " + t.id + " not enabled");
  return Config{t.target, vec_add(c.counters, t.effect)};
}

/// One-step distribution at a Player-P configuration. Weights of transitions
/// leading to the same successor configuration aggregate; probabilities are
/// exact rationals and sum to 1.
inline std::map<Config, Rat> distribution(const VassMdp& sys, const Config& c) {
  if (sys.owner(c.state) != Owner::Prob)
    throw VassError(Err::WrongOwner, "distribution at a Player-1 state " + sys.name(c.state));
  std::vector<int> en = enabled(sys, c);
  if (en.empty()) throw VassError(Err::Deadlock, "deadlock at " + sys.name(c.state));
  long long total = 0;
  std::map<Config, long long> acc;
  for (int j : en) {
    const Transition& t = sys.transitions()[static_cast<size_t>(j)];
    acc[step(sys, c, t)] += t.weight;
    total += t.weight;
  }
  std::map<Config, Rat> dist;
  for (const auto& [succ, w] : acc) dist.emplace(succ, Rat(w, total));
  return dist;
}

// --- subclass classification ---------------------------------------------

struct Classification {
  bool is_p_vass = false;
  bool is_one_vass = false;
  bool deadlock_free_all_configs = false;
  /// A side all of whose transitions have zero effect, if any. When both
  /// sides qualify (every transition is zero-effect) this reports Prob.
  std::optional<Owner> single_sided_side;
};

inline bool all_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
}

inline Classification classify(const VassMdp& sys) {
  Classification c;
  bool one_zero = true, prob_zero = true;
  for (const auto& t : sys.transitions()) {
    if (!all_zero(t.effect)) {
      if (sys.owner(t.source) == Owner::One)
        one_zero = false;
      else
        prob_zero = false;
    }
  }
  c.is_p_vass = one_zero;
  c.is_one_vass = prob_zero;
  if (prob_zero)
    c.single_sided_side = Owner::Prob;
  else if (one_zero)
    c.single_sided_side = Owner::One;
  // A state is deadlock-free at every counter valuation iff some outgoing
  // transition has a nonnegative effect; otherwise (q, 0) is a deadlock.
  c.deadlock_free_all_configs = true;
  for (int q = 0; q < sys.num_states(); ++q) {
    bool ok = false;
    for (int j : sys.out(q))
      if (vec_nonneg(sys.transitions()[static_cast<size_t>(j)].effect)) { ok = true; break; }
    if (!ok) { c.deadlock_free_all_configs = false; break; }
  }
  return c;
}

// --- deadlock removal for 1-VASS-MDPs ------------------------------------

/// Fresh name not yet used by the system: base, base_, base__, ...
inline std::string fresh_name(const VassMdp& sys, std::string base) {
  while (sys.has_state(base)) base += "_";
  return base;
}

/// Deadlock removal for 1-VASS-MDPs. Player-P states without outgoing
/// transitions gain a zero-effect self-loop (in a 1-VASS-MDP a Player-P
/// state with any outgoing transition is enabled everywhere). Every Player-1
/// state gains a zero-effect escape edge to a fresh absorbing non-target
/// sink, so a formerly deadlocked Player-1 configuration now loses by being
/// forced into the sink. All six verdicts are preserved.
inline VassMdp remove_deadlocks(const VassMdp& sys) {
  if (!classify(sys).is_one_vass)
    throw VassError(Err::NotOneVass, "remove_deadlocks requires a 1-VASS-MDP");
  std::vector<VassMdp::State> states = sys.states();
  std::vector<Transition> trans = sys.transitions();
  const std::string sink = fresh_name(sys, "sink");
  int sink_idx = static_cast<int>(states.size());
  states.push_back({sink, Owner::One});
  Vec zero(static_cast<size_t>(sys.dimension()), 0);
  std::set<std::string> used;
  for (const auto& t : trans) used.insert(t.id);
  auto fresh_tid = [&used](std::string base) {
    while (used.count(base)) base += "_";
    used.insert(base);
    return base;
  };
  for (int q = 0; q < sys.num_states(); ++q) {
    if (sys.owner(q) == Owner::One) {
      trans.push_back({fresh_tid("esc_" + sys.name(q)), q, zero, sink_idx, 1});
    } else if (sys.out(q).empty()) {
      trans.push_back({fresh_tid("loop_" + sys.name(q)), q, zero, q, 1});
    }
  }
  trans.push_back({fresh_tid("loop_" + sink), sink_idx, zero, sink_idx, 1});
  return VassMdp(sys.dimension(), std::move(states), std::move(trans));
}

}  // namespace vassmdp
