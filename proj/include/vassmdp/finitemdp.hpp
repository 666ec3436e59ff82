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

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vassmdp/model.hpp"

namespace vassmdp {

/// The six decision problems.
enum class Problem { SureReach, AsReach, LsReach, SureBuchi, AsBuchi, LsBuchi };

inline bool is_reach(Problem p) {
  return p == Problem::SureReach || p == Problem::AsReach || p == Problem::LsReach;
}

enum class Answer { Yes, No, Unknown, UndecidableClass, OpenProblem };

inline std::string problem_str(Problem p) {
  switch (p) {
    case Problem::SureReach: return "sure-reach";
    case Problem::AsReach: return "as-reach";
    case Problem::LsReach: return "ls-reach";
    case Problem::SureBuchi: return "sure-buchi";
    case Problem::AsBuchi: return "as-buchi";
    case Problem::LsBuchi: return "ls-buchi";
  }
  return "?";
}

inline Problem parse_problem(const std::string& s) {
  for (Problem p : {Problem::SureReach, Problem::AsReach, Problem::LsReach, Problem::SureBuchi,
                    Problem::AsBuchi, Problem::LsBuchi})
    if (problem_str(p) == s) return p;
  throw VassError(Err::Usage, "unknown problem: " + s);
}

inline std::string answer_str(Answer a) {
  switch (a) {
    case Answer::Yes: return "YES";
    case Answer::No: return "NO";
    case Answer::Unknown: return "UNKNOWN";
    case Answer::UndecidableClass: return "UNDECIDABLE_CLASS";
    case Answer::OpenProblem: return "OPEN_PROBLEM";
  }
  return "?";
}

/// CLI exit-code contract: 0 YES, 1 NO, 2 UNKNOWN/OPEN/UNDECIDABLE.
inline int exit_code(Answer a) {
  switch (a) {
    case Answer::Yes: return 0;
    case Answer::No: return 1;
    default: return 2;
  }
}

/// Explicit finite MDP: the dimension-0 base case of the reduction and the
/// domain of the brute-force oracle. Parallel edges allowed; weights positive.
struct FiniteMdp {
  struct Node {
    std::string name;
    Owner owner = Owner::One;
  };
  struct Edge {
    int src = -1, dst = -1;
    long long weight = 1;
  };

  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::set<int> targets;

  std::vector<std::vector<int>> out() const {
    std::vector<std::vector<int>> o(nodes.size());
    for (size_t e = 0; e < edges.size(); ++e)
      o[static_cast<size_t>(edges[e].src)].push_back(static_cast<int>(e));
    return o;
  }
};

namespace detail {

using NodeSet = std::vector<char>;

/// Successor quantifiers with explicit deadlock handling: a node with no
/// outgoing edges satisfies neither (deadlocked plays reach the target only
/// if it was already visited, and never satisfy a Buechi objective).
struct Quant {
  explicit Quant(const FiniteMdp& m) : m(m), out(m.out()) {}

  bool some(int q, const NodeSet& s) const {
    for (int e : out[static_cast<size_t>(q)])
      if (s[static_cast<size_t>(m.edges[static_cast<size_t>(e)].dst)]) return true;
    return false;
  }
  bool some2(int q, const NodeSet& a, const NodeSet& b) const {
    for (int e : out[static_cast<size_t>(q)]) {
      size_t d = static_cast<size_t>(m.edges[static_cast<size_t>(e)].dst);
      if (a[d] && b[d]) return true;
    }
    return false;
  }
  bool all(int q, const NodeSet& s) const {
    if (out[static_cast<size_t>(q)].empty()) return false;
    for (int e : out[static_cast<size_t>(q)])
      if (!s[static_cast<size_t>(m.edges[static_cast<size_t>(e)].dst)]) return false;
    return true;
  }

  const FiniteMdp& m;
  std::vector<std::vector<int>> out;
};

inline NodeSet full_set(const FiniteMdp& m) { return NodeSet(m.nodes.size(), 1); }
inline NodeSet empty_set(const FiniteMdp& m) { return NodeSet(m.nodes.size(), 0); }
inline NodeSet target_set(const FiniteMdp& m) {
  NodeSet s(m.nodes.size(), 0);
  for (int t : m.targets) s[static_cast<size_t>(t)] = 1;
  return s;
}

/// One player-aware step toward a set: Player 1 needs one successor, Player P
/// all of them (sure semantics).
inline NodeSet cpre_sure(const Quant& g, const NodeSet& x) {
  NodeSet r(x.size(), 0);
  for (size_t q = 0; q < x.size(); ++q)
    r[q] = (g.m.nodes[q].owner == Owner::One) ? g.some(static_cast<int>(q), x)
                                              : g.all(static_cast<int>(q), x);
  return r;
}

/// Finite InvPre(X,Y): Player 1 can step into X and Y; Player P cannot leave
/// X and reaches Y with positive probability.
inline NodeSet inv_pre_fin(const Quant& g, const NodeSet& x, const NodeSet& y) {
  NodeSet r(x.size(), 0);
  for (size_t q = 0; q < x.size(); ++q) {
    int qi = static_cast<int>(q);
    r[q] = (g.m.nodes[q].owner == Owner::One)
               ? g.some2(qi, x, y)
               : (g.all(qi, x) && g.some(qi, y));
  }
  return r;
}

inline NodeSet set_or(NodeSet a, const NodeSet& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] = a[i] || b[i];
  return a;
}
inline NodeSet set_and(NodeSet a, const NodeSet& b) {
  for (size_t i = 0; i < a.size(); ++i) a[i] = a[i] && b[i];
  return a;
}

}  // namespace detail

/// Winning node set of: some strategy makes every maximal play visit the
/// targets (mu X. tgt or (Q_1 and <>X) or (Q_P and []X), finitely).
inline std::vector<char> sure_reach_set(const FiniteMdp& m) {
  detail::Quant g(m);
  detail::NodeSet tgt = detail::target_set(m);
  detail::NodeSet cur = detail::empty_set(m);
  for (;;) {
    detail::NodeSet next = detail::set_or(detail::cpre_sure(g, cur), tgt);
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

/// Winning node set of almost-sure reachability,
/// nu X. mu Y. (tgt or InvPre(X,Y)).
inline std::vector<char> as_reach_set(const FiniteMdp& m) {
  detail::Quant g(m);
  detail::NodeSet tgt = detail::target_set(m);
  detail::NodeSet x = detail::full_set(m);
  for (;;) {
    detail::NodeSet y = detail::empty_set(m);
    for (;;) {
      detail::NodeSet next = detail::set_or(detail::inv_pre_fin(g, x, y), tgt);
      if (next == y) break;
      y = std::move(next);
    }
    if (y == x) return x;
    x = std::move(y);
  }
}

/// Winning node set of sure repeated reachability (the W^1_S shape,
/// nu Y. mu X of the three-conjunct body).
inline std::vector<char> sure_buchi_set(const FiniteMdp& m) {
  detail::Quant g(m);
  detail::NodeSet tgt = detail::target_set(m);
  detail::NodeSet not_tgt(tgt.size());
  for (size_t i = 0; i < tgt.size(); ++i) not_tgt[i] = !tgt[i];
  detail::NodeSet y = detail::full_set(m);
  for (;;) {
    detail::NodeSet x = detail::empty_set(m);
    for (;;) {
      detail::NodeSet reach = detail::set_or(detail::cpre_sure(g, x), tgt);
      // at a target: Player P must be unable to leave Y, Player 1 must be
      // able to re-enter it
      detail::NodeSet reenter(tgt.size(), 0);
      for (size_t q = 0; q < tgt.size(); ++q) {
        if (!tgt[q]) {
          reenter[q] = 1;
          continue;
        }
        int qi = static_cast<int>(q);
        reenter[q] = (m.nodes[q].owner == Owner::Prob) ? g.all(qi, y) : g.some(qi, y);
      }
      detail::NodeSet next = detail::set_and(std::move(reach), reenter);
      if (next == x) break;
      x = std::move(next);
    }
    if (x == y) return y;
    y = std::move(x);
  }
}

/// Winning node set of almost-sure repeated reachability,
/// nu X. InvPre(X, mu Y.(tgt or InvPre(X,Y))).
inline std::vector<char> as_buchi_set(const FiniteMdp& m) {
  detail::Quant g(m);
  detail::NodeSet tgt = detail::target_set(m);
  detail::NodeSet x = detail::full_set(m);
  for (;;) {
    detail::NodeSet y = detail::empty_set(m);
    for (;;) {
      detail::NodeSet next = detail::set_or(detail::inv_pre_fin(g, x, y), tgt);
      if (next == y) break;
      y = std::move(next);
    }
    detail::NodeSet next = detail::inv_pre_fin(g, x, y);
    if (next == x) return x;
    x = std::move(next);
  }
}

inline bool sure_reach(const FiniteMdp& m, int from) {
  return sure_reach_set(m)[static_cast<size_t>(from)];
}
inline bool as_reach(const FiniteMdp& m, int from) {
  return as_reach_set(m)[static_cast<size_t>(from)];
}
inline bool sure_buchi(const FiniteMdp& m, int from) {
  return sure_buchi_set(m)[static_cast<size_t>(from)];
}
inline bool as_buchi(const FiniteMdp& m, int from) {
  return as_buchi_set(m)[static_cast<size_t>(from)];
}

/// On finite MDPs limit-sure and almost-sure coincide, for reachability and
/// for Buechi objectives alike.
inline bool solve(const FiniteMdp& m, int from, Problem p) {
  switch (p) {
    case Problem::SureReach: return sure_reach(m, from);
    case Problem::AsReach:
    case Problem::LsReach: return as_reach(m, from);
    case Problem::SureBuchi: return sure_buchi(m, from);
    case Problem::AsBuchi:
    case Problem::LsBuchi: return as_buchi(m, from);
  }
  throw std::logic_error("unreachable problem kind");
}

/// A dimension-0 VASS-MDP is already a finite MDP.
inline FiniteMdp from_dim0(const VassMdp& sys, const std::set<int>& targets) {
  if (sys.dimension() != 0)
    throw VassError(Err::DimensionMismatch, "from_dim0 requires dimension 0");
  FiniteMdp m;
  for (const auto& s : sys.states()) m.nodes.push_back({s.name, s.owner});
  for (const Transition& t : sys.transitions()) m.edges.push_back({t.source, t.target, t.weight});
  m.targets = targets;
  return m;
}

// --- the bounded explicit-state oracle -------------------------------------

/// Explicit finite MDP of the configurations reachable from `init` with all
/// counters <= cap. The space must be closed: an enabled transition leading
/// past the cap aborts the construction. For reach objectives target
/// configurations may be made absorbing (post-target behaviour cannot change
/// the objective), which keeps spaces with target-only divergence closed.
struct BoundedSpace {
  FiniteMdp mdp;
  std::vector<Config> configs;  // node index -> configuration
  int init_node = 0;
};

inline std::optional<BoundedSpace> try_build_bounded(const VassMdp& sys, const Config& init,
                                                     const std::set<int>& targets,
                                                     long long cap, bool absorb_targets) {
  if (!sys.valid_config(init))
    throw VassError(Err::DimensionMismatch, "invalid initial configuration");
  BoundedSpace bs;
  std::map<Config, int> index;
  std::deque<int> work;
  auto intern = [&](const Config& c) {
    auto [it, fresh] = index.emplace(c, static_cast<int>(bs.configs.size()));
    if (fresh) {
      bs.configs.push_back(c);
      bs.mdp.nodes.push_back({sys.name(c.state), sys.owner(c.state)});
      if (targets.count(c.state)) bs.mdp.targets.insert(it->second);
      work.push_back(it->second);
    }
    return it->second;
  };
  for (long long x : init.counters)
    if (x > cap) return std::nullopt;
  bs.init_node = intern(init);
  while (!work.empty()) {
    int n = work.front();
    work.pop_front();
    Config c = bs.configs[static_cast<size_t>(n)];
    if (absorb_targets && targets.count(c.state)) continue;
    for (int ti : enabled(sys, c)) {
      const Transition& t = sys.transitions()[static_cast<size_t>(ti)];
      Config succ = step(sys, c, t);
      for (long long x : succ.counters)
        if (x > cap) return std::nullopt;
      bs.mdp.edges.push_back({n, intern(succ), t.weight});
    }
  }
  return bs;
}

/// Exact verdict on a cap-closed instance; throws CapNotClosed otherwise.
inline bool bounded_oracle(const VassMdp& sys, const Config& init, const std::set<int>& targets,
                           long long cap, Problem p) {
  auto bs = try_build_bounded(sys, init, targets, cap, is_reach(p));
  if (!bs)
    throw VassError(Err::CapNotClosed,
                    "reachable space exceeds cap " + std::to_string(cap));
  return solve(bs->mdp, bs->init_node, p);
}

}  // namespace vassmdp
