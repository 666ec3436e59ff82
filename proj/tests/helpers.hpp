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

// Test-only brute-force oracles and random instance generators. The grid
// evaluators below enumerate defining predicates directly and stay
// independent of the symbolic operator implementations they check.

#pragma once

#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>
#include <vector>

#include "vassmdp/encoders.hpp"
#include "vassmdp/finitemdp.hpp"
#include "vassmdp/model.hpp"
#include "vassmdp/textio.hpp"
#include "vassmdp/upset.hpp"

namespace vassmdp::testing {

inline VassMdp make_sys(int dim, std::vector<std::pair<std::string, Owner>> states,
                        std::vector<std::tuple<std::string, std::string, Vec, std::string, long long>> trans) {
  std::vector<VassMdp::State> ss;
  std::map<std::string, int> idx;
  for (auto& [n, o] : states) {
    idx[n] = static_cast<int>(ss.size());
    ss.push_back({n, o});
  }
  std::vector<Transition> ts;
  for (auto& [id, src, eff, dst, w] : trans)
    ts.push_back({id, idx.at(src), eff, idx.at(dst), w});
  return VassMdp(dim, ss, ts);
}

/// All grid points v <= bound componentwise.
inline std::vector<Vec> grid(int dim, long long bound) {
  std::vector<Vec> pts{Vec(static_cast<size_t>(dim), 0)};
  for (int i = 0; i < dim; ++i) {
    std::vector<Vec> next;
    for (const Vec& p : pts)
      for (long long v = 0; v <= bound; ++v) {
        Vec q = p;
        q[static_cast<size_t>(i)] = v;
        next.push_back(q);
      }
    pts = next;
  }
  return pts;
}

/// Checks a symbolic upset against a defining predicate on the whole grid.
inline ::testing::AssertionResult agrees_on_grid(
    const VassMdp& sys, const Upset& symbolic, long long bound,
    const std::function<bool(const Config&)>& predicate) {
  for (int q = 0; q < sys.num_states(); ++q) {
    for (const Vec& v : grid(sys.dimension(), bound)) {
      Config c{q, v};
      bool got = member(symbolic, c);
      bool want = predicate(c);
      if (got != want)
        return ::testing::AssertionFailure()
               << "mismatch at " << sys.name(q) << " " << vec_str(v) << ": symbolic=" << got
               << " brute=" << want;
    }
  }
  return ::testing::AssertionSuccess();
}

/// Canonical-form check: re-minimizing is a no-op and bases are antichains.
inline ::testing::AssertionResult canonical(const Upset& u) {
  for (int q = 0; q < u.num_states(); ++q) {
    const auto& b = u.basis(q);
    if (minimize(b) != b)
      return ::testing::AssertionFailure() << "basis of state " << q << " not canonical";
    for (size_t i = 0; i < b.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j)
        if (i != j && vec_leq(b[i], b[j]))
          return ::testing::AssertionFailure() << "basis of state " << q << " not an antichain";
  }
  return ::testing::AssertionSuccess();
}

struct RandomSpec {
  int dim = 1;
  int max_states = 4;
  int max_trans = 6;
  long long max_effect = 2;
  long long max_weight = 3;
  bool one_vass = true;  // force Player-P transitions to zero effect
};

inline VassMdp random_system(std::mt19937_64& rng, const RandomSpec& spec) {
  auto pick = [&](long long lo, long long hi) {
    return lo + static_cast<long long>(rng() % static_cast<uint64_t>(hi - lo + 1));
  };
  int n = static_cast<int>(pick(2, spec.max_states));
  std::vector<VassMdp::State> states;
  for (int i = 0; i < n; ++i)
    states.push_back({"q" + std::to_string(i), pick(0, 1) ? Owner::One : Owner::Prob});
  int m = static_cast<int>(pick(1, spec.max_trans));
  std::vector<Transition> trans;
  for (int j = 0; j < m; ++j) {
    Transition t;
    t.id = "t" + std::to_string(j);
    t.source = static_cast<int>(pick(0, n - 1));
    t.target = static_cast<int>(pick(0, n - 1));
    t.weight = pick(1, spec.max_weight);
    bool zero = spec.one_vass && states[static_cast<size_t>(t.source)].owner == Owner::Prob;
    for (int i = 0; i < spec.dim; ++i)
      t.effect.push_back(zero ? 0 : pick(-spec.max_effect, spec.max_effect));
    trans.push_back(std::move(t));
  }
  return VassMdp(spec.dim, std::move(states), std::move(trans));
}

inline Upset random_upset(std::mt19937_64& rng, const VassMdp& sys, long long max_gen,
                          int max_gens_per_state = 3) {
  Upset u = Upset::empty(sys);
  for (int q = 0; q < sys.num_states(); ++q) {
    int k = static_cast<int>(rng() % static_cast<uint64_t>(max_gens_per_state + 1));
    for (int i = 0; i < k; ++i) {
      Vec g;
      for (int d = 0; d < sys.dimension(); ++d)
        g.push_back(static_cast<long long>(rng() % static_cast<uint64_t>(max_gen + 1)));
      u.add(q, g);
    }
  }
  u.canonicalize();
  return u;
}

// --- memoryless-strategy enumeration oracle for tiny finite MDPs ------------

/// Exhaustive qualitative solver: enumerates Player-1 memoryless strategies
/// (qualitative reachability and Buechi admit memoryless optimal strategies
/// on finite MDPs) and analyzes the resulting chain exactly.
class EnumOracle {
 public:
  explicit EnumOracle(const FiniteMdp& m) : m_(m), out_(m.out()) {}

  bool solve(int from, Problem p) {
    std::vector<int> choice(m_.nodes.size(), -1);
    return search(0, choice, from, p);
  }

 private:
  bool search(size_t q, std::vector<int>& choice, int from, Problem p) {
    if (q == m_.nodes.size()) return wins(choice, from, p);
    if (m_.nodes[q].owner != Owner::One || out_[q].empty()) return search(q + 1, choice, from, p);
    for (int e : out_[q]) {
      choice[q] = e;
      if (search(q + 1, choice, from, p)) return true;
    }
    choice[q] = -1;
    return false;
  }

  // successors under a fixed strategy: the chosen edge at Player-1 nodes,
  // all edges at Player-P nodes; with absorb, targets have no successors
  // (what happens after the first target visit cannot change reachability)
  std::vector<int> succs(const std::vector<int>& choice, int q, bool absorb = false) const {
    std::vector<int> r;
    if (absorb && m_.targets.count(q)) return r;
    if (m_.nodes[static_cast<size_t>(q)].owner == Owner::One) {
      if (choice[static_cast<size_t>(q)] != -1)
        r.push_back(m_.edges[static_cast<size_t>(choice[static_cast<size_t>(q)])].dst);
    } else {
      for (int e : out_[static_cast<size_t>(q)])
        r.push_back(m_.edges[static_cast<size_t>(e)].dst);
    }
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
  }

  bool wins(const std::vector<int>& choice, int from, Problem p) const {
    const size_t n = m_.nodes.size();
    // reachable set under the fixed strategy
    std::vector<char> reach(n, 0);
    std::vector<int> stack{from};
    reach[static_cast<size_t>(from)] = 1;
    while (!stack.empty()) {
      int q = stack.back();
      stack.pop_back();
      for (int s : succs(choice, q))
        if (!reach[static_cast<size_t>(s)]) {
          reach[static_cast<size_t>(s)] = 1;
          stack.push_back(s);
        }
    }
    switch (p) {
      case Problem::SureReach:
        return sure_reach_win(choice, from);
      case Problem::AsReach:
      case Problem::LsReach:
        return as_reach_win(choice, from);
      case Problem::SureBuchi:
        return sure_buchi_win(choice, reach);
      case Problem::AsBuchi:
      case Problem::LsBuchi:
        return as_buchi_win(choice, reach);
    }
    return false;
  }

  // every maximal play visits a target: no non-target cycle and no
  // non-target deadlock reachable without passing a target first
  bool sure_reach_win(const std::vector<int>& choice, int from) const {
    if (m_.targets.count(from)) return true;
    std::vector<char> seen(m_.nodes.size(), 0), onstack(m_.nodes.size(), 0);
    return !avoids(choice, from, seen, onstack);
  }
  bool avoids(const std::vector<int>& choice, int q, std::vector<char>& seen,
              std::vector<char>& onstack) const {
    // search for a target-free cycle or deadlock from q over non-target nodes
    auto ss = succs(choice, q);
    if (ss.empty()) return true;  // deadlocked before any target
    seen[static_cast<size_t>(q)] = 1;
    onstack[static_cast<size_t>(q)] = 1;
    for (int s : ss) {
      if (m_.targets.count(s)) continue;
      if (onstack[static_cast<size_t>(s)]) return true;  // cycle
      if (!seen[static_cast<size_t>(s)] && avoids(choice, s, seen, onstack)) return true;
    }
    onstack[static_cast<size_t>(q)] = 0;
    return false;
  }

  // probability-1 reach: in the target-absorbing chain, every reachable
  // node can still reach a target (then every bottom SCC or deadlock of the
  // absorbing chain contains one)
  bool as_reach_win(const std::vector<int>& choice, int from) const {
    const size_t n = m_.nodes.size();
    std::vector<char> reach(n, 0);
    std::vector<int> stack{from};
    reach[static_cast<size_t>(from)] = 1;
    while (!stack.empty()) {
      int q = stack.back();
      stack.pop_back();
      for (int s : succs(choice, q, /*absorb=*/true))
        if (!reach[static_cast<size_t>(s)]) {
          reach[static_cast<size_t>(s)] = 1;
          stack.push_back(s);
        }
    }
    std::vector<char> can(n, 0);
    for (;;) {
      bool changed = false;
      for (size_t q = 0; q < n; ++q) {
        if (can[q]) continue;
        bool ok = m_.targets.count(static_cast<int>(q)) > 0;
        for (int s : succs(choice, static_cast<int>(q), /*absorb=*/true))
          if (can[static_cast<size_t>(s)]) ok = true;
        if (ok) {
          can[q] = 1;
          changed = true;
        }
      }
      if (!changed) break;
    }
    for (size_t q = 0; q < n; ++q)
      if (reach[q] && !can[q]) return false;
    return true;
  }

  // every play visits targets infinitely often: every reachable node has a
  // successor, and every cycle in the reachable graph passes a target
  bool sure_buchi_win(const std::vector<int>& choice, const std::vector<char>& reach) const {
    const size_t n = m_.nodes.size();
    for (size_t q = 0; q < n; ++q)
      if (reach[q] && succs(choice, static_cast<int>(q)).empty()) return false;
    // cycle over non-target reachable nodes?
    std::vector<char> seen(n, 0), onstack(n, 0);
    std::function<bool(int)> cyc = [&](int q) -> bool {
      seen[static_cast<size_t>(q)] = 1;
      onstack[static_cast<size_t>(q)] = 1;
      for (int s : succs(choice, q)) {
        if (m_.targets.count(s)) continue;
        if (onstack[static_cast<size_t>(s)]) return true;
        if (!seen[static_cast<size_t>(s)] && cyc(s)) return true;
      }
      onstack[static_cast<size_t>(q)] = 0;
      return false;
    };
    for (size_t q = 0; q < n; ++q)
      if (reach[q] && !m_.targets.count(static_cast<int>(q)) && !seen[q] &&
          cyc(static_cast<int>(q)))
        return false;
    return true;
  }

  // probability-1 Buechi: no reachable deadlock, and from every reachable
  // node a target is reachable in the full graph (then every reachable
  // bottom SCC contains a target, which recurs almost surely)
  bool as_buchi_win(const std::vector<int>& choice, const std::vector<char>& reach) const {
    const size_t n = m_.nodes.size();
    for (size_t q = 0; q < n; ++q)
      if (reach[q] && succs(choice, static_cast<int>(q)).empty()) return false;
    std::vector<char> can(n, 0);
    for (;;) {
      bool changed = false;
      for (size_t q = 0; q < n; ++q) {
        if (can[q]) continue;
        bool ok = m_.targets.count(static_cast<int>(q)) > 0;
        for (int s : succs(choice, static_cast<int>(q)))
          if (can[static_cast<size_t>(s)]) ok = true;
        if (ok) {
          can[q] = 1;
          changed = true;
        }
      }
      if (!changed) break;
    }
    for (size_t q = 0; q < n; ++q)
      if (reach[q] && !can[q]) return false;
    return true;
  }

  const FiniteMdp& m_;
  std::vector<std::vector<int>> out_;
};

}  // namespace vassmdp::testing
