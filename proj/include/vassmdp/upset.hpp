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
#include <vector>

#include "vassmdp/model.hpp"

namespace vassmdp {

/// Minimize a generator list: drop every vector dominated by another kept
/// one, deduplicate equal vectors, and sort lexicographically. The result is
/// the canonical antichain of minimal elements.
inline std::vector<Vec> minimize(std::vector<Vec> gens) {
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  std::vector<Vec> out;
  for (size_t i = 0; i < gens.size(); ++i) {
    bool dominated = false;
    for (size_t j = 0; j < gens.size() && !dominated; ++j)
      if (j != i && (vec_leq(gens[j], gens[i]) && gens[j] != gens[i]))
        dominated = true;
    if (!dominated) out.push_back(gens[i]);
  }
  return out;  // still sorted: minimize preserves the lex order
}

/// An upward-closed subset of Q x N^d, represented per control state by the
/// finite antichain of its minimal counter vectors. (q,v) is a member iff
/// some generator b of q satisfies b <= v. Canonical form: every per-state
/// basis is a lex-sorted antichain.
class Upset {
 public:
  Upset() = default;
  Upset(int dimension, int num_states)
      : dim_(dimension), basis_(static_cast<size_t>(num_states)) {}

  static Upset empty(const VassMdp& sys) { return Upset(sys.dimension(), sys.num_states()); }

  /// The whole configuration space: generator 0 at every state.
  static Upset full(const VassMdp& sys) {
    Upset u(sys.dimension(), sys.num_states());
    Vec zero(static_cast<size_t>(sys.dimension()), 0);
    for (auto& b : u.basis_) b.push_back(zero);
    return u;
  }

  int dimension() const { return dim_; }
  int num_states() const { return static_cast<int>(basis_.size()); }
  const std::vector<Vec>& basis(int state) const { return basis_.at(static_cast<size_t>(state)); }

  void add(int state, const Vec& gen) {
    if (static_cast<int>(gen.size()) != dim_)
      throw VassError(Err::DimensionMismatch, "generator length mismatch");
    basis_.at(static_cast<size_t>(state)).push_back(gen);
  }

  void canonicalize() {
    for (auto& b : basis_) b = minimize(std::move(b));
  }

  bool is_empty() const {
    for (const auto& b : basis_)
      if (!b.empty()) return false;
    return true;
  }

  bool operator==(const Upset& o) const = default;

 private:
  int dim_ = 0;
  std::vector<std::vector<Vec>> basis_;
};

inline void check_dims(const Upset& a, const Upset& b) {
  if (a.dimension() != b.dimension() || a.num_states() != b.num_states())
    throw VassError(Err::DimensionMismatch, "upset dimension/state-count mismatch");
}

inline bool member(const Upset& s, const Config& c) {
  if (static_cast<int>(c.counters.size()) != s.dimension())
    throw VassError(Err::DimensionMismatch, "config dimension mismatch");
  for (const Vec& b : s.basis(c.state))
    if (vec_leq(b, c.counters)) return true;
  return false;
}

inline Upset union_(const Upset& a, const Upset& b) {
  check_dims(a, b);
  Upset r(a.dimension(), a.num_states());
  for (int q = 0; q < a.num_states(); ++q) {
    std::vector<Vec> gens = a.basis(q);
    gens.insert(gens.end(), b.basis(q).begin(), b.basis(q).end());
    for (Vec& g : minimize(std::move(gens))) r.add(q, g);
  }
  return r;
}

/// Intersection: per state, the componentwise maxima of cross-paired
/// generators, minimized.
inline Upset intersect(const Upset& a, const Upset& b) {
  check_dims(a, b);
  Upset r(a.dimension(), a.num_states());
  for (int q = 0; q < a.num_states(); ++q) {
    std::vector<Vec> gens;
    for (const Vec& x : a.basis(q))
      for (const Vec& y : b.basis(q)) gens.push_back(vec_max(x, y));
    for (Vec& g : minimize(std::move(gens))) r.add(q, g);
  }
  return r;
}

inline bool is_subset(const Upset& a, const Upset& b) {
  check_dims(a, b);
  for (int q = 0; q < a.num_states(); ++q)
    for (const Vec& g : a.basis(q))
      if (!member(b, Config{q, g})) return false;
  return true;
}

inline bool equals(const Upset& a, const Upset& b) {
  return is_subset(a, b) && is_subset(b, a);
}

/// Which transitions a predecessor operator ranges over.
enum class TransFilter { Any, One, Prob };

inline bool filter_matches(const VassMdp& sys, const Transition& t, TransFilter f) {
  switch (f) {
    case TransFilter::Any: return true;
    case TransFilter::One: return sys.owner(t.source) == Owner::One;
    case TransFilter::Prob: return sys.owner(t.source) == Owner::Prob;
  }
  return false;
}

/// Existential predecessor: (q,v) is in the result iff some transition t of
/// the given set is enabled at (q,v) and leads into u. Generators are
/// max(0, b - effect); since b >= 0 this implies enabledness.
inline Upset pre_exists(const VassMdp& sys, TransFilter filter, const Upset& u) {
  Upset r(u.dimension(), u.num_states());
  for (const Transition& t : sys.transitions()) {
    if (!filter_matches(sys, t, filter)) continue;
    for (const Vec& b : u.basis(t.target)) r.add(t.source, vec_sub_clamp(b, t.effect));
  }
  r.canonicalize();
  return r;
}

/// Same, over an explicit transition subset (by index into sys.transitions()).
inline Upset pre_exists(const VassMdp& sys, const std::vector<int>& trans, const Upset& u) {
  Upset r(u.dimension(), u.num_states());
  for (int j : trans) {
    const Transition& t = sys.transitions().at(static_cast<size_t>(j));
    for (const Vec& b : u.basis(t.target)) r.add(t.source, vec_sub_clamp(b, t.effect));
  }
  r.canonicalize();
  return r;
}

/// Universal predecessor restricted to the zero-effect side: contains (q,v)
/// for side-owned q iff every outgoing transition of q stays in u. Deadlocked
/// side-owned states are included vacuously (box semantics). Only legal when
/// all side transitions have zero effect.
inline Upset pre_forall_zero(const VassMdp& sys, Owner side, const Upset& u) {
  Upset r(u.dimension(), u.num_states());
  Vec zero(static_cast<size_t>(u.dimension()), 0);
  for (int q = 0; q < sys.num_states(); ++q) {
    if (sys.owner(q) != side) continue;
    std::vector<int> succs;
    for (int j : sys.out(q)) {
      const Transition& t = sys.transitions()[static_cast<size_t>(j)];
      if (!all_zero(t.effect))
        throw VassError(Err::NotZeroEffectSide,
                        "transition " + t.id + " from the box side has nonzero effect");
      succs.push_back(t.target);
    }
    std::sort(succs.begin(), succs.end());
    succs.erase(std::unique(succs.begin(), succs.end()), succs.end());
    std::vector<Vec> acc{zero};  // vacuous box at deadlocked states
    for (int s : succs) {
      std::vector<Vec> next;
      for (const Vec& g : acc)
        for (const Vec& b : u.basis(s)) next.push_back(vec_max(g, b));
      acc = minimize(std::move(next));
      if (acc.empty()) break;
    }
    for (Vec& g : acc) r.add(q, g);
  }
  r.canonicalize();
  return r;
}

/// InvPre(X,Y) = (Q_1 and <>(X and Y)) or (<>Y and Q_P and []X), the
/// one-step operator of the almost-sure characterizations. Requires a
/// 1-VASS-MDP (the box ranges over the Player-P side).
inline Upset inv_pre(const VassMdp& sys, const Upset& x, const Upset& y) {
  if (!classify(sys).is_one_vass)
    throw VassError(Err::NotOneVass, "inv_pre requires a 1-VASS-MDP");
  check_dims(x, y);
  Upset one_part = pre_exists(sys, TransFilter::One, intersect(x, y));
  Upset prob_part = intersect(pre_exists(sys, TransFilter::Prob, y),
                              pre_forall_zero(sys, Owner::Prob, x));
  return union_(one_part, prob_part);
}

}  // namespace vassmdp
