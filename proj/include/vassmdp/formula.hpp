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

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vassmdp/upset.hpp"

namespace vassmdp {

/// Formulas of L^sv_mu. Boxes only occur guarded by the zero-effect side's
/// state predicate (GuardedBox); diamonds may be restricted to one owner's
/// transitions, which is the same as conjoining the owner predicate.
/// Top/Bottom are convenience constants (an empty disjunction/conjunction).
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { Atom, Top, Bottom, Var, And, Or, Diamond, GuardedBox, Mu, Nu };

  Kind kind;
  std::string name;          // Atom: state name; Var/Mu/Nu: variable name
  TransFilter filter = TransFilter::Any;  // Diamond
  Owner side = Owner::Prob;  // GuardedBox
  FormulaPtr lhs, rhs;       // children (lhs only, for unary nodes and binders)
};

inline FormulaPtr f_atom(std::string state) {
  return std::make_shared<Formula>(Formula{Formula::Kind::Atom, std::move(state)});
}
inline FormulaPtr f_top() { return std::make_shared<Formula>(Formula{Formula::Kind::Top}); }
inline FormulaPtr f_bottom() { return std::make_shared<Formula>(Formula{Formula::Kind::Bottom}); }
inline FormulaPtr f_var(std::string x) {
  return std::make_shared<Formula>(Formula{Formula::Kind::Var, std::move(x)});
}
inline FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  Formula f{Formula::Kind::And};
  f.lhs = std::move(a);
  f.rhs = std::move(b);
  return std::make_shared<Formula>(std::move(f));
}
inline FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  Formula f{Formula::Kind::Or};
  f.lhs = std::move(a);
  f.rhs = std::move(b);
  return std::make_shared<Formula>(std::move(f));
}
inline FormulaPtr f_diamond(TransFilter filter, FormulaPtr a) {
  Formula f{Formula::Kind::Diamond};
  f.filter = filter;
  f.lhs = std::move(a);
  return std::make_shared<Formula>(std::move(f));
}
inline FormulaPtr f_box(Owner side, FormulaPtr a) {
  Formula f{Formula::Kind::GuardedBox};
  f.side = side;
  f.lhs = std::move(a);
  return std::make_shared<Formula>(std::move(f));
}
inline FormulaPtr f_mu(std::string x, FormulaPtr body) {
  Formula f{Formula::Kind::Mu, std::move(x)};
  f.lhs = std::move(body);
  return std::make_shared<Formula>(std::move(f));
}
inline FormulaPtr f_nu(std::string x, FormulaPtr body) {
  Formula f{Formula::Kind::Nu, std::move(x)};
  f.lhs = std::move(body);
  return std::make_shared<Formula>(std::move(f));
}

/// Disjunction over an explicit state set; empty sets become Bottom. State
/// predicates like "Q \ {q_F}" are expanded this way at construction time.
inline FormulaPtr f_states(const std::vector<std::string>& states) {
  if (states.empty()) return f_bottom();
  FormulaPtr acc = f_atom(states.front());
  for (size_t i = 1; i < states.size(); ++i) acc = f_or(std::move(acc), f_atom(states[i]));
  return acc;
}

inline FormulaPtr f_owner_states(const VassMdp& sys, Owner o) {
  std::vector<std::string> names;
  for (int q = 0; q < sys.num_states(); ++q)
    if (sys.owner(q) == o) names.push_back(sys.name(q));
  return f_states(names);
}

inline FormulaPtr f_not_states(const VassMdp& sys, const std::set<int>& excluded) {
  std::vector<std::string> names;
  for (int q = 0; q < sys.num_states(); ++q)
    if (!excluded.count(q)) names.push_back(sys.name(q));
  return f_states(names);
}

inline void collect_box_sides(const FormulaPtr& f, std::set<Owner>& sides) {
  if (!f) return;
  if (f->kind == Formula::Kind::GuardedBox) sides.insert(f->side);
  collect_box_sides(f->lhs, sides);
  collect_box_sides(f->rhs, sides);
}

inline void collect_free_vars(const FormulaPtr& f, std::set<std::string> bound,
                              std::set<std::string>& free) {
  if (!f) return;
  switch (f->kind) {
    case Formula::Kind::Var:
      if (!bound.count(f->name)) free.insert(f->name);
      return;
    case Formula::Kind::Mu:
    case Formula::Kind::Nu:
      bound.insert(f->name);
      collect_free_vars(f->lhs, bound, free);
      return;
    default:
      collect_free_vars(f->lhs, bound, free);
      collect_free_vars(f->rhs, bound, free);
      return;
  }
}

inline bool is_closed(const FormulaPtr& f) {
  std::set<std::string> free;
  collect_free_vars(f, {}, free);
  return free.empty();
}

/// Returns the single guard side of all boxes in f, checking that this side's
/// transitions all have zero effect in sys. Box-free formulas pass with no
/// side. Errors: MixedGuards when two sides occur, NotSingleSided when the
/// guard side can change counters.
inline std::optional<Owner> check_single_sided(const VassMdp& sys, const FormulaPtr& f) {
  std::set<Owner> sides;
  collect_box_sides(f, sides);
  if (sides.size() > 1)
    throw VassError(Err::MixedGuards, "formula guards boxes with both owners");
  if (sides.empty()) return std::nullopt;
  Owner side = *sides.begin();
  for (const Transition& t : sys.transitions())
    if (sys.owner(t.source) == side && !all_zero(t.effect))
      throw VassError(Err::NotSingleSided,
                      "box guard side has a counter-changing transition: " + t.id);
  return side;
}

}  // namespace vassmdp
