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

#include "vassmdp/formula.hpp"
#include "vassmdp/upset.hpp"

namespace vassmdp {

using Env = std::map<std::string, Upset>;

enum class NuMode { Stabilized, Accelerated, BoundExhausted };

/// How trustworthy an evaluation result is.
///  - Exact: every fixpoint stabilized syntactically; the set is the exact
///    semantics.
///  - AccelFixpoint: every nu stabilized, at least one via an omega-jump; the
///    final sets are verified fixpoints (L = f(L)).
///  - Overapprox: some nu ran out of budget and contributed its last
///    pure-Kleene iterate, so the result contains the exact semantics.
enum class Precision { Exact, AccelFixpoint, Overapprox };

struct AccelEvent {
  long iteration = 0;  // body evaluations done when the jump fired
  int stride = 1;
  int dropped_generators = 0;  // diverging family members removed by the jump
};

struct NuRecord {
  long iterations = 0;
  NuMode mode = NuMode::Stabilized;
  std::vector<AccelEvent> events;
};

struct EvalTrace {
  bool any_accel = false;
  bool any_exhausted = false;
  /// Kleene stages [empty = F_0, F_1, ..., F_N] of each Mu node's most
  /// recent evaluation (for nested fixpoints that is the final outer
  /// iteration, the one Lemma-style strategies are built from).
  std::map<const Formula*, std::vector<Upset>> mu_stages;
  std::map<const Formula*, NuRecord> nu_records;
  /// Last pure-Kleene iterate of each Nu node (a sound over-approximation
  /// of its greatest fixpoint even when acceleration later misfired).
  std::map<const Formula*, Upset> nu_genuine;

  Precision precision() const {
    if (any_exhausted) return Precision::Overapprox;
    if (any_accel) return Precision::AccelFixpoint;
    return Precision::Exact;
  }
};

struct EvalOptions {
  long nu_budget = 1000;  // per nu node, per evaluation
  bool accelerate = true;
};

namespace detail {

/// Lockstep pattern over the last (shifts*stride + 1) iterates: per state,
/// generators split into a part present in every window iterate and moving
/// families that advance by a constant nonzero nonnegative vector between
/// consecutive subsequence elements. When it holds, the limit of the chain
/// over the subsequence is the upward closure of the stable part.
inline bool detect_lockstep(const std::vector<Upset>& history, int stride, int shifts,
                            Upset& out_limit, int& out_dropped) {
  const size_t need = static_cast<size_t>(shifts * stride + 1);
  if (history.size() < need) return false;
  std::vector<const Upset*> sub;
  for (int j = shifts; j >= 0; --j)
    sub.push_back(&history[history.size() - 1 - static_cast<size_t>(j * stride)]);

  const Upset& newest = *sub.back();
  Upset limit(newest.dimension(), newest.num_states());
  int dropped = 0;
  bool any_moving = false;
  for (int q = 0; q < newest.num_states(); ++q) {
    // stable part: generators present (as exact vectors) in every window element
    std::vector<Vec> stable;
    for (const Vec& g : sub[0]->basis(q)) {
      bool everywhere = true;
      for (size_t j = 1; j < sub.size() && everywhere; ++j) {
        const auto& b = sub[j]->basis(q);
        everywhere = std::binary_search(b.begin(), b.end(), g);
      }
      if (everywhere) stable.push_back(g);
    }
    std::vector<std::vector<Vec>> moving(sub.size());
    for (size_t j = 0; j < sub.size(); ++j)
      for (const Vec& g : sub[j]->basis(q))
        if (!std::binary_search(stable.begin(), stable.end(), g)) moving[j].push_back(g);
    const size_t fam = moving[0].size();
    for (size_t j = 1; j < sub.size(); ++j)
      if (moving[j].size() != fam) return false;
    // lex order within each iterate pairs up the families; the deltas must be
    // constant along the window, nonnegative and nonzero
    for (size_t l = 0; l < fam; ++l) {
      Vec delta;
      for (size_t j = 0; j + 1 < sub.size(); ++j) {
        Vec d(moving[j][l].size());
        for (size_t i = 0; i < d.size(); ++i) d[i] = moving[j + 1][l][i] - moving[j][l][i];
        if (j == 0)
          delta = d;
        else if (d != delta)
          return false;
      }
      bool nonneg = true, nonzero = false;
      for (long long x : delta) {
        if (x < 0) nonneg = false;
        if (x != 0) nonzero = true;
      }
      if (!nonneg || !nonzero) return false;
    }
    if (fam > 0) any_moving = true;
    dropped += static_cast<int>(fam);
    for (Vec& g : stable) limit.add(q, g);
  }
  if (!any_moving) return false;  // would mean the chain already stabilized
  limit.canonicalize();
  out_limit = std::move(limit);
  out_dropped = dropped;
  return true;
}

}  // namespace detail

/// Evaluates L^sv_mu formulas over the configuration space of a single-sided
/// VASS-MDP, symbolically on upward-closed sets. Mu is exact Kleene
/// iteration (terminates by wqo). Nu descends from the full space with three
/// tiers: syntactic stabilization, omega-acceleration on a verified lockstep
/// shift pattern (the chain may continue past omega, so iteration resumes
/// from the jump target), and a per-node iteration budget.
class Evaluator {
 public:
  Evaluator(const VassMdp& sys, EvalOptions options = {})
      : sys_(sys), opt_(options) {}

  Upset eval(const FormulaPtr& f, Env env = {}) {
    check_single_sided(sys_, f);
    return eval_node(f, env);
  }

  const EvalTrace& trace() const { return trace_; }
  EvalTrace take_trace() { return std::move(trace_); }

 private:
  Upset eval_node(const FormulaPtr& f, Env& env) {
    switch (f->kind) {
      case Formula::Kind::Atom: {
        Upset u = Upset::empty(sys_);
        u.add(sys_.state_index(f->name), Vec(static_cast<size_t>(sys_.dimension()), 0));
        return u;
      }
      case Formula::Kind::Top:
        return Upset::full(sys_);
      case Formula::Kind::Bottom:
        return Upset::empty(sys_);
      case Formula::Kind::Var: {
        auto it = env.find(f->name);
        if (it == env.end())
          throw VassError(Err::Parse, "unbound variable " + f->name);
        return it->second;
      }
      case Formula::Kind::And:
        return intersect(eval_node(f->lhs, env), eval_node(f->rhs, env));
      case Formula::Kind::Or:
        return union_(eval_node(f->lhs, env), eval_node(f->rhs, env));
      case Formula::Kind::Diamond:
        return pre_exists(sys_, f->filter, eval_node(f->lhs, env));
      case Formula::Kind::GuardedBox:
        return pre_forall_zero(sys_, f->side, eval_node(f->lhs, env));
      case Formula::Kind::Mu:
        return eval_mu(f, env);
      case Formula::Kind::Nu:
        return eval_nu(f, env);
    }
    throw std::logic_error("unreachable formula kind");
  }

  Upset eval_mu(const FormulaPtr& f, Env& env) {
    std::vector<Upset> stages;
    Upset cur = Upset::empty(sys_);
    stages.push_back(cur);
    auto saved = env.find(f->name) != env.end()
                     ? std::optional<Upset>(env[f->name])
                     : std::nullopt;
    for (;;) {
      env[f->name] = cur;
      Upset next = eval_node(f->lhs, env);
      if (!is_subset(cur, next))
        throw std::logic_error("mu iteration not ascending (non-monotone body?)");
      if (next == cur) break;
      cur = std::move(next);
      stages.push_back(cur);
    }
    if (saved)
      env[f->name] = *saved;
    else
      env.erase(f->name);
    trace_.mu_stages[f.get()] = std::move(stages);
    return cur;
  }

  Upset eval_nu(const FormulaPtr& f, Env& env) {
    NuRecord rec;
    Upset cur = Upset::full(sys_);
    Upset genuine_last = cur;
    bool genuine = true;
    bool accel_enabled = opt_.accelerate;
    const int max_effect = max_abs_effect();
    const int shifts = 3 + max_effect;
    std::vector<Upset> history{cur};
    const size_t history_cap = static_cast<size_t>((shifts * 3 + 1) + 2);

    auto saved = env.find(f->name) != env.end()
                     ? std::optional<Upset>(env[f->name])
                     : std::nullopt;
    Upset result;
    for (;;) {
      if (rec.iterations >= opt_.nu_budget) {
        rec.mode = NuMode::BoundExhausted;
        trace_.any_exhausted = true;
        result = genuine_last;
        break;
      }
      env[f->name] = cur;
      Upset next = eval_node(f->lhs, env);
      rec.iterations++;
      if (next == cur) {
        rec.mode = rec.events.empty() ? NuMode::Stabilized : NuMode::Accelerated;
        if (!rec.events.empty()) trace_.any_accel = true;
        result = cur;
        break;
      }
      if (!is_subset(next, cur)) {
        if (genuine)
          throw std::logic_error("nu iteration not descending (non-monotone body?)");
        // ascent after a jump: the detected pattern was not genuine, roll
        // back to the sound iterate and finish without acceleration
        cur = genuine_last;
        accel_enabled = false;
        genuine = true;
        history.assign(1, cur);
        continue;
      }
      cur = std::move(next);
      if (genuine) genuine_last = cur;
      history.push_back(cur);
      if (history.size() > history_cap) history.erase(history.begin());

      if (accel_enabled) {
        for (int stride = 1; stride <= 3; ++stride) {
          Upset limit;
          int dropped = 0;
          if (detail::detect_lockstep(history, stride, shifts, limit, dropped)) {
            rec.events.push_back(AccelEvent{rec.iterations, stride, dropped});
            genuine = false;
            cur = std::move(limit);
            history.assign(1, cur);
            break;
          }
        }
      }
    }
    if (saved)
      env[f->name] = *saved;
    else
      env.erase(f->name);
    trace_.nu_genuine[f.get()] = genuine_last;
    trace_.nu_records[f.get()] = std::move(rec);
    return result;
  }

  int max_abs_effect() const {
    long long m = 0;
    for (const Transition& t : sys_.transitions())
      for (long long x : t.effect) m = std::max(m, x < 0 ? -x : x);
    return static_cast<int>(m);
  }

  const VassMdp& sys_;
  EvalOptions opt_;
  EvalTrace trace_;
};

// --- the paper's named winning-set formulas --------------------------------

/// Result of computing one of the characterized sets. `negative` marks the
/// two P-VASS complements, where the query answer is YES iff the initial
/// configuration is NOT a member.
struct WinSetResult {
  Upset set;
  EvalTrace trace;
  FormulaPtr formula;
  const Formula* inner_mu = nullptr;  // stage source for strategy extraction
  bool negative = false;
};

namespace detail {

inline FormulaPtr inv_pre_formula(FormulaPtr x, FormulaPtr y) {
  return f_or(f_diamond(TransFilter::One, f_and(x, y)),
              f_and(f_diamond(TransFilter::Prob, y), f_box(Owner::Prob, x)));
}

inline FormulaPtr targets_formula(const VassMdp& sys, const std::set<int>& targets) {
  std::vector<std::string> names;
  for (int q : targets) names.push_back(sys.name(q));
  return f_states(names);
}

inline void require_one_vass(const VassMdp& sys) {
  if (!classify(sys).is_one_vass)
    throw VassError(Err::WrongSubclass, "requires a 1-VASS-MDP");
}

inline void require_df_p_vass(const VassMdp& sys) {
  Classification c = classify(sys);
  if (!c.is_p_vass) throw VassError(Err::WrongSubclass, "requires a P-VASS-MDP");
  if (!c.deadlock_free_all_configs)
    throw VassError(Err::NotDeadlockFree, "requires a deadlock-free P-VASS-MDP");
}

inline WinSetResult run(const VassMdp& sys, FormulaPtr f, const Formula* inner_mu,
                        bool negative, const EvalOptions& opt) {
  Evaluator ev(sys, opt);
  WinSetResult r;
  r.set = ev.eval(f);
  r.trace = ev.take_trace();
  r.formula = std::move(f);
  r.inner_mu = inner_mu;
  r.negative = negative;
  return r;
}

}  // namespace detail

/// V^1_S: sure reachability winning set of a (deadlock-free) 1-VASS-MDP,
/// mu X. q_F or (Q_1 and <>X) or (Q_P and []X).
inline WinSetResult v1_sure(const VassMdp& sys, const std::set<int>& targets,
                            EvalOptions opt = {}) {
  detail::require_one_vass(sys);
  FormulaPtr tgt = detail::targets_formula(sys, targets);
  FormulaPtr body = f_or(tgt, f_or(f_diamond(TransFilter::One, f_var("X")),
                                   f_box(Owner::Prob, f_var("X"))));
  FormulaPtr f = f_mu("X", body);
  return detail::run(sys, f, f.get(), false, opt);
}

/// W^1_S: sure repeated reachability winning set of a 1-VASS-MDP.
inline WinSetResult w1_sure(const VassMdp& sys, const std::set<int>& targets,
                            EvalOptions opt = {}) {
  detail::require_one_vass(sys);
  FormulaPtr tgt = detail::targets_formula(sys, targets);
  FormulaPtr not_tgt = f_not_states(sys, targets);
  FormulaPtr q1 = f_owner_states(sys, Owner::One);
  FormulaPtr qp = f_owner_states(sys, Owner::Prob);
  FormulaPtr reach = f_or(tgt, f_or(f_box(Owner::Prob, f_var("X")),
                                    f_diamond(TransFilter::One, f_var("X"))));
  FormulaPtr reenter_p = f_or(not_tgt, f_or(q1, f_box(Owner::Prob, f_var("Y"))));
  FormulaPtr reenter_1 = f_or(not_tgt, f_or(qp, f_diamond(TransFilter::Any, f_var("Y"))));
  FormulaPtr mu = f_mu("X", f_and(reach, f_and(reenter_p, reenter_1)));
  FormulaPtr f = f_nu("Y", mu);
  return detail::run(sys, f, mu.get(), false, opt);
}

/// V^1_AS: almost-sure reachability winning set of a 1-VASS-MDP,
/// nu X. mu Y. (q_F or InvPre(X,Y)).
inline WinSetResult v1_as(const VassMdp& sys, const std::set<int>& targets,
                          EvalOptions opt = {}) {
  detail::require_one_vass(sys);
  FormulaPtr tgt = detail::targets_formula(sys, targets);
  FormulaPtr mu = f_mu("Y", f_or(tgt, detail::inv_pre_formula(f_var("X"), f_var("Y"))));
  FormulaPtr f = f_nu("X", mu);
  return detail::run(sys, f, mu.get(), false, opt);
}

/// W^1_AS: almost-sure repeated reachability winning set of a 1-VASS-MDP,
/// nu X. InvPre(X, mu Y.(q_F or InvPre(X,Y))).
inline WinSetResult w1_as(const VassMdp& sys, const std::set<int>& targets,
                          EvalOptions opt = {}) {
  detail::require_one_vass(sys);
  FormulaPtr tgt = detail::targets_formula(sys, targets);
  FormulaPtr mu = f_mu("Y", f_or(tgt, detail::inv_pre_formula(f_var("X"), f_var("Y"))));
  FormulaPtr f = f_nu("X", detail::inv_pre_formula(f_var("X"), mu));
  return detail::run(sys, f, mu.get(), false, opt);
}

/// V^P_S: configurations of a deadlock-free P-VASS-MDP from which Player 1
/// can NOT surely reach the target. Query answer is YES iff not a member.
inline WinSetResult vp_sure_complement(const VassMdp& sys, const std::set<int>& targets,
                                       EvalOptions opt = {}) {
  detail::require_df_p_vass(sys);
  FormulaPtr not_tgt = f_not_states(sys, targets);
  FormulaPtr q1 = f_owner_states(sys, Owner::One);
  FormulaPtr qp = f_owner_states(sys, Owner::Prob);
  FormulaPtr body = f_and(not_tgt, f_and(f_or(q1, f_diamond(TransFilter::Any, f_var("X"))),
                                         f_or(qp, f_box(Owner::One, f_var("X")))));
  FormulaPtr f = f_nu("X", body);
  return detail::run(sys, f, nullptr, true, opt);
}

/// W^P_S: configurations of a deadlock-free P-VASS-MDP from which Player 1
/// can NOT surely satisfy the Buechi objective. YES iff not a member.
inline WinSetResult wp_sure_complement(const VassMdp& sys, const std::set<int>& targets,
                                       EvalOptions opt = {}) {
  detail::require_df_p_vass(sys);
  FormulaPtr tgt = detail::targets_formula(sys, targets);
  FormulaPtr not_tgt = f_not_states(sys, targets);
  FormulaPtr q1 = f_owner_states(sys, Owner::One);
  FormulaPtr qp = f_owner_states(sys, Owner::Prob);
  FormulaPtr avoid = f_and(not_tgt, f_and(f_or(q1, f_diamond(TransFilter::Any, f_var("X"))),
                                          f_or(qp, f_box(Owner::One, f_var("X")))));
  FormulaPtr at_tgt_p = f_and(tgt, f_diamond(TransFilter::Prob, f_var("Y")));
  FormulaPtr at_tgt_1 = f_and(tgt, f_box(Owner::One, f_var("Y")));
  FormulaPtr f = f_mu("Y", f_nu("X", f_or(avoid, f_or(at_tgt_p, at_tgt_1))));
  return detail::run(sys, f, nullptr, true, opt);
}

// --- strategies from mu stages ---------------------------------------------

/// Memoryless region strategy built from the stages F_0 c F_1 c ... c F_N of
/// a mu evaluation. From a configuration whose least stage is F_j (j >= 2)
/// it picks a transition into F_{j-1}; inside F_1 (the target region) and
/// outside F_N any enabled transition goes.
class RegionStrategy {
 public:
  RegionStrategy() = default;
  explicit RegionStrategy(std::vector<Upset> stages) : stages_(std::move(stages)) {}

  const std::vector<Upset>& stages() const { return stages_; }

  /// Least j >= 1 with c in F_j, or 0 when c is outside the fixpoint.
  int rank(const Config& c) const {
    for (size_t j = 1; j < stages_.size(); ++j)
      if (member(stages_[j], c)) return static_cast<int>(j);
    return 0;
  }

  /// Transition index to play at c, or -1 at deadlocks.
  int decide(const VassMdp& sys, const Config& c) const {
    int j = rank(c);
    if (j >= 2) {
      for (int ti : sys.out(c.state)) {
        const Transition& t = sys.transitions()[static_cast<size_t>(ti)];
        if (is_enabled(sys, c, t) && member(stages_[static_cast<size_t>(j - 1)], step(sys, c, t)))
          return ti;
      }
      throw VassError(Err::NoWitness,
                      "no stage-decreasing transition at " + sys.name(c.state) +
                          " rank " + std::to_string(j));
    }
    for (int ti : sys.out(c.state))
      if (is_enabled(sys, c, sys.transitions()[static_cast<size_t>(ti)])) return ti;
    return -1;
  }

  /// Certificate rows `state rank -> transition-id`, one per (state, rank)
  /// pair realized by a Player-1 stage generator, chosen at the lex-least
  /// new generator of that stage.
  std::vector<std::string> table(const VassMdp& sys) const {
    std::vector<std::string> rows;
    for (size_t j = 2; j < stages_.size(); ++j) {
      for (int q = 0; q < sys.num_states(); ++q) {
        if (sys.owner(q) != Owner::One) continue;
        for (const Vec& g : stages_[j].basis(q)) {
          Config c{q, g};
          if (member(stages_[j - 1], c)) continue;
          int ti = decide(sys, c);
          rows.push_back(sys.name(q) + " " + std::to_string(j) + " -> " +
                         sys.transitions()[static_cast<size_t>(ti)].id);
          break;  // lex-least generator only: bases are sorted
        }
      }
    }
    return rows;
  }

 private:
  std::vector<Upset> stages_;
};

/// Builds the region strategy from the recorded stages of `mu_node`.
inline RegionStrategy extract_strategy(const EvalTrace& trace, const Formula* mu_node) {
  auto it = trace.mu_stages.find(mu_node);
  if (it == trace.mu_stages.end())
    throw VassError(Err::NoWitness, "trace has no mu stages for strategy extraction");
  return RegionStrategy(it->second);
}

/// Lemma-style diagnostic bound: N = number of mu stages, beta = min over
/// Player-P states q of Min_q / (L_q * W_q). Following the region strategy,
/// the target is reached within N steps from any member with probability at
/// least beta^N.
inline std::pair<long, Rat> step_bound_and_beta(const VassMdp& sys,
                                                const std::vector<Upset>& stages) {
  long n = static_cast<long>(stages.size()) - 1;
  Rat beta(1);
  bool any = false;
  for (int q = 0; q < sys.num_states(); ++q) {
    if (sys.owner(q) != Owner::Prob || sys.out(q).empty()) continue;
    long long lq = static_cast<long long>(sys.out(q).size());
    long long wq = 0, minq = 0;
    for (int ti : sys.out(q)) {
      long long w = sys.transitions()[static_cast<size_t>(ti)].weight;
      wq += w;
      minq = (minq == 0) ? w : std::min(minq, w);
    }
    Rat contrib(minq, lq * wq);
    if (!any || contrib < beta) beta = contrib;
    any = true;
  }
  return {n, beta};
}

}  // namespace vassmdp
