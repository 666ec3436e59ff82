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

#include "vassmdp/limitsure.hpp"
#include "vassmdp/mucalc.hpp"
#include "vassmdp/sim.hpp"
#include "vassmdp/textio.hpp"

namespace vassmdp {

/// Queries generalize the paper's single q_F to target state sets.
struct QuerySpec {
  Problem problem = Problem::SureReach;
  Config init;
  std::set<int> targets;
};

struct Verdict {
  Answer answer = Answer::Unknown;
  std::string justification;
  std::string reason;  // UNKNOWN cause / acceleration note
  std::vector<std::pair<std::string, std::string>> certificate;
};

struct CheckOptions {
  long nu_budget = 1000;
  bool accelerate = true;
  bool best_effort = false;
  long long cap = 6;
  long runs = 10000;
  long step_cap = 200;
  uint64_t seed = 1;
};

namespace detail {

inline std::string nu_trace_summary(const EvalTrace& t) {
  std::string out;
  for (const auto& [node, rec] : t.nu_records) {
    out += "nu: iterations=" + std::to_string(rec.iterations) + " mode=";
    switch (rec.mode) {
      case NuMode::Stabilized: out += "stabilized"; break;
      case NuMode::Accelerated: out += "accelerated"; break;
      case NuMode::BoundExhausted: out += "bound-exhausted"; break;
    }
    for (const auto& e : rec.events)
      out += " [omega-jump at iteration " + std::to_string(e.iteration) + ", stride " +
             std::to_string(e.stride) + ", dropped " + std::to_string(e.dropped_generators) +
             " generators]";
    out += "\n";
  }
  for (const auto& [node, stages] : t.mu_stages)
    out += "mu: stages=" + std::to_string(stages.size() - 1) + "\n";
  return out;
}

/// Turns a winning-set computation into a verdict. Membership in a verified
/// fixpoint is a sound YES; with budget-exhausted nus the set only
/// over-approximates, so only the non-membership side is answered.
inline Verdict from_winset(const VassMdp& work, const Config& init, const WinSetResult& w,
                           const std::string& justification) {
  Verdict v;
  v.justification = justification;
  bool m = member(w.set, init);
  bool positive_ans = w.negative ? !m : m;
  switch (w.trace.precision()) {
    case Precision::Exact:
      v.answer = positive_ans ? Answer::Yes : Answer::No;
      break;
    case Precision::AccelFixpoint:
      v.answer = positive_ans ? Answer::Yes : Answer::No;
      v.reason = "nu omega-acceleration used; final set is a verified fixpoint";
      break;
    case Precision::Overapprox:
      if (m) {
        v.answer = Answer::Unknown;
        v.reason = "nu budget exhausted; the computed set only over-approximates";
      } else {
        v.answer = w.negative ? Answer::Yes : Answer::No;
        v.reason = "answered from an over-approximation (sound for non-membership)";
      }
      break;
  }
  v.certificate.emplace_back(w.negative ? "losing-set basis (complement characterization)"
                                        : "winning-set basis",
                             serialize_upset(work, w.set));
  std::string tr = nu_trace_summary(w.trace);
  if (!tr.empty()) v.certificate.emplace_back("fixpoint trace", tr);
  if (!w.negative && v.answer == Answer::Yes && w.inner_mu) {
    RegionStrategy strat = extract_strategy(w.trace, w.inner_mu);
    auto [n, beta] = step_bound_and_beta(work, strat.stages());
    std::string rows;
    for (const auto& r : strat.table(work)) rows += r + "\n";
    rows += "step-bound N=" + std::to_string(n) + " beta=" + rat_str(beta) + "\n";
    v.certificate.emplace_back("strategy (state rank -> transition)", rows);
  }
  return v;
}

inline Verdict undecidable(const std::string& what) {
  Verdict v;
  v.answer = Answer::UndecidableClass;
  v.justification = what;
  return v;
}

}  // namespace detail

/// Table-1 dispatch. 1-VASS-MDPs (after deadlock removal) get all five
/// decidable problems and OPEN_PROBLEM for limit-sure Buechi; deadlock-free
/// P-VASS-MDPs get the two sure problems; everything else is answered
/// UNDECIDABLE_CLASS with the theorem that proves it, never routed to an
/// exact engine.
inline Verdict check(const VassMdp& sys, const Config& init, const std::set<int>& targets,
                     Problem problem, const CheckOptions& opts = {}) {
  if (targets.empty()) throw VassError(Err::Usage, "no target states given");
  if (!sys.valid_config(init))
    throw VassError(Err::Usage, "invalid initial configuration");
  Classification cls = classify(sys);
  EvalOptions eo{opts.nu_budget, opts.accelerate};

  if (cls.is_one_vass) {
    if (problem == Problem::LsBuchi) {
      Verdict v;
      v.answer = Answer::OpenProblem;
      v.justification =
          "limit-sure repeated reachability for 1-VASS-MDP is open (Table 1)";
      return v;
    }
    VassMdp work = remove_deadlocks(sys);
    switch (problem) {
      case Problem::SureReach:
        return detail::from_winset(work, init, v1_sure(work, targets, eo),
                                   "1-VASS-MDP sure reachability (Theorem 7, Lemma 17)");
      case Problem::AsReach:
        return detail::from_winset(work, init, v1_as(work, targets, eo),
                                   "1-VASS-MDP almost-sure reachability (Theorem 8, Lemma 10)");
      case Problem::SureBuchi:
        return detail::from_winset(
            work, init, w1_sure(work, targets, eo),
            "1-VASS-MDP sure repeated reachability (Theorem 7, Lemma 17)");
      case Problem::AsBuchi:
        return detail::from_winset(
            work, init, w1_as(work, targets, eo),
            "1-VASS-MDP almost-sure repeated reachability (Theorem 9, Lemma 11)");
      case Problem::LsReach: {
        LimitSureResult r = limit_sure_reach(work, init, targets);
        Verdict v;
        v.answer = r.yes ? Answer::Yes : Answer::No;
        v.justification =
            "1-VASS-MDP limit-sure reachability (Theorem 16, Lemmas 12 and 13)";
        std::string red;
        for (size_t i = 0; i < r.stages.size(); ++i) {
          const ReducedSystem& st = r.stages[i];
          red += "round " + std::to_string(i + 1) + ": dimension " +
                 std::to_string(st.sys.dimension()) + ", colors=" +
                 std::to_string(st.color_count) + ", nodes=" + std::to_string(st.trace.size()) +
                 ", states=" + std::to_string(st.sys.num_states()) + "\n";
        }
        red += "dimension-0 almost-sure reach: " + std::string(r.yes ? "yes" : "no") + "\n";
        v.certificate.emplace_back("reduction trace", red);
        if (!r.stages.empty())
          v.certificate.emplace_back("round 1 node labels",
                                     serialize_reduction_trace(r.stages.front()));
        return v;
      }
      default: break;
    }
  }

  if (cls.is_p_vass) {
    if (!cls.deadlock_free_all_configs)
      return detail::undecidable(
          "undecidable for P-VASS-MDPs with deadlocks (Theorem 3)");
    switch (problem) {
      case Problem::SureReach:
        return detail::from_winset(
            sys, init, vp_sure_complement(sys, targets, eo),
            "deadlock-free P-VASS-MDP sure reachability (Theorem 4, Lemma 3)");
      case Problem::SureBuchi:
        return detail::from_winset(
            sys, init, wp_sure_complement(sys, targets, eo),
            "deadlock-free P-VASS-MDP sure repeated reachability (Theorem 4, Lemma 3)");
      default:
        return detail::undecidable(
            "undecidable for deadlock-free P-VASS-MDPs (Theorem 15)");
    }
  }

  Verdict v = detail::undecidable("undecidable for general VASS-MDPs (Theorem 1)");
  if (opts.best_effort) {
    try {
      bool ans = bounded_oracle(sys, init, targets, opts.cap, problem);
      v.certificate.emplace_back(
          "heuristic: bounded oracle (cap " + std::to_string(opts.cap) + ")",
          std::string(ans ? "YES" : "NO") + " on the cap-closed fragment\n");
    } catch (const VassError& e) {
      if (e.code != Err::CapNotClosed) throw;
      Rat freq = estimate_reach(sys, init, StrategyHandle::uniform(), targets, opts.runs,
                                opts.step_cap, opts.seed);
      v.certificate.emplace_back(
          "heuristic: simulation",
          "target visit frequency " + rat_str(freq) + " (runs " + std::to_string(opts.runs) +
              ", cap " + std::to_string(opts.step_cap) + ", seed " +
              std::to_string(opts.seed) + ", uniform strategy)\n");
    }
  }
  return v;
}

inline Verdict check(const VassMdp& sys, const QuerySpec& q, const CheckOptions& opts = {}) {
  return check(sys, q.init, q.targets, q.problem, opts);
}

/// Classification summary line, `<subclasses> deadlock-free=<bool>`.
inline std::string classify_line(const Classification& c) {
  std::string names;
  if (c.is_one_vass) names += "1-vass";
  if (c.is_p_vass) names += std::string(names.empty() ? "" : " ") + "p-vass";
  if (names.empty()) names = "general";
  return names + " deadlock-free=" + (c.deadlock_free_all_configs ? "true" : "false");
}

inline std::string render_verdict(const Verdict& v, Problem problem) {
  std::string out;
  out += "problem: " + problem_str(problem) + "\n";
  out += "verdict: " + answer_str(v.answer) + "\n";
  out += "justification: " + v.justification + "\n";
  if (!v.reason.empty()) out += "note: " + v.reason + "\n";
  for (const auto& [title, body] : v.certificate) {
    out += "-- " + title + "\n";
    out += body;
  }
  return out;
}

}  // namespace vassmdp
