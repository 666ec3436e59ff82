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

#include "vassmdp/finitemdp.hpp"
#include "vassmdp/model.hpp"

namespace vassmdp {

/// Extended counters over N u {*}: * absorbs addition and subtraction and is
/// above every natural. Encoded as -1 (counters are nonnegative).
constexpr long long STAR = -1;

inline bool ext_eq(long long a, long long b) { return a == b; }
inline bool ext_lt(long long a, long long b) { return a != STAR && (b == STAR || a < b); }

/// c1 < c2 in the strict domination order: same state, strictly larger on a
/// nonempty index set I, equal elsewhere (* compares equal to *). Returns I
/// (0-based) when it holds.
inline std::optional<std::vector<int>> strictly_dominates(
    const std::string& state1, const Vec& v1, const std::string& state2, const Vec& v2) {
  if (state1 != state2 || v1.size() != v2.size()) return std::nullopt;
  std::vector<int> inc;
  for (size_t i = 0; i < v1.size(); ++i) {
    if (ext_lt(v1[i], v2[i]))
      inc.push_back(static_cast<int>(i));
    else if (!ext_eq(v1[i], v2[i]))
      return std::nullopt;
  }
  if (inc.empty()) return std::nullopt;
  return inc;
}

inline Vec drop_component(const Vec& v, int k) {
  Vec r;
  r.reserve(v.size() - 1);
  for (size_t i = 0; i < v.size(); ++i)
    if (static_cast<int>(i) != k) r.push_back(v[i]);
  return r;
}

inline std::string colored_name(const std::string& base, int color) {
  return base + "@" + std::to_string(color);
}

namespace detail {

struct Fragment {
  std::vector<VassMdp::State> states;
  struct T {
    std::string id, src, dst;
    Vec effect;
    long long weight;
  };
  std::vector<T> trans;
};

/// Proj_k(S, d, i): color-i copies of all states, transitions with component
/// k removed, weights of transitions that collapse under the projection
/// summed up. Ownership carries over.
inline Fragment colored_projection_fragment(const VassMdp& sys, int k, int color) {
  if (k < 0 || k >= sys.dimension())
    throw VassError(Err::DimensionMismatch, "projection index out of range");
  Fragment f;
  for (const auto& s : sys.states()) f.states.push_back({colored_name(s.name, color), s.owner});
  std::map<std::tuple<int, Vec, int>, size_t> seen;  // (src, effect', dst) -> trans index
  for (const Transition& t : sys.transitions()) {
    Vec eff = drop_component(t.effect, k);
    auto key = std::make_tuple(t.source, eff, t.target);
    auto it = seen.find(key);
    if (it != seen.end()) {
      f.trans[it->second].weight += t.weight;
    } else {
      seen.emplace(key, f.trans.size());
      f.trans.push_back({colored_name(t.id, color), colored_name(sys.name(t.source), color),
                         colored_name(sys.name(t.target), color), std::move(eff), t.weight});
    }
  }
  return f;
}

}  // namespace detail

/// Standalone colored projection as a (d-1)-dimensional system.
inline VassMdp colored_projection(const VassMdp& sys, int k, int color) {
  detail::Fragment f = detail::colored_projection_fragment(sys, k, color);
  std::map<std::string, int> idx;
  for (size_t i = 0; i < f.states.size(); ++i) idx[f.states[i].name] = static_cast<int>(i);
  std::vector<Transition> ts;
  for (auto& t : f.trans) ts.push_back({t.id, idx.at(t.src), t.effect, idx.at(t.dst), t.weight});
  return VassMdp(sys.dimension() - 1, f.states, ts);
}

/// One node of the exploration tree / one colored entry. Vectors of colored
/// entries carry STAR at the removed component.
struct TraceNode {
  std::string node;         // state name in the reduced system
  std::string label_state;  // state(lambda): original or colored name
  Vec label;                // count(lambda)
  int parent = -1;          // index into the trace, -1 at the root and entries
  bool colored = false;
};

struct ReducedSystem {
  VassMdp sys;             // dimension d-1
  Config init;             // (root, 0-vector)
  std::set<int> targets;   // target nodes + colored target copies
  int color_count = 0;
  std::vector<TraceNode> trace;
};

/// One round of the Karp-Miller-style unfolding: explores the computation
/// tree breadth-first; a node strictly dominating a branch ancestor spawns a
/// colored copy of the system with the pumped counter removed, a successor
/// equal to a branch ancestor becomes a back edge. Edges of the uncolored
/// part carry zero effects (node identity encodes the configuration); the
/// bridge into a colored subsystem carries the entry configuration, so the
/// colored copy starts exactly at its projected initial configuration.
inline ReducedSystem reduce_once(const VassMdp& sys, const Config& init,
                                 const std::set<int>& targets, size_t safety_cap = 100000) {
  if (!classify(sys).is_one_vass)
    throw VassError(Err::WrongSubclass, "reduce_once requires a 1-VASS-MDP");
  if (sys.dimension() < 1)
    throw VassError(Err::Usage, "dimension 0 systems are already finite MDPs");
  if (!sys.valid_config(init))
    throw VassError(Err::DimensionMismatch, "invalid initial configuration");

  const int d = sys.dimension();
  const Vec zero(static_cast<size_t>(d - 1), 0);

  std::vector<VassMdp::State> out_states;
  std::vector<Transition> out_trans;
  std::map<std::string, int> out_idx;
  std::set<int> out_targets;
  auto add_state = [&](const std::string& name, Owner o) {
    out_idx[name] = static_cast<int>(out_states.size());
    out_states.push_back({name, o});
    return out_idx[name];
  };

  struct ExpNode {
    int orig_state;
    Vec label;
    int parent;  // index into `nodes`
    int out_state;
  };
  std::vector<ExpNode> nodes;
  std::vector<TraceNode> trace;
  std::deque<int> to_explore;
  long edge_seq = 0;
  int color = 0;

  auto new_node = [&](int orig_state, Vec label, int parent) {
    std::string name = "n" + std::to_string(nodes.size());
    int s = add_state(name, sys.owner(orig_state));
    nodes.push_back({orig_state, label, parent, s});
    trace.push_back({name, sys.name(orig_state), label, parent, false});
    if (targets.count(orig_state)) out_targets.insert(s);
    to_explore.push_back(static_cast<int>(nodes.size()) - 1);
    return static_cast<int>(nodes.size()) - 1;
  };

  new_node(init.state, init.counters, -1);

  while (!to_explore.empty()) {
    if (nodes.size() > safety_cap)
      throw VassError(Err::SafetyCap, "exploration exceeded the safety cap");
    int n = to_explore.front();
    to_explore.pop_front();
    const std::string n_state = sys.name(nodes[static_cast<size_t>(n)].orig_state);
    const Vec n_label = nodes[static_cast<size_t>(n)].label;

    // deepest strictly dominated branch ancestor, if any
    int dominated = -1;
    std::vector<int> inc_indexes;
    for (int a = nodes[static_cast<size_t>(n)].parent; a != -1;
         a = nodes[static_cast<size_t>(a)].parent) {
      auto I = strictly_dominates(sys.name(nodes[static_cast<size_t>(a)].orig_state),
                                  nodes[static_cast<size_t>(a)].label, n_state, n_label);
      if (I) {
        dominated = a;
        inc_indexes = *I;
        break;  // ancestors are walked deepest-first
      }
    }

    if (dominated != -1) {
      int k = inc_indexes.front();
      color += 1;
      detail::Fragment frag = detail::colored_projection_fragment(sys, k, color);
      for (const auto& s : frag.states) add_state(s.name, s.owner);
      for (const auto& t : frag.trans)
        out_trans.push_back({t.id, out_idx.at(t.src), t.effect, out_idx.at(t.dst), t.weight});
      for (int x : targets)
        out_targets.insert(out_idx.at(colored_name(sys.name(x), color)));
      const std::string entry = colored_name(n_state, color);
      out_trans.push_back({"b" + std::to_string(color),
                           nodes[static_cast<size_t>(n)].out_state, drop_component(n_label, k),
                           out_idx.at(entry), 1});
      Vec starred = n_label;
      starred[static_cast<size_t>(k)] = STAR;
      trace.push_back({entry, entry, starred, -1, true});
      continue;  // the branch stops here
    }

    for (int ti : sys.out(nodes[static_cast<size_t>(n)].orig_state)) {
      const Transition& t = sys.transitions()[static_cast<size_t>(ti)];
      Config cur{nodes[static_cast<size_t>(n)].orig_state, n_label};
      if (!is_enabled(sys, cur, t)) continue;
      Config succ = step(sys, cur, t);
      int match = -1;
      for (int a = n; a != -1; a = nodes[static_cast<size_t>(a)].parent) {
        if (nodes[static_cast<size_t>(a)].orig_state == succ.state &&
            nodes[static_cast<size_t>(a)].label == succ.counters) {
          match = a;
          break;
        }
      }
      int dst;
      if (match != -1) {
        dst = nodes[static_cast<size_t>(match)].out_state;  // back edge
      } else {
        dst = nodes[static_cast<size_t>(new_node(succ.state, succ.counters, n))].out_state;
      }
      out_trans.push_back({"e" + std::to_string(edge_seq++),
                           nodes[static_cast<size_t>(n)].out_state, zero, dst, t.weight});
    }
  }

  ReducedSystem r;
  r.sys = VassMdp(d - 1, std::move(out_states), std::move(out_trans));
  r.init = Config{0, zero};
  r.targets = std::move(out_targets);
  r.color_count = color;
  r.trace = std::move(trace);
  return r;
}

struct LimitSureResult {
  bool yes = false;
  std::vector<ReducedSystem> stages;  // one per reduction round
};

/// Limit-sure reachability for 1-VASS-MDPs: reduce the dimension to 0, then
/// decide almost-sure reachability on the resulting finite MDP (where the
/// two notions coincide). Total: always returns YES or NO.
inline LimitSureResult limit_sure_reach(const VassMdp& sys, const Config& init,
                                        const std::set<int>& targets,
                                        size_t safety_cap = 100000) {
  if (!classify(sys).is_one_vass)
    throw VassError(Err::WrongSubclass, "limit_sure_reach requires a 1-VASS-MDP");
  LimitSureResult res;
  VassMdp cur = sys;
  Config cur_init = init;
  std::set<int> cur_targets = targets;
  while (cur.dimension() > 0) {
    ReducedSystem red = reduce_once(cur, cur_init, cur_targets, safety_cap);
    cur = red.sys;
    cur_init = red.init;
    cur_targets = red.targets;
    res.stages.push_back(std::move(red));
  }
  res.yes = as_reach(from_dim0(cur, cur_targets), cur_init.state);
  return res;
}

}  // namespace vassmdp
