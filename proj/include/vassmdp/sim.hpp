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

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <variant>
#include <vector>

#include "vassmdp/model.hpp"
#include "vassmdp/mucalc.hpp"

namespace vassmdp {

namespace detail {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Deterministic per-seed random source. Bounded draws use rejection
/// sampling on the raw engine output, so results do not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  /// Split off an independent stream for one run of a batch.
  static Rng split(uint64_t seed, uint64_t index) {
    return Rng(detail::splitmix64(seed ^ detail::splitmix64(index + 1)));
  }

  uint64_t below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 eng_;
};

enum class PlayStatus { Running, Deadlocked, StepCapped };

struct Play {
  Config start;
  std::vector<std::pair<int, Config>> steps;  // (transition index, configuration)
  PlayStatus status = PlayStatus::Running;

  bool visits(const std::set<int>& targets) const {
    if (targets.count(start.state)) return true;
    for (const auto& [t, c] : steps)
      if (targets.count(c.state)) return true;
    return false;
  }
};

/// Player-1 decision source: a region strategy from a mu trace, uniform
/// choice over enabled transitions, or a scripted state -> transition table.
class StrategyHandle {
 public:
  static StrategyHandle uniform() { return StrategyHandle(Uniform{}); }
  static StrategyHandle region(RegionStrategy s) { return StrategyHandle(std::move(s)); }
  static StrategyHandle scripted(std::map<int, int> table) {
    return StrategyHandle(std::move(table));
  }

  /// Index of the transition to play at a non-deadlocked Player-1 config.
  int choose(const VassMdp& sys, const Config& c, const std::vector<int>& en, Rng& rng) const {
    if (std::holds_alternative<Uniform>(impl_))
      return en[rng.below(en.size())];
    if (const auto* rs = std::get_if<RegionStrategy>(&impl_)) {
      int t = rs->decide(sys, c);
      if (t < 0) throw VassError(Err::Deadlock, "strategy asked at a deadlock");
      return t;
    }
    const auto& table = std::get<std::map<int, int>>(impl_);
    auto it = table.find(c.state);
    if (it == table.end())
      return en.front();
    if (!is_enabled(sys, c, sys.transitions()[static_cast<size_t>(it->second)]))
      throw VassError(Err::NotEnabled, "scripted transition disabled at " + sys.name(c.state));
    return it->second;
  }

 private:
  struct Uniform {};
  using Impl = std::variant<Uniform, RegionStrategy, std::map<int, int>>;
  explicit StrategyHandle(Impl impl) : impl_(std::move(impl)) {}
  Impl impl_;
};

/// One sampled maximal play: Player-P choices are drawn from the induced
/// distribution, Player-1 choices from the strategy. Stops on deadlock or
/// after step_cap steps.
inline Play run(const VassMdp& sys, const Config& init, const StrategyHandle& strat,
                long step_cap, Rng& rng) {
  Play play;
  play.start = init;
  Config cur = init;
  for (long s = 0; s < step_cap; ++s) {
    std::vector<int> en = enabled(sys, cur);
    if (en.empty()) {
      play.status = PlayStatus::Deadlocked;
      return play;
    }
    int ti;
    if (sys.owner(cur.state) == Owner::Prob) {
      long long total = 0;
      for (int e : en) total += sys.transitions()[static_cast<size_t>(e)].weight;
      long long r = static_cast<long long>(rng.below(static_cast<uint64_t>(total)));
      ti = en.back();
      for (int e : en) {
        r -= sys.transitions()[static_cast<size_t>(e)].weight;
        if (r < 0) {
          ti = e;
          break;
        }
      }
    } else {
      ti = strat.choose(sys, cur, en, rng);
    }
    cur = step(sys, cur, sys.transitions()[static_cast<size_t>(ti)]);
    play.steps.emplace_back(ti, cur);
  }
  play.status = PlayStatus::StepCapped;
  return play;
}

inline Play run(const VassMdp& sys, const Config& init, const StrategyHandle& strat,
                long step_cap, uint64_t seed) {
  Rng rng(detail::splitmix64(seed));
  return run(sys, init, strat, step_cap, rng);
}

/// Fraction of sampled plays visiting a target within step_cap. Capped plays
/// count as misses, so this is a lower estimate of the reach probability.
inline Rat estimate_reach(const VassMdp& sys, const Config& init, const StrategyHandle& strat,
                          const std::set<int>& targets, long runs, long step_cap,
                          uint64_t seed) {
  if (runs < 1) throw VassError(Err::Usage, "runs must be >= 1");
  long hits = 0;
  for (long i = 0; i < runs; ++i) {
    Rng rng = Rng::split(seed, static_cast<uint64_t>(i));
    Play p = run(sys, init, strat, step_cap, rng);
    if (p.visits(targets)) hits++;
  }
  return Rat(hits, runs);
}

}  // namespace vassmdp
