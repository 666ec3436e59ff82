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

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "vassmdp/encoders.hpp"
#include "vassmdp/limitsure.hpp"

namespace vassmdp {
namespace {

using testing::make_sys;

TEST(Dominates, BasicOrder) {
  auto i1 = strictly_dominates("q", {1, 0}, "q", {2, 0});
  ASSERT_TRUE(i1.has_value());
  EXPECT_EQ(*i1, (std::vector<int>{0}));

  auto i2 = strictly_dominates("q", {1, 0}, "q", {2, 1});
  ASSERT_TRUE(i2.has_value());
  EXPECT_EQ(*i2, (std::vector<int>{0, 1}));

  EXPECT_FALSE(strictly_dominates("q", {1, 2}, "q", {2, 1}).has_value());
  EXPECT_FALSE(strictly_dominates("q", {1, 0}, "r", {2, 0}).has_value());
  EXPECT_FALSE(strictly_dominates("q", {1, 0}, "q", {1, 0}).has_value());
}

TEST(Dominates, StarEntriesCompareEqualToStar) {
  auto i = strictly_dominates("q", {1, STAR}, "q", {2, STAR});
  ASSERT_TRUE(i.has_value());
  EXPECT_EQ(*i, (std::vector<int>{0}));
  // a natural is below *, but * is not equal to a natural
  auto j = strictly_dominates("q", {1, 3}, "q", {1, STAR});
  ASSERT_TRUE(j.has_value());
  EXPECT_EQ(*j, (std::vector<int>{1}));
  EXPECT_FALSE(strictly_dominates("q", {STAR, 1}, "q", {1, 1}).has_value());
}

TEST(ColoredProjection, DropsComponentAndColors) {
  VassMdp sys = make_sys(2, {{"q", Owner::One}, {"r", Owner::Prob}},
                         {{"t", "q", {-1, 2}, "r", 1}, {"u", "r", {0, 0}, "q", 1}});
  VassMdp proj = colored_projection(sys, 0, 1);
  EXPECT_EQ(proj.dimension(), 1);
  ASSERT_EQ(proj.num_states(), 2);
  EXPECT_EQ(proj.name(0), "q@1");
  EXPECT_EQ(proj.owner(1), Owner::Prob);  // ownership preserved under coloring
  ASSERT_EQ(proj.transitions().size(), 2u);
  EXPECT_EQ(proj.transitions()[0].effect, (Vec{2}));
}

TEST(ColoredProjection, CollapsedTransitionsAggregateWeights) {
  VassMdp sys = make_sys(2, {{"q", Owner::Prob}, {"r", Owner::One}},
                         {{"t1", "q", {0, 1}, "r", 1}, {"t2", "q", {3, 1}, "r", 2}});
  VassMdp proj = colored_projection(sys, 0, 1);
  ASSERT_EQ(proj.transitions().size(), 1u);
  EXPECT_EQ(proj.transitions()[0].effect, (Vec{1}));
  EXPECT_EQ(proj.transitions()[0].weight, 3);
}

TEST(ReduceOnce, FixPumpSpawnsOneColor) {
  Gadget g = gen_gadget("FIX-PUMP");
  ReducedSystem red = reduce_once(g.sys, g.init, g.targets);
  EXPECT_EQ(red.sys.dimension(), 0);
  EXPECT_EQ(red.color_count, 1);
  // uncolored nodes: (s,0) (s,1) (p,0) (f,0) (t,0), plus the colored entry
  int uncolored = 0, colored = 0;
  for (const auto& n : red.trace) (n.colored ? colored : uncolored)++;
  EXPECT_EQ(uncolored, 5);
  EXPECT_EQ(colored, 1);
  // in the colored copy the decrement edge becomes always enabled: effect []
  int t5c = -1;
  for (size_t i = 0; i < red.sys.transitions().size(); ++i)
    if (red.sys.transitions()[i].id == "t5@1") t5c = static_cast<int>(i);
  ASSERT_GE(t5c, 0);
  EXPECT_TRUE(red.sys.transitions()[static_cast<size_t>(t5c)].effect.empty());
  // targets: the uncolored (f,0) node and the colored copy of f
  EXPECT_TRUE(red.targets.count(red.sys.state_index("f@1")));
  bool uncolored_target = false;
  for (int t : red.targets)
    if (red.sys.name(t)[0] == 'n') uncolored_target = true;
  EXPECT_TRUE(uncolored_target);
}

TEST(ReduceOnce, SelfLoopBecomesBackEdge) {
  VassMdp sys = make_sys(1, {{"a", Owner::One}}, {{"t", "a", {0}, "a", 1}});
  ReducedSystem red = reduce_once(sys, Config{0, {0}}, {});
  EXPECT_EQ(red.color_count, 0);
  ASSERT_EQ(red.sys.num_states(), 1);
  ASSERT_EQ(red.sys.transitions().size(), 1u);
  EXPECT_EQ(red.sys.transitions()[0].source, red.sys.transitions()[0].target);
}

TEST(ReduceOnce, RootIsTargetWhenInitIsTarget) {
  Gadget g = gen_gadget("FIX-DEC");
  ReducedSystem red = reduce_once(g.sys, Config{g.sys.state_index("f"), {0}}, {1});
  EXPECT_TRUE(red.targets.count(red.init.state));
}

TEST(ReduceOnce, DeepestAncestorSmallestIndex) {
  // the branch pumps both counters; the deepest dominated ancestor is the
  // root and the projection removes the smallest increasing index
  VassMdp sys = make_sys(2, {{"a", Owner::One}}, {{"t", "a", {1, 1}, "a", 1}});
  ReducedSystem red = reduce_once(sys, Config{0, {0, 0}}, {});
  EXPECT_EQ(red.color_count, 1);
  EXPECT_EQ(red.sys.dimension(), 1);
  // component 0 was removed, so the colored self-loop keeps effect [1]
  int tc = -1;
  for (size_t i = 0; i < red.sys.transitions().size(); ++i)
    if (red.sys.transitions()[i].id == "t@1") tc = static_cast<int>(i);
  ASSERT_GE(tc, 0);
  EXPECT_EQ(red.sys.transitions()[static_cast<size_t>(tc)].effect, (Vec{1}));
  // the bridge carries the entry configuration (projected label of (a,[1,1]))
  for (const auto& t : red.sys.transitions())
    if (t.id == "b1") EXPECT_EQ(t.effect, (Vec{1}));
}

TEST(ReduceOnce, RequiresOneVassAndPositiveDimension) {
  VassMdp pv = make_sys(1, {{"p", Owner::Prob}}, {{"t", "p", {1}, "p", 1}});
  try {
    reduce_once(pv, Config{0, {0}}, {});
    FAIL();
  } catch (const VassError& e) {
    EXPECT_EQ(e.code, Err::WrongSubclass);
  }
  VassMdp d0 = make_sys(0, {{"a", Owner::One}}, {{"t", "a", {}, "a", 1}});
  try {
    reduce_once(d0, Config{0, {}}, {});
    FAIL();
  } catch (const VassError& e) {
    EXPECT_EQ(e.code, Err::Usage);
  }
}

TEST(ReduceOnce, ColorIsolation) {
  Gadget g = gen_gadget("FIX-PUMP");
  ReducedSystem red = reduce_once(g.sys, g.init, g.targets);
  auto color_of = [](const std::string& name) -> std::string {
    auto at = name.rfind('@');
    return at == std::string::npos ? "" : name.substr(at);
  };
  for (const Transition& t : red.sys.transitions()) {
    std::string cs = color_of(red.sys.name(t.source));
    std::string cd = color_of(red.sys.name(t.target));
    if (!cs.empty()) EXPECT_EQ(cs, cd);  // nothing leaves a colored subsystem
  }
}

TEST(ReduceOnce, WeightConservationAtProbNodes) {
  Gadget g = gen_gadget("FIX-PUMP");
  ReducedSystem red = reduce_once(g.sys, g.init, g.targets);
  // every uncolored Player-P node's outgoing weights equal the enabled
  // original transitions' weights at its label
  for (const auto& n : red.trace) {
    if (n.colored) continue;
    int q = red.sys.state_index(n.node);
    if (red.sys.owner(q) != Owner::Prob) continue;
    Config orig{g.sys.state_index(n.label_state), n.label};
    long long want = 0;
    for (int ti : enabled(g.sys, orig))
      want += g.sys.transitions()[static_cast<size_t>(ti)].weight;
    long long got = 0;
    for (int ti : red.sys.out(q)) got += red.sys.transitions()[static_cast<size_t>(ti)].weight;
    EXPECT_EQ(got, want) << "at node " << n.node;
  }
}

TEST(LimitSure, FixtureVerdicts) {
  EXPECT_TRUE(limit_sure_reach(gen_gadget("FIX-PUMP").sys, Config{0, {0}}, {3}).yes);
  EXPECT_TRUE(limit_sure_reach(gen_gadget("FIX-COIN").sys, Config{0, {0}}, {1}).yes);
  EXPECT_FALSE(limit_sure_reach(gen_gadget("FIX-DEC").sys, Config{0, {0}}, {1}).yes);
  // one token suffices for FIX-DEC
  EXPECT_TRUE(limit_sure_reach(gen_gadget("FIX-DEC").sys, Config{0, {1}}, {1}).yes);
}

TEST(LimitSure, FixPumpReducesInOneRound) {
  Gadget g = gen_gadget("FIX-PUMP");
  LimitSureResult r = limit_sure_reach(g.sys, g.init, g.targets);
  ASSERT_EQ(r.stages.size(), 1u);
  EXPECT_EQ(r.stages[0].sys.dimension(), 0);
  EXPECT_TRUE(r.yes);
}

TEST(LimitSure, TwoDimensionalNeedsTwoRounds) {
  // pump both counters, then pay both to reach the target
  VassMdp sys = make_sys(
      2, {{"a", Owner::One}, {"f", Owner::One}},
      {{"t1", "a", {1, 1}, "a", 1}, {"t2", "a", {-1, -1}, "f", 1}});
  LimitSureResult r = limit_sure_reach(sys, Config{0, {0, 0}}, {1});
  EXPECT_EQ(r.stages.size(), 2u);
  EXPECT_TRUE(r.yes);
}

TEST(LimitSure, AgreesWithOracleOnCapClosedRandomInstances) {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int it = 0; it < 200 && checked < 40; ++it) {
    VassMdp sys = testing::random_system(rng, {1, 4, 5, 2, 3, true});
    Config init{0, {static_cast<long long>(rng() % 2)}};
    std::set<int> targets{static_cast<int>(rng() % static_cast<uint64_t>(sys.num_states()))};
    if (!try_build_bounded(sys, init, targets, 5, true)) continue;
    checked++;
    EXPECT_EQ(limit_sure_reach(sys, init, targets).yes,
              bounded_oracle(sys, init, targets, 5, Problem::LsReach))
        << serialize_system(sys, init, targets);
  }
  EXPECT_GE(checked, 20);
}

TEST(LimitSure, TerminatesOnRandomOneDimensionalInstances) {
  std::mt19937_64 rng(29);
  for (int it = 0; it < 60; ++it) {
    VassMdp sys = testing::random_system(rng, {1, 4, 6, 2, 3, true});
    Config init{0, {static_cast<long long>(rng() % 3)}};
    std::set<int> targets{static_cast<int>(rng() % static_cast<uint64_t>(sys.num_states()))};
    // the safety cap must never be the stopping reason
    LimitSureResult r = limit_sure_reach(sys, init, targets, 100000);
    ASSERT_EQ(r.stages.size(), 1u);
  }
}

}  // namespace
}  // namespace vassmdp
