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
#include "vassmdp/model.hpp"

namespace vassmdp {
namespace {

using testing::make_sys;

TEST(Enabled, NegativeCounterBlocks) {
  VassMdp sys = make_sys(2, {{"q", Owner::One}, {"q2", Owner::One}},
                         {{"t", "q", {-1, 2}, "q2", 1}});
  EXPECT_TRUE(enabled(sys, Config{0, {0, 0}}).empty());
  EXPECT_EQ(enabled(sys, Config{0, {1, 0}}), (std::vector<int>{0}));
}

TEST(Enabled, OnlyZeroEffectEnabledAtLowCounter) {
  VassMdp sys = make_sys(1, {{"q", Owner::One}, {"q2", Owner::One}},
                         {{"t1", "q", {0}, "q2", 1}, {"t2", "q", {-2}, "q2", 1}});
  EXPECT_EQ(enabled(sys, Config{0, {1}}), (std::vector<int>{0}));
}

TEST(Enabled, MonotoneInCounters) {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 50; ++it) {
    VassMdp sys = testing::random_system(rng, {2, 4, 6, 2, 3, false});
    for (int q = 0; q < sys.num_states(); ++q) {
      Vec lo{static_cast<long long>(rng() % 3), static_cast<long long>(rng() % 3)};
      Vec hi{lo[0] + static_cast<long long>(rng() % 3), lo[1] + static_cast<long long>(rng() % 3)};
      auto a = enabled(sys, Config{q, lo});
      auto b = enabled(sys, Config{q, hi});
      for (int t : a) EXPECT_TRUE(std::count(b.begin(), b.end(), t));
    }
  }
}

TEST(Step, VectorAddition) {
  VassMdp sys = make_sys(2, {{"q", Owner::One}, {"q2", Owner::One}},
                         {{"t", "q", {-1, 2}, "q2", 1}});
  Config next = step(sys, Config{0, {1, 0}}, sys.transitions()[0]);
  EXPECT_EQ(next, (Config{1, {0, 2}}));
}

TEST(Step, IdentityEffect) {
  VassMdp sys = make_sys(2, {{"q", Owner::One}}, {{"t", "q", {0, 0}, "q", 1}});
  EXPECT_EQ(step(sys, Config{0, {5, 5}}, sys.transitions()[0]), (Config{0, {5, 5}}));
}

TEST(Step, NotEnabledThrows) {
  VassMdp sys = make_sys(1, {{"q", Owner::One}, {"q2", Owner::One}},
                         {{"t", "q", {3}, "q2", 1}});
  EXPECT_EQ(step(sys, Config{0, {0}}, sys.transitions()[0]), (Config{1, {3}}));
  try {
    step(sys, Config{1, {0}}, sys.transitions()[0]);
    FAIL() << "expected NotEnabled";
  } catch (const VassError& e) {
    EXPECT_EQ(e.code, Err::NotEnabled);
  }
}

TEST(Distribution, EqualWeights) {
  VassMdp sys = make_sys(1, {{"p", Owner::Prob}, {"a", Owner::One}, {"b", Owner::One}},
                         {{"t1", "p", {0}, "a", 1}, {"t2", "p", {0}, "b", 1}});
  auto d = distribution(sys, Config{0, {0}});
  EXPECT_EQ(d.at(Config{1, {0}}), Rat(1, 2));
  EXPECT_EQ(d.at(Config{2, {0}}), Rat(1, 2));
}

TEST(Distribution, WeightTwoToOne) {
  VassMdp sys = make_sys(1, {{"p", Owner::Prob}, {"a", Owner::One}, {"b", Owner::One}},
                         {{"t1", "p", {0}, "a", 2}, {"t2", "p", {0}, "b", 1}});
  auto d = distribution(sys, Config{0, {0}});
  EXPECT_EQ(d.at(Config{1, {0}}), Rat(2, 3));
  EXPECT_EQ(d.at(Config{2, {0}}), Rat(1, 3));
}

TEST(Distribution, ParallelTransitionsAggregate) {
  // two transitions into the same successor (weights 1 and 2) plus one other
  VassMdp sys = make_sys(1, {{"p", Owner::Prob}, {"a", Owner::One}, {"b", Owner::One}},
                         {{"t1", "p", {0}, "a", 1},
                          {"t2", "p", {0}, "a", 2},
                          {"t3", "p", {0}, "b", 1}});
  auto d = distribution(sys, Config{0, {0}});
  EXPECT_EQ(d.at(Config{1, {0}}), Rat(3, 4));
  EXPECT_EQ(d.at(Config{2, {0}}), Rat(1, 4));
}

TEST(Distribution, SumsToOneOnRandomSystems) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 100; ++it) {
    VassMdp sys = testing::random_system(rng, {2, 5, 8, 2, 4, false});
    for (int q = 0; q < sys.num_states(); ++q) {
      if (sys.owner(q) != Owner::Prob) continue;
      Config c{q, {static_cast<long long>(rng() % 4), static_cast<long long>(rng() % 4)}};
      if (enabled(sys, c).empty()) continue;
      Rat sum(0);
      for (const auto& [succ, p] : distribution(sys, c)) sum += p;
      EXPECT_EQ(sum, Rat(1));
    }
  }
}

TEST(Distribution, ErrorsOnWrongOwnerAndDeadlock) {
  VassMdp sys = make_sys(1, {{"q", Owner::One}, {"p", Owner::Prob}},
                         {{"t", "q", {0}, "p", 1}, {"d", "p", {-1}, "q", 1}});
  try {
    distribution(sys, Config{0, {0}});
    FAIL();
  } catch (const VassError& e) {
    EXPECT_EQ(e.code, Err::WrongOwner);
  }
  try {
    distribution(sys, Config{1, {0}});
    FAIL();
  } catch (const VassError& e) {
    EXPECT_EQ(e.code, Err::Deadlock);
  }
}

TEST(Classify, ZeroEffectProbSideIsOneVass) {
  VassMdp sys = make_sys(1, {{"q", Owner::One}, {"p", Owner::Prob}},
                         {{"t1", "q", {-1}, "p", 1}, {"t2", "p", {0}, "q", 1}});
  Classification c = classify(sys);
  EXPECT_TRUE(c.is_one_vass);
  EXPECT_FALSE(c.is_p_vass);
  ASSERT_TRUE(c.single_sided_side.has_value());
  EXPECT_EQ(*c.single_sided_side, Owner::Prob);
}

TEST(Classify, DecrementOnlyStateIsNotDeadlockFree) {
  VassMdp sys = make_sys(1, {{"q", Owner::One}, {"f", Owner::One}},
                         {{"t", "q", {-1}, "f", 1}});
  EXPECT_FALSE(classify(sys).deadlock_free_all_configs);
}

TEST(Classify, BothFlagsOnlyWhenAllEffectsZero) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 50; ++it) {
    VassMdp sys = testing::random_system(rng, {1, 4, 6, 2, 2, false});
    Classification c = classify(sys);
    bool all_zero_eff = true;
    for (const auto& t : sys.transitions())
      if (!all_zero(t.effect)) all_zero_eff = false;
    EXPECT_EQ(c.is_p_vass && c.is_one_vass, all_zero_eff);
  }
}

TEST(Classify, Fig3EncodingIsPVass) {
  MinskyMachine m;
  m.states = {"q1", "q2", "q3", "q4", "q5", "q6"};
  m.initial = "q1";
  m.final = "q6";
  m.instrs = {{MinskyMachine::Op::Inc, "q1", 0, "q2"},
              {MinskyMachine::Op::Dec, "q3", 1, "q4"},
              {MinskyMachine::Op::Zero, "q5", 0, "q6"}};
  EXPECT_TRUE(classify(encode_pvass_deadlock(m)).is_p_vass);
}

TEST(RemoveDeadlocks, ProbStateGainsSelfLoop) {
  VassMdp sys = make_sys(1, {{"q", Owner::One}, {"p", Owner::Prob}},
                         {{"t", "q", {0}, "p", 1}});
  VassMdp out = remove_deadlocks(sys);
  EXPECT_TRUE(classify(out).deadlock_free_all_configs);
  bool has_loop = false;
  for (const auto& t : out.transitions())
    if (t.source == 1 && t.target == 1 && all_zero(t.effect)) has_loop = true;
  EXPECT_TRUE(has_loop);
}

TEST(RemoveDeadlocks, OneStateGainsEscapeToSink) {
  VassMdp sys = make_sys(1, {{"q", Owner::One}}, {{"t", "q", {-1}, "q", 1}});
  VassMdp out = remove_deadlocks(sys);
  EXPECT_TRUE(classify(out).deadlock_free_all_configs);
  ASSERT_EQ(out.num_states(), 2);
  EXPECT_EQ(out.name(1), "sink");
  bool has_escape = false;
  for (const auto& t : out.transitions())
    if (t.source == 0 && t.target == 1 && all_zero(t.effect)) has_escape = true;
  EXPECT_TRUE(has_escape);
}

TEST(RemoveDeadlocks, RequiresOneVass) {
  VassMdp sys = make_sys(1, {{"p", Owner::Prob}}, {{"t", "p", {1}, "p", 1}});
  try {
    remove_deadlocks(sys);
    FAIL();
  } catch (const VassError& e) {
    EXPECT_EQ(e.code, Err::NotOneVass);
  }
}

// Verdict preservation: the transform must not change any of the six
// answers. FIX-COIN and FIX-DEC are cap-closed, so the bounded oracle
// decides all six exactly on both sides. FIX-PUMP pumps unboundedly; there
// the Algorithm-1 route (which handles deadlocks natively) is compared, and
// the analytic-table acceptance test covers the remaining problems on the
// deadlock-removed pipeline.
TEST(RemoveDeadlocks, PreservesAllVerdictsOnFixtures) {
  for (const auto& name : {"FIX-COIN", "FIX-DEC"}) {
    Gadget g = gen_gadget(name);
    VassMdp out = remove_deadlocks(g.sys);
    for (Problem p : {Problem::SureReach, Problem::AsReach, Problem::LsReach,
                      Problem::SureBuchi, Problem::AsBuchi, Problem::LsBuchi}) {
      bool before = bounded_oracle(g.sys, g.init, g.targets, 4, p);
      bool after = bounded_oracle(out, g.init, g.targets, 4, p);
      EXPECT_EQ(before, after) << name << " " << problem_str(p);
    }
  }
  Gadget pump = gen_gadget("FIX-PUMP");
  VassMdp out = remove_deadlocks(pump.sys);
  EXPECT_EQ(limit_sure_reach(pump.sys, pump.init, pump.targets).yes,
            limit_sure_reach(out, pump.init, pump.targets).yes);
}

TEST(RemoveDeadlocks, AlreadyDeadlockFreeInputKeepsVerdicts) {
  Gadget g = gen_gadget("FIX-COIN");
  VassMdp out = remove_deadlocks(g.sys);
  EXPECT_GT(out.num_states(), g.sys.num_states());
  for (Problem p : {Problem::SureReach, Problem::AsReach, Problem::SureBuchi, Problem::AsBuchi})
    EXPECT_EQ(bounded_oracle(g.sys, g.init, g.targets, 4, p),
              bounded_oracle(out, g.init, g.targets, 4, p));
}

}  // namespace
}  // namespace vassmdp
