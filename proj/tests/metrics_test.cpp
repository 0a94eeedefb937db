// Copyright 2026 The gridplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"
#include "gridplan/environment.hpp"
#include "gridplan/metrics.hpp"
#include "gridplan/vi.hpp"
#include "oracles.hpp"

using namespace gridplan;

TEST_CASE("replanning_accuracy extremes and mismatch") {
  Policy a(4, 1), b(4, 1);
  CHECK(replanning_accuracy(a, b) == 100.0);
  Policy c(4, 2);
  CHECK(replanning_accuracy(a, c) == 0.0);
  a.at(0, 0) = 2;
  CHECK(replanning_accuracy(a, c) == doctest::Approx(100.0 / 16.0));
  Policy other(5, 0);
  CHECK_THROWS_AS(replanning_accuracy(a, other), std::invalid_argument);
}

TEST_CASE("policy_evaluation: optimal policy reproduces the optimal value") {
  const GridDims dims(6, 5, 1, 0, 0.9);
  EnvironmentSpec spec;
  spec.preset = "noisy-compass";
  spec.rewards.push_back(RewardPlacement{State{2, 4}, -1, 1.0});
  const Environment env = make_environment(dims, spec);
  const double epsilon = 1e-8;
  const ViResult plan = value_iterate(env.transition, env.reward, dims.gamma, ViOptions{epsilon, 2000, false});
  const ValueFunction v = policy_evaluation(plan.policy, env.transition, env.reward, dims.gamma,
                                            epsilon, 5000);
  CHECK(max_abs_diff(v.values, plan.v.values) < 10 * epsilon);
}

TEST_CASE("policy_evaluation: zero reward gives zero value") {
  const GridDims dims(5, 3, 1, 0, 0.9);
  EnvironmentSpec spec;
  spec.preset = "random-seeded";
  spec.seed = 6;
  const Environment env = make_environment(dims, spec);
  Policy policy(dims.nd, 1);
  const ValueFunction v = policy_evaluation(policy, env.transition, env.reward, dims.gamma, 1e-10);
  CHECK(v.values.max_value() == 0.0);
  CHECK(v.values.min_value() == 0.0);
}

TEST_CASE("policy_evaluation matches the dense linear solve on random policies") {
  Rng rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    const int nd = 4, na = 3;
    const TransitionModel t = random_transition_model(na, 1, rng);
    const RewardFunction r = oracles::random_reward(nd, na, rng);
    Policy policy(nd);
    for (int& a : policy.actions) a = rng.next_int(na);
    const ValueFunction iterative = policy_evaluation(policy, t, r, 0.9, 1e-9, 5000);
    const ValueFunction exact = oracles::policy_value_linear_solve(policy, t, r, 0.9);
    CHECK(max_abs_diff(iterative.values, exact.values) < 1e-6);
  }
}

TEST_CASE("expected_reward_increase: zero, scaled and degenerate cases") {
  ValueFunction v{Mat(3, 3, 2.0)};
  const RewardIncrease same = expected_reward_increase(v, v);
  CHECK(same.pct == 0.0);
  CHECK(same.excluded == 0);

  ValueFunction scaled{Mat(3, 3, 2.2)};
  const RewardIncrease up = expected_reward_increase(scaled, v);
  CHECK(up.pct == doctest::Approx(10.0));

  // Near-zero baseline states are excluded and counted.
  ValueFunction mixed_orig{Mat(2, 2, 1.0)};
  mixed_orig.values(0, 0) = 0.0;
  ValueFunction mixed_learnt{Mat(2, 2, 1.1)};
  const RewardIncrease partial = expected_reward_increase(mixed_learnt, mixed_orig);
  CHECK(partial.excluded == 1);
  CHECK(partial.pct == doctest::Approx(10.0));

  ValueFunction zeros{Mat(2, 2, 0.0)};
  CHECK_THROWS_AS(expected_reward_increase(mixed_learnt, zeros), InvariantViolation);

  ValueFunction other{Mat(4, 4, 1.0)};
  CHECK_THROWS_AS(expected_reward_increase(other, v), std::invalid_argument);
}
