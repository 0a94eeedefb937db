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
#include "gridplan/filter.hpp"
#include "gridplan/rng.hpp"
#include "oracles.hpp"

using namespace gridplan;

TEST_CASE("motion_update: identity filter is a no-op, delta shifts") {
  const GridDims dims(6, 1, 1, 0, 0.9);
  Rng rng(9);
  const Belief b = oracles::random_belief(dims.nd, rng);

  TransitionModel identity;
  Mat id(3, 3, 0.0);
  id(1, 1) = 1.0;
  identity.filters.push_back(id);
  CHECK(max_abs_diff(motion_update(b, identity, 0), b.mass) == 0.0);

  TransitionModel east;
  Mat e(3, 3, 0.0);
  e(1, 2) = 1.0;
  east.filters.push_back(e);
  const Belief hot = one_hot_belief(State{3, 3}, dims);
  const Mat moved = motion_update(hot, east, 0);
  CHECK(moved(3, 4) == 1.0);
  CHECK(moved.sum() == doctest::Approx(1.0));
}

TEST_CASE("motion_update matches the brute-force double sum") {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const int nd = 6;
    const TransitionModel t = random_transition_model(2, 1, rng);
    const Belief b = oracles::random_belief(nd, rng);
    const Mat fast = motion_update(b, t, trial % 2);
    const Mat slow = oracles::motion_update_brute_force(b, t, trial % 2);
    CHECK(max_abs_diff(fast, slow) < 1e-12);
  }
}

TEST_CASE("correction_update: delta kernel collapses to the observation") {
  const GridDims dims(5, 1, 1, 1, 0.9);
  Rng rng(11);
  const Belief b = oracles::random_belief(dims.nd, rng);
  const ObservationModel delta = make_observation_model(1, ObservationKind::kDelta);
  const Belief out = correction_update(b.mass, delta, State{2, 3});
  CHECK(out.mass(2, 3) == doctest::Approx(1.0));
  CHECK(out.mass.sum() == doctest::Approx(1.0));
}

TEST_CASE("correction_update: uniform kernel restricts and renormalizes") {
  const GridDims dims(5, 1, 1, 1, 0.9);
  Rng rng(12);
  const Belief b = oracles::random_belief(dims.nd, rng);
  const ObservationModel uniform = make_observation_model(1, ObservationKind::kUniform);
  const State z{2, 2};
  const Belief out = correction_update(b.mass, uniform, z);
  double window_mass = 0.0;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) window_mass += b.mass(i, j);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const bool inside = std::abs(i - z.i) <= 1 && std::abs(j - z.j) <= 1;
      if (inside)
        CHECK(out.mass(i, j) == doctest::Approx(b.mass(i, j) / window_mass));
      else
        CHECK(out.mass(i, j) == 0.0);
    }
}

TEST_CASE("correction_update throws TotalMassZero on inconsistent observations") {
  const GridDims dims(5, 1, 1, 1, 0.9);
  const Belief hot = one_hot_belief(State{0, 0}, dims);
  const ObservationModel delta = make_observation_model(1, ObservationKind::kDelta);
  CHECK_THROWS_AS(correction_update(hot.mass, delta, State{4, 4}), TotalMassZero);
}

TEST_CASE("propagate: identity dynamics with a delta kernel pin the observation") {
  const GridDims dims(5, 1, 1, 1, 0.9);
  TransitionModel identity;
  Mat id(3, 3, 0.0);
  id(1, 1) = 1.0;
  identity.filters.push_back(id);
  const ObservationModel delta = make_observation_model(1, ObservationKind::kDelta);
  const GridDims d = dims;
  Belief b = uniform_belief(d);
  const Belief out = propagate(b, 0, State{1, 2}, identity, delta);
  CHECK(out.mass(1, 2) == doctest::Approx(1.0));
}

TEST_CASE("propagate matches the textbook Bayes filter on random instances") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const int nd = 6;
    const GridDims dims(nd, 3, 1, 1, 0.9);
    const TransitionModel t = random_transition_model(dims.na, dims.w, rng);
    const ObservationModel o = oracles::random_observation_model(dims.h, rng);
    const Belief b = oracles::random_belief(nd, rng);
    const int a = rng.next_int(dims.na);
    const State z = rng.next_state(nd);
    const Belief fast = propagate(b, a, z, t, o);
    const Belief slow = oracles::bayes_filter_brute_force(b, a, z, t, o);
    CHECK(max_abs_diff(fast.mass, slow.mass) < 1e-12);
  }
}

TEST_CASE("propagate composition over a 10-step rollout tracks the brute-force filter") {
  Rng rng(14);
  const GridDims dims(7, 4, 1, 1, 0.9);
  EnvironmentSpec spec;
  spec.preset = "noisy-compass";
  spec.obs = ObservationKind::kUniform;
  const Environment env = make_environment(dims, spec);

  for (int trial = 0; trial < 10; ++trial) {
    const Trajectory traj = generate_trajectory(env, nullptr, 10, rng);
    Belief fast = initial_belief(dims, env.observation, traj.steps[0].observed);
    Belief slow = fast;
    for (int k = 1; k < traj.length(); ++k) {
      const auto& st = traj.steps[static_cast<std::size_t>(k)];
      fast = propagate(fast, st.action, st.observed, env.transition, env.observation);
      slow = oracles::bayes_filter_brute_force(slow, st.action, st.observed, env.transition,
                                               env.observation);
      CHECK(max_abs_diff(fast.mass, slow.mass) < 1e-10);
    }
  }
}

TEST_CASE("propagate output is a distribution supported inside the observation window") {
  Rng rng(15);
  const GridDims dims(8, 3, 1, 1, 0.9);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const TransitionModel t = random_transition_model(dims.na, dims.w, rng);
    const ObservationModel o = oracles::random_observation_model(dims.h, rng);
    const Belief b = oracles::random_belief(dims.nd, rng);
    const int a = rng.next_int(dims.na);
    const State z = rng.next_state(dims.nd);
    const Belief out = propagate(b, a, z, t, o);
    ++checked;
    CHECK(std::abs(out.mass.sum() - 1.0) <= 1e-12);
    CHECK(out.mass.min_value() >= 0.0);
    for (int i = 0; i < dims.nd; ++i)
      for (int j = 0; j < dims.nd; ++j)
        if (std::abs(i - z.i) > dims.h || std::abs(j - z.j) > dims.h) CHECK(out.mass(i, j) == 0.0);
  }
  CHECK(checked == 1000);
}
