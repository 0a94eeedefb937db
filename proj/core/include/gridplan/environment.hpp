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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridplan/rng.hpp"
#include "gridplan/types.hpp"

namespace gridplan {

/// Reward assignment for one state; action == -1 applies to every action.
struct RewardPlacement {
  State s;
  int action = -1;
  double value = 0.0;
};

enum class ObservationKind { kDelta, kUniform, kPeaked };

/// Ground-truth environment recipe. Presets:
///   deterministic-compass  one-hot displacement filters (compass actions)
///   noisy-compass          compass filters with slip mass on the lateral
///                          neighbors of the intended displacement
///   random-seeded          uniformly random filters, normalized per action
struct EnvironmentSpec {
  std::string preset = "noisy-compass";
  double slip = 0.2;
  ObservationKind obs = ObservationKind::kUniform;
  double obs_center = 0.6;  // kPeaked center weight
  std::vector<RewardPlacement> rewards;
  // Uniform per-action reward offset (a movement cost of -action_cost_step*a
  // for action a). Distinct action costs keep greedy policies uniquely
  // determined where spatial values nearly tie.
  double action_cost_step = 0.0;
  std::uint64_t seed = 0;  // random-seeded preset
};

struct Environment {
  GridDims dims;
  TransitionModel transition;
  RewardFunction reward;
  ObservationModel observation;
};

/// Compass action order used by the compass presets: N, S, E, W, stay, then
/// the four diagonals NE, NW, SE, SW. na selects a prefix of this table.
State compass_displacement(int action);

/// Builds the ground-truth model triple. Deterministic given spec and seed.
Environment make_environment(const GridDims& dims, const EnvironmentSpec& spec);

/// Uniform(0,1) filter entries, each filter normalized to sum 1.
TransitionModel random_transition_model(int na, int w, Rng& rng);

/// Observation kernel of the requested kind for radius h.
ObservationModel make_observation_model(int h, ObservationKind kind, double center_weight = 0.6);

/// Samples the successor state: draws a displacement from filter a and
/// clamps the result to the grid (mass that would leave the grid collapses
/// onto the boundary cell).
State step(const TransitionModel& t, const State& s, int action, int nd, Rng& rng);

/// Samples an observation: draws an offset from the kernel and clamps.
State observe(const ObservationModel& o, const State& s, int nd, Rng& rng);

/// Rolls out the true dynamics for `length` steps. With a policy the rollout
/// is an expert demonstration (actions chosen by the policy at the true
/// state, recorded as expert actions); without one actions are uniform
/// random. Step t records the executed action and the observation of the
/// state reached by it. The start state is drawn from rng unless given.
Trajectory generate_trajectory(const Environment& env, const Policy* policy, int length, Rng& rng,
                               std::optional<State> start = std::nullopt);

}  // namespace gridplan
