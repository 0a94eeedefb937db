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

#include "gridplan/environment.hpp"

#include <algorithm>
#include <array>

namespace gridplan {

namespace {

constexpr std::array<State, 9> kCompass = {{
    {-1, 0},  // N
    {1, 0},   // S
    {0, 1},   // E
    {0, -1},  // W
    {0, 0},   // stay
    {-1, 1},  // NE
    {-1, -1}, // NW
    {1, 1},   // SE
    {1, -1},  // SW
}};

int clamp_index(int x, int lo, int hi) { return std::clamp(x, lo, hi); }

State clamp_state(const State& s, int nd) {
  return State{clamp_index(s.i, 0, nd - 1), clamp_index(s.j, 0, nd - 1)};
}

Mat compass_filter(int action, int w, double slip) {
  const int nt = 2 * w + 1;
  Mat f(nt, nt, 0.0);
  const State d = compass_displacement(action);
  f(d.i + w, d.j + w) += 1.0 - slip;
  if (slip > 0.0) {
    // Slip lands on the von Neumann neighbors of the intended displacement,
    // clamped into the filter window.
    const std::array<State, 4> lateral = {{{d.i - 1, d.j}, {d.i + 1, d.j}, {d.i, d.j - 1}, {d.i, d.j + 1}}};
    for (const State& l : lateral) {
      const int u = clamp_index(l.i, -w, w);
      const int v = clamp_index(l.j, -w, w);
      f(u + w, v + w) += slip / 4.0;
    }
  }
  return f;
}

}  // namespace

State compass_displacement(int action) {
  if (action < 0 || action >= static_cast<int>(kCompass.size()))
    throw std::invalid_argument("compass_displacement: action outside compass table");
  return kCompass[static_cast<std::size_t>(action)];
}

TransitionModel random_transition_model(int na, int w, Rng& rng) {
  const int nt = 2 * w + 1;
  TransitionModel t;
  t.filters.reserve(static_cast<std::size_t>(na));
  for (int a = 0; a < na; ++a) {
    Mat f(nt, nt);
    double sum = 0.0;
    for (int k = 0; k < f.size(); ++k) {
      f.data()[k] = rng.next_double();
      sum += f.data()[k];
    }
    if (sum <= 0.0) {
      f.fill(1.0 / f.size());
    } else {
      for (int k = 0; k < f.size(); ++k) f.data()[k] /= sum;
    }
    t.filters.push_back(std::move(f));
  }
  return t;
}

ObservationModel make_observation_model(int h, ObservationKind kind, double center_weight) {
  const int no = 2 * h + 1;
  Mat k(no, no, 0.0);
  switch (kind) {
    case ObservationKind::kDelta:
      k(h, h) = 1.0;
      break;
    case ObservationKind::kUniform:
      k.fill(1.0 / k.size());
      break;
    case ObservationKind::kPeaked: {
      if (!(center_weight >= 0.0 && center_weight <= 1.0))
        throw InvariantViolation("make_observation_model: center weight outside [0,1]");
      if (k.size() == 1) {
        k(0, 0) = 1.0;
      } else {
        k.fill((1.0 - center_weight) / (k.size() - 1));
        k(h, h) = center_weight;
      }
      break;
    }
  }
  return ObservationModel{std::move(k)};
}

Environment make_environment(const GridDims& dims, const EnvironmentSpec& spec) {
  Environment env{dims, {}, {}, {}};

  if (spec.preset == "deterministic-compass" || spec.preset == "noisy-compass") {
    if (dims.na > static_cast<int>(kCompass.size()))
      throw InvariantViolation("make_environment: compass presets support at most 9 actions");
    if (dims.w < 1 && dims.na > 1)
      throw InvariantViolation("make_environment: compass displacements need w >= 1");
    const double slip = spec.preset == "deterministic-compass" ? 0.0 : spec.slip;
    if (!(slip >= 0.0 && slip <= 1.0))
      throw InvariantViolation("make_environment: slip outside [0,1]");
    for (int a = 0; a < dims.na; ++a) env.transition.filters.push_back(compass_filter(a, dims.w, slip));
  } else if (spec.preset == "random-seeded") {
    Rng rng = Rng(spec.seed).split("environment.transition");
    env.transition = random_transition_model(dims.na, dims.w, rng);
  } else {
    throw InvariantViolation("make_environment: unknown preset '" + spec.preset + "'");
  }

  env.reward.planes.assign(static_cast<std::size_t>(dims.na), Mat(dims.nd, dims.nd, 0.0));
  for (int a = 0; a < dims.na; ++a)
    if (spec.action_cost_step != 0.0)
      env.reward.planes[static_cast<std::size_t>(a)].fill(-spec.action_cost_step * a);
  for (const RewardPlacement& p : spec.rewards) {
    if (!in_bounds(p.s, dims.nd))
      throw InvariantViolation("make_environment: reward placement out of grid bounds");
    if (p.action >= dims.na)
      throw InvariantViolation("make_environment: reward placement action out of range");
    for (int a = 0; a < dims.na; ++a) {
      if (p.action >= 0 && p.action != a) continue;
      env.reward.planes[static_cast<std::size_t>(a)](p.s.i, p.s.j) =
          p.value - spec.action_cost_step * a;
    }
  }

  env.observation = make_observation_model(dims.h, spec.obs, spec.obs_center);

  env.transition.validate("make_environment");
  env.observation.validate("make_environment");
  return env;
}

State step(const TransitionModel& t, const State& s, int action, int nd, Rng& rng) {
  if (action < 0 || action >= t.num_actions()) throw std::invalid_argument("step: bad action");
  const int w = t.radius();
  const int cell = sample_cell(t.filters[static_cast<std::size_t>(action)], rng);
  const int u = cell / t.nt() - w;
  const int v = cell % t.nt() - w;
  return clamp_state(State{s.i + u, s.j + v}, nd);
}

State observe(const ObservationModel& o, const State& s, int nd, Rng& rng) {
  const int h = o.radius();
  const int cell = sample_cell(o.kernel, rng);
  const int du = cell / o.no() - h;
  const int dv = cell % o.no() - h;
  return clamp_state(State{s.i + du, s.j + dv}, nd);
}

Trajectory generate_trajectory(const Environment& env, const Policy* policy, int length, Rng& rng,
                               std::optional<State> start) {
  if (length < 1) throw std::invalid_argument("generate_trajectory: length must be >= 1");
  Trajectory traj;
  traj.steps.reserve(static_cast<std::size_t>(length));
  State s = start.value_or(rng.next_state(env.dims.nd));
  for (int t = 0; t < length; ++t) {
    const int a = policy ? policy->at(s.i, s.j) : rng.next_int(env.dims.na);
    s = step(env.transition, s, a, env.dims.nd, rng);
    const State z = observe(env.observation, s, env.dims.nd, rng);
    traj.steps.push_back(TrajectoryStep{a, z, policy ? a : -1});
  }
  return traj;
}

}  // namespace gridplan
