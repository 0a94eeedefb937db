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
#include <vector>

#include "gridplan/rng.hpp"
#include "gridplan/types.hpp"

namespace gridplan {

/// Teacher forcing switch: Target feeds the one-hot of the previous
/// observation as the next input belief, Output feeds the network's own
/// prediction forward.
enum class Recurrence { kTarget, kOutput };

enum class BpSchedule { kRmsProp, kLinearDecay, kFilterWiseDecay };

struct BpTrainConfig {
  Recurrence recurrence = Recurrence::kTarget;
  BpSchedule schedule = BpSchedule::kFilterWiseDecay;
  double alpha0 = 1.0;
  double rmsprop_rho = 0.9;
  double rmsprop_eps = 1e-8;
  double decay = 0.01;  // filter-wise / linear decay constant
  // L2 cap on the per-step gradient (0 disables). The normalizer inside the
  // gradient is the inverse of the predicted window mass, so steps where the
  // model assigns little mass to the observed window produce arbitrarily
  // large gradients; the cap keeps event frequency, not event surprise, in
  // charge of the equilibrium.
  double grad_clip = 1.0;
  int epochs = 1;
  std::uint64_t seed = 0;
  bool check_invariants = false;  // validate the touched filter after every update

  void validate() const;
};

struct BpLossSample {
  long step = 0;
  double loss = 0.0;
  int action = 0;
  double alpha = 0.0;
};

struct BpTrainReport {
  TransitionModel learnt;
  std::vector<BpLossSample> loss_curve;
  std::optional<double> transition_error;  // set when ground truth was supplied
  long resets = 0;
};

/// Random starting point for training: uniform(0,1) entries, each filter
/// normalized to sum 1.
TransitionModel init_transition(int na, int w, Rng& rng);

struct BpStepResult {
  Mat grad;     // nt x nt, d(loss)/d(filter of the executed action)
  double loss;  // sum of squared belief differences
};

/// Forward pass plus the closed-form gradient of the squared-error belief
/// loss with respect to the executed action's filter. The prediction is the
/// full filter step (motion update, observation masking, normalization);
/// the normalizer is treated as a constant of the forward pass, so the
/// gradient is the masked error signal correlated against the input belief.
/// Throws TotalMassZero when the masked prediction has no mass.
BpStepResult bp_step_gradient(const Belief& b_in, int action, const State& z,
                              const Belief& b_target, const TransitionModel& t,
                              const ObservationModel& o);

/// Projects a filter onto the feasible set: entries clipped to [0,1], then
/// normalized; an all-zero result resets to uniform.
Mat project_filter(const Mat& filter);

/// Online gradient training of the transition model on random-exploration
/// trajectories. Each step t >= 1 of a trajectory is one training example:
/// the input belief is the one-hot of the previous observation (target
/// recurrence) or the previous network output (output recurrence), and the
/// target is the one-hot of the current observation. Only the executed
/// action's filter is updated, then projected back onto the feasible set.
/// When truth is supplied the report carries the final transition error.
BpTrainReport train_transition(const std::vector<Trajectory>& trajectories,
                               const ObservationModel& o, const GridDims& dims,
                               const BpTrainConfig& cfg, const TransitionModel* truth = nullptr);

/// Counting baseline: tallies observed displacements between consecutive
/// observations (displacements outside the [-w,w] window are ignored) and
/// normalizes each action's counts. Zero-count filters come out uniform.
TransitionModel naive_count(const std::vector<Trajectory>& trajectories, const GridDims& dims);

/// Weighted counting baseline (counting over belief values): each step
/// propagates the one-hot of the previous observation through the evolving
/// count estimate and adds the resulting posterior, correlated against the
/// input, to the executed action's counts. The estimate feeds back into its
/// own counts, which is what separates it from naive_count under partial
/// observability; with exact observations the two coincide.
TransitionModel weighted_count(const std::vector<Trajectory>& trajectories,
                               const ObservationModel& o, const GridDims& dims);

/// Sum of squared element-wise differences over all actions and filter
/// entries.
double transition_error(const TransitionModel& learnt, const TransitionModel& truth);

}  // namespace gridplan
