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

#include <vector>

#include "gridplan/types.hpp"

namespace gridplan {

enum class QmdpSchedule { kRmsProp, kLinearDecay };
enum class Feedback { kImmediate, kDelayed };

struct QmdpTrainConfig {
  QmdpSchedule schedule = QmdpSchedule::kLinearDecay;
  double alpha0 = 1.0;
  bool replay = true;               // draw samples uniformly from the buffer
  std::size_t replay_capacity = 0;  // 0: keep every sample
  Feedback feedback = Feedback::kDelayed;
  int epochs = 3;
  double vi_epsilon = 1e-2;  // replanning tolerance during training
  double rmsprop_rho = 0.9;
  double rmsprop_eps = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One demonstration example: the belief held when the expert acted, and
/// the action the expert chose.
struct ReplaySample {
  Belief belief;
  int target_action = 0;
};

struct QmdpLossSample {
  long step = 0;
  double cross_entropy = 0.0;
  long replans = 0;  // cumulative replans when this sample was taken
};

struct QmdpTrainReport {
  RewardFunction learnt_reward;
  QFunction final_q;
  Policy policy;
  std::vector<QmdpLossSample> loss_curve;
  long replans = 0;
  long belief_resets = 0;
};

/// Belief-space action values: out[a] = sum_s q(a,s) * b(s).
std::vector<double> qmdp_values(const QFunction& q, const Belief& b);

/// Numerically stable softmax over belief-space action values.
std::vector<double> action_distribution(const std::vector<double>& qb);

/// Cross-entropy against a one-hot target: -ln y[target].
double cross_entropy(const std::vector<double>& y, int target_action);

/// Closed-form reward update: R'(a,s) = R(a,s) - alpha * (y[a] - [a ==
/// target]) * b(s). The belief weights the update onto the states the agent
/// is believed to occupy.
RewardFunction reward_gradient_step(const RewardFunction& r, const std::vector<double>& y,
                                    int target_action, const Belief& b, double alpha);

/// Builds the per-step demonstration samples for a set of expert
/// trajectories: beliefs are propagated with the supplied transition model
/// (resetting to the one-hot observation when the correction empties them),
/// and each belief from step 1 on is paired with the expert's action.
std::vector<ReplaySample> build_replay_samples(const std::vector<Trajectory>& expert,
                                               const TransitionModel& t_model,
                                               const ObservationModel& o, const GridDims& dims,
                                               long* resets = nullptr);

/// Inverse reinforcement learning through the QMDP action distribution:
/// starts from a zero reward, applies the closed-form update per drawn
/// sample, and replans Q with value iteration — after every sample
/// (immediate feedback) or after each trajectory-sized block of samples
/// (delayed). The final report replans at epsilon 1e-4.
QmdpTrainReport train_reward(const std::vector<Trajectory>& expert, const TransitionModel& t_model,
                             const ObservationModel& o, const GridDims& dims,
                             const QmdpTrainConfig& cfg);

}  // namespace gridplan
