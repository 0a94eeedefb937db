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

#include "gridplan/types.hpp"

namespace gridplan {

struct ViResult {
  ValueFunction v;
  QFunction q;
  Policy policy;
  int iterations = 0;
  double final_residual = 0.0;
  std::vector<double> residual_log;  // max-norm residual per iteration
};

struct ViOptions {
  double epsilon = 1e-4;
  int max_iter = 0;      // 0: use 10 * ceil(1 / (1 - gamma))
  bool parallel = false; // compute per-action Q planes on worker threads
};

/// Rotates every filter by 180 degrees: out[a](m,n) = in[a](nt-1-m, nt-1-n).
/// Convolving a value plane with the flipped filter equals the Bellman sum
/// over successor states with the original one.
TransitionModel flip_transition(const TransitionModel& t);

/// Zero-padded same-size convolution: out(i,j) += scale * sum_{u,v}
/// kernel(u+r, v+r) * in(i-u, j-v). The loop order is filter-centric: each
/// kernel tap contributes one shifted, contiguous plane accumulation.
void conv2_accumulate(const Mat& in, const Mat& kernel, double scale, Mat& out);

/// One Bellman update in convolutional form. t_flipped must already be
/// flipped. q_out(a) = R(a) + gamma * conv(v, t_flipped[a]); v_out =
/// element-wise max over actions. Output containers are resized as needed.
void conv_value_update_into(const ValueFunction& v, const TransitionModel& t_flipped,
                            const RewardFunction& r, double gamma, QFunction& q_out, Mat& v_out,
                            bool parallel = false);

struct ValueUpdate {
  ValueFunction v_next;
  QFunction q_next;
};

ValueUpdate conv_value_update(const ValueFunction& v, const TransitionModel& t_flipped,
                              const RewardFunction& r, double gamma);

/// Reference Bellman update: a direct four-nested-loop sweep over states,
/// actions and the displacement window, with out-of-grid successors
/// contributing zero. Used as the equivalence oracle and the timing
/// baseline for the convolutional path. t is the unflipped model.
ValueFunction naive_value_update(const ValueFunction& v, const TransitionModel& t,
                                 const RewardFunction& r, double gamma);

void naive_value_update_into(const ValueFunction& v, const TransitionModel& t,
                             const RewardFunction& r, double gamma, Mat& v_out);

/// Greedy policy from Q planes; ties break toward the lowest action index.
Policy greedy_policy(const QFunction& q);

/// Iterates the convolutional Bellman update from v = 0 until the max-norm
/// residual drops below epsilon or max_iter is reached.
ViResult value_iterate(const TransitionModel& t, const RewardFunction& r, double gamma,
                       const ViOptions& options = {});

/// Default iteration cap used when ViOptions::max_iter is 0.
int default_max_iterations(double gamma);

}  // namespace gridplan
