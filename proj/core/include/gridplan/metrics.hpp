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

struct EvalReport {
  double replanning_accuracy_pct = 0.0;
  double expected_reward_increase_pct = 0.0;
  long states_excluded = 0;
};

/// Percentage of states whose action matches the reference policy. Both
/// policies must come from the same lowest-index tie-break rule for the
/// comparison to be meaningful.
double replanning_accuracy(const Policy& learnt, const Policy& reference);

/// Iterative evaluation of a fixed policy under the true model:
/// V(s) <- R(pi(s), s) + gamma * sum_{u,v} T_{pi(s)}(u,v) V(s + (u,v)),
/// zero padding, until the max-norm residual drops below epsilon.
ValueFunction policy_evaluation(const Policy& policy, const TransitionModel& t_true,
                                const RewardFunction& r_true, double gamma, double epsilon,
                                int max_iter = 0);

struct RewardIncrease {
  double pct = 0.0;
  long excluded = 0;
};

/// Mean relative value change, in percent: 100/N * sum_s (v_learnt(s) -
/// v_orig(s)) / v_orig(s). States with |v_orig| < 1e-9 are excluded from
/// the mean and counted; throws when every state is excluded.
RewardIncrease expected_reward_increase(const ValueFunction& v_learnt, const ValueFunction& v_orig);

}  // namespace gridplan
