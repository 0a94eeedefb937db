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

#include "gridplan/metrics.hpp"

#include <cmath>

#include "gridplan/vi.hpp"

namespace gridplan {

double replanning_accuracy(const Policy& learnt, const Policy& reference) {
  if (learnt.nd != reference.nd || learnt.actions.size() != reference.actions.size())
    throw std::invalid_argument("replanning_accuracy: dimension mismatch");
  long matches = 0;
  for (std::size_t k = 0; k < learnt.actions.size(); ++k)
    if (learnt.actions[k] == reference.actions[k]) ++matches;
  return 100.0 * static_cast<double>(matches) / static_cast<double>(learnt.actions.size());
}

ValueFunction policy_evaluation(const Policy& policy, const TransitionModel& t_true,
                                const RewardFunction& r_true, double gamma, double epsilon,
                                int max_iter) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("policy_evaluation: epsilon must be > 0");
  const int nd = r_true.nd();
  if (policy.nd != nd) throw std::invalid_argument("policy_evaluation: policy size mismatch");
  policy.validate(t_true.num_actions(), "policy_evaluation");
  const int w = t_true.radius();
  if (max_iter <= 0) max_iter = default_max_iterations(gamma);

  ValueFunction v{Mat(nd, nd, 0.0)};
  Mat next(nd, nd, 0.0);
  for (int iter = 0; iter < max_iter; ++iter) {
    for (int i = 0; i < nd; ++i) {
      for (int j = 0; j < nd; ++j) {
        const int a = policy.at(i, j);
        const Mat& f = t_true.filters[static_cast<std::size_t>(a)];
        double acc = 0.0;
        for (int u = -w; u <= w; ++u) {
          const int si = i + u;
          if (si < 0 || si >= nd) continue;
          for (int vv = -w; vv <= w; ++vv) {
            const int sj = j + vv;
            if (sj < 0 || sj >= nd) continue;
            acc += f(u + w, vv + w) * v.values(si, sj);
          }
        }
        next(i, j) = r_true.planes[static_cast<std::size_t>(a)](i, j) + gamma * acc;
      }
    }
    const double residual = max_abs_diff(next, v.values);
    std::swap(v.values, next);
    if (residual < epsilon) break;
  }
  return v;
}

RewardIncrease expected_reward_increase(const ValueFunction& v_learnt, const ValueFunction& v_orig) {
  if (!v_learnt.values.same_shape(v_orig.values))
    throw std::invalid_argument("expected_reward_increase: dimension mismatch");
  constexpr double kZeroTol = 1e-9;
  double acc = 0.0;
  long included = 0;
  RewardIncrease out;
  for (int k = 0; k < v_orig.values.size(); ++k) {
    const double vo = v_orig.values.data()[k];
    if (std::abs(vo) < kZeroTol) {
      ++out.excluded;
      continue;
    }
    acc += (v_learnt.values.data()[k] - vo) / vo;
    ++included;
  }
  if (included == 0)
    throw InvariantViolation("expected_reward_increase: every state was excluded");
  out.pct = 100.0 * acc / static_cast<double>(included);
  return out;
}

}  // namespace gridplan
