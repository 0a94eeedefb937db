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

#include "gridplan/reward_learning.hpp"

#include <algorithm>
#include <cmath>

#include "gridplan/filter.hpp"
#include "gridplan/rng.hpp"
#include "gridplan/vi.hpp"

namespace gridplan {

namespace {
constexpr double kFinalViEpsilon = 1e-4;
}

void QmdpTrainConfig::validate() const {
  // alpha0 == 0 is allowed as a degenerate no-learning diagnostic.
  if (!(alpha0 >= 0.0)) throw InvariantViolation("QmdpTrainConfig: alpha0 must be >= 0");
  if (epochs < 1) throw InvariantViolation("QmdpTrainConfig: epochs must be >= 1");
  if (!(vi_epsilon > 0.0)) throw InvariantViolation("QmdpTrainConfig: vi_epsilon must be > 0");
  if (!(rmsprop_rho > 0.0 && rmsprop_rho < 1.0))
    throw InvariantViolation("QmdpTrainConfig: rmsprop_rho must lie in (0,1)");
}

std::vector<double> qmdp_values(const QFunction& q, const Belief& b) {
  if (q.nd() != b.nd() || q.planes.front().cols() != b.mass.cols())
    throw std::invalid_argument("qmdp_values: shape mismatch");
  std::vector<double> out(static_cast<std::size_t>(q.num_actions()), 0.0);
  for (int a = 0; a < q.num_actions(); ++a) {
    const double* qp = q.planes[static_cast<std::size_t>(a)].data();
    const double* bp = b.mass.data();
    double acc = 0.0;
    for (int k = 0; k < b.mass.size(); ++k) acc += qp[k] * bp[k];
    out[static_cast<std::size_t>(a)] = acc;
  }
  return out;
}

std::vector<double> action_distribution(const std::vector<double>& qb) {
  if (qb.empty()) throw std::invalid_argument("action_distribution: empty input");
  const double m = *std::max_element(qb.begin(), qb.end());
  std::vector<double> y(qb.size());
  double z = 0.0;
  for (std::size_t a = 0; a < qb.size(); ++a) {
    y[a] = std::exp(qb[a] - m);
    z += y[a];
  }
  for (double& v : y) v /= z;
  return y;
}

double cross_entropy(const std::vector<double>& y, int target_action) {
  if (target_action < 0 || target_action >= static_cast<int>(y.size()))
    throw std::invalid_argument("cross_entropy: target out of range");
  return -std::log(y[static_cast<std::size_t>(target_action)]);
}

RewardFunction reward_gradient_step(const RewardFunction& r, const std::vector<double>& y,
                                    int target_action, const Belief& b, double alpha) {
  if (static_cast<int>(y.size()) != r.num_actions())
    throw std::invalid_argument("reward_gradient_step: action count mismatch");
  RewardFunction out = r;
  for (int a = 0; a < r.num_actions(); ++a) {
    const double coeff = alpha * (y[static_cast<std::size_t>(a)] - (a == target_action ? 1.0 : 0.0));
    if (coeff == 0.0) continue;
    double* rp = out.planes[static_cast<std::size_t>(a)].data();
    const double* bp = b.mass.data();
    for (int k = 0; k < b.mass.size(); ++k) rp[k] -= coeff * bp[k];
  }
  return out;
}

std::vector<ReplaySample> build_replay_samples(const std::vector<Trajectory>& expert,
                                               const TransitionModel& t_model,
                                               const ObservationModel& o, const GridDims& dims,
                                               long* resets) {
  if (expert.empty()) throw InvariantViolation("build_replay_samples: no trajectories");
  std::vector<ReplaySample> samples;
  for (const Trajectory& traj : expert) {
    traj.validate(dims.na, dims.nd);
    if (!traj.has_expert_actions())
      throw InvariantViolation("build_replay_samples: trajectory lacks expert actions");
    Belief b = uniform_belief(dims);
    for (int k = 0; k < traj.length(); ++k) {
      const TrajectoryStep& st = traj.steps[static_cast<std::size_t>(k)];
      if (k >= 1) samples.push_back(ReplaySample{b, st.expert_action});
      try {
        b = propagate(b, st.action, st.observed, t_model, o);
      } catch (const TotalMassZero&) {
        if (resets) ++*resets;
        b = one_hot_belief(st.observed, dims);
      }
    }
  }
  return samples;
}

QmdpTrainReport train_reward(const std::vector<Trajectory>& expert, const TransitionModel& t_model,
                             const ObservationModel& o, const GridDims& dims,
                             const QmdpTrainConfig& cfg) {
  cfg.validate();
  QmdpTrainReport report;

  std::vector<ReplaySample> samples =
      build_replay_samples(expert, t_model, o, dims, &report.belief_resets);
  if (cfg.replay_capacity > 0 && samples.size() > cfg.replay_capacity)
    samples.erase(samples.begin(),
                  samples.begin() + static_cast<std::ptrdiff_t>(samples.size() - cfg.replay_capacity));
  if (samples.empty())
    throw InvariantViolation("train_reward: trajectories too short to produce samples");

  const long n = static_cast<long>(samples.size());
  const long total = n * cfg.epochs;
  // Delayed feedback replans once per trajectory-sized block of draws.
  const long replan_period =
      std::max<long>(1, (n + static_cast<long>(expert.size()) - 1) / static_cast<long>(expert.size()));

  RewardFunction r;
  r.planes.assign(static_cast<std::size_t>(dims.na), Mat(dims.nd, dims.nd, 0.0));
  QFunction q;
  q.planes.assign(static_cast<std::size_t>(dims.na), Mat(dims.nd, dims.nd, 0.0));

  std::vector<Mat> rms_acc;
  if (cfg.schedule == QmdpSchedule::kRmsProp)
    rms_acc.assign(static_cast<std::size_t>(dims.na), Mat(dims.nd, dims.nd, 0.0));

  Rng rng = Rng(cfg.seed).split("qmdp.replay");
  ViOptions train_vi{cfg.vi_epsilon, 0, false};

  report.loss_curve.reserve(static_cast<std::size_t>(total));
  for (long step = 0; step < total; ++step) {
    const ReplaySample& sample =
        samples[static_cast<std::size_t>(cfg.replay ? rng.next_int(static_cast<int>(n)) : step % n)];

    const std::vector<double> y = action_distribution(qmdp_values(q, sample.belief));
    const double loss = cross_entropy(y, sample.target_action);

    if (cfg.schedule == QmdpSchedule::kRmsProp) {
      for (int a = 0; a < dims.na; ++a) {
        const double err = y[static_cast<std::size_t>(a)] - (a == sample.target_action ? 1.0 : 0.0);
        double* rp = r.planes[static_cast<std::size_t>(a)].data();
        double* acc = rms_acc[static_cast<std::size_t>(a)].data();
        const double* bp = sample.belief.mass.data();
        for (int k = 0; k < sample.belief.mass.size(); ++k) {
          const double g = err * bp[k];
          acc[k] = cfg.rmsprop_rho * acc[k] + (1.0 - cfg.rmsprop_rho) * g * g;
          rp[k] -= cfg.alpha0 * g / (std::sqrt(acc[k]) + cfg.rmsprop_eps);
        }
      }
    } else {
      const double alpha = cfg.alpha0 * std::max(0.0, 1.0 - static_cast<double>(step) / total);
      r = reward_gradient_step(r, y, sample.target_action, sample.belief, alpha);
    }

    if (cfg.feedback == Feedback::kImmediate || (step + 1) % replan_period == 0) {
      q = value_iterate(t_model, r, dims.gamma, train_vi).q;
      ++report.replans;
    }
    report.loss_curve.push_back(QmdpLossSample{step, loss, report.replans});
  }

  ViResult final_plan = value_iterate(t_model, r, dims.gamma, ViOptions{kFinalViEpsilon, 0, false});
  ++report.replans;
  report.learnt_reward = std::move(r);
  report.final_q = std::move(final_plan.q);
  report.policy = std::move(final_plan.policy);
  return report;
}

}  // namespace gridplan
