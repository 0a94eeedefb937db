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

#include "gridplan/transition_learning.hpp"

#include <algorithm>
#include <cmath>

#include "gridplan/environment.hpp"
#include "gridplan/filter.hpp"

namespace gridplan {

void BpTrainConfig::validate() const {
  if (!(alpha0 > 0.0)) throw InvariantViolation("BpTrainConfig: alpha0 must be > 0");
  if (!(rmsprop_rho > 0.0 && rmsprop_rho < 1.0))
    throw InvariantViolation("BpTrainConfig: rmsprop_rho must lie in (0,1)");
  if (!(rmsprop_eps > 0.0)) throw InvariantViolation("BpTrainConfig: rmsprop_eps must be > 0");
  if (decay < 0.0) throw InvariantViolation("BpTrainConfig: decay must be >= 0");
  if (grad_clip < 0.0) throw InvariantViolation("BpTrainConfig: grad_clip must be >= 0");
  if (epochs < 1) throw InvariantViolation("BpTrainConfig: epochs must be >= 1");
}

TransitionModel init_transition(int na, int w, Rng& rng) {
  return random_transition_model(na, w, rng);
}

namespace {

struct ForwardResult {
  Belief b_pred;
  Mat grad;
  double loss = 0.0;
};

// Masking applied to the motion prediction before the loss. kKernel weights
// window cells by the observation kernel (the published bp_step_gradient
// contract). kAllOnes skips the correction and predicts with the normalized
// motion update alone; train_transition uses it because a corrected
// prediction is carried by the mask rather than the filter (a one-hot
// kernel pins it to the target outright), so a loss taken through the
// correction says little about the filter shape.
enum class BpMask { kKernel, kAllOnes };

ForwardResult bp_forward(const Belief& b_in, int action, const State& z, const Belief& b_target,
                         const TransitionModel& t, const ObservationModel& o, BpMask mask) {
  const int nd = b_in.nd();
  const int w = t.radius();
  const int nt = t.nt();
  const int h = o.radius();

  Mat b_bar = motion_update(b_in, t, action);

  const bool windowed = mask == BpMask::kKernel;
  const int i0 = windowed ? std::max(0, z.i - h) : 0;
  const int i1 = windowed ? std::min(nd - 1, z.i + h) : nd - 1;
  const int j0 = windowed ? std::max(0, z.j - h) : 0;
  const int j1 = windowed ? std::min(nd - 1, z.j + h) : nd - 1;
  auto mask_at = [&](int i, int j) {
    return windowed ? o.kernel(i - z.i + h, j - z.j + h) : 1.0;
  };

  Mat masked(nd, nd, 0.0);
  double total = 0.0;
  for (int i = i0; i <= i1; ++i) {
    for (int j = j0; j <= j1; ++j) {
      const double x = mask_at(i, j) * b_bar(i, j);
      masked(i, j) = x;
      total += x;
    }
  }
  if (!(total > 0.0)) throw TotalMassZero("bp_step: prediction has no mass");
  const double eta = 1.0 / total;

  ForwardResult res;
  res.b_pred.mass = Mat(nd, nd, 0.0);
  for (int i = i0; i <= i1; ++i)
    for (int j = j0; j <= j1; ++j) res.b_pred.mass(i, j) = masked(i, j) * eta;

  double loss = 0.0;
  for (int k = 0; k < res.b_pred.mass.size(); ++k) {
    const double d = b_target.mass.data()[k] - res.b_pred.mass.data()[k];
    loss += d * d;
  }
  res.loss = loss;

  // grad(u,v) = sum_{p,q} -2 (target - pred)(p,q) * eta * mask(p,q)
  //                       * b_in(p-u, q-v).
  // The error signal vanishes outside the masked window, so only window
  // cells contribute.
  res.grad = Mat(nt, nt, 0.0);
  for (int p = i0; p <= i1; ++p) {
    for (int q = j0; q <= j1; ++q) {
      const double m = mask_at(p, q);
      if (m == 0.0) continue;
      const double e = -2.0 * (b_target.mass(p, q) - res.b_pred.mass(p, q)) * eta * m;
      if (e == 0.0) continue;
      for (int u = -w; u <= w; ++u) {
        const int si = p - u;
        if (si < 0 || si >= nd) continue;
        for (int v = -w; v <= w; ++v) {
          const int sj = q - v;
          if (sj < 0 || sj >= nd) continue;
          res.grad(u + w, v + w) += e * b_in.mass(si, sj);
        }
      }
    }
  }
  return res;
}

Mat normalized_or_uniform(const Mat& counts) {
  const double s = counts.sum();
  Mat f = counts;
  if (s > 0.0) {
    for (int k = 0; k < f.size(); ++k) f.data()[k] /= s;
  } else {
    f.fill(1.0 / f.size());
  }
  return f;
}

}  // namespace

BpStepResult bp_step_gradient(const Belief& b_in, int action, const State& z,
                              const Belief& b_target, const TransitionModel& t,
                              const ObservationModel& o) {
  ForwardResult res = bp_forward(b_in, action, z, b_target, t, o, BpMask::kKernel);
  return BpStepResult{std::move(res.grad), res.loss};
}

Mat project_filter(const Mat& filter) {
  Mat out = filter;
  double sum = 0.0;
  for (int k = 0; k < out.size(); ++k) {
    const double x = std::clamp(out.data()[k], 0.0, 1.0);
    out.data()[k] = x;
    sum += x;
  }
  if (sum > 0.0) {
    for (int k = 0; k < out.size(); ++k) out.data()[k] /= sum;
  } else {
    out.fill(1.0 / out.size());
  }
  return out;
}

BpTrainReport train_transition(const std::vector<Trajectory>& trajectories,
                               const ObservationModel& o, const GridDims& dims,
                               const BpTrainConfig& cfg, const TransitionModel* truth) {
  cfg.validate();
  if (trajectories.empty()) throw InvariantViolation("train_transition: no trajectories");
  for (const Trajectory& traj : trajectories) traj.validate(dims.na, dims.nd);

  Rng rng(cfg.seed);
  Rng init_rng = rng.split("bp.init");
  TransitionModel model = init_transition(dims.na, dims.w, init_rng);



  long planned_updates = 0;
  for (const Trajectory& traj : trajectories)
    planned_updates += std::max(0, traj.length() - 1);
  planned_updates *= cfg.epochs;
  if (planned_updates == 0)
    throw InvariantViolation("train_transition: trajectories too short to train on");

  std::vector<Mat> rms_acc(static_cast<std::size_t>(dims.na), Mat(dims.nt(), dims.nt(), 0.0));
  std::vector<long> updates_per_action(static_cast<std::size_t>(dims.na), 0);

  BpTrainReport report;
  report.loss_curve.reserve(static_cast<std::size_t>(planned_updates));
  long t_step = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const Trajectory& traj : trajectories) {
      Belief recurrent;  // output-recurrence state
      if (cfg.recurrence == Recurrence::kOutput)
        recurrent = one_hot_belief(traj.steps.front().observed, dims);

      for (int k = 1; k < traj.length(); ++k) {
        const int a = traj.steps[static_cast<std::size_t>(k)].action;
        const State z = traj.steps[static_cast<std::size_t>(k)].observed;
        const Belief b_target = one_hot_belief(z, dims);
        const Belief& b_in =
            cfg.recurrence == Recurrence::kTarget
                ? one_hot_belief(traj.steps[static_cast<std::size_t>(k - 1)].observed, dims)
                : recurrent;

        ForwardResult fwd;
        try {
          fwd = bp_forward(b_in, a, z, b_target, model, o, BpMask::kAllOnes);
        } catch (const TotalMassZero&) {
          ++report.resets;
          if (cfg.recurrence == Recurrence::kOutput) recurrent = one_hot_belief(z, dims);
          continue;
        }

        if (cfg.grad_clip > 0.0) {
          double norm2 = 0.0;
          for (int c = 0; c < fwd.grad.size(); ++c) norm2 += fwd.grad.data()[c] * fwd.grad.data()[c];
          const double norm = std::sqrt(norm2);
          if (norm > cfg.grad_clip) {
            const double scale = cfg.grad_clip / norm;
            for (int c = 0; c < fwd.grad.size(); ++c) fwd.grad.data()[c] *= scale;
          }
        }

        Mat& filter = model.filters[static_cast<std::size_t>(a)];
        double alpha = cfg.alpha0;
        switch (cfg.schedule) {
          case BpSchedule::kRmsProp: {
            Mat& acc = rms_acc[static_cast<std::size_t>(a)];
            for (int c = 0; c < filter.size(); ++c) {
              const double g = fwd.grad.data()[c];
              acc.data()[c] = cfg.rmsprop_rho * acc.data()[c] + (1.0 - cfg.rmsprop_rho) * g * g;
              filter.data()[c] -= cfg.alpha0 * g / (std::sqrt(acc.data()[c]) + cfg.rmsprop_eps);
            }
            break;
          }
          case BpSchedule::kLinearDecay: {
            alpha = cfg.alpha0 * std::max(0.0, 1.0 - static_cast<double>(t_step) / planned_updates);
            for (int c = 0; c < filter.size(); ++c) filter.data()[c] -= alpha * fwd.grad.data()[c];
            break;
          }
          case BpSchedule::kFilterWiseDecay: {
            alpha = cfg.alpha0 /
                    (1.0 + cfg.decay * static_cast<double>(updates_per_action[static_cast<std::size_t>(a)]));
            for (int c = 0; c < filter.size(); ++c) filter.data()[c] -= alpha * fwd.grad.data()[c];
            break;
          }
        }
        filter = project_filter(filter);

        ++updates_per_action[static_cast<std::size_t>(a)];
        ++t_step;
        report.loss_curve.push_back(BpLossSample{t_step, fwd.loss, a, alpha});
        if (cfg.recurrence == Recurrence::kOutput) recurrent = std::move(fwd.b_pred);
        if (cfg.check_invariants) model.validate("train_transition (in-loop)");
      }
    }
  }

  if (truth) report.transition_error = transition_error(model, *truth);
  report.learnt = std::move(model);
  return report;
}

TransitionModel naive_count(const std::vector<Trajectory>& trajectories, const GridDims& dims) {
  if (trajectories.empty()) throw InvariantViolation("naive_count: no trajectories");
  const int w = dims.w;
  std::vector<Mat> counts(static_cast<std::size_t>(dims.na), Mat(dims.nt(), dims.nt(), 0.0));
  for (const Trajectory& traj : trajectories) {
    traj.validate(dims.na, dims.nd);
    for (int k = 1; k < traj.length(); ++k) {
      const State prev = traj.steps[static_cast<std::size_t>(k - 1)].observed;
      const State cur = traj.steps[static_cast<std::size_t>(k)].observed;
      const int u = cur.i - prev.i;
      const int v = cur.j - prev.j;
      if (u < -w || u > w || v < -w || v > w) continue;
      counts[static_cast<std::size_t>(traj.steps[static_cast<std::size_t>(k)].action)](u + w, v + w) += 1.0;
    }
  }
  TransitionModel model;
  model.filters.reserve(counts.size());
  for (const Mat& c : counts) model.filters.push_back(normalized_or_uniform(c));
  return model;
}

TransitionModel weighted_count(const std::vector<Trajectory>& trajectories,
                               const ObservationModel& o, const GridDims& dims) {
  if (trajectories.empty()) throw InvariantViolation("weighted_count: no trajectories");
  const int w = dims.w;
  std::vector<Mat> counts(static_cast<std::size_t>(dims.na), Mat(dims.nt(), dims.nt(), 0.0));
  TransitionModel model;
  model.filters.assign(static_cast<std::size_t>(dims.na),
                       Mat(dims.nt(), dims.nt(), 1.0 / (dims.nt() * dims.nt())));

  for (const Trajectory& traj : trajectories) {
    traj.validate(dims.na, dims.nd);
    for (int k = 1; k < traj.length(); ++k) {
      const int a = traj.steps[static_cast<std::size_t>(k)].action;
      const State prev = traj.steps[static_cast<std::size_t>(k - 1)].observed;
      const State z = traj.steps[static_cast<std::size_t>(k)].observed;

      // Teacher-forced belief step through the evolving estimate: the count
      // increment is the posterior belief correlated against the one-hot
      // input, i.e. the estimate's own explanation of the step. A step the
      // estimate cannot explain at all falls back to the plain observation
      // posterior.
      Belief after;
      try {
        after = propagate(one_hot_belief(prev, dims), a, z, model, o);
      } catch (const TotalMassZero&) {
        after = initial_belief(dims, o, z);
      }

      Mat& c = counts[static_cast<std::size_t>(a)];
      for (int u = -w; u <= w; ++u) {
        const int i = prev.i + u;
        if (i < 0 || i >= dims.nd) continue;
        for (int v = -w; v <= w; ++v) {
          const int j = prev.j + v;
          if (j < 0 || j >= dims.nd) continue;
          c(u + w, v + w) += after.mass(i, j);
        }
      }
      model.filters[static_cast<std::size_t>(a)] = normalized_or_uniform(c);
    }
  }
  for (int a = 0; a < dims.na; ++a)
    model.filters[static_cast<std::size_t>(a)] =
        normalized_or_uniform(counts[static_cast<std::size_t>(a)]);
  return model;
}

double transition_error(const TransitionModel& learnt, const TransitionModel& truth) {
  if (learnt.num_actions() != truth.num_actions() || learnt.nt() != truth.nt())
    throw std::invalid_argument("transition_error: dimension mismatch");
  double err = 0.0;
  for (int a = 0; a < learnt.num_actions(); ++a) {
    const Mat& x = learnt.filters[static_cast<std::size_t>(a)];
    const Mat& y = truth.filters[static_cast<std::size_t>(a)];
    for (int k = 0; k < x.size(); ++k) {
      const double d = x.data()[k] - y.data()[k];
      err += d * d;
    }
  }
  return err;
}

}  // namespace gridplan
