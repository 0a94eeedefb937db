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

#include "gridplan/vi.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace gridplan {

TransitionModel flip_transition(const TransitionModel& t) {
  TransitionModel out;
  out.filters.reserve(t.filters.size());
  const int nt = t.nt();
  for (const Mat& f : t.filters) {
    Mat g(nt, nt);
    for (int m = 0; m < nt; ++m)
      for (int n = 0; n < nt; ++n) g(m, n) = f(nt - 1 - m, nt - 1 - n);
    out.filters.push_back(std::move(g));
  }
  return out;
}

void conv2_accumulate(const Mat& in, const Mat& kernel, double scale, Mat& out) {
  const int nd_r = in.rows();
  const int nd_c = in.cols();
  const int r = (kernel.rows() - 1) / 2;
  for (int u = -r; u <= r; ++u) {
    for (int v = -r; v <= r; ++v) {
      const double c = scale * kernel(u + r, v + r);
      if (c == 0.0) continue;
      const int i0 = std::max(0, u);
      const int i1 = std::min(nd_r, nd_r + u);
      const int j0 = std::max(0, v);
      const int j1 = std::min(nd_c, nd_c + v);
      for (int i = i0; i < i1; ++i) {
        const double* src = in.row(i - u) + (j0 - v);
        double* dst = out.row(i) + j0;
        for (int j = j0; j < j1; ++j) *dst++ += c * *src++;
      }
    }
  }
}

namespace {

void check_update_shapes(const ValueFunction& v, const TransitionModel& t, const RewardFunction& r) {
  if (t.num_actions() == 0 || r.num_actions() != t.num_actions())
    throw std::invalid_argument("value update: action count mismatch");
  if (r.nd() != v.nd() || r.planes.front().cols() != v.values.cols())
    throw std::invalid_argument("value update: plane shape mismatch");
  if (t.nt() > v.nd()) throw std::invalid_argument("value update: filter larger than grid");
}

void max_into(const Mat& plane, Mat& acc) {
  const double* src = plane.data();
  double* dst = acc.data();
  for (int k = 0; k < acc.size(); ++k) dst[k] = std::max(dst[k], src[k]);
}

}  // namespace

void conv_value_update_into(const ValueFunction& v, const TransitionModel& t_flipped,
                            const RewardFunction& r, double gamma, QFunction& q_out, Mat& v_out,
                            bool parallel) {
  check_update_shapes(v, t_flipped, r);
  const int na = t_flipped.num_actions();
  q_out.planes.resize(static_cast<std::size_t>(na));

  auto compute_plane = [&](int a) {
    Mat& q = q_out.planes[static_cast<std::size_t>(a)];
    q = r.planes[static_cast<std::size_t>(a)];
    conv2_accumulate(v.values, t_flipped.filters[static_cast<std::size_t>(a)], gamma, q);
  };

  if (parallel && na > 1) {
    std::vector<std::future<void>> jobs;
    jobs.reserve(static_cast<std::size_t>(na));
    for (int a = 0; a < na; ++a) jobs.push_back(std::async(std::launch::async, compute_plane, a));
    for (auto& j : jobs) j.get();
  } else {
    for (int a = 0; a < na; ++a) compute_plane(a);
  }

  v_out = q_out.planes.front();
  for (int a = 1; a < na; ++a) max_into(q_out.planes[static_cast<std::size_t>(a)], v_out);
}

ValueUpdate conv_value_update(const ValueFunction& v, const TransitionModel& t_flipped,
                              const RewardFunction& r, double gamma) {
  ValueUpdate out;
  conv_value_update_into(v, t_flipped, r, gamma, out.q_next, out.v_next.values);
  return out;
}

void naive_value_update_into(const ValueFunction& v, const TransitionModel& t,
                             const RewardFunction& r, double gamma, Mat& v_out) {
  check_update_shapes(v, t, r);
  const int nd = v.nd();
  const int na = t.num_actions();
  const int w = t.radius();
  v_out = Mat(nd, nd);
  for (int i = 0; i < nd; ++i) {
    for (int j = 0; j < nd; ++j) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < na; ++a) {
        const Mat& f = t.filters[static_cast<std::size_t>(a)];
        double acc = 0.0;
        for (int u = -w; u <= w; ++u) {
          for (int vv = -w; vv <= w; ++vv) {
            const int si = i + u;
            const int sj = j + vv;
            if (si < 0 || si >= nd || sj < 0 || sj >= nd) continue;
            acc += f(u + w, vv + w) * v.values(si, sj);
          }
        }
        best = std::max(best, r.planes[static_cast<std::size_t>(a)](i, j) + gamma * acc);
      }
      v_out(i, j) = best;
    }
  }
}

ValueFunction naive_value_update(const ValueFunction& v, const TransitionModel& t,
                                 const RewardFunction& r, double gamma) {
  ValueFunction out;
  naive_value_update_into(v, t, r, gamma, out.values);
  return out;
}

Policy greedy_policy(const QFunction& q) {
  const int nd = q.nd();
  const int na = q.num_actions();
  Policy p(nd);
  for (int i = 0; i < nd; ++i) {
    for (int j = 0; j < nd; ++j) {
      int best_a = 0;
      double best = q.planes[0](i, j);
      for (int a = 1; a < na; ++a) {
        const double x = q.planes[static_cast<std::size_t>(a)](i, j);
        if (x > best) {
          best = x;
          best_a = a;
        }
      }
      p.at(i, j) = best_a;
    }
  }
  return p;
}

int default_max_iterations(double gamma) {
  return 10 * static_cast<int>(std::ceil(1.0 / (1.0 - gamma)));
}

ViResult value_iterate(const TransitionModel& t, const RewardFunction& r, double gamma,
                       const ViOptions& options) {
  if (!(options.epsilon > 0.0)) throw std::invalid_argument("value_iterate: epsilon must be > 0");
  const int max_iter = options.max_iter > 0 ? options.max_iter : default_max_iterations(gamma);
  if (max_iter < 1) throw std::invalid_argument("value_iterate: max_iter must be >= 1");

  const TransitionModel flipped = flip_transition(t);
  ViResult res;
  res.v.values = Mat(r.nd(), r.planes.front().cols(), 0.0);

  Mat v_next;
  for (int k = 0; k < max_iter; ++k) {
    conv_value_update_into(res.v, flipped, r, gamma, res.q, v_next, options.parallel);
    res.final_residual = max_abs_diff(v_next, res.v.values);
    res.residual_log.push_back(res.final_residual);
    std::swap(res.v.values, v_next);
    res.iterations = k + 1;
    if (res.final_residual < options.epsilon) break;
  }
  res.policy = greedy_policy(res.q);
  return res;
}

}  // namespace gridplan
