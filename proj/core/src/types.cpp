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

#include "gridplan/types.hpp"

#include <cmath>
#include <limits>

namespace gridplan {

namespace {
constexpr double kFilterSumTol = 1e-9;
}

double Mat::sum() const {
  double acc = 0.0;
  for (double x : v_) acc += x;
  return acc;
}

double Mat::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v_) m = std::max(m, x);
  return m;
}

double Mat::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (double x : v_) m = std::min(m, x);
  return m;
}

bool Mat::all_finite() const {
  for (double x : v_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  const double* pa = a.data();
  const double* pb = b.data();
  for (int k = 0; k < a.size(); ++k) m = std::max(m, std::abs(pa[k] - pb[k]));
  return m;
}

GridDims::GridDims(int nd_, int na_, int w_, int h_, double gamma_)
    : nd(nd_), na(na_), w(w_), h(h_), gamma(gamma_) {
  if (nd <= 0) throw InvariantViolation("GridDims: nd must be positive");
  if (na <= 0) throw InvariantViolation("GridDims: na must be positive");
  if (w < 0 || h < 0) throw InvariantViolation("GridDims: radii must be non-negative");
  if (nt() > nd) throw InvariantViolation("GridDims: transition window 2w+1 exceeds grid side");
  if (no() > nd) throw InvariantViolation("GridDims: observation window 2h+1 exceeds grid side");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvariantViolation("GridDims: gamma must lie in [0,1)");
}

void TransitionModel::validate(const std::string& context) const {
  if (filters.empty()) throw InvariantViolation(context + ": no filters");
  const int n = filters.front().rows();
  if (n % 2 == 0) throw InvariantViolation(context + ": filter side must be odd");
  for (std::size_t a = 0; a < filters.size(); ++a) {
    const Mat& f = filters[a];
    if (f.rows() != n || f.cols() != n)
      throw InvariantViolation(context + ": filter " + std::to_string(a) + " has inconsistent shape");
    double s = 0.0;
    for (int k = 0; k < f.size(); ++k) {
      const double x = f.data()[k];
      if (!(x >= 0.0 && x <= 1.0))
        throw InvariantViolation(context + ": filter " + std::to_string(a) +
                                 " entry outside [0,1]");
      s += x;
    }
    if (std::abs(s - 1.0) > kFilterSumTol)
      throw InvariantViolation(context + ": filter " + std::to_string(a) +
                               " sums to " + std::to_string(s) + ", expected 1");
  }
}

void RewardFunction::validate(const std::string& context) const {
  if (planes.empty()) throw InvariantViolation(context + ": no planes");
  for (std::size_t a = 0; a < planes.size(); ++a) {
    if (!planes[a].same_shape(planes.front()))
      throw InvariantViolation(context + ": plane " + std::to_string(a) + " has inconsistent shape");
    if (!planes[a].all_finite())
      throw InvariantViolation(context + ": plane " + std::to_string(a) + " has non-finite entries");
  }
}

void Belief::validate(const std::string& context) const {
  double s = 0.0;
  for (int k = 0; k < mass.size(); ++k) {
    const double x = mass.data()[k];
    if (x < 0.0) throw InvariantViolation(context + ": negative mass");
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-12)
    throw InvariantViolation(context + ": mass sums to " + std::to_string(s) + ", expected 1");
}

void ObservationModel::validate(const std::string& context) const {
  const int n = kernel.rows();
  if (n <= 0 || n % 2 == 0 || kernel.cols() != n)
    throw InvariantViolation(context + ": kernel must be square with odd side");
  double s = 0.0;
  for (int k = 0; k < kernel.size(); ++k) {
    const double x = kernel.data()[k];
    if (!(x >= 0.0 && x <= 1.0)) throw InvariantViolation(context + ": entry outside [0,1]");
    s += x;
  }
  if (std::abs(s - 1.0) > kFilterSumTol)
    throw InvariantViolation(context + ": kernel sums to " + std::to_string(s) + ", expected 1");
}

bool ObservationModel::is_deterministic() const {
  return kernel.max_value() >= 1.0 - 1e-9;
}

void Trajectory::validate(int na, int nd, const std::string& context) const {
  if (steps.empty()) throw InvariantViolation(context + ": empty trajectory");
  const bool expert = steps.front().expert_action >= 0;
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const TrajectoryStep& st = steps[t];
    if (st.action < 0 || st.action >= na)
      throw InvariantViolation(context + ": step " + std::to_string(t) + " action out of range");
    if (!in_bounds(st.observed, nd))
      throw InvariantViolation(context + ": step " + std::to_string(t) + " observation out of grid");
    if ((st.expert_action >= 0) != expert)
      throw InvariantViolation(context + ": expert actions must be present for all steps or none");
    if (st.expert_action >= na)
      throw InvariantViolation(context + ": step " + std::to_string(t) + " expert action out of range");
  }
}

void Policy::validate(int na, const std::string& context) const {
  if (static_cast<int>(actions.size()) != nd * nd)
    throw InvariantViolation(context + ": size does not match nd");
  for (int a : actions) {
    if (a < 0 || a >= na) throw InvariantViolation(context + ": action index out of range");
  }
}

Belief one_hot_belief(const State& s, const GridDims& dims) {
  if (!in_bounds(s, dims.nd)) throw std::invalid_argument("one_hot_belief: state out of bounds");
  Belief b{Mat(dims.nd, dims.nd, 0.0)};
  b.mass(s.i, s.j) = 1.0;
  return b;
}

Belief uniform_belief(const GridDims& dims) {
  return Belief{Mat(dims.nd, dims.nd, 1.0 / dims.states())};
}

}  // namespace gridplan
