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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridplan {

/// Input data violated a documented invariant (bad filter sums, indices out
/// of range, inconsistent shapes in a loaded file). The CLI maps this to
/// exit code 2.
class InvariantViolation : public std::runtime_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

/// A text file (model, trajectory, config) could not be parsed. The message
/// names the file and the offending line.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Belief correction wiped out all probability mass: the observation is
/// inconsistent with the belief support. Callers decide the fallback
/// (training loops reset the belief and count the event).
class TotalMassZero : public std::runtime_error {
 public:
  explicit TotalMassZero(const std::string& what) : std::runtime_error(what) {}
};

/// Dense row-major matrix of doubles. All grid planes, transition filters
/// and observation kernels in the library are Mats.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, double value = 0.0)
      : rows_(rows), cols_(cols), v_(static_cast<std::size_t>(rows) * cols, value) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Mat: negative shape");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int size() const { return rows_ * cols_; }

  double& operator()(int i, int j) { return v_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return v_[static_cast<std::size_t>(i) * cols_ + j]; }

  double* row(int i) { return v_.data() + static_cast<std::size_t>(i) * cols_; }
  const double* row(int i) const { return v_.data() + static_cast<std::size_t>(i) * cols_; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  void fill(double value) { v_.assign(v_.size(), value); }
  double sum() const;
  double max_value() const;
  double min_value() const;
  bool all_finite() const;

  bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && v_ == o.v_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> v_;
};

/// Largest absolute element-wise difference; shapes must match.
double max_abs_diff(const Mat& a, const Mat& b);

/// Grid problem dimensions. nd: side length of the square state grid,
/// na: number of actions, w: transition neighborhood radius (filters are
/// nt x nt with nt = 2w+1), h: observation radius (kernels are no x no with
/// no = 2h+1), gamma: discount factor in [0,1).
struct GridDims {
  int nd = 0;
  int na = 0;
  int w = 0;
  int h = 0;
  double gamma = 0.0;

  GridDims() = default;
  GridDims(int nd_, int na_, int w_, int h_, double gamma_);

  int nt() const { return 2 * w + 1; }
  int no() const { return 2 * h + 1; }
  int states() const { return nd * nd; }
};

/// Grid cell; row 0 is the top of the grid.
struct State {
  int i = 0;
  int j = 0;
  bool operator==(const State&) const = default;
};

inline bool in_bounds(const State& s, int nd) {
  return s.i >= 0 && s.i < nd && s.j >= 0 && s.j < nd;
}

/// Per-action bank of nt x nt displacement filters. Filter cell (u+w, v+w)
/// holds the probability of the displacement (delta_row=u, delta_col=v),
/// u,v in [-w, w]. Each filter is a distribution: entries in [0,1] summing
/// to 1 within 1e-9.
struct TransitionModel {
  std::vector<Mat> filters;

  int num_actions() const { return static_cast<int>(filters.size()); }
  int nt() const { return filters.empty() ? 0 : filters.front().rows(); }
  int radius() const { return (nt() - 1) / 2; }

  void validate(const std::string& context = "TransitionModel") const;
};

/// Reward for taking action a in state s: one nd x nd plane per action.
struct RewardFunction {
  std::vector<Mat> planes;

  int num_actions() const { return static_cast<int>(planes.size()); }
  int nd() const { return planes.empty() ? 0 : planes.front().rows(); }

  void validate(const std::string& context = "RewardFunction") const;
};

struct ValueFunction {
  Mat values;

  int nd() const { return values.rows(); }
};

/// Action-value planes, one nd x nd plane per action.
struct QFunction {
  std::vector<Mat> planes;

  int num_actions() const { return static_cast<int>(planes.size()); }
  int nd() const { return planes.empty() ? 0 : planes.front().rows(); }
};

/// Probability mass over grid states; normalized to 1 within 1e-12.
struct Belief {
  Mat mass;

  int nd() const { return mass.rows(); }

  void validate(const std::string& context = "Belief") const;
};

/// no x no kernel of observation probabilities centred on the true state;
/// entry (du+h, dv+h) is the probability of observing offset (du, dv).
/// Sums to 1 within 1e-9.
struct ObservationModel {
  Mat kernel;

  int no() const { return kernel.rows(); }
  int radius() const { return (no() - 1) / 2; }

  void validate(const std::string& context = "ObservationModel") const;
  /// True when one kernel entry carries all the mass (observations are
  /// a deterministic function of the true state).
  bool is_deterministic() const;
};

/// One recorded interaction: the executed action and the observation
/// received after it. expert_action is -1 when the trajectory was produced
/// by random exploration.
struct TrajectoryStep {
  int action = -1;
  State observed;
  int expert_action = -1;
};

/// Time-ordered rollout record. Steps either all carry expert actions or
/// none do.
struct Trajectory {
  std::vector<TrajectoryStep> steps;

  bool has_expert_actions() const { return !steps.empty() && steps.front().expert_action >= 0; }
  int length() const { return static_cast<int>(steps.size()); }

  void validate(int na, int nd, const std::string& context = "Trajectory") const;
};

/// Greedy action index per state.
struct Policy {
  int nd = 0;
  std::vector<int> actions;

  Policy() = default;
  Policy(int nd_, int fill = 0) : nd(nd_), actions(static_cast<std::size_t>(nd_) * nd_, fill) {}

  int& at(int i, int j) { return actions[static_cast<std::size_t>(i) * nd + j]; }
  int at(int i, int j) const { return actions[static_cast<std::size_t>(i) * nd + j]; }

  void validate(int na, const std::string& context = "Policy") const;
};

/// Belief with all mass on one state.
Belief one_hot_belief(const State& s, const GridDims& dims);

/// Uniform belief over the whole grid.
Belief uniform_belief(const GridDims& dims);

}  // namespace gridplan
