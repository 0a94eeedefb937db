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

#include "gridplan/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "gridplan/environment.hpp"
#include "gridplan/rng.hpp"
#include "gridplan/vi.hpp"

namespace gridplan {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kMinBlockNs = 2e6;  // grow batches until a block takes 2 ms

// Runs fn() `calls` times and returns the elapsed nanoseconds.
template <typename F>
double time_block(F&& fn, long calls) {
  const auto start = Clock::now();
  for (long c = 0; c < calls; ++c) fn();
  const auto stop = Clock::now();
  return static_cast<double>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
}

template <typename F>
double median_ns_per_call(F&& fn, int repetitions) {
  long calls = 1;
  double ns = time_block(fn, calls);
  while (ns < kMinBlockNs && calls < (1L << 24)) {
    calls *= 2;
    ns = time_block(fn, calls);
  }
  std::vector<double> per_call;
  per_call.reserve(static_cast<std::size_t>(repetitions));
  per_call.push_back(ns / static_cast<double>(calls));
  for (int rep = 1; rep < repetitions; ++rep)
    per_call.push_back(time_block(fn, calls) / static_cast<double>(calls));
  std::sort(per_call.begin(), per_call.end());
  return per_call[per_call.size() / 2];
}

}  // namespace

std::vector<BenchmarkRow> benchmark_iteration(const std::vector<int>& grid_sizes, int na, int w,
                                              int repetitions, bool parallel) {
  if (grid_sizes.empty()) throw std::invalid_argument("benchmark_iteration: no sizes");
  if (repetitions < 1) throw std::invalid_argument("benchmark_iteration: repetitions must be >= 1");
  const int nt = 2 * w + 1;

  std::vector<BenchmarkRow> rows;
  rows.reserve(grid_sizes.size());
  for (int nd : grid_sizes) {
    if (nd < nt) throw std::invalid_argument("benchmark_iteration: grid smaller than filter");

    Rng rng(0xB000ull + static_cast<std::uint64_t>(nd));
    TransitionModel t = random_transition_model(na, w, rng);
    TransitionModel t_flipped = flip_transition(t);
    RewardFunction r;
    r.planes.reserve(static_cast<std::size_t>(na));
    for (int a = 0; a < na; ++a) {
      Mat plane(nd, nd);
      for (int k = 0; k < plane.size(); ++k) plane.data()[k] = rng.next_double();
      r.planes.push_back(std::move(plane));
    }
    ValueFunction v{Mat(nd, nd)};
    for (int k = 0; k < v.values.size(); ++k) v.values.data()[k] = rng.next_double();

    QFunction q_scratch;
    Mat v_scratch;
    BenchmarkRow row;
    row.nd = nd;
    row.states = static_cast<long>(nd) * nd;
    row.conv_ns = median_ns_per_call(
        [&] { conv_value_update_into(v, t_flipped, r, 0.95, q_scratch, v_scratch, parallel); },
        repetitions);
    row.naive_ns = median_ns_per_call(
        [&] { naive_value_update_into(v, t, r, 0.95, v_scratch); }, repetitions);
    rows.push_back(row);
  }
  return rows;
}

double loglog_slope(const std::vector<BenchmarkRow>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("loglog_slope: need at least two rows");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(rows.size());
  for (const BenchmarkRow& r : rows) {
    const double x = std::log(static_cast<double>(r.states));
    const double y = std::log(r.conv_ns);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace gridplan
