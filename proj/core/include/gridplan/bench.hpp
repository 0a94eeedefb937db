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

struct BenchmarkRow {
  int nd = 0;
  long states = 0;
  double conv_ns = 0.0;   // median wall-clock per Bellman update, convolutional path
  double naive_ns = 0.0;  // median wall-clock per Bellman update, loop path
};

/// Times one Bellman update on seeded random inputs for each grid size.
/// Short updates are batched until a timing block exceeds a fixed floor, so
/// small grids are not dominated by clock resolution; the reported number
/// is the median over `repetitions` blocks.
std::vector<BenchmarkRow> benchmark_iteration(const std::vector<int>& grid_sizes, int na, int w,
                                              int repetitions, bool parallel = false);

/// Least-squares slope of log(conv_ns) against log(states).
double loglog_slope(const std::vector<BenchmarkRow>& rows);

}  // namespace gridplan
