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
#include <random>
#include <string_view>

#include "gridplan/types.hpp"

namespace gridplan {

/// Seeded random stream. Sampling avoids std distributions so that every
/// draw is reproducible bit-for-bit for a given seed, independent of the
/// standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1).
  double next_double();

  /// Uniform integer in [0, n).
  int next_int(int n);

  /// Uniform in-bounds grid cell.
  State next_state(int nd);

  /// Derived independent stream for a named component. Splitting does not
  /// consume state, so the result depends only on (root seed, tag).
  Rng split(std::string_view tag) const;

  std::uint64_t root_seed() const { return root_seed_; }

 private:
  std::uint64_t root_seed_;
  std::mt19937_64 gen_;
};

/// Samples a cell index from a matrix of non-negative weights.
/// Returns the row-major index of the chosen cell.
int sample_cell(const Mat& weights, Rng& rng);

}  // namespace gridplan
