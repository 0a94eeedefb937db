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

#include "gridplan/rng.hpp"

#include <stdexcept>

namespace gridplan {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

Rng::Rng(std::uint64_t seed) : root_seed_(seed), gen_(splitmix64(seed)) {}

std::uint64_t Rng::next_u64() { return gen_(); }

double Rng::next_double() {
  // 53 random bits mapped onto [0,1).
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int Rng::next_int(int n) {
  if (n <= 0) throw std::invalid_argument("Rng::next_int: n must be positive");
  return static_cast<int>(next_double() * n);
}

State Rng::next_state(int nd) { return State{next_int(nd), next_int(nd)}; }

Rng Rng::split(std::string_view tag) const {
  return Rng(splitmix64(root_seed_ ^ fnv1a(tag)));
}

int sample_cell(const Mat& weights, Rng& rng) {
  const double total = weights.sum();
  if (!(total > 0.0)) throw std::invalid_argument("sample_cell: weights sum to zero");
  const double u = rng.next_double() * total;
  double acc = 0.0;
  const double* p = weights.data();
  const int n = weights.size();
  for (int k = 0; k < n; ++k) {
    acc += p[k];
    if (u < acc) return k;
  }
  return n - 1;  // rounding fell off the end
}

}  // namespace gridplan
