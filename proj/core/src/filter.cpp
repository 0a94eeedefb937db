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

#include "gridplan/filter.hpp"

#include <algorithm>

#include "gridplan/vi.hpp"

namespace gridplan {

Mat motion_update(const Belief& b, const TransitionModel& t, int action) {
  if (action < 0 || action >= t.num_actions())
    throw std::invalid_argument("motion_update: bad action index");
  if (t.nt() > b.nd()) throw std::invalid_argument("motion_update: filter larger than grid");
  Mat out(b.mass.rows(), b.mass.cols(), 0.0);
  conv2_accumulate(b.mass, t.filters[static_cast<std::size_t>(action)], 1.0, out);
  return out;
}

Belief correction_update(const Mat& b_bar, const ObservationModel& o, const State& z) {
  const int nd_r = b_bar.rows();
  const int nd_c = b_bar.cols();
  if (z.i < 0 || z.i >= nd_r || z.j < 0 || z.j >= nd_c)
    throw std::invalid_argument("correction_update: observation out of grid");
  const int h = o.radius();

  Belief out{Mat(nd_r, nd_c, 0.0)};
  const int i0 = std::max(0, z.i - h);
  const int i1 = std::min(nd_r - 1, z.i + h);
  const int j0 = std::max(0, z.j - h);
  const int j1 = std::min(nd_c - 1, z.j + h);
  double total = 0.0;
  for (int i = i0; i <= i1; ++i) {
    for (int j = j0; j <= j1; ++j) {
      const double m = o.kernel(i - z.i + h, j - z.j + h) * b_bar(i, j);
      out.mass(i, j) = m;
      total += m;
    }
  }
  if (!(total > 0.0))
    throw TotalMassZero("correction_update: observation window holds no belief mass");
  for (int i = i0; i <= i1; ++i)
    for (int j = j0; j <= j1; ++j) out.mass(i, j) /= total;
  return out;
}

Belief propagate(const Belief& b, int action, const State& z, const TransitionModel& t,
                 const ObservationModel& o) {
  return correction_update(motion_update(b, t, action), o, z);
}

Belief initial_belief(const GridDims& dims, const ObservationModel& o, const State& z) {
  return correction_update(Mat(dims.nd, dims.nd, 1.0), o, z);
}

}  // namespace gridplan
