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

#include "gridplan/types.hpp"

namespace gridplan {

/// Prediction half of the Bayes filter: convolves the belief with the
/// executed action's transition filter (zero padding). The result is
/// unnormalized; boundary mass that leaves the grid is restored by the
/// normalization in the correction step.
Mat motion_update(const Belief& b, const TransitionModel& t, int action);

/// Measurement half: masks the intermediate belief by the observation
/// kernel centred at z (zero outside the window, window clamped at grid
/// edges) and normalizes to sum 1. Throws TotalMassZero when the masked
/// belief has no mass.
Belief correction_update(const Mat& b_bar, const ObservationModel& o, const State& z);

/// Full Bayes-filter step: motion update for action a, then correction
/// with observation z.
Belief propagate(const Belief& b, int action, const State& z, const TransitionModel& t,
                 const ObservationModel& o);

/// Posterior over states after a single observation from a flat prior;
/// the usual starting belief of a rollout.
Belief initial_belief(const GridDims& dims, const ObservationModel& o, const State& z);

}  // namespace gridplan
