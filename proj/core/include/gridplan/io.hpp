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

#include <filesystem>
#include <string>
#include <vector>

#include "gridplan/types.hpp"

namespace gridplan {

// Text model format (gridplan-model v1)
// -------------------------------------
// Header line:
//   gridplan-model v1 kind=<kind> nd=<int> na=<int> nt=<int>
// followed by one block per plane/filter, blocks separated by a blank line,
// each block holding row-major whitespace-separated decimal values.
// Block shapes per kind:
//   transition   na blocks of nt x nt   (nt is the filter side)
//   reward, q    na blocks of nd x nd   (nt = 1)
//   observation  1 block of nt x nt     (na = 1, nt is the kernel side)
//   value, belief 1 block of nd x nd    (na = 1, nt = 1)
//   policy       1 block of nd x nd integer action indices
// Filter cell (u+w, v+w) holds the probability of displacement
// (delta_row=u, delta_col=v); row 0 is the top of the grid.

struct ModelFile {
  std::string kind;
  int nd = 0;
  int na = 0;
  int nt = 0;
  std::vector<Mat> blocks;
};

/// Formats a double with enough digits to round-trip exactly.
std::string format_double(double x);

void write_model_file(const std::filesystem::path& path, const ModelFile& model);

/// Parses a gridplan-model v1 file. Throws ParseError naming the offending
/// line; shape checks against the header also report the line.
ModelFile read_model_file(const std::filesystem::path& path);

// Typed wrappers. Writers fill in the header from the object; readers check
// the kind, the declared shape and the type invariants (InvariantViolation).
void save_transition(const std::filesystem::path& path, const TransitionModel& t, int nd);
TransitionModel load_transition(const std::filesystem::path& path);

void save_reward(const std::filesystem::path& path, const RewardFunction& r);
RewardFunction load_reward(const std::filesystem::path& path);

void save_observation(const std::filesystem::path& path, const ObservationModel& o, int nd);
ObservationModel load_observation(const std::filesystem::path& path);

void save_value(const std::filesystem::path& path, const ValueFunction& v);
ValueFunction load_value(const std::filesystem::path& path);

void save_q(const std::filesystem::path& path, const QFunction& q);
QFunction load_q(const std::filesystem::path& path);

void save_belief(const std::filesystem::path& path, const Belief& b);
Belief load_belief(const std::filesystem::path& path);

void save_policy(const std::filesystem::path& path, const Policy& p, int na);
Policy load_policy(const std::filesystem::path& path);

// Trajectory CSV: header `t,action,obs_i,obs_j` plus an `expert_action`
// column when the trajectory carries expert actions.
void save_trajectory(const std::filesystem::path& path, const Trajectory& traj);
Trajectory load_trajectory(const std::filesystem::path& path);

/// Writes CSV rows: the header string, then one line per row of
/// already-formatted cells.
void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace gridplan
