// Copyright 2026 The odli-reach Authors
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

#ifndef ODLI__SIMULATION_HPP_
#define ODLI__SIMULATION_HPP_

#include "odli/policy.hpp"
#include "odli/road_frame.hpp"
#include "odli/scenario.hpp"
#include "odli/trajectory_log.hpp"

#include <string>

namespace odli
{

struct RolloutOptions
{
  ControlMapping mapping{};
  KinematicLimits sv_limits{KinematicLimits::sv_defaults()};
  /// Simulated time kept after closest proximity when no collision halts the run.
  double post_proximity{2.0};
};

/// Closed-loop rollout on a fixed clock. Halts at the first footprint overlap, at
/// `horizon` (absolute time), or `post_proximity` seconds after closest proximity.
TrajectoryLog rollout(
  const ScenarioSpec & scenario, const PolicySpec & policy, double dt, double horizon,
  const RolloutOptions & options = {});

/// Default absolute horizon for a scenario.
double default_horizon(const ScenarioSpec & scenario);

enum class Outcome { collision, pass_via_center, pass_via_shoulder };

std::string to_string(Outcome outcome);
Outcome parse_outcome(const std::string & text);

/// First sample at which the longitudinal gap is <= 0. Throws ErrorCode::incomplete_log if none.
double time_of_closest_proximity(const TrajectoryLog & log);

struct OutcomeReport
{
  Outcome outcome;
  double t_p;
  /// y_sv - y_pov at t_p.
  double lateral_offset;
  /// Footprints overlapped at some sample although the proximity rule reports a pass.
  bool sideswipe;
};

OutcomeReport classify_outcome(const TrajectoryLog & log);

/// First sample time with overlapping footprints, or a negative value if none.
double first_overlap_time(const TrajectoryLog & log);

}  // namespace odli

#endif  // ODLI__SIMULATION_HPP_
