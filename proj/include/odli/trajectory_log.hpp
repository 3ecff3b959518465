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

#ifndef ODLI__TRAJECTORY_LOG_HPP_
#define ODLI__TRAJECTORY_LOG_HPP_

#include "odli/road_frame.hpp"
#include "odli/scenario.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace odli
{

struct LogSample
{
  double t{0.0};
  VehicleState sv{};
  VehicleState pov{};
  ControlInput controls{};
};

/// Uniformly sampled record of one run: both vehicles and the raw SV controls.
struct TrajectoryLog
{
  double dt{0.01};
  double t_T{0.0};
  ScenarioSpec scenario{};
  std::vector<LogSample> samples;
  /// False for external logs that carry only velocities for the SV.
  bool has_sv_accel{true};
  /// Set by rollout when the horizon ended before closest proximity was reached.
  bool incomplete{false};
  std::string label;

  /// Throws on non-uniform or non-monotone timestamps.
  void validate() const;
  std::size_t index_at(double t) const;
};

/// Vehicle states as seen from the log's channels only; missing accelerations are
/// reconstructed by backward differences of the logged velocities.
struct WorldState
{
  VehicleState sv;
  VehicleState pov;
};

WorldState world_state_at(const TrajectoryLog & log, std::size_t index);

}  // namespace odli

#endif  // ODLI__TRAJECTORY_LOG_HPP_
