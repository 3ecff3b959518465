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

#ifndef ODLI_TESTS_TEST_SUPPORT_HPP_
#define ODLI_TESTS_TEST_SUPPORT_HPP_

#include "odli/trajectory_log.hpp"

#include <cstddef>
#include <functional>

namespace odli::testing
{

// Straight-line log: both vehicles at constant speed, lateral positions fixed, bumper gap g0 at t0.
inline TrajectoryLog constant_speed_log(
  double g0, double v_sv, double v_pov, double y_sv, double y_pov, double dt, std::size_t n,
  double t0 = 0.0)
{
  TrajectoryLog log;
  log.dt = dt;
  log.t_T = t0;
  const auto & spec = log.scenario;
  const double x_pov0 = g0 + 0.5 * spec.sv_spec.length + 0.5 * spec.pov_spec.length - spec.pov_spec.ref_offset;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    LogSample s;
    s.t = t;
    s.sv = VehicleState{t, v_sv * (t - t0), y_sv, v_sv, 0.0, 0.0, 0.0, +1};
    s.pov = VehicleState{t, x_pov0 - v_pov * (t - t0), y_pov, -v_pov, 0.0, 0.0, 0.0, -1};
    s.controls.accel_pct = 3.0;
    log.samples.push_back(s);
  }
  return log;
}

// Log whose controls follow the given functions of time; kinematics are a static placeholder.
inline TrajectoryLog control_trace_log(
  double dt, std::size_t n, double t_T, const std::function<double(double)> & accel,
  const std::function<double(double)> & brake, const std::function<double(double)> & steer)
{
  TrajectoryLog log;
  log.dt = dt;
  log.t_T = t_T;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    LogSample s;
    s.t = t;
    s.sv = VehicleState{t, 0.0, -1.825, 17.88, 0.0, 0.0, 0.0, +1};
    s.pov = VehicleState{t, 200.0, 1.825, -17.88, 0.0, 0.0, 0.0, -1};
    s.controls.accel_pct = accel(t);
    s.controls.brake_pct = brake(t);
    s.controls.steer_deg = steer(t);
    log.samples.push_back(s);
  }
  return log;
}

}  // namespace odli::testing

#endif  // ODLI_TESTS_TEST_SUPPORT_HPP_
