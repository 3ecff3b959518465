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

#include "odli/road_frame.hpp"

#include "odli/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace odli
{

void RoadSpec::validate() const
{
  require(std::isfinite(lane_width) && lane_width > 0.0, "lane_width must be positive");
  require(num_lanes == 2, "num_lanes is fixed at 2");
  require(std::isfinite(shoulder_margin) && shoulder_margin >= 0.0, "shoulder_margin must be >= 0");
}

void VehicleSpec::validate() const
{
  require(std::isfinite(length) && length > 0.0, "vehicle length must be positive");
  require(std::isfinite(width) && width > 0.0, "vehicle width must be positive");
  require(
    std::isfinite(ref_offset) && std::abs(ref_offset) < 0.5 * length,
    "|ref_offset| must be smaller than half the vehicle length");
}

VehicleSpec default_sv_spec()
{
  return VehicleSpec{4.4, 1.8, 0.0};
}

VehicleSpec default_pov_spec()
{
  return VehicleSpec{4.4, 1.8, 0.20};
}

bool VehicleState::is_finite() const
{
  return std::isfinite(t) && std::isfinite(x) && std::isfinite(y) && std::isfinite(vx) &&
         std::isfinite(vy) && std::isfinite(ax) && std::isfinite(ay) &&
         (heading_sign == 1 || heading_sign == -1);
}

KinematicLimits KinematicLimits::sv_defaults()
{
  return KinematicLimits{20.0, 5.0, 8.0, 6.0, 6.0, 10.0, 30.0, 30.0, 6.0};
}

KinematicLimits KinematicLimits::pov_defaults()
{
  return KinematicLimits{20.0, 5.0, 8.0, 4.0, 0.0, 10.0, 30.0, 30.0, 6.0};
}

void KinematicLimits::validate() const
{
  for (double value : {v_max, a_fwd_max, a_brk_max, a_lat_left_max, a_lat_right_max, j_fwd_max,
                       j_bwd_max, j_lat_max, vy_max}) {
    require(std::isfinite(value) && value >= 0.0, "kinematic limits must be finite and >= 0");
  }
}

AxisBounds longitudinal_bounds(const KinematicLimits & limits, int heading_sign)
{
  if (heading_sign > 0) {
    return AxisBounds{0.0,        limits.v_max,      -limits.a_brk_max,
                      limits.a_fwd_max, -limits.j_bwd_max, limits.j_fwd_max};
  }
  return AxisBounds{-limits.v_max,     0.0,              -limits.a_fwd_max,
                    limits.a_brk_max, -limits.j_fwd_max, limits.j_bwd_max};
}

AxisBounds lateral_bounds(const KinematicLimits & limits, int heading_sign)
{
  // Vehicle-frame left maps to -y when heading along +x and to +y when heading along -x.
  const double toward_neg_y = heading_sign > 0 ? limits.a_lat_left_max : limits.a_lat_right_max;
  const double toward_pos_y = heading_sign > 0 ? limits.a_lat_right_max : limits.a_lat_left_max;
  return AxisBounds{-limits.vy_max, limits.vy_max,     -toward_neg_y,
                    toward_pos_y,   -limits.j_lat_max, limits.j_lat_max};
}

AxisKinematics euler_axis_step(
  const AxisKinematics & s, double jerk, const AxisBounds & bounds, double dt)
{
  const double j = std::clamp(jerk, bounds.j_lo, bounds.j_hi);
  AxisKinematics next;
  next.p = s.p + dt * s.v;
  next.v = std::clamp(s.v + dt * s.a, bounds.v_lo, bounds.v_hi);
  next.a = std::clamp(s.a + dt * j, bounds.a_lo, bounds.a_hi);
  return next;
}

VehicleState step_vehicle(
  const VehicleState & state, double jx, double jy, const KinematicLimits & limits, double dt)
{
  if (!state.is_finite() || !std::isfinite(jx) || !std::isfinite(jy)) {
    fail(ErrorCode::invalid_argument, "step_vehicle: non-finite state or jerk");
  }
  if (!std::isfinite(dt) || dt <= 0.0) {
    fail(ErrorCode::invalid_argument, "step_vehicle: dt must be positive, got " + std::to_string(dt));
  }
  const auto lon = euler_axis_step(
    {state.x, state.vx, state.ax}, jx, longitudinal_bounds(limits, state.heading_sign), dt);
  const auto lat = euler_axis_step(
    {state.y, state.vy, state.ay}, jy, lateral_bounds(limits, state.heading_sign), dt);
  VehicleState next = state;
  next.t = state.t + dt;
  next.x = lon.p;
  next.vx = lon.v;
  next.ax = lon.a;
  next.y = lat.p;
  next.vy = lat.v;
  next.ay = lat.a;
  return next;
}

VehicleState admissible_state(VehicleState state, const KinematicLimits & limits)
{
  const auto lon = longitudinal_bounds(limits, state.heading_sign);
  const auto lat = lateral_bounds(limits, state.heading_sign);
  state.vx = std::clamp(state.vx, lon.v_lo, lon.v_hi);
  state.ax = std::clamp(state.ax, lon.a_lo, lon.a_hi);
  state.vy = std::clamp(state.vy, lat.v_lo, lat.v_hi);
  state.ay = std::clamp(state.ay, lat.a_lo, lat.a_hi);
  return state;
}

double center_x(const VehicleState & state, const VehicleSpec & spec)
{
  return state.x - state.heading_sign * spec.ref_offset;
}

Rect footprint(const VehicleState & state, const VehicleSpec & spec)
{
  spec.validate();
  const double cx = center_x(state, spec);
  const double half_l = 0.5 * spec.length;
  const double half_w = 0.5 * spec.width;
  return Rect{cx - half_l, cx + half_l, state.y - half_w, state.y + half_w};
}

bool rectangles_overlap(const Rect & a, const Rect & b)
{
  return a.x_lo < b.x_hi && b.x_lo < a.x_hi && a.y_lo < b.y_hi && b.y_lo < a.y_hi;
}

double longitudinal_gap(
  const VehicleState & sv, const VehicleSpec & sv_spec, const VehicleState & pov,
  const VehicleSpec & pov_spec)
{
  return (center_x(pov, pov_spec) - 0.5 * pov_spec.length) -
         (center_x(sv, sv_spec) + 0.5 * sv_spec.length);
}

}  // namespace odli
