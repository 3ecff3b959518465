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

#ifndef ODLI__ROAD_FRAME_HPP_
#define ODLI__ROAD_FRAME_HPP_

// Road frame: x runs along the subject vehicle's (SV) direction of travel, y is
// lateral with y = 0 on the centerline. The SV lane is y in [-lane_width, 0]
// (shoulder edge at -lane_width), the oncoming lane is y in [0, +lane_width].
// For the SV "left/shoulder" is -y; for the oncoming vehicle (POV) "left" is +y.

namespace odli
{

struct RoadSpec
{
  double lane_width{3.65};
  int num_lanes{2};
  double shoulder_margin{0.5};

  void validate() const;
  double sv_lane_center() const { return -0.5 * lane_width; }
  double pov_lane_center() const { return 0.5 * lane_width; }
};

struct VehicleSpec
{
  double length{4.4};
  double width{1.8};
  /// Positioning reference point, measured forward of the geometric center.
  double ref_offset{0.0};

  void validate() const;
};

VehicleSpec default_sv_spec();
VehicleSpec default_pov_spec();

struct VehicleState
{
  double t{0.0};
  double x{0.0};
  double y{0.0};
  double vx{0.0};
  double vy{0.0};
  double ax{0.0};
  double ay{0.0};
  int heading_sign{+1};

  bool is_finite() const;
};

struct ControlInput
{
  double accel_pct{0.0};
  double brake_pct{0.0};
  /// Positive toward the road center for the SV.
  double steer_deg{0.0};
  /// Commanded road-frame jerk.
  double jx{0.0};
  double jy{0.0};
};

/// Vehicle-frame kinematic caps. Lateral left/right are relative to the vehicle's own heading.
struct KinematicLimits
{
  double v_max{20.0};
  double a_fwd_max{5.0};
  double a_brk_max{8.0};
  double a_lat_left_max{6.0};
  double a_lat_right_max{6.0};
  double j_fwd_max{10.0};
  double j_bwd_max{30.0};
  double j_lat_max{30.0};
  double vy_max{6.0};

  static KinematicLimits sv_defaults();
  static KinematicLimits pov_defaults();
  void validate() const;
};

/// Road-frame admissible box for one axis of the triple integrator.
struct AxisBounds
{
  double v_lo, v_hi;
  double a_lo, a_hi;
  double j_lo, j_hi;
};

AxisBounds longitudinal_bounds(const KinematicLimits & limits, int heading_sign);
AxisBounds lateral_bounds(const KinematicLimits & limits, int heading_sign);

struct AxisKinematics
{
  double p, v, a;
};

/// One forward-Euler step of a clamped triple integrator; clamping order jerk, acceleration, velocity.
AxisKinematics euler_axis_step(
  const AxisKinematics & s, double jerk, const AxisBounds & bounds, double dt);

VehicleState step_vehicle(
  const VehicleState & state, double jx, double jy, const KinematicLimits & limits, double dt);

/// Clamps velocities and accelerations into the admissible box of `limits`.
VehicleState admissible_state(VehicleState state, const KinematicLimits & limits);

struct Rect
{
  double x_lo, x_hi, y_lo, y_hi;

  double area() const { return (x_hi - x_lo) * (y_hi - y_lo); }
};

double center_x(const VehicleState & state, const VehicleSpec & spec);
Rect footprint(const VehicleState & state, const VehicleSpec & spec);

/// Open-interior overlap: touching edges or corners do not count.
bool rectangles_overlap(const Rect & a, const Rect & b);

/// Front-bumper to front-bumper distance along x; negative once the bodies overlap or have passed.
double longitudinal_gap(
  const VehicleState & sv, const VehicleSpec & sv_spec, const VehicleState & pov,
  const VehicleSpec & pov_spec);

}  // namespace odli

#endif  // ODLI__ROAD_FRAME_HPP_
