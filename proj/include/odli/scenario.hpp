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

#ifndef ODLI__SCENARIO_HPP_
#define ODLI__SCENARIO_HPP_

#include "odli/road_frame.hpp"

#include <string>
#include <vector>

namespace odli
{

/// Lateral velocity of the POV when it reaches the critical point.
enum class EndHeadingMode { automatic, continuing_left, straight };
/// What the scripted POV does after the critical point.
enum class PostCriticalBehavior { automatic, extend_path, hold_heading };

std::string to_string(EndHeadingMode mode);
std::string to_string(PostCriticalBehavior behavior);
EndHeadingMode parse_end_heading_mode(const std::string & text);
PostCriticalBehavior parse_post_critical_behavior(const std::string & text);

/// Full parameterization of one opposite-direction lateral incursion.
struct ScenarioSpec
{
  double incursion_level{0.0};
  double v_sv_nominal{17.88};
  double v_pov{17.88};
  double time_gap_trigger{5.15};
  /// Simulation time of the trigger point; the SV starts at x = 0 at t = 0.
  double t_trigger{2.0};
  RoadSpec road{};
  VehicleSpec sv_spec{default_sv_spec()};
  VehicleSpec pov_spec{default_pov_spec()};
  EndHeadingMode end_heading_mode{EndHeadingMode::automatic};
  PostCriticalBehavior post_tc_behavior{PostCriticalBehavior::automatic};
  /// Time fractions of the two inner Bezier control points.
  double bezier_inner_first{0.35};
  double bezier_inner_second{0.65};
  /// Continuing-left paths reach the shoulder edge this long after the critical point.
  double edge_reach_delay{1.5};
  /// Decay constant of the lateral velocity under hold-heading.
  double hold_heading_time_constant{0.5};

  void validate() const;
  EndHeadingMode resolved_end_heading() const;
  PostCriticalBehavior resolved_post_tc() const;
};

struct ScenarioTiming
{
  double t_T;
  double t_C;
};

ScenarioTiming make_timing(const ScenarioSpec & spec);

/// Bumper gap at which the incursion begins, using the head-on closing speed.
double trigger_distance(double v_sv, double v_pov, double gap);

/// Reference-point lateral position at the critical point: IL = -1 is the shoulder edge,
/// 0 the SV lane center, +1 the centerline.
double reference_lateral_at_tc(double incursion_level, double lane_width);

struct LateralSample
{
  double y, vy, ay;
};

/// Cubic Bezier in (t, y) from the POV lane center to the incursion target, with
/// analytic derivatives and the pre-trigger / post-critical continuations.
class IncursionPath
{
public:
  IncursionPath(const ScenarioSpec & spec, const ScenarioTiming & timing);

  LateralSample at(double t) const;
  double terminal_lateral_velocity() const { return vy_end_; }

private:
  double bezier_parameter(double t) const;

  ScenarioTiming timing_;
  double gap_;
  double f1_, f2_;
  double y_[4];
  double vy_end_;
  PostCriticalBehavior post_;
  double hold_tau_;
};

IncursionPath build_incursion_path(const ScenarioSpec & spec, const ScenarioTiming & timing);

VehicleState pov_state_at(
  double t, const ScenarioSpec & spec, const ScenarioTiming & timing, double x_pov_at_trigger);

struct AdmissibilityViolation
{
  double t;
  double ay;
};

/// Diagnostic: times at which the scripted POV's lateral acceleration leaves the limit box.
std::vector<AdmissibilityViolation> check_pov_lateral_admissibility(
  const ScenarioSpec & spec, const KinematicLimits & pov_limits, double dt);

/// Scenario with derived timing, path and spawn geometry.
class Scenario
{
public:
  explicit Scenario(ScenarioSpec spec);

  const ScenarioSpec & spec() const { return spec_; }
  const ScenarioTiming & timing() const { return timing_; }
  const IncursionPath & path() const { return path_; }
  double x_pov_at_trigger() const { return x_pov_at_trigger_; }

  VehicleState sv_initial_state() const;
  VehicleState pov_state_at(double t) const;

private:
  ScenarioSpec spec_;
  ScenarioTiming timing_;
  IncursionPath path_;
  double x_pov_at_trigger_;
};

}  // namespace odli

#endif  // ODLI__SCENARIO_HPP_
