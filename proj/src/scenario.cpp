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

#include "odli/scenario.hpp"

#include "odli/error.hpp"

#include <algorithm>
#include <cmath>

namespace odli
{

std::string to_string(EndHeadingMode mode)
{
  switch (mode) {
    case EndHeadingMode::continuing_left:
      return "continuing-left";
    case EndHeadingMode::straight:
      return "straight";
    default:
      return "auto";
  }
}

std::string to_string(PostCriticalBehavior behavior)
{
  switch (behavior) {
    case PostCriticalBehavior::extend_path:
      return "extend-path";
    case PostCriticalBehavior::hold_heading:
      return "hold-heading";
    default:
      return "auto";
  }
}

EndHeadingMode parse_end_heading_mode(const std::string & text)
{
  if (text == "auto") return EndHeadingMode::automatic;
  if (text == "continuing-left") return EndHeadingMode::continuing_left;
  if (text == "straight") return EndHeadingMode::straight;
  fail(ErrorCode::parse, "unknown end_heading_mode '" + text + "'");
}

PostCriticalBehavior parse_post_critical_behavior(const std::string & text)
{
  if (text == "auto") return PostCriticalBehavior::automatic;
  if (text == "extend-path") return PostCriticalBehavior::extend_path;
  if (text == "hold-heading") return PostCriticalBehavior::hold_heading;
  fail(ErrorCode::parse, "unknown post_tc_behavior '" + text + "'");
}

void ScenarioSpec::validate() const
{
  require(
    std::isfinite(incursion_level) && incursion_level >= -1.0 && incursion_level <= 1.0,
    "incursion_level must lie in [-1, 1]");
  require(std::isfinite(v_sv_nominal) && v_sv_nominal > 0.0, "v_sv_nominal must be positive");
  require(std::isfinite(v_pov) && v_pov > 0.0, "v_pov must be positive");
  require(std::isfinite(time_gap_trigger) && time_gap_trigger > 0.0, "time_gap_trigger must be positive");
  require(std::isfinite(t_trigger) && t_trigger > 0.0, "t_trigger must be positive");
  require(
    bezier_inner_first > 0.0 && bezier_inner_first < bezier_inner_second &&
      bezier_inner_second < 1.0,
    "Bezier inner fractions must satisfy 0 < first < second < 1");
  require(edge_reach_delay > 0.0, "edge_reach_delay must be positive");
  require(hold_heading_time_constant > 0.0, "hold_heading_time_constant must be positive");
  road.validate();
  sv_spec.validate();
  pov_spec.validate();
}

EndHeadingMode ScenarioSpec::resolved_end_heading() const
{
  if (end_heading_mode != EndHeadingMode::automatic) return end_heading_mode;
  return incursion_level < 0.0 ? EndHeadingMode::continuing_left : EndHeadingMode::straight;
}

PostCriticalBehavior ScenarioSpec::resolved_post_tc() const
{
  if (post_tc_behavior != PostCriticalBehavior::automatic) return post_tc_behavior;
  return resolved_end_heading() == EndHeadingMode::continuing_left
           ? PostCriticalBehavior::extend_path
           : PostCriticalBehavior::hold_heading;
}

ScenarioTiming make_timing(const ScenarioSpec & spec)
{
  return ScenarioTiming{spec.t_trigger, spec.t_trigger + spec.time_gap_trigger};
}

double trigger_distance(double v_sv, double v_pov, double gap)
{
  require(std::isfinite(v_sv) && v_sv > 0.0, "trigger_distance: v_sv must be positive");
  require(std::isfinite(v_pov) && v_pov > 0.0, "trigger_distance: v_pov must be positive");
  require(std::isfinite(gap) && gap >= 0.0, "trigger_distance: gap must be >= 0");
  return gap * (v_sv + v_pov);
}

double reference_lateral_at_tc(double incursion_level, double lane_width)
{
  require(
    std::isfinite(incursion_level) && incursion_level >= -1.0 && incursion_level <= 1.0,
    "incursion level must lie in [-1, 1]");
  require(lane_width > 0.0, "lane_width must be positive");
  return (incursion_level - 1.0) * lane_width / 2.0;
}

namespace
{

// Cubic Bernstein evaluation and derivatives for control values c[0..3].
double bezier(const double * c, double s)
{
  const double u = 1.0 - s;
  return u * u * u * c[0] + 3.0 * u * u * s * c[1] + 3.0 * u * s * s * c[2] + s * s * s * c[3];
}

double bezier_d1(const double * c, double s)
{
  const double u = 1.0 - s;
  return 3.0 * (u * u * (c[1] - c[0]) + 2.0 * u * s * (c[2] - c[1]) + s * s * (c[3] - c[2]));
}

double bezier_d2(const double * c, double s)
{
  return 6.0 * ((1.0 - s) * (c[2] - 2.0 * c[1] + c[0]) + s * (c[3] - 2.0 * c[2] + c[1]));
}

}  // namespace

IncursionPath::IncursionPath(const ScenarioSpec & spec, const ScenarioTiming & timing)
: timing_(timing),
  gap_(timing.t_C - timing.t_T),
  f1_(spec.bezier_inner_first),
  f2_(spec.bezier_inner_second),
  post_(spec.resolved_post_tc()),
  hold_tau_(spec.hold_heading_time_constant)
{
  spec.validate();
  const double lane_width = spec.road.lane_width;
  const double y_start = spec.road.pov_lane_center();
  const double y_end = reference_lateral_at_tc(spec.incursion_level, lane_width);
  vy_end_ = 0.0;
  if (spec.resolved_end_heading() == EndHeadingMode::continuing_left) {
    vy_end_ = std::min(0.0, (-lane_width - y_end) / spec.edge_reach_delay);
  }
  y_[0] = y_start;
  y_[1] = y_start;
  y_[2] = y_end - vy_end_ * (1.0 - f2_) * gap_;
  y_[3] = y_end;
}

double IncursionPath::bezier_parameter(double t) const
{
  const double target = (t - timing_.t_T) / gap_;
  const double c[4] = {0.0, f1_, f2_, 1.0};
  double lo = 0.0;
  double hi = 1.0;
  double s = target;
  for (int iter = 0; iter < 60; ++iter) {
    const double f = bezier(c, s) - target;
    if (std::abs(f) < 1e-15) break;
    if (f > 0.0) {
      hi = s;
    } else {
      lo = s;
    }
    const double d = bezier_d1(c, s);
    double next = s - f / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    s = next;
  }
  return s;
}

LateralSample IncursionPath::at(double t) const
{
  if (t <= timing_.t_T) {
    return {y_[0], 0.0, 0.0};
  }
  if (t >= timing_.t_C) {
    const double dt = t - timing_.t_C;
    if (post_ == PostCriticalBehavior::extend_path) {
      return {y_[3] + vy_end_ * dt, vy_end_, 0.0};
    }
    const double decay = std::exp(-dt / hold_tau_);
    return {
      y_[3] + vy_end_ * hold_tau_ * (1.0 - decay), vy_end_ * decay, -vy_end_ / hold_tau_ * decay};
  }
  const double s = bezier_parameter(t);
  const double tc[4] = {0.0, f1_ * gap_, f2_ * gap_, gap_};
  const double dt_ds = bezier_d1(tc, s);
  const double d2t_ds2 = bezier_d2(tc, s);
  const double dy_ds = bezier_d1(y_, s);
  const double d2y_ds2 = bezier_d2(y_, s);
  const double vy = dy_ds / dt_ds;
  const double ay = (d2y_ds2 * dt_ds - dy_ds * d2t_ds2) / (dt_ds * dt_ds * dt_ds);
  return {bezier(y_, s), vy, ay};
}

IncursionPath build_incursion_path(const ScenarioSpec & spec, const ScenarioTiming & timing)
{
  return IncursionPath(spec, timing);
}

VehicleState pov_state_at(
  double t, const ScenarioSpec & spec, const ScenarioTiming & timing, double x_pov_at_trigger)
{
  require(std::isfinite(t) && t >= 0.0, "pov_state_at: t must be >= 0");
  const IncursionPath path(spec, timing);
  const auto lateral = path.at(t);
  VehicleState s;
  s.t = t;
  s.x = x_pov_at_trigger - spec.v_pov * (t - timing.t_T);
  s.y = lateral.y;
  s.vx = -spec.v_pov;
  s.vy = lateral.vy;
  s.ax = 0.0;
  s.ay = lateral.ay;
  s.heading_sign = -1;
  return s;
}

std::vector<AdmissibilityViolation> check_pov_lateral_admissibility(
  const ScenarioSpec & spec, const KinematicLimits & pov_limits, double dt)
{
  require(dt > 0.0, "admissibility check: dt must be positive");
  const auto timing = make_timing(spec);
  const IncursionPath path(spec, timing);
  const auto bounds = lateral_bounds(pov_limits, -1);
  std::vector<AdmissibilityViolation> out;
  const auto steps = static_cast<long>(std::ceil((timing.t_C + 2.0) / dt));
  for (long k = 0; k <= steps; ++k) {
    const double t = k * dt;
    const double ay = path.at(t).ay;
    if (ay < bounds.a_lo || ay > bounds.a_hi) out.push_back({t, ay});
  }
  return out;
}

Scenario::Scenario(ScenarioSpec spec)
: spec_(std::move(spec)), timing_(make_timing(spec_)), path_(spec_, timing_)
{
  const auto sv_at_trigger = sv_initial_state();
  const double sv_center = center_x(sv_at_trigger, spec_.sv_spec) + spec_.v_sv_nominal * timing_.t_T;
  const double bumper_gap =
    trigger_distance(spec_.v_sv_nominal, spec_.v_pov, spec_.time_gap_trigger);
  const double pov_center =
    sv_center + 0.5 * spec_.sv_spec.length + bumper_gap + 0.5 * spec_.pov_spec.length;
  // POV heads along -x, so its reference point lies at center - ref_offset.
  x_pov_at_trigger_ = pov_center - spec_.pov_spec.ref_offset;
}

VehicleState Scenario::sv_initial_state() const
{
  VehicleState s;
  s.t = 0.0;
  s.x = 0.0;
  s.y = spec_.road.sv_lane_center();
  s.vx = spec_.v_sv_nominal;
  s.heading_sign = +1;
  return s;
}

VehicleState Scenario::pov_state_at(double t) const
{
  require(std::isfinite(t) && t >= 0.0, "pov_state_at: t must be >= 0");
  const auto lateral = path_.at(t);
  VehicleState s;
  s.t = t;
  s.x = x_pov_at_trigger_ - spec_.v_pov * (t - timing_.t_T);
  s.y = lateral.y;
  s.vx = -spec_.v_pov;
  s.vy = lateral.vy;
  s.ay = lateral.ay;
  s.heading_sign = -1;
  return s;
}

}  // namespace odli
