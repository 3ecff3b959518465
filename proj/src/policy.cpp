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

#include "odli/policy.hpp"

#include "odli/error.hpp"

#include <algorithm>
#include <cmath>

namespace odli
{

namespace
{

constexpr double kTimeEps = 1e-9;

struct KindName
{
  PolicyKind kind;
  const char * name;
};

constexpr KindName kKindNames[] = {
  {PolicyKind::no_response, "no-response"},
  {PolicyKind::brake_only, "brake-only"},
  {PolicyKind::brake_then_steer_center, "brake-then-steer-center"},
  {PolicyKind::steer_center_only, "steer-center-only"},
  {PolicyKind::steer_shoulder_only, "steer-shoulder-only"},
  {PolicyKind::shoulder_then_reversal, "shoulder-then-reversal"},
};

bool brakes(PolicyKind kind)
{
  return kind == PolicyKind::brake_only || kind == PolicyKind::brake_then_steer_center;
}

}  // namespace

std::string to_string(PolicyKind kind)
{
  for (const auto & entry : kKindNames) {
    if (entry.kind == kind) return entry.name;
  }
  return "unknown";
}

std::string to_string(BrakeLevel level)
{
  return level == BrakeLevel::soft ? "soft" : "hard";
}

PolicyKind parse_policy_kind(const std::string & text)
{
  for (const auto & entry : kKindNames) {
    if (text == entry.name) return entry.kind;
  }
  fail(ErrorCode::parse, "unknown policy kind '" + text + "'");
}

BrakeLevel parse_brake_level(const std::string & text)
{
  if (text == "soft") return BrakeLevel::soft;
  if (text == "hard") return BrakeLevel::hard;
  fail(ErrorCode::parse, "unknown brake level '" + text + "'");
}

const std::vector<PolicyKind> & all_policy_kinds()
{
  static const std::vector<PolicyKind> kinds = [] {
    std::vector<PolicyKind> out;
    for (const auto & entry : kKindNames) out.push_back(entry.kind);
    return out;
  }();
  return kinds;
}

std::string to_string(ResponseKind kind)
{
  switch (kind) {
    case ResponseKind::accel_release:
      return "accel-release";
    case ResponseKind::brake_onset:
      return "brake-onset";
    case ResponseKind::steer_shoulder:
      return "steer-shoulder";
    default:
      return "steer-center";
  }
}

void PolicySpec::validate() const
{
  require(reaction_delay >= 0.0, "reaction_delay must be >= 0");
  require(steer_delay >= 0.0, "steer_delay must be >= 0");
  require(reversal_delay >= 0.0, "reversal_delay must be >= 0");
  require(release_lead >= 0.0, "release_lead must be >= 0");
  require(steer_rate > 0.0, "steer_rate must be positive");
  require(steer_hold >= 0.0, "steer_hold must be >= 0");
  require(std::isfinite(steer_target) && std::isfinite(reversal_target), "steer targets must be finite");
  if (kind == PolicyKind::shoulder_then_reversal) {
    require(reversal_delay >= reaction_delay, "reversal_delay must not precede reaction_delay");
  }
}

void ControlMapping::validate() const
{
  require(accel_gain > 0.0, "accel_gain must be positive");
  require(brake_ref_pct > 0.0 && brake_ref_pct < 100.0, "brake_ref_pct must lie in (0, 100)");
  require(full_brake_decel > brake_ref_decel, "full_brake_decel must exceed brake_ref_decel");
  require(steer_gain > 0.0, "steer_gain must be positive");
  require(actuator_tau > 0.0, "actuator_tau must be positive");
  require(brake_rate > 0.0, "brake_rate must be positive");
  require(steer_onset_deg > 0.0, "steer_onset_deg must be positive");
  require(
    hard_brake_decel <= full_brake_decel && soft_brake_decel <= full_brake_decel,
    "brake decelerations must not exceed the full-brake deceleration");
}

double ControlMapping::longitudinal_accel(double accel_pct, double brake_pct) const
{
  double brake_decel = 0.0;
  if (brake_pct > 0.0) {
    const double slope = (full_brake_decel - brake_ref_decel) / (100.0 - brake_ref_pct);
    brake_decel = std::max(0.0, brake_ref_decel + (brake_pct - brake_ref_pct) * slope);
  }
  return accel_gain * (accel_pct - accel_zero_pct) - brake_decel;
}

double ControlMapping::lateral_accel(double steer_deg) const
{
  return steer_gain * steer_deg;
}

double ControlMapping::brake_pct_for_decel(double decel) const
{
  const double slope = (100.0 - brake_ref_pct) / (full_brake_decel - brake_ref_decel);
  return std::clamp(brake_ref_pct + (decel - brake_ref_decel) * slope, 0.0, 100.0);
}

ControlSchedule build_schedule(
  const PolicySpec & policy, const ScenarioTiming & timing, const ControlMapping & mapping)
{
  policy.validate();
  mapping.validate();
  ControlSchedule s;
  s.accel_pct = {{0.0, mapping.cruise_accel_pct}};
  s.brake_pct = {{0.0, 0.0}};
  s.steer_deg = {{0.0, 0.0}};
  if (policy.kind == PolicyKind::no_response) return s;

  const double t_T = timing.t_T;
  double first_action = t_T + policy.reaction_delay;
  if (policy.kind == PolicyKind::brake_then_steer_center) {
    first_action = std::min(first_action, t_T + policy.steer_delay);
  }

  const double t_release = std::max(t_T, first_action - policy.release_lead);
  s.accel_pct.push_back({t_release, mapping.cruise_accel_pct});
  s.accel_pct.push_back({t_release, 0.0});

  if (brakes(policy.kind)) {
    const double decel = policy.brake_level == BrakeLevel::hard ? mapping.hard_brake_decel
                                                                : mapping.soft_brake_decel;
    const double target = mapping.brake_pct_for_decel(decel);
    const double onset = std::min(mapping.brake_onset_pct, target);
    const double t_b = t_T + policy.reaction_delay;
    s.brake_pct.push_back({t_b, 0.0});
    s.brake_pct.push_back({t_b, onset});
    s.brake_pct.push_back({t_b + (target - onset) / mapping.brake_rate, target});
  }

  double steer_sign = 0.0;
  double steer_start = 0.0;
  switch (policy.kind) {
    case PolicyKind::brake_then_steer_center:
      steer_sign = 1.0;
      steer_start = t_T + policy.steer_delay;
      break;
    case PolicyKind::steer_center_only:
      steer_sign = 1.0;
      steer_start = t_T + policy.reaction_delay;
      break;
    case PolicyKind::steer_shoulder_only:
    case PolicyKind::shoulder_then_reversal:
      steer_sign = -1.0;
      steer_start = t_T + policy.reaction_delay;
      break;
    default:
      break;
  }
  if (steer_sign == 0.0) return s;

  const double magnitude = std::abs(policy.steer_target);
  const double onset = std::min(mapping.steer_onset_deg, magnitude);
  const double t_reach = steer_start + (magnitude - onset) / policy.steer_rate;
  s.steer_deg.push_back({steer_start, 0.0});
  s.steer_deg.push_back({steer_start, steer_sign * onset});
  s.steer_deg.push_back({t_reach, steer_sign * magnitude});

  double last_value = steer_sign * magnitude;
  double hold_from = t_reach;
  if (policy.kind == PolicyKind::shoulder_then_reversal) {
    const double t_rev = std::max(t_reach, t_T + policy.reversal_delay);
    const double rev = std::abs(policy.reversal_target);
    s.steer_deg.push_back({t_rev, last_value});
    hold_from = t_rev + (rev - last_value) / policy.steer_rate;
    last_value = rev;
    s.steer_deg.push_back({hold_from, last_value});
  }
  const double release_from = hold_from + policy.steer_hold;
  s.steer_deg.push_back({release_from, last_value});
  const double neutral_at = release_from + std::abs(last_value) / policy.steer_rate;
  s.steer_deg.push_back({neutral_at, 0.0});
  s.counter_steer_from = neutral_at;
  s.has_counter_steer = true;
  return s;
}

double evaluate_schedule(const std::vector<Waypoint> & schedule, double t)
{
  if (schedule.empty()) return 0.0;
  std::size_t i = 0;
  while (i + 1 < schedule.size() && schedule[i + 1].t <= t + kTimeEps) ++i;
  if (i + 1 == schedule.size() || t <= schedule[i].t) return schedule[i].value;
  const auto & a = schedule[i];
  const auto & b = schedule[i + 1];
  const double frac = std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0);
  return a.value + (b.value - a.value) * frac;
}

ControlInput policy_control(
  double t, const VehicleState & sv, const VehicleState & /*pov*/, const ScenarioTiming & timing,
  const PolicySpec & policy, const ControlMapping & mapping)
{
  const auto schedule = build_schedule(policy, timing, mapping);
  ControlInput u;
  u.accel_pct = evaluate_schedule(schedule.accel_pct, t);
  u.brake_pct = evaluate_schedule(schedule.brake_pct, t);
  if (schedule.has_counter_steer && t >= schedule.counter_steer_from - kTimeEps) {
    u.steer_deg = std::clamp(
      -mapping.counter_steer_gain * sv.vy, -mapping.counter_steer_max_deg,
      mapping.counter_steer_max_deg);
  } else {
    u.steer_deg = evaluate_schedule(schedule.steer_deg, t);
  }
  const double ax_target = sv.heading_sign * mapping.longitudinal_accel(u.accel_pct, u.brake_pct);
  const double ay_target = mapping.lateral_accel(u.steer_deg);
  u.jx = (ax_target - sv.ax) / mapping.actuator_tau;
  u.jy = (ay_target - sv.ay) / mapping.actuator_tau;
  return u;
}

namespace
{

// Time at which the segment a->b first satisfies `on_response_side`, given `a` does not.
template <typename Pred>
bool segment_crossing(const Waypoint & a, const Waypoint & b, double threshold, Pred on_side, double & t_out)
{
  if (on_side(a.value) || !on_side(b.value)) return false;
  if (b.t <= a.t) {
    t_out = b.t;
    return true;
  }
  const double frac = (threshold - a.value) / (b.value - a.value);
  t_out = a.t + std::clamp(frac, 0.0, 1.0) * (b.t - a.t);
  return true;
}

template <typename Pred>
void collect(
  const std::vector<Waypoint> & w, double threshold, Pred on_side, ResponseKind kind,
  std::vector<ScheduledCrossing> & out)
{
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    double t = 0.0;
    if (segment_crossing(w[i], w[i + 1], threshold, on_side, t)) out.push_back({kind, t});
  }
}

}  // namespace

std::vector<ScheduledCrossing> intended_crossings(
  const PolicySpec & policy, const ScenarioTiming & timing, const ControlMapping & mapping,
  const ResponseThresholds & thresholds)
{
  const auto s = build_schedule(policy, timing, mapping);
  std::vector<ScheduledCrossing> out;
  const double acc = thresholds.accel_release_pct;
  const double brk = thresholds.brake_onset_pct;
  const double st = thresholds.steer_onset_deg;
  collect(s.accel_pct, acc, [acc](double v) { return v < acc; }, ResponseKind::accel_release, out);
  collect(s.brake_pct, brk, [brk](double v) { return v > brk; }, ResponseKind::brake_onset, out);
  collect(s.steer_deg, -st, [st](double v) { return v <= -st; }, ResponseKind::steer_shoulder, out);
  collect(s.steer_deg, st, [st](double v) { return v >= st; }, ResponseKind::steer_center, out);
  std::stable_sort(out.begin(), out.end(), [](const auto & a, const auto & b) { return a.t < b.t; });
  return out;
}

}  // namespace odli
