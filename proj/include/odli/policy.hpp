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

#ifndef ODLI__POLICY_HPP_
#define ODLI__POLICY_HPP_

#include "odli/road_frame.hpp"
#include "odli/scenario.hpp"

#include <string>
#include <vector>

namespace odli
{

enum class PolicyKind {
  no_response,
  brake_only,
  brake_then_steer_center,
  steer_center_only,
  steer_shoulder_only,
  shoulder_then_reversal,
};

enum class BrakeLevel { soft, hard };

std::string to_string(PolicyKind kind);
std::string to_string(BrakeLevel level);
PolicyKind parse_policy_kind(const std::string & text);
BrakeLevel parse_brake_level(const std::string & text);
const std::vector<PolicyKind> & all_policy_kinds();

/// Scripted SV controller. All delays are measured from the trigger point.
struct PolicySpec
{
  PolicyKind kind{PolicyKind::no_response};
  /// Onset of the first evasive action (brake or steer).
  double reaction_delay{1.5};
  BrakeLevel brake_level{BrakeLevel::hard};
  /// Steering onset for brake-then-steer-center.
  double steer_delay{2.8};
  double steer_rate{40.0};
  /// Steering magnitude in degrees; direction follows from the kind.
  double steer_target{20.0};
  /// Time held at the steering target before returning to neutral.
  double steer_hold{0.4};
  double reversal_delay{2.5};
  double reversal_target{15.0};
  /// Accelerator release leads the first evasive action by this much.
  double release_lead{0.3};

  void validate() const;
};

/// Pedal/steering calibration of the simulated SV and its low-level tracking.
struct ControlMapping
{
  double cruise_accel_pct{3.0};
  /// Accelerator position giving zero acceleration.
  double accel_zero_pct{3.0};
  double accel_gain{0.1};
  /// Brake calibration anchor: brake_ref_pct gives brake_ref_decel.
  double brake_ref_pct{15.0};
  double brake_ref_decel{1.0};
  /// Deceleration at 100 % brake.
  double full_brake_decel{8.0};
  /// Lateral acceleration per degree of steering at nominal speed.
  double steer_gain{0.2};
  double soft_brake_decel{3.0};
  double hard_brake_decel{7.0};
  double brake_onset_pct{20.0};
  double brake_rate{300.0};
  double steer_onset_deg{6.0};
  /// Sub-threshold counter-steer used to null residual lateral velocity.
  double counter_steer_max_deg{4.5};
  double counter_steer_gain{3.0};
  double actuator_tau{0.1};

  void validate() const;
  double longitudinal_accel(double accel_pct, double brake_pct) const;
  double lateral_accel(double steer_deg) const;
  double brake_pct_for_decel(double decel) const;
};

/// Piecewise-linear schedule; repeated times encode jumps.
struct Waypoint
{
  double t, value;
};

struct ControlSchedule
{
  std::vector<Waypoint> accel_pct;
  std::vector<Waypoint> brake_pct;
  std::vector<Waypoint> steer_deg;
  /// After this time the steering channel is under closed-loop counter-steer.
  double counter_steer_from{0.0};
  bool has_counter_steer{false};
};

ControlSchedule build_schedule(
  const PolicySpec & policy, const ScenarioTiming & timing, const ControlMapping & mapping);

double evaluate_schedule(const std::vector<Waypoint> & schedule, double t);

ControlInput policy_control(
  double t, const VehicleState & sv, const VehicleState & pov, const ScenarioTiming & timing,
  const PolicySpec & policy, const ControlMapping & mapping = {});

/// Detection thresholds shared by the policies' intended crossings and response analysis.
struct ResponseThresholds
{
  double accel_release_pct{3.0};
  double brake_onset_pct{15.0};
  double steer_onset_deg{5.0};
};

enum class ResponseKind { accel_release, brake_onset, steer_shoulder, steer_center };
std::string to_string(ResponseKind kind);

struct ScheduledCrossing
{
  ResponseKind kind;
  double t;
};

/// Threshold crossings the open-loop part of a schedule intends, in time order.
std::vector<ScheduledCrossing> intended_crossings(
  const PolicySpec & policy, const ScenarioTiming & timing, const ControlMapping & mapping,
  const ResponseThresholds & thresholds = {});

}  // namespace odli

#endif  // ODLI__POLICY_HPP_
