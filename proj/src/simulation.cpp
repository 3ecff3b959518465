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

#include "odli/simulation.hpp"

#include "odli/error.hpp"

#include <cmath>

namespace odli
{

double default_horizon(const ScenarioSpec & scenario)
{
  return make_timing(scenario).t_C + 10.0;
}

TrajectoryLog rollout(
  const ScenarioSpec & scenario_spec, const PolicySpec & policy, double dt, double horizon,
  const RolloutOptions & options)
{
  require(std::isfinite(dt) && dt > 0.0, "rollout: dt must be positive");
  require(std::isfinite(horizon) && horizon > 0.0, "rollout: horizon must be positive");
  policy.validate();
  const Scenario scenario(scenario_spec);
  const auto & spec = scenario.spec();
  const auto timing = scenario.timing();

  TrajectoryLog log;
  log.dt = dt;
  log.t_T = timing.t_T;
  log.scenario = spec;
  log.label = to_string(policy.kind);

  const auto steps = static_cast<long>(std::floor(horizon / dt + 1e-9));
  log.samples.reserve(static_cast<std::size_t>(steps) + 1);
  VehicleState sv = scenario.sv_initial_state();
  double t_p = -1.0;
  for (long k = 0; k <= steps; ++k) {
    const double t = k * dt;
    sv.t = t;
    const VehicleState pov = scenario.pov_state_at(t);
    const ControlInput u = policy_control(t, sv, pov, timing, policy, options.mapping);
    log.samples.push_back({t, sv, pov, u});

    if (t_p < 0.0 && longitudinal_gap(sv, spec.sv_spec, pov, spec.pov_spec) <= 0.0) t_p = t;
    if (rectangles_overlap(footprint(sv, spec.sv_spec), footprint(pov, spec.pov_spec))) break;
    if (t_p >= 0.0 && t >= t_p + options.post_proximity - 1e-9) break;

    sv = step_vehicle(sv, u.jx, u.jy, options.sv_limits, dt);
  }
  log.incomplete = t_p < 0.0;
  return log;
}

std::string to_string(Outcome outcome)
{
  switch (outcome) {
    case Outcome::collision:
      return "collision";
    case Outcome::pass_via_center:
      return "pass-via-center";
    default:
      return "pass-via-shoulder";
  }
}

Outcome parse_outcome(const std::string & text)
{
  if (text == "collision") return Outcome::collision;
  if (text == "pass-via-center") return Outcome::pass_via_center;
  if (text == "pass-via-shoulder") return Outcome::pass_via_shoulder;
  fail(ErrorCode::parse, "unknown outcome '" + text + "'");
}

namespace
{

long proximity_index(const TrajectoryLog & log)
{
  const auto & spec = log.scenario;
  for (std::size_t i = 0; i < log.samples.size(); ++i) {
    const auto & s = log.samples[i];
    if (longitudinal_gap(s.sv, spec.sv_spec, s.pov, spec.pov_spec) <= 0.0) {
      return static_cast<long>(i);
    }
  }
  return -1;
}

}  // namespace

double time_of_closest_proximity(const TrajectoryLog & log)
{
  const long idx = proximity_index(log);
  if (idx < 0) {
    fail(ErrorCode::incomplete_log, "longitudinal gap never reaches zero within the log");
  }
  return log.samples[static_cast<std::size_t>(idx)].t;
}

double first_overlap_time(const TrajectoryLog & log)
{
  const auto & spec = log.scenario;
  for (const auto & s : log.samples) {
    if (rectangles_overlap(footprint(s.sv, spec.sv_spec), footprint(s.pov, spec.pov_spec))) {
      return s.t;
    }
  }
  return -1.0;
}

OutcomeReport classify_outcome(const TrajectoryLog & log)
{
  const long idx = proximity_index(log);
  if (idx < 0) {
    fail(ErrorCode::incomplete_log, "cannot classify outcome: closest proximity not reached");
  }
  const auto & spec = log.scenario;
  const auto & at_p = log.samples[static_cast<std::size_t>(idx)];
  const double offset = at_p.sv.y - at_p.pov.y;
  const double half_widths = 0.5 * (spec.sv_spec.width + spec.pov_spec.width);

  bool overlap_before = false;
  bool overlap_any = false;
  for (std::size_t i = 0; i < log.samples.size(); ++i) {
    const auto & s = log.samples[i];
    if (rectangles_overlap(footprint(s.sv, spec.sv_spec), footprint(s.pov, spec.pov_spec))) {
      overlap_any = true;
      if (static_cast<long>(i) < idx) overlap_before = true;
    }
  }

  OutcomeReport report{Outcome::collision, at_p.t, offset, false};
  if (std::abs(offset) < half_widths || overlap_before) return report;
  report.outcome = offset > 0.0 ? Outcome::pass_via_center : Outcome::pass_via_shoulder;
  report.sideswipe = overlap_any;
  return report;
}

}  // namespace odli
