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

#include "odli/error.hpp"
#include "odli/policy.hpp"
#include "odli/response_analysis.hpp"
#include "odli/simulation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <optional>

namespace odli
{
namespace
{

ScenarioTiming timing_for(double il = 0.0)
{
  ScenarioSpec s;
  s.incursion_level = il;
  return make_timing(s);
}

// Scans the control output on a fine clock and returns the first time the predicate holds.
template <typename Pred>
std::optional<double> first_time(const PolicySpec & p, const ScenarioTiming & timing, Pred pred)
{
  VehicleState sv;
  sv.vx = 17.88;
  VehicleState pov;
  pov.heading_sign = -1;
  for (int k = 0; k <= 200000; ++k) {
    const double t = k * 1e-4;
    if (pred(policy_control(t, sv, pov, timing, p))) return t;
  }
  return std::nullopt;
}

TEST(Mapping, CalibrationAnchors)
{
  const ControlMapping m;
  EXPECT_NEAR(m.longitudinal_accel(3.0, 0.0), 0.0, 1e-12);
  EXPECT_NEAR(m.longitudinal_accel(0.0, 15.0), -0.3 - 1.0, 1e-12);
  EXPECT_NEAR(m.longitudinal_accel(3.0, 15.0), -1.0, 1e-12);
  EXPECT_NEAR(m.longitudinal_accel(3.0, 100.0), -8.0, 1e-12);
  EXPECT_NEAR(m.lateral_accel(20.0), 4.0, 1e-12);
  EXPECT_NEAR(m.longitudinal_accel(3.0, m.brake_pct_for_decel(7.0)), -7.0, 1e-12);
}

TEST(PolicyControl, NoResponseIsConstant)
{
  PolicySpec p;
  const auto timing = timing_for();
  VehicleState sv;
  sv.vx = 17.88;
  VehicleState pov;
  const auto first = policy_control(0.0, sv, pov, timing, p);
  for (double t = 0.0; t < timing.t_C + 3.0; t += 0.05) {
    const auto u = policy_control(t, sv, pov, timing, p);
    ASSERT_EQ(u.accel_pct, first.accel_pct);
    ASSERT_EQ(u.brake_pct, 0.0);
    ASSERT_EQ(u.steer_deg, 0.0);
  }
  EXPECT_EQ(first.accel_pct, ControlMapping{}.cruise_accel_pct);
}

TEST(PolicyControl, BrakeThenSteerCenterCrossings)
{
  PolicySpec p;
  p.kind = PolicyKind::brake_then_steer_center;
  p.reaction_delay = 1.5;
  p.brake_level = BrakeLevel::hard;
  p.steer_delay = 2.8;
  p.steer_target = 20.0;
  const auto timing = timing_for();
  const auto brake = first_time(p, timing, [](const ControlInput & u) { return u.brake_pct > 15.0; });
  const auto steer = first_time(p, timing, [](const ControlInput & u) { return u.steer_deg >= 5.0; });
  ASSERT_TRUE(brake && steer);
  EXPECT_NEAR(*brake, timing.t_T + 1.5, 2e-4);
  EXPECT_NEAR(*steer, timing.t_T + 2.8, 2e-4);
}

TEST(PolicyControl, ShoulderThenReversalCrossesBothWays)
{
  PolicySpec p;
  p.kind = PolicyKind::shoulder_then_reversal;
  p.reaction_delay = 1.2;
  p.steer_target = 10.0;
  p.reversal_delay = 2.5;
  p.reversal_target = 15.0;
  const auto timing = timing_for();
  const auto left = first_time(p, timing, [](const ControlInput & u) { return u.steer_deg <= -5.0; });
  const auto right = first_time(p, timing, [](const ControlInput & u) { return u.steer_deg >= 5.0; });
  ASSERT_TRUE(left && right);
  EXPECT_NEAR(*left, timing.t_T + 1.2, 2e-4);
  EXPECT_GT(*right, *left);
  EXPECT_GE(*right, timing.t_T + 2.5);
  const auto crossings = intended_crossings(p, timing, ControlMapping{});
  std::vector<ResponseKind> steer;
  for (const auto & c : crossings) {
    if (c.kind == ResponseKind::steer_shoulder || c.kind == ResponseKind::steer_center) steer.push_back(c.kind);
  }
  ASSERT_EQ(steer.size(), 2u);
  EXPECT_EQ(steer[0], ResponseKind::steer_shoulder);
  EXPECT_EQ(steer[1], ResponseKind::steer_center);
}

TEST(PolicySpec, ValidationAndParsing)
{
  PolicySpec p;
  p.reaction_delay = -0.1;
  EXPECT_THROW(p.validate(), Error);
  for (auto kind : all_policy_kinds()) EXPECT_EQ(parse_policy_kind(to_string(kind)), kind);
  EXPECT_EQ(all_policy_kinds().size(), 6u);
  EXPECT_THROW(parse_policy_kind("swerve-wildly"), Error);
  try {
    parse_policy_kind("swerve-wildly");
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::parse);
  }
  EXPECT_EQ(parse_brake_level(to_string(BrakeLevel::soft)), BrakeLevel::soft);
}

TEST(PolicyProperty, DeterministicTraces)
{
  const auto timing = timing_for(-0.8);
  for (auto kind : all_policy_kinds()) {
    PolicySpec p;
    p.kind = kind;
    VehicleState sv;
    sv.vx = 17.0;
    sv.vy = 0.3;
    VehicleState pov;
    for (double t = 0.0; t < timing.t_C + 2.0; t += 0.013) {
      const auto a = policy_control(t, sv, pov, timing, p);
      const auto b = policy_control(t, sv, pov, timing, p);
      ASSERT_EQ(std::memcmp(&a, &b, sizeof(ControlInput)), 0);
    }
  }
}

// Detected crossings on a closed-loop rollout equal the schedule's intended crossings.
TEST(PolicyProperty, ScheduleFidelityRoundTrip)
{
  for (double il : {-0.8, 0.0, 0.9}) {
    ScenarioSpec scenario;
    scenario.incursion_level = il;
    const auto timing = make_timing(scenario);
    for (auto kind : all_policy_kinds()) {
      for (double delay : {0.9, 1.5}) {
        PolicySpec p;
        p.kind = kind;
        p.reaction_delay = delay;
        p.steer_delay = delay + 1.0;
        p.reversal_delay = delay + 1.2;
        const double dt = 0.01;
        const auto log = rollout(scenario, p, dt, default_horizon(scenario));
        if (log.incomplete) continue;
        const auto window = make_window(log);
        const auto detected = detect_responses(log, window);
        std::vector<ScheduledCrossing> expected;
        for (const auto & c : intended_crossings(p, timing, ControlMapping{})) {
          if (c.t >= window.t_B - 1e-9 && c.t <= window.t_E + 1e-9) expected.push_back(c);
        }
        ASSERT_EQ(detected.size(), expected.size()) << to_string(kind) << " il=" << il;
        for (auto rk : {ResponseKind::accel_release, ResponseKind::brake_onset,
                        ResponseKind::steer_shoulder, ResponseKind::steer_center}) {
          std::vector<double> d, e;
          for (const auto & ev : detected) if (ev.kind == rk) d.push_back(ev.t);
          for (const auto & c : expected) if (c.kind == rk) e.push_back(c.t);
          ASSERT_EQ(d.size(), e.size()) << to_string(kind) << " " << to_string(rk);
          for (std::size_t i = 0; i < e.size(); ++i) {
            EXPECT_GE(d[i], e[i] - 1e-9);
            EXPECT_LE(d[i], e[i] + dt + 1e-9);
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace odli
