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
#include "odli/pipeline.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace odli
{
namespace
{

RunConfig small_cohort(int per_kind)
{
  RunConfig config = default_run_config();
  config.cohort.clear();
  for (auto kind : {PolicyKind::no_response, PolicyKind::brake_then_steer_center}) {
    PolicySpec p;
    p.kind = kind;
    config.cohort.push_back({p, per_kind});
  }
  return config;
}

TEST(Cohort, LabelsOrderAndJitter)
{
  auto config = small_cohort(3);
  const auto logs = simulate_cohort(config);
  ASSERT_EQ(logs.size(), 6u);
  EXPECT_EQ(logs[0].label, "run-000-no-response");
  EXPECT_EQ(logs[5].label, "run-005-brake-then-steer-center");
  for (std::uint64_t k = 0; k < 6; ++k) {
    const auto p = jittered_policy(config.cohort[k / 3].policy, config.reaction_jitter, config.seed, k);
    EXPECT_LE(std::abs(p.reaction_delay - config.cohort[k / 3].policy.reaction_delay), config.reaction_jitter);
  }
  const auto again = simulate_cohort(config);
  for (std::size_t i = 0; i < logs.size(); ++i) {
    ASSERT_EQ(logs[i].samples.size(), again[i].samples.size());
    EXPECT_EQ(logs[i].samples.back().sv.x, again[i].samples.back().sv.x);
  }
  config.seed = 2;
  const auto other = simulate_cohort(config);
  EXPECT_NE(other[4].samples.back().sv.x, logs[4].samples.back().sv.x);
}

TEST(Cohort, ZeroJitterKeepsPolicy)
{
  PolicySpec p;
  p.reaction_delay = 1.3;
  EXPECT_EQ(jittered_policy(p, 0.0, 1, 4).reaction_delay, 1.3);
  p.reaction_delay = 0.05;
  EXPECT_GE(jittered_policy(p, 0.5, 1, 4).reaction_delay, 0.0);
}

TEST(Responses, TableHasOneRowPerRun)
{
  auto config = small_cohort(2);
  const auto logs = simulate_cohort(config);
  const auto table = responses_table(logs, config.analysis);
  EXPECT_EQ(table.rows(), logs.size());
  std::ostringstream out;
  table.write(out);
  EXPECT_NE(out.str().find("collision"), std::string::npos);
}

TEST(Responses, IncompleteLogRejected)
{
  auto config = small_cohort(1);
  config.simulation.horizon = 3.0;
  const auto logs = simulate_cohort(config);
  try {
    responses_table(logs, config.analysis);
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::incomplete_log);
  }
  std::vector<std::string> diag;
  const auto g = analyze_sequence(logs, config.analysis, &diag);
  EXPECT_EQ(g.runs(), 0);
  EXPECT_EQ(diag.size(), logs.size());
}

TEST(Prevalence, FourRunCohortOneRowPerEvalStep)
{
  auto config = small_cohort(2);
  config.prediction.grid_dx = 1.0;
  config.prediction.grid_dy = 0.5;
  config.bootstrap.resamples = 200;
  const auto logs = simulate_cohort(config);
  const auto timelines = cohort_timelines(logs, config);
  std::size_t longest = 0;
  for (const auto & tl : timelines) longest = std::max(longest, tl.points.size());
  const auto points = aggregate_prevalence(timelines, config.bootstrap);
  EXPECT_EQ(prevalence_table(points).rows(), longest);
  for (std::size_t i = 0; i < points.size(); ++i) {
    EXPECT_NEAR(points[i].t_rel, config.analysis.onset_delay + static_cast<double>(i) * config.eval_step, 1e-9);
    EXPECT_LE(points[i].ci_lo, points[i].fraction);
    EXPECT_GE(points[i].ci_hi, points[i].fraction);
  }
}

TEST(Snapshot, ModeFollowsHistory)
{
  auto config = default_run_config();
  config.prediction.horizon = 1.0;
  const auto log = simulate_single(config, PolicySpec{}, "x");
  const auto early = drivable_area_at(log, log.t_T - 0.5, config);
  EXPECT_EQ(early.mode, PovPredictionMode::normative);
  EXPECT_TRUE(early.exists);
  const auto late = drivable_area_at(log, log.t_T + 3.0, config);
  EXPECT_EQ(late.mode, PovPredictionMode::kinematic_envelope);
}

}  // namespace
}  // namespace odli
