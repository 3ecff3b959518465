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

#include "odli/pipeline.hpp"

#include "odli/error.hpp"

#include <algorithm>
#include <cstdio>

namespace odli
{

TrajectoryLog simulate_single(const RunConfig & config, const PolicySpec & policy, const std::string & label)
{
  config.scenario.validate();
  policy.validate();
  RolloutOptions options;
  options.mapping = config.simulation.mapping;
  options.sv_limits = config.prediction.sv_limits;
  options.post_proximity = config.simulation.post_proximity;
  const double horizon =
    config.simulation.horizon > 0.0 ? config.simulation.horizon : default_horizon(config.scenario);
  auto log = rollout(config.scenario, policy, config.simulation.dt, horizon, options);
  log.label = label;
  return log;
}

PolicySpec jittered_policy(const PolicySpec & policy, double jitter, std::uint64_t seed, std::uint64_t index)
{
  if (jitter <= 0.0) return policy;
  SubstreamRng rng(seed, index);
  double shift = rng.uniform(-jitter, jitter);
  shift = std::max(shift, -policy.reaction_delay);
  PolicySpec out = policy;
  out.reaction_delay += shift;
  out.steer_delay = std::max(0.0, out.steer_delay + shift);
  out.reversal_delay = std::max(0.0, out.reversal_delay + shift);
  return out;
}

std::vector<TrajectoryLog> simulate_cohort(const RunConfig & config)
{
  config.validate();
  std::vector<TrajectoryLog> logs;
  std::uint64_t k = 0;
  for (const auto & entry : config.cohort) {
    for (int i = 0; i < entry.count; ++i, ++k) {
      const auto policy = jittered_policy(entry.policy, config.reaction_jitter, config.seed, k);
      char label[96];
      std::snprintf(label, sizeof(label), "run-%03llu-%s", static_cast<unsigned long long>(k),
                    to_string(policy.kind).c_str());
      logs.push_back(simulate_single(config, policy, label));
    }
  }
  return logs;
}

Table responses_table(std::span<const TrajectoryLog> logs, const AnalysisOptions & options)
{
  Table t(
    {"label", "t_T", "t_B", "t_E", "accel_release", "brake_onset", "steer_shoulder", "steer_center",
     "initial_reaction", "evasive_response", "outcome", "lateral_offset"},
    {"-", "s", "s", "s", "s", "s", "s", "s", "s", "s", "-", "m"});
  for (const auto & log : logs) {
    if (log.incomplete) {
      fail(ErrorCode::incomplete_log, "log '" + log.label + "' ends before closest proximity");
    }
    const auto window = make_window(log, options.onset_delay);
    const auto events = detect_responses(log, window, options.thresholds);
    const auto times = response_times(events, log.t_T);
    const auto outcome = classify_outcome(log);
    t.add_row(
      {log.label, format_number(log.t_T), format_number(window.t_B), format_number(window.t_E),
       format_optional(times.of(ResponseKind::accel_release)),
       format_optional(times.of(ResponseKind::brake_onset)),
       format_optional(times.of(ResponseKind::steer_shoulder)),
       format_optional(times.of(ResponseKind::steer_center)), format_optional(times.initial_reaction),
       format_optional(times.evasive_response), to_string(outcome.outcome),
       format_number(outcome.lateral_offset)});
  }
  return t;
}

SequenceGraph analyze_sequence(
  std::span<const TrajectoryLog> logs, const AnalysisOptions & options,
  std::vector<std::string> * diagnostics)
{
  std::vector<SequenceRun> runs;
  runs.reserve(logs.size());
  for (const auto & log : logs) {
    SequenceRun run;
    run.log = &log;
    if (log.incomplete) {
      run.window = {log.t_T + options.onset_delay, log.samples.back().t};
    } else {
      run.window = make_window(log, options.onset_delay);
      run.outcome = classify_outcome(log).outcome;
    }
    runs.push_back(run);
  }
  return build_sequence_graph(runs, options, diagnostics);
}

std::vector<DrivableTimeline> cohort_timelines(std::span<const TrajectoryLog> logs, const RunConfig & config)
{
  std::vector<DrivableTimeline> out;
  out.reserve(logs.size());
  for (const auto & log : logs) {
    if (log.incomplete) {
      fail(ErrorCode::incomplete_log, "log '" + log.label + "' ends before closest proximity");
    }
    out.push_back(drivable_timeline(log, config.prediction, config.eval_step, config.analysis.onset_delay));
  }
  return out;
}

DrivableArea drivable_area_at(const TrajectoryLog & log, double t, const RunConfig & config)
{
  log.validate();
  const auto idx = log.index_at(t);
  std::vector<VehicleState> history;
  history.reserve(idx + 1);
  for (std::size_t i = 0; i <= idx; ++i) history.push_back(log.samples[i].pov);
  const auto mode =
    pov_prediction_mode(history, log.scenario.road, config.prediction.incursion_detect_threshold);
  return compute_drivable_area(world_state_at(log, idx), mode, log.scenario, config.prediction);
}

}  // namespace odli
