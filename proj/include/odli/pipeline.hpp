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

#ifndef ODLI__PIPELINE_HPP_
#define ODLI__PIPELINE_HPP_

#include "odli/io.hpp"

#include <span>
#include <string>
#include <vector>

namespace odli
{

// Rolls out one policy against the configured scenario.
TrajectoryLog simulate_single(const RunConfig & config, const PolicySpec & policy, const std::string & label);

// Expands the cohort entries in order; run k gets its reaction delays shifted by a uniform draw in
// [-reaction_jitter, +reaction_jitter] taken from substream k of the config seed.
std::vector<TrajectoryLog> simulate_cohort(const RunConfig & config);

PolicySpec jittered_policy(const PolicySpec & policy, double jitter, std::uint64_t seed, std::uint64_t index);

Table responses_table(std::span<const TrajectoryLog> logs, const AnalysisOptions & options);

SequenceGraph analyze_sequence(
  std::span<const TrajectoryLog> logs, const AnalysisOptions & options,
  std::vector<std::string> * diagnostics = nullptr);

std::vector<DrivableTimeline> cohort_timelines(std::span<const TrajectoryLog> logs, const RunConfig & config);

// Drivable area at the log sample nearest to t, with the POV mode inferred from the history up to it.
DrivableArea drivable_area_at(const TrajectoryLog & log, double t, const RunConfig & config);

}  // namespace odli

#endif  // ODLI__PIPELINE_HPP_
