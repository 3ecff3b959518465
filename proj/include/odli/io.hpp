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

#ifndef ODLI__IO_HPP_
#define ODLI__IO_HPP_

#include "odli/policy.hpp"
#include "odli/reachability.hpp"
#include "odli/response_analysis.hpp"
#include "odli/sampling_oracle.hpp"
#include "odli/scenario.hpp"
#include "odli/simulation.hpp"
#include "odli/trajectory_log.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace odli
{

struct CohortEntry
{
  PolicySpec policy{};
  int count{1};
};

struct SimulationSettings
{
  double dt{0.01};
  /// Absolute horizon in seconds; 0 selects t_C + 10 s.
  double horizon{0.0};
  ControlMapping mapping{};
  double post_proximity{2.0};
};

/// Everything one CLI invocation needs; serialized as a single JSON document.
struct RunConfig
{
  ScenarioSpec scenario{};
  SimulationSettings simulation{};
  /// Policy used by single-run commands.
  PolicySpec sv_policy{};
  std::vector<CohortEntry> cohort;
  /// Each cohort run's reaction delay is jittered uniformly by +/- this much.
  double reaction_jitter{0.2};
  PredictionConfig prediction{};
  AnalysisOptions analysis{};
  double eval_step{0.1};
  BootstrapOptions bootstrap{};
  OracleOptions oracle{};
  std::vector<double> oracle_incursion_levels{-0.8, 0.0, 0.9};
  std::string output_dir{"out"};
  std::uint64_t seed{1};

  void validate() const;
  int cohort_size() const;
};

/// Reference configuration with every default spelled out (mixed 20-run cohort).
RunConfig default_run_config();

std::string config_to_json(const RunConfig & config);
RunConfig config_from_json(const std::string & text);
RunConfig load_config(const std::string & path);
void save_config(const RunConfig & config, const std::string & path);

/// Sidecar metadata path for a log table.
std::string sidecar_path(const std::string & log_path);

void write_trajectory_log(const TrajectoryLog & log, std::ostream & table, std::ostream & sidecar);
void save_trajectory_log(const TrajectoryLog & log, const std::string & path);
/// The sidecar supplies dt, t_T and the scenario; without it, dt is inferred from the table and
/// the scenario defaults apply.
TrajectoryLog read_trajectory_log(std::istream & table, const std::string * sidecar_json);
TrajectoryLog load_trajectory_log(const std::string & path);

/// Self-describing delimited table: header row, units row, data rows.
class Table
{
public:
  Table(std::vector<std::string> columns, std::vector<std::string> units);
  void add_row(std::vector<std::string> cells);
  void write(std::ostream & out) const;
  void save(const std::string & path) const;
  std::size_t rows() const { return rows_.size(); }

private:
  std::vector<std::string> columns_;
  std::vector<std::string> units_;
  std::vector<std::vector<std::string>> rows_;
};

/// Shortest text that round-trips the value exactly.
std::string format_number(double value);
std::string format_optional(const std::optional<double> & value);

Table reach_snapshot_table(const DrivableArea & area);
/// Vector-graphics panel: one color per tau layer, both vehicles as dark rectangles.
std::string reach_snapshot_svg(const DrivableArea & area, const WorldState & world, const ScenarioSpec & scenario);
Table prevalence_table(const std::vector<PrevalencePoint> & points);
Table sequence_graph_table(const SequenceGraph & graph);
Table timeline_table(const DrivableTimeline & timeline);
Table oracle_table(const OracleReport & report);

void write_text_file(const std::string & path, const std::string & content);
std::string read_text_file(const std::string & path);
void ensure_directory(const std::string & path);

}  // namespace odli

#endif  // ODLI__IO_HPP_
