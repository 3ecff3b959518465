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

#ifndef ODLI__RESPONSE_ANALYSIS_HPP_
#define ODLI__RESPONSE_ANALYSIS_HPP_

#include "odli/policy.hpp"
#include "odli/simulation.hpp"
#include "odli/trajectory_log.hpp"

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace odli
{

struct AnalysisWindow
{
  double t_B;
  double t_E;
};

enum class AccelSource { automatic, logged, derived };

std::string to_string(AccelSource source);
AccelSource parse_accel_source(const std::string & text);

struct AnalysisOptions
{
  ResponseThresholds thresholds{};
  /// t_B = t_T + onset_delay.
  double onset_delay{0.4};
  double soft_brake_accel{-1.0};
  double hard_brake_accel{-4.0};
  AccelSource accel_source{AccelSource::automatic};
  /// Moving-average span applied to differenced velocities.
  double smoothing_window{0.1};
};

/// Window [t_T + onset_delay, t_p]. Throws if the window is empty or t_p is undefined.
AnalysisWindow make_window(const TrajectoryLog & log, double onset_delay = 0.4);

struct ResponseEvent
{
  ResponseKind kind;
  double t;
};

/// Every threshold crossing in [t_B, t_E], per signal, in sample order.
std::vector<ResponseEvent> detect_responses(
  const TrajectoryLog & log, const AnalysisWindow & window, const ResponseThresholds & thresholds = {});

struct ResponseTimes
{
  /// Indexed by ResponseKind.
  std::array<std::optional<double>, 4> first{};
  std::optional<double> initial_reaction;
  std::optional<double> evasive_response;

  const std::optional<double> & of(ResponseKind kind) const
  {
    return first[static_cast<std::size_t>(kind)];
  }
};

ResponseTimes response_times(std::span<const ResponseEvent> events, double t_T);

enum class LateralState { steer_shoulder, no_steering, steer_center };
enum class LongitudinalState { cruising, soft_braking, hard_braking };

std::string to_string(LateralState state);
std::string to_string(LongitudinalState state);

LateralState lateral_state(double steer_deg, double threshold = 5.0);
/// Boundary values belong to the milder state.
LongitudinalState longitudinal_state(double ax, double soft = -1.0, double hard = -4.0);

/// Logged ax when available (or requested), else central differences of vx smoothed by a
/// centered moving average.
std::vector<double> sv_longitudinal_accel(
  const TrajectoryLog & log, AccelSource source = AccelSource::automatic, double smoothing_window = 0.1);

struct ControlState
{
  LateralState lateral;
  LongitudinalState longitudinal;

  /// 0..8, lateral-major.
  int index() const { return static_cast<int>(lateral) * 3 + static_cast<int>(longitudinal); }
  static ControlState from_index(int index);
  bool operator==(const ControlState &) const = default;
};

constexpr int kControlStateCount = 9;
constexpr int kOutcomeNodeBase = kControlStateCount;
constexpr int kNodeCount = kControlStateCount + 3;

std::string node_name(int node);
int outcome_node(Outcome outcome);

struct SequenceRun
{
  const TrajectoryLog * log{nullptr};
  AnalysisWindow window{};
  std::optional<Outcome> outcome;
};

/// Cohort transition counts between paired control states and outcome pseudo-states.
class SequenceGraph
{
public:
  void add_transition(int from, int to, long count = 1);
  void add_initial(int node, long count = 1);
  void add_occupancy(int node, long count = 1);
  void merge(const SequenceGraph & other);

  const std::map<std::pair<int, int>, long> & edges() const { return edges_; }
  long edge_count(int from, int to) const;
  long initial(int node) const { return initial_[static_cast<std::size_t>(node)]; }
  long occupancy(int node) const { return occupancy_[static_cast<std::size_t>(node)]; }
  long inflow(int node) const;
  long outflow(int node) const;
  long runs() const { return runs_; }
  void add_run() { ++runs_; }

  bool operator==(const SequenceGraph &) const = default;

private:
  std::map<std::pair<int, int>, long> edges_;
  std::array<long, kNodeCount> initial_{};
  std::array<long, kNodeCount> occupancy_{};
  long runs_{0};
};

/// Per-run state path over the window, without self-transitions.
std::vector<ControlState> state_path(
  const TrajectoryLog & log, const AnalysisWindow & window, const AnalysisOptions & options = {});

SequenceGraph build_sequence_graph(
  std::span<const SequenceRun> runs, const AnalysisOptions & options = {},
  std::vector<std::string> * diagnostics = nullptr);

}  // namespace odli

#endif  // ODLI__RESPONSE_ANALYSIS_HPP_
