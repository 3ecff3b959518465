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

#ifndef ODLI__REACHABILITY_HPP_
#define ODLI__REACHABILITY_HPP_

#include "odli/road_frame.hpp"
#include "odli/scenario.hpp"
#include "odli/trajectory_log.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace odli
{

struct Interval
{
  double lo, hi;

  double width() const { return hi - lo; }
  bool contains(double value) const { return lo <= value && value <= hi; }
};

/// Position, velocity and acceleration bounds of one axis.
struct AxisInterval
{
  double p_lo, p_hi;
  double v_lo, v_hi;
  double a_lo, a_hi;

  static AxisInterval point(const AxisKinematics & s);
  bool valid() const;
  bool contains(const AxisKinematics & s) const;
  void merge(const AxisInterval & other);
};

/// Exact continuous-time solution of the clamped triple integrator under constant jerk.
AxisKinematics continuous_axis_step(
  const AxisKinematics & s, double jerk, const AxisBounds & bounds, double dt);

/// Interval image of one axis over one step: the Euler image of the box under the extremal
/// jerks, optionally widened to include the continuous-time image of the same corners.
AxisInterval axis_image(
  const AxisInterval & in, const AxisBounds & bounds, double dt, bool include_continuous);

/// Uniform grid; cell (i, j) covers [i*dx, (i+1)*dx] x [j*dy, (j+1)*dy].
struct GridSpec
{
  double dx{0.5};
  double dy{0.25};

  int ix(double x) const;
  int iy(double y) const;
  Interval x_extent(int i) const { return {i * dx, (i + 1) * dx}; }
  Interval y_extent(int j) const { return {j * dy, (j + 1) * dy}; }
};

struct ReachCell
{
  int ix, iy;
  AxisInterval lon;
  AxisInterval lat;
};

/// Cells of one time slice, sorted by (ix, iy) without duplicates.
struct ReachLayer
{
  double tau{0.0};
  std::vector<ReachCell> cells;

  bool empty() const { return cells.empty(); }
  const ReachCell * find(int ix, int iy) const;
  /// Union of the occupied cells' extents along x (or y).
  Interval x_hull(const GridSpec & grid) const;
  Interval y_hull(const GridSpec & grid) const;
};

struct ReachableSet
{
  double t{0.0};
  double tau_step{0.1};
  double horizon{4.0};
  GridSpec grid{};
  std::vector<ReachLayer> layers;
};

enum class RoadPruning { corridor, off };
enum class PovPredictionMode { normative, kinematic_envelope };

std::string to_string(RoadPruning pruning);
std::string to_string(PovPredictionMode mode);
RoadPruning parse_road_pruning(const std::string & text);

struct PredictionConfig
{
  KinematicLimits sv_limits{KinematicLimits::sv_defaults()};
  KinematicLimits pov_limits{KinematicLimits::pov_defaults()};
  double incursion_detect_threshold{0.15};
  RoadPruning road_pruning{RoadPruning::corridor};
  double grid_dx{0.5};
  double grid_dy{0.25};
  double tau_step{0.1};
  double horizon{4.0};
  /// Widen each step to also contain the exact continuous-time corner trajectories.
  bool continuous_hull{true};

  void validate() const;
  GridSpec grid() const { return {grid_dx, grid_dy}; }
  int steps() const;
};

/// Normative while every POV sample stays within the threshold of its lane center; latched.
PovPredictionMode pov_prediction_mode(
  std::span<const VehicleState> pov_history, const RoadSpec & road, double threshold);

/// Layer holding the single cell that covers `state` (already admissible).
ReachLayer initial_layer(const VehicleState & state, const GridSpec & grid);

ReachLayer propagate_step(
  const ReachLayer & layer, const KinematicLimits & limits, int heading_sign, const GridSpec & grid,
  double tau_step, bool include_continuous = true);

/// Restricts lateral positions to [lo, hi], dropping cells left without any admissible position.
ReachLayer clip_lateral(const ReachLayer & layer, double lo, double hi, const GridSpec & grid);

/// Unpruned reachable set of one vehicle from its (clamped) current state.
ReachableSet compute_reachable_set(
  const VehicleState & state, const KinematicLimits & limits, const PredictionConfig & config);

/// Dense boolean grid of SV reference-point cells that may collide with the POV.
class OccupancyGrid
{
public:
  OccupancyGrid() = default;
  OccupancyGrid(int ix0, int iy0, int nx, int ny);

  bool occupied(int ix, int iy) const;
  void mark(int ix, int iy);
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  int ix0() const { return ix0_; }
  int iy0() const { return iy0_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

private:
  friend OccupancyGrid pov_occupancy(
    const ReachLayer &, int, const VehicleSpec &, const VehicleSpec &, int, const GridSpec &);
  int ix0_{0}, iy0_{0}, nx_{0}, ny_{0};
  std::vector<std::uint8_t> bits_;
};

/// POV cells dilated by the half-sum footprint (Minkowski inflation), expressed in the SV
/// reference-point frame. A cell is marked when its interior meets the open collision region.
OccupancyGrid pov_occupancy(
  const ReachLayer & pov_layer, int pov_heading, const VehicleSpec & pov_spec,
  const VehicleSpec & sv_spec, int sv_heading, const GridSpec & grid);

ReachLayer remove_occupied(const ReachLayer & layer, const OccupancyGrid & occupancy);

struct DrivableArea
{
  double t{0.0};
  GridSpec grid{};
  PovPredictionMode mode{PovPredictionMode::normative};
  /// Pruned SV layers, one per tau step.
  std::vector<ReachLayer> layers;
  /// POV layers actually expanded (shorter than `layers` when propagation stopped early).
  std::vector<ReachLayer> pov_layers;
  bool exists{false};
};

struct DrivableOptions
{
  /// Skip POV expansion once the pruned SV layer is empty; later layers are empty anyway.
  bool stop_when_empty{false};
};

DrivableArea compute_drivable_area(
  const WorldState & world, PovPredictionMode mode, const ScenarioSpec & scenario,
  const PredictionConfig & config, const DrivableOptions & options = {});

struct TimelinePoint
{
  double t;
  bool exists;
  PovPredictionMode mode;
};

struct DrivableTimeline
{
  double t_T{0.0};
  double t_B{0.0};
  double t_E{0.0};
  double eval_step{0.1};
  std::vector<TimelinePoint> points;
};

/// Drivable-area existence at t_B, t_B + eval_step, ... up to t_E.
DrivableTimeline drivable_timeline(
  const TrajectoryLog & log, const PredictionConfig & config, double eval_step = 0.1,
  double onset_delay = 0.4);

struct PrevalencePoint
{
  /// Time relative to the trigger point.
  double t_rel;
  double fraction;
  double ci_lo;
  double ci_hi;
  /// Runs whose window had ended and contribute their terminal value.
  int n_carried;
};

struct BootstrapOptions
{
  int resamples{1000};
  std::uint64_t seed{1};
  double level{0.95};
};

/// Per-step fraction of runs with a drivable area and percentile-bootstrap confidence band,
/// aligned on time since the trigger point.
std::vector<PrevalencePoint> aggregate_prevalence(
  std::span<const DrivableTimeline> timelines, const BootstrapOptions & options = {});

/// Same statistic on raw aligned indicator rows (one row per run, equal length).
std::vector<PrevalencePoint> bootstrap_prevalence(
  const std::vector<std::vector<std::uint8_t>> & indicators, double t_rel0, double step,
  const std::vector<int> & carried, const BootstrapOptions & options);

/// Type-7 (linear interpolation) sample quantile of sorted data.
double sorted_quantile(std::span<const double> sorted, double q);

}  // namespace odli

#endif  // ODLI__REACHABILITY_HPP_
