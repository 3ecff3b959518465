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
#include "odli/reachability.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <utility>

namespace odli
{
namespace
{

using CellSet = std::set<std::pair<int, int>>;

CellSet cells_of(const ReachLayer & layer)
{
  CellSet out;
  for (const auto & c : layer.cells) out.insert({c.ix, c.iy});
  return out;
}

bool subset(const CellSet & a, const CellSet & b)
{
  for (const auto & c : a) {
    if (!b.count(c)) return false;
  }
  return true;
}

VehicleState sv_state(double x, double y, double vx, double vy = 0.0, double ax = 0.0)
{
  return VehicleState{0.0, x, y, vx, vy, ax, 0.0, +1};
}

VehicleState pov_state(double x, double y, double vx, double vy = 0.0, double ay = 0.0)
{
  return VehicleState{0.0, x, y, vx, vy, 0.0, ay, -1};
}

TEST(PredictionMode, Examples)
{
  const RoadSpec road;
  const std::vector<VehicleState> centered{pov_state(100, road.pov_lane_center(), -17.88)};
  EXPECT_EQ(pov_prediction_mode(centered, road, 0.15), PovPredictionMode::normative);
  const std::vector<VehicleState> drifted{pov_state(100, road.pov_lane_center() - 0.3, -17.88)};
  EXPECT_EQ(pov_prediction_mode(drifted, road, 0.15), PovPredictionMode::kinematic_envelope);
  std::vector<VehicleState> history{centered[0], drifted[0], centered[0], centered[0]};
  for (std::size_t n = 2; n <= history.size(); ++n) {
    EXPECT_EQ(
      pov_prediction_mode(std::span<const VehicleState>(history.data(), n), road, 0.15),
      PovPredictionMode::kinematic_envelope);
  }
  EXPECT_THROW(pov_prediction_mode({}, road, 0.15), Error);
}

TEST(Propagate, SingletonHandEuler)
{
  const GridSpec grid;
  const auto layer = initial_layer(sv_state(0.1, -1.9, 20.0), grid);
  ASSERT_EQ(layer.cells.size(), 1u);
  const auto next = propagate_step(layer, KinematicLimits::sv_defaults(), +1, grid, 0.1, false);
  ASSERT_FALSE(next.empty());
  double x_lo = 1e9, x_hi = -1e9, a_lo = 1e9, a_hi = -1e9;
  for (const auto & c : next.cells) {
    x_lo = std::min(x_lo, c.lon.p_lo);
    x_hi = std::max(x_hi, c.lon.p_hi);
    a_lo = std::min(a_lo, c.lon.a_lo);
    a_hi = std::max(a_hi, c.lon.a_hi);
  }
  EXPECT_NEAR(x_lo - 0.1, 2.0, 1e-12);
  EXPECT_NEAR(x_hi - 0.1, 2.0, 1e-12);
  EXPECT_NEAR(a_lo, -3.0, 1e-12);
  EXPECT_NEAR(a_hi, 1.0, 1e-12);
}

TEST(Propagate, ContinuousHullContainsEulerImage)
{
  const GridSpec grid;
  const auto layer = initial_layer(sv_state(0.1, -1.9, 20.0), grid);
  const auto next = propagate_step(layer, KinematicLimits::sv_defaults(), +1, grid, 0.1, true);
  const auto hull = next.x_hull(grid);
  EXPECT_LE(hull.lo, 2.1);
  EXPECT_GE(hull.hi, 2.1);
}

TEST(Propagate, ZeroLimitsIsFixedPoint)
{
  KinematicLimits zero{0, 0, 0, 0, 0, 0, 0, 0, 0};
  const GridSpec grid;
  const auto layer = initial_layer(sv_state(3.3, -1.1, 0.0), grid);
  auto next = layer;
  for (int k = 0; k < 10; ++k) next = propagate_step(next, zero, +1, grid, 0.1);
  EXPECT_EQ(cells_of(next), cells_of(layer));
  EXPECT_DOUBLE_EQ(next.cells[0].lon.p_lo, 3.3);
  EXPECT_DOUBLE_EQ(next.cells[0].lat.p_hi, -1.1);
}

TEST(Propagate, PovLateralAccelLowerBoundIsZero)
{
  const GridSpec grid;
  auto layer = initial_layer(pov_state(100.0, 1.825, -17.88), grid);
  for (int k = 0; k < 5; ++k) {
    layer = propagate_step(layer, KinematicLimits::pov_defaults(), -1, grid, 0.1);
    for (const auto & c : layer.cells) {
      EXPECT_GE(c.lat.a_lo, 0.0);
      EXPECT_LE(c.lon.v_hi, 0.0);
    }
  }
}

TEST(Propagate, EmptyStaysEmpty)
{
  const GridSpec grid;
  EXPECT_TRUE(propagate_step(ReachLayer{}, KinematicLimits::sv_defaults(), +1, grid, 0.1).empty());
}

TEST(ContinuousStep, ExactBangBang)
{
  const AxisBounds b = longitudinal_bounds(KinematicLimits::sv_defaults(), +1);
  const auto s = continuous_axis_step({0.0, 20.0, 0.0}, b.j_lo, b, 0.5);
  EXPECT_NEAR(s.a, -8.0, 1e-12);
  // Jerk phase to a=-8 takes 4/15 s, then constant deceleration.
  const double t1 = 8.0 / 30.0;
  const double p1 = 20.0 * t1 - 30.0 * t1 * t1 * t1 / 6.0;
  const double v1 = 20.0 - 15.0 * t1 * t1;
  const double r = 0.5 - t1;
  EXPECT_NEAR(s.p, p1 + v1 * r - 4.0 * r * r, 1e-9);
  EXPECT_NEAR(s.v, v1 - 8.0 * r, 1e-9);
}

TEST(Occupancy, AlignedSingleCellDilation)
{
  const GridSpec grid;
  ReachLayer layer;
  // Reference point at x=14.2 puts the POV center at 14.4; SV reference collision band (10.0, 18.8).
  layer.cells.push_back(ReachCell{28, 10, AxisInterval{14.2, 14.2, -17.88, -17.88, 0, 0},
                                  AxisInterval{2.7, 2.7, 0, 0, 0, 0}});
  const auto occ = pov_occupancy(layer, -1, default_pov_spec(), default_sv_spec(), +1, grid);
  EXPECT_EQ(occ.count(), 18u * 15u);
  EXPECT_FALSE(occ.occupied(19, 10));
  EXPECT_TRUE(occ.occupied(20, 10));
  EXPECT_TRUE(occ.occupied(37, 10));
  EXPECT_FALSE(occ.occupied(38, 10));
  // Lateral band (0.9, 4.5) covers cells 3..17.
  EXPECT_FALSE(occ.occupied(25, 2));
  EXPECT_TRUE(occ.occupied(25, 3));
  EXPECT_TRUE(occ.occupied(25, 17));
  EXPECT_FALSE(occ.occupied(25, 18));
}

TEST(Occupancy, EmptyLayer)
{
  const GridSpec grid;
  const auto occ = pov_occupancy(ReachLayer{}, -1, default_pov_spec(), default_sv_spec(), +1, grid);
  EXPECT_EQ(occ.count(), 0u);
}

// Brute-force check against open-interval intersection for random POV cells.
TEST(Occupancy, MatchesBruteForceAndCommutesWithUnion)
{
  const GridSpec grid;
  const auto pov_spec = default_pov_spec();
  const auto sv_spec = default_sv_spec();
  const double half_l = 0.5 * (pov_spec.length + sv_spec.length);
  const double half_w = 0.5 * (pov_spec.width + sv_spec.width);
  const double offset = pov_spec.ref_offset;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ux(0.0, 30.0), uy(-4.0, 4.0), w(0.0, 0.5), wy(0.0, 0.25);
  for (int trial = 0; trial < 40; ++trial) {
    ReachLayer a, b, both;
    for (int k = 0; k < 4; ++k) {
      const double x = ux(rng), y = uy(rng);
      const int ix = grid.ix(x), iy = grid.iy(y);
      const double x_lo = std::max(x - w(rng), ix * grid.dx), x_hi = std::min(x + w(rng), (ix + 1) * grid.dx);
      const double y_lo = std::max(y - wy(rng), iy * grid.dy), y_hi = std::min(y + wy(rng), (iy + 1) * grid.dy);
      const ReachCell c{ix, iy, AxisInterval{x_lo, x_hi, -17, -17, 0, 0}, AxisInterval{y_lo, y_hi, 0, 0, 0, 0}};
      (k % 2 ? a : b).cells.push_back(c);
      both.cells.push_back(c);
    }
    const auto occ_a = pov_occupancy(a, -1, pov_spec, sv_spec, +1, grid);
    const auto occ_b = pov_occupancy(b, -1, pov_spec, sv_spec, +1, grid);
    const auto occ = pov_occupancy(both, -1, pov_spec, sv_spec, +1, grid);
    for (int ix = -20; ix < 90; ++ix) {
      for (int iy = -40; iy < 40; ++iy) {
        const double cx0 = ix * grid.dx, cx1 = (ix + 1) * grid.dx;
        const double cy0 = iy * grid.dy, cy1 = (iy + 1) * grid.dy;
        bool expect = false;
        for (const auto & c : both.cells) {
          const double lo_x = c.lon.p_lo + offset - half_l, hi_x = c.lon.p_hi + offset + half_l;
          const double lo_y = c.lat.p_lo - half_w, hi_y = c.lat.p_hi + half_w;
          if (cx0 < hi_x && cx1 > lo_x && cy0 < hi_y && cy1 > lo_y) expect = true;
        }
        ASSERT_EQ(occ.occupied(ix, iy), expect) << ix << "," << iy;
        ASSERT_EQ(occ.occupied(ix, iy), occ_a.occupied(ix, iy) || occ_b.occupied(ix, iy));
      }
    }
  }
}

struct World
{
  WorldState world;
  ScenarioSpec scenario;
};

World medium_world(double pov_x, double pov_y, double pov_vy)
{
  World w;
  w.world.sv = sv_state(0.0, -1.825, 17.88);
  w.world.pov = pov_state(pov_x, pov_y, -17.88, pov_vy);
  return w;
}

TEST(Drivable, FarPovLeavesReachableSetIntact)
{
  PredictionConfig config;
  config.road_pruning = RoadPruning::off;
  const auto w = medium_world(600.0, 1.825, 0.0);
  const auto area = compute_drivable_area(w.world, PovPredictionMode::normative, w.scenario, config);
  const auto reach = compute_reachable_set(w.world.sv, config.sv_limits, config);
  ASSERT_TRUE(area.exists);
  ASSERT_EQ(area.layers.size(), reach.layers.size());
  for (std::size_t k = 0; k < reach.layers.size(); ++k) {
    EXPECT_EQ(cells_of(area.layers[k]), cells_of(reach.layers[k]));
  }
}

TEST(Drivable, LayersAreSubsetsOfReachableSet)
{
  PredictionConfig config;
  config.road_pruning = RoadPruning::off;
  const auto w = medium_world(60.0, 0.5, -1.0);
  const auto area = compute_drivable_area(w.world, PovPredictionMode::kinematic_envelope, w.scenario, config);
  const auto reach = compute_reachable_set(w.world.sv, config.sv_limits, config);
  for (std::size_t k = 0; k < area.layers.size(); ++k) {
    EXPECT_TRUE(subset(cells_of(area.layers[k]), cells_of(reach.layers[k])));
  }
}

TEST(Drivable, HeadOnInLaneHasNoDrivableArea)
{
  PredictionConfig config;
  const auto w = medium_world(30.0, -1.825, 0.0);
  const auto area = compute_drivable_area(w.world, PovPredictionMode::kinematic_envelope, w.scenario, config);
  EXPECT_FALSE(area.exists);
  const auto normal = medium_world(30.0, 1.825, 0.0);
  EXPECT_TRUE(compute_drivable_area(normal.world, PovPredictionMode::normative, normal.scenario, config).exists);
}

TEST(Drivable, CorridorPruning)
{
  PredictionConfig config;
  const auto w = medium_world(600.0, 1.825, 0.0);
  const auto area = compute_drivable_area(w.world, PovPredictionMode::normative, w.scenario, config);
  const double corridor = w.scenario.road.lane_width + w.scenario.road.shoulder_margin;
  for (const auto & layer : area.layers) {
    for (const auto & c : layer.cells) {
      EXPECT_GE(c.lat.p_lo, -corridor - 1e-9);
      EXPECT_LE(c.lat.p_hi, corridor + 1e-9);
    }
  }
  EXPECT_EQ(parse_road_pruning(to_string(RoadPruning::off)), RoadPruning::off);
  EXPECT_THROW(parse_road_pruning("sometimes"), Error);
}

TEST(Timeline, NoIncursionIsAlwaysDrivable)
{
  auto log = testing::constant_speed_log(60.0, 17.88, 17.88, -1.825, 1.825, 0.01, 300, 0.0);
  PredictionConfig config;
  const auto tl = drivable_timeline(log, config, 0.1);
  ASSERT_FALSE(tl.points.empty());
  EXPECT_NEAR(tl.points.front().t, 0.4, 1e-12);
  for (const auto & p : tl.points) {
    EXPECT_TRUE(p.exists) << p.t;
    EXPECT_EQ(p.mode, PovPredictionMode::normative);
  }
}

TEST(Timeline, WindowNotCoveredRejected)
{
  auto log = testing::constant_speed_log(300.0, 17.88, 17.88, -1.825, 1.825, 0.01, 100, 0.0);
  EXPECT_THROW(drivable_timeline(log, PredictionConfig{}, 0.1), Error);
}

TEST(Prevalence, DegenerateCohorts)
{
  DrivableTimeline a;
  a.t_T = 1.0;
  a.t_B = 1.4;
  a.t_E = 1.6;
  a.points = {{1.4, true, PovPredictionMode::normative}, {1.5, true, PovPredictionMode::normative},
              {1.6, true, PovPredictionMode::normative}};
  std::vector<DrivableTimeline> all_true(5, a);
  for (const auto & p : aggregate_prevalence(all_true)) {
    EXPECT_EQ(p.fraction, 1.0);
    EXPECT_EQ(p.ci_lo, 1.0);
    EXPECT_EQ(p.ci_hi, 1.0);
  }
  auto single = a;
  single.points[1].exists = false;
  const auto pts = aggregate_prevalence(std::vector<DrivableTimeline>{single});
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[1].fraction, 0.0);
  EXPECT_EQ(pts[1].ci_lo, 0.0);
  EXPECT_EQ(pts[1].ci_hi, 0.0);
  EXPECT_THROW(aggregate_prevalence(std::vector<DrivableTimeline>{}), Error);
}

// For four runs with indicators {1,1,0,0}, the resampled mean is Binomial(4, 0.5)/4, whose
// 2.5% and 97.5% quantiles are 0 and 1 (P(0) = P(4) = 1/16 > 2.5%).
TEST(Prevalence, BinomialClosedFormCheck)
{
  BootstrapOptions options;
  options.resamples = 4000;
  const std::vector<std::vector<std::uint8_t>> indicators{{1}, {1}, {0}, {0}};
  const auto pts = bootstrap_prevalence(indicators, 0.4, 0.1, {0, 0, 0, 0}, options);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_DOUBLE_EQ(pts[0].fraction, 0.5);
  EXPECT_DOUBLE_EQ(pts[0].ci_lo, 0.0);
  EXPECT_DOUBLE_EQ(pts[0].ci_hi, 1.0);
}

TEST(Prevalence, CarriesTerminalValuesAndFlagsThem)
{
  DrivableTimeline short_run;
  short_run.t_T = 0.0;
  short_run.t_B = 0.4;
  short_run.t_E = 0.5;
  short_run.points = {{0.4, true, PovPredictionMode::normative}, {0.5, false, PovPredictionMode::normative}};
  DrivableTimeline long_run = short_run;
  long_run.t_E = 0.7;
  long_run.points.push_back({0.6, true, PovPredictionMode::normative});
  long_run.points.push_back({0.7, true, PovPredictionMode::normative});
  const auto pts = aggregate_prevalence(std::vector<DrivableTimeline>{short_run, long_run});
  ASSERT_EQ(pts.size(), 4u);
  EXPECT_NEAR(pts[0].t_rel, 0.4, 1e-12);
  EXPECT_EQ(pts[0].n_carried, 0);
  EXPECT_EQ(pts[2].n_carried, 1);
  EXPECT_DOUBLE_EQ(pts[2].fraction, 0.5);
  EXPECT_DOUBLE_EQ(pts[3].fraction, 0.5);
}

TEST(Prevalence, DeterministicUnderSeed)
{
  std::mt19937_64 rng(2);
  std::vector<std::vector<std::uint8_t>> ind(20, std::vector<std::uint8_t>(10));
  for (auto & run : ind) {
    for (auto & v : run) v = static_cast<std::uint8_t>(rng() % 2);
  }
  const std::vector<int> carried(10, 0);
  const auto a = bootstrap_prevalence(ind, 0.4, 0.1, carried, BootstrapOptions{});
  const auto b = bootstrap_prevalence(ind, 0.4, 0.1, carried, BootstrapOptions{});
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].ci_lo, b[i].ci_lo);
    EXPECT_EQ(a[i].ci_hi, b[i].ci_hi);
    EXPECT_LE(a[i].ci_lo, a[i].fraction);
    EXPECT_GE(a[i].ci_hi, a[i].fraction);
  }
}

TEST(Quantile, TypeSeven)
{
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(sorted_quantile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(sorted_quantile(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(sorted_quantile(v, 0.5), 2.5);
}

// Properties.

std::vector<World> sample_worlds()
{
  return {medium_world(45.0, 0.6, -1.2), medium_world(35.0, -0.9, -0.8), medium_world(55.0, 1.2, -0.5),
          medium_world(25.0, -2.6, -0.9)};
}

TEST(ReachabilityProperty, LargerPovLimitsNeverGrowDrivableArea)
{
  PredictionConfig base;
  PredictionConfig wide = base;
  wide.pov_limits.a_lat_left_max = 6.0;
  wide.pov_limits.a_lat_right_max = 2.0;
  wide.pov_limits.a_fwd_max = 7.0;
  wide.pov_limits.j_lat_max = 40.0;
  for (const auto & w : sample_worlds()) {
    const auto a = compute_drivable_area(w.world, PovPredictionMode::kinematic_envelope, w.scenario, base);
    const auto b = compute_drivable_area(w.world, PovPredictionMode::kinematic_envelope, w.scenario, wide);
    for (std::size_t k = 0; k < a.layers.size(); ++k) {
      ASSERT_TRUE(subset(cells_of(b.layers[k]), cells_of(a.layers[k]))) << k;
    }
  }
}

TEST(ReachabilityProperty, NestedHorizons)
{
  PredictionConfig h4;
  PredictionConfig h2 = h4;
  h2.horizon = 2.0;
  for (const auto & w : sample_worlds()) {
    const auto a = compute_drivable_area(w.world, PovPredictionMode::kinematic_envelope, w.scenario, h2);
    const auto b = compute_drivable_area(w.world, PovPredictionMode::kinematic_envelope, w.scenario, h4);
    ASSERT_EQ(a.layers.size(), 21u);
    for (std::size_t k = 0; k < a.layers.size(); ++k) {
      ASSERT_EQ(cells_of(a.layers[k]), cells_of(b.layers[k]));
    }
  }
}

TEST(ReachabilityProperty, EmptyLayersAbsorb)
{
  PredictionConfig config;
  for (const auto & w : sample_worlds()) {
    const auto area = compute_drivable_area(w.world, PovPredictionMode::kinematic_envelope, w.scenario, config);
    bool empty = false;
    for (const auto & layer : area.layers) {
      if (empty) ASSERT_TRUE(layer.empty());
      empty = empty || layer.empty();
    }
  }
}

TEST(ReachabilityProperty, PovNeverOutrunsItsLateralVelocityTowardShoulder)
{
  PredictionConfig config;
  for (double vy : {0.0, -0.7, -1.5}) {
    const auto pov = pov_state(80.0, 0.8, -17.88, vy);
    const auto set = compute_reachable_set(pov, config.pov_limits, config);
    for (const auto & layer : set.layers) {
      for (const auto & c : layer.cells) {
        ASSERT_GE(c.lat.p_lo, 0.8 + vy * layer.tau - 1e-9);
        ASSERT_GE(c.lat.a_lo, 0.0);
      }
    }
  }
}

TEST(ReachabilityProperty, GridRefinementStaysWithinOneCoarseCell)
{
  PredictionConfig coarse;
  PredictionConfig fine = coarse;
  fine.grid_dx = coarse.grid_dx / 2;
  fine.grid_dy = coarse.grid_dy / 2;
  for (const auto & w : sample_worlds()) {
    const auto a = compute_reachable_set(w.world.sv, coarse.sv_limits, coarse);
    const auto b = compute_reachable_set(w.world.sv, fine.sv_limits, fine);
    for (std::size_t k = 0; k < a.layers.size(); ++k) {
      if (b.layers[k].empty()) continue;
      ASSERT_FALSE(a.layers[k].empty()) << k;
      // Every fine cell lies within one coarse cell of some coarse cell.
      const auto coarse_cells = cells_of(a.layers[k]);
      for (const auto & c : b.layers[k].cells) {
        const int cx = static_cast<int>(std::floor(c.ix * fine.grid_dx / coarse.grid_dx));
        const int cy = static_cast<int>(std::floor(c.iy * fine.grid_dy / coarse.grid_dy));
        bool near = false;
        for (int dx = -1; dx <= 1 && !near; ++dx) {
          for (int dy = -1; dy <= 1 && !near; ++dy) near = coarse_cells.count({cx + dx, cy + dy}) > 0;
        }
        ASSERT_TRUE(near) << "layer " << k;
      }
    }
  }
}

TEST(ReachabilityProperty, ScatterIsSound)
{
  // Every Euler image of a random point of a cell lands in a cell whose intervals contain it.
  const GridSpec grid;
  const auto limits = KinematicLimits::sv_defaults();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto layer = initial_layer(sv_state(0.2, -1.7, 15.0, 0.5, -1.0), grid);
  for (int k = 0; k < 6; ++k) layer = propagate_step(layer, limits, +1, grid, 0.1);
  const auto next = propagate_step(layer, limits, +1, grid, 0.1);
  const auto lon_b = longitudinal_bounds(limits, +1);
  const auto lat_b = lateral_bounds(limits, +1);
  for (const auto & c : layer.cells) {
    for (int s = 0; s < 30; ++s) {
      auto pick = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
      const AxisKinematics lon{pick(c.lon.p_lo, c.lon.p_hi), pick(c.lon.v_lo, c.lon.v_hi), pick(c.lon.a_lo, c.lon.a_hi)};
      const AxisKinematics lat{pick(c.lat.p_lo, c.lat.p_hi), pick(c.lat.v_lo, c.lat.v_hi), pick(c.lat.a_lo, c.lat.a_hi)};
      const auto lon2 = euler_axis_step(lon, pick(lon_b.j_lo, lon_b.j_hi), lon_b, 0.1);
      const auto lat2 = euler_axis_step(lat, pick(lat_b.j_lo, lat_b.j_hi), lat_b, 0.1);
      const auto * hit = next.find(grid.ix(lon2.p), grid.iy(lat2.p));
      ASSERT_NE(hit, nullptr);
      ASSERT_TRUE(hit->lon.contains(lon2));
      ASSERT_TRUE(hit->lat.contains(lat2));
    }
  }
}

}  // namespace
}  // namespace odli
