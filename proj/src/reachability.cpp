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

#include "odli/reachability.hpp"

#include "odli/error.hpp"
#include "odli/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace odli
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();
// Slack when clipping a position interval to a cell, so boundary states stay inside.
constexpr double kCellSlack = 1e-9;

// Smallest root of a*t^2 + b*t + c in (0, limit], or +inf.
double first_root(double a, double b, double c, double limit)
{
  double best = kInf;
  auto consider = [&](double t) {
    if (t > 1e-15 && t <= limit && t < best) best = t;
  };
  if (std::abs(a) < 1e-300) {
    if (b != 0.0) consider(-c / b);
    return best;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return best;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  if (q != 0.0) {
    consider(q / a);
    consider(c / q);
  } else {
    consider(0.0);
  }
  return best;
}

}  // namespace

AxisInterval AxisInterval::point(const AxisKinematics & s)
{
  return {s.p, s.p, s.v, s.v, s.a, s.a};
}

bool AxisInterval::valid() const
{
  return p_lo <= p_hi && v_lo <= v_hi && a_lo <= a_hi;
}

bool AxisInterval::contains(const AxisKinematics & s) const
{
  return p_lo <= s.p && s.p <= p_hi && v_lo <= s.v && s.v <= v_hi && a_lo <= s.a && s.a <= a_hi;
}

void AxisInterval::merge(const AxisInterval & o)
{
  p_lo = std::min(p_lo, o.p_lo);
  p_hi = std::max(p_hi, o.p_hi);
  v_lo = std::min(v_lo, o.v_lo);
  v_hi = std::max(v_hi, o.v_hi);
  a_lo = std::min(a_lo, o.a_lo);
  a_hi = std::max(a_hi, o.a_hi);
}

AxisKinematics continuous_axis_step(
  const AxisKinematics & s, double jerk, const AxisBounds & b, double dt)
{
  const double j = std::clamp(jerk, b.j_lo, b.j_hi);
  double p = s.p;
  double v = std::clamp(s.v, b.v_lo, b.v_hi);
  double a = std::clamp(s.a, b.a_lo, b.a_hi);
  double rem = dt;
  for (int guard = 0; guard < 32 && rem > 0.0; ++guard) {
    double js = j;
    if ((js > 0.0 && a >= b.a_hi) || (js < 0.0 && a <= b.a_lo)) js = 0.0;
    double t_a = kInf;
    if (js > 0.0) t_a = (b.a_hi - a) / js;
    if (js < 0.0) t_a = (b.a_lo - a) / js;

    const bool pinned_hi = v >= b.v_hi && (a > 0.0 || (a == 0.0 && js > 0.0));
    const bool pinned_lo = v <= b.v_lo && (a < 0.0 || (a == 0.0 && js < 0.0));
    if (pinned_hi || pinned_lo) {
      // Velocity sits on its bound until the acceleration changes sign.
      double t_release = kInf;
      if (pinned_hi && js < 0.0) t_release = a / -js;
      if (pinned_lo && js > 0.0) t_release = -a / js;
      const double h = std::min({rem, t_a, t_release});
      v = pinned_hi ? b.v_hi : b.v_lo;
      p += v * h;
      a = (h == t_a) ? (js > 0.0 ? b.a_hi : b.a_lo) : a + js * h;
      if (h == t_release) a = 0.0;
      rem -= h;
      continue;
    }

    const double limit = std::min(rem, t_a);
    const double t_hi = first_root(0.5 * js, a, v - b.v_hi, limit);
    const double t_lo = first_root(0.5 * js, a, v - b.v_lo, limit);
    const double t_v = std::min(t_hi, t_lo);
    const double h = std::min(limit, t_v);
    p += v * h + 0.5 * a * h * h + js * h * h * h / 6.0;
    v += a * h + 0.5 * js * h * h;
    a += js * h;
    if (h == t_a) a = js > 0.0 ? b.a_hi : b.a_lo;
    if (h == t_v) v = (t_v == t_hi) ? b.v_hi : b.v_lo;
    v = std::clamp(v, b.v_lo, b.v_hi);
    a = std::clamp(a, b.a_lo, b.a_hi);
    rem -= h;
  }
  return {p, v, a};
}

AxisInterval axis_image(
  const AxisInterval & in, const AxisBounds & bounds, double dt, bool include_continuous)
{
  const AxisKinematics lo_corner{in.p_lo, in.v_lo, in.a_lo};
  const AxisKinematics hi_corner{in.p_hi, in.v_hi, in.a_hi};
  const auto lo = euler_axis_step(lo_corner, bounds.j_lo, bounds, dt);
  const auto hi = euler_axis_step(hi_corner, bounds.j_hi, bounds, dt);
  AxisInterval out{lo.p, hi.p, lo.v, hi.v, lo.a, hi.a};
  if (include_continuous) {
    const auto clo = continuous_axis_step(lo_corner, bounds.j_lo, bounds, dt);
    const auto chi = continuous_axis_step(hi_corner, bounds.j_hi, bounds, dt);
    out.merge(AxisInterval::point(clo));
    out.merge(AxisInterval::point(chi));
  }
  return out;
}

int GridSpec::ix(double x) const
{
  return static_cast<int>(std::floor(x / dx));
}

int GridSpec::iy(double y) const
{
  return static_cast<int>(std::floor(y / dy));
}

const ReachCell * ReachLayer::find(int ix, int iy) const
{
  const auto it = std::lower_bound(
    cells.begin(), cells.end(), std::pair{ix, iy}, [](const ReachCell & c, const std::pair<int, int> & k) {
      return c.ix < k.first || (c.ix == k.first && c.iy < k.second);
    });
  if (it == cells.end() || it->ix != ix || it->iy != iy) return nullptr;
  return &*it;
}

Interval ReachLayer::x_hull(const GridSpec & grid) const
{
  if (cells.empty()) return {kInf, -kInf};
  int lo = cells.front().ix;
  int hi = cells.back().ix;
  return {grid.x_extent(lo).lo, grid.x_extent(hi).hi};
}

Interval ReachLayer::y_hull(const GridSpec & grid) const
{
  if (cells.empty()) return {kInf, -kInf};
  int lo = cells.front().iy;
  int hi = lo;
  for (const auto & c : cells) {
    lo = std::min(lo, c.iy);
    hi = std::max(hi, c.iy);
  }
  return {grid.y_extent(lo).lo, grid.y_extent(hi).hi};
}

std::string to_string(RoadPruning pruning)
{
  return pruning == RoadPruning::off ? "off" : "corridor";
}

std::string to_string(PovPredictionMode mode)
{
  return mode == PovPredictionMode::normative ? "normative" : "kinematic-envelope";
}

RoadPruning parse_road_pruning(const std::string & text)
{
  if (text == "corridor") return RoadPruning::corridor;
  if (text == "off") return RoadPruning::off;
  fail(ErrorCode::parse, "unknown road pruning '" + text + "'");
}

void PredictionConfig::validate() const
{
  sv_limits.validate();
  pov_limits.validate();
  require(incursion_detect_threshold >= 0.0, "incursion_detect_threshold must be >= 0");
  require(grid_dx > 0.0 && grid_dy > 0.0, "grid resolution must be positive");
  require(tau_step > 0.0, "tau_step must be positive");
  require(horizon >= 0.0, "horizon must be >= 0");
  require(std::isfinite(grid_dx + grid_dy + tau_step + horizon), "prediction config must be finite");
}

int PredictionConfig::steps() const
{
  return static_cast<int>(std::llround(horizon / tau_step));
}

PovPredictionMode pov_prediction_mode(
  std::span<const VehicleState> pov_history, const RoadSpec & road, double threshold)
{
  require(!pov_history.empty(), "POV history is empty");
  for (const auto & s : pov_history) {
    if (std::abs(s.y - road.pov_lane_center()) > threshold) {
      return PovPredictionMode::kinematic_envelope;
    }
  }
  return PovPredictionMode::normative;
}

ReachLayer initial_layer(const VehicleState & state, const GridSpec & grid)
{
  ReachLayer layer;
  layer.tau = 0.0;
  layer.cells.push_back(
    {grid.ix(state.x), grid.iy(state.y), AxisInterval::point({state.x, state.vx, state.ax}),
     AxisInterval::point({state.y, state.vy, state.ay})});
  return layer;
}

namespace
{

struct Slot
{
  bool used{false};
  AxisInterval lon{};
  AxisInterval lat{};
};

AxisInterval clip_position(AxisInterval a, const Interval & extent)
{
  a.p_lo = std::max(a.p_lo, extent.lo - kCellSlack);
  a.p_hi = std::min(a.p_hi, extent.hi + kCellSlack);
  return a;
}

}  // namespace

ReachLayer propagate_step(
  const ReachLayer & layer, const KinematicLimits & limits, int heading_sign, const GridSpec & grid,
  double tau_step, bool include_continuous)
{
  ReachLayer out;
  out.tau = layer.tau + tau_step;
  if (layer.empty()) return out;
  const auto lon_b = longitudinal_bounds(limits, heading_sign);
  const auto lat_b = lateral_bounds(limits, heading_sign);

  struct Image
  {
    AxisInterval lon, lat;
    int ix_lo, ix_hi, iy_lo, iy_hi;
  };
  std::vector<Image> images;
  images.reserve(layer.cells.size());
  int bx_lo = std::numeric_limits<int>::max(), bx_hi = std::numeric_limits<int>::min();
  int by_lo = bx_lo, by_hi = bx_hi;
  for (const auto & c : layer.cells) {
    Image im;
    im.lon = axis_image(c.lon, lon_b, tau_step, include_continuous);
    im.lat = axis_image(c.lat, lat_b, tau_step, include_continuous);
    im.ix_lo = grid.ix(im.lon.p_lo);
    im.ix_hi = grid.ix(im.lon.p_hi);
    im.iy_lo = grid.iy(im.lat.p_lo);
    im.iy_hi = grid.iy(im.lat.p_hi);
    bx_lo = std::min(bx_lo, im.ix_lo);
    bx_hi = std::max(bx_hi, im.ix_hi);
    by_lo = std::min(by_lo, im.iy_lo);
    by_hi = std::max(by_hi, im.iy_hi);
    images.push_back(im);
  }
  const auto nx = static_cast<std::size_t>(bx_hi - bx_lo + 1);
  const auto ny = static_cast<std::size_t>(by_hi - by_lo + 1);
  std::vector<Slot> slots(nx * ny);
  for (const auto & im : images) {
    for (int i = im.ix_lo; i <= im.ix_hi; ++i) {
      const auto lon = clip_position(im.lon, grid.x_extent(i));
      for (int j = im.iy_lo; j <= im.iy_hi; ++j) {
        const auto lat = clip_position(im.lat, grid.y_extent(j));
        auto & slot = slots[static_cast<std::size_t>(i - bx_lo) * ny + static_cast<std::size_t>(j - by_lo)];
        if (!slot.used) {
          slot = {true, lon, lat};
        } else {
          slot.lon.merge(lon);
          slot.lat.merge(lat);
        }
      }
    }
  }
  for (std::size_t a = 0; a < nx; ++a) {
    for (std::size_t b = 0; b < ny; ++b) {
      const auto & slot = slots[a * ny + b];
      if (!slot.used) continue;
      out.cells.push_back(
        {bx_lo + static_cast<int>(a), by_lo + static_cast<int>(b), slot.lon, slot.lat});
    }
  }
  return out;
}

ReachLayer clip_lateral(const ReachLayer & layer, double lo, double hi, const GridSpec & grid)
{
  ReachLayer out;
  out.tau = layer.tau;
  out.cells.reserve(layer.cells.size());
  for (auto c : layer.cells) {
    const auto extent = grid.y_extent(c.iy);
    if (extent.hi < lo || extent.lo > hi) continue;
    c.lat.p_lo = std::max(c.lat.p_lo, lo);
    c.lat.p_hi = std::min(c.lat.p_hi, hi);
    if (c.lat.p_lo > c.lat.p_hi) continue;
    out.cells.push_back(c);
  }
  return out;
}

ReachableSet compute_reachable_set(
  const VehicleState & state, const KinematicLimits & limits, const PredictionConfig & config)
{
  config.validate();
  ReachableSet set;
  set.t = state.t;
  set.tau_step = config.tau_step;
  set.horizon = config.horizon;
  set.grid = config.grid();
  const auto start = admissible_state(state, limits);
  set.layers.push_back(initial_layer(start, set.grid));
  for (int k = 1; k <= config.steps(); ++k) {
    set.layers.push_back(propagate_step(
      set.layers.back(), limits, start.heading_sign, set.grid, config.tau_step,
      config.continuous_hull));
    set.layers.back().tau = k * config.tau_step;
  }
  return set;
}

OccupancyGrid::OccupancyGrid(int ix0, int iy0, int nx, int ny)
: ix0_(ix0), iy0_(iy0), nx_(nx), ny_(ny),
  bits_(static_cast<std::size_t>(std::max(nx, 0)) * static_cast<std::size_t>(std::max(ny, 0)), 0)
{
}

bool OccupancyGrid::occupied(int ix, int iy) const
{
  const int a = ix - ix0_;
  const int b = iy - iy0_;
  if (a < 0 || b < 0 || a >= nx_ || b >= ny_) return false;
  return bits_[static_cast<std::size_t>(a) * static_cast<std::size_t>(ny_) + static_cast<std::size_t>(b)] != 0;
}

void OccupancyGrid::mark(int ix, int iy)
{
  const int a = ix - ix0_;
  const int b = iy - iy0_;
  if (a < 0 || b < 0 || a >= nx_ || b >= ny_) fail(ErrorCode::internal, "occupancy mark out of range");
  bits_[static_cast<std::size_t>(a) * static_cast<std::size_t>(ny_) + static_cast<std::size_t>(b)] = 1;
}

std::size_t OccupancyGrid::count() const
{
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

OccupancyGrid pov_occupancy(
  const ReachLayer & pov_layer, int pov_heading, const VehicleSpec & pov_spec,
  const VehicleSpec & sv_spec, int sv_heading, const GridSpec & grid)
{
  if (pov_layer.empty()) return {};
  // SV reference x colliding with a POV reference x: |c_sv - c_pov| < half_l, where
  // c = x - heading * ref_offset for either vehicle.
  const double offset = -pov_heading * pov_spec.ref_offset + sv_heading * sv_spec.ref_offset;
  const double half_l = 0.5 * (pov_spec.length + sv_spec.length);
  const double half_w = 0.5 * (pov_spec.width + sv_spec.width);
  constexpr double kSnap = 1e-9;

  struct Box
  {
    int i0, i1, j0, j1;
  };
  std::vector<Box> boxes;
  boxes.reserve(pov_layer.cells.size());
  int bx_lo = std::numeric_limits<int>::max(), bx_hi = std::numeric_limits<int>::min();
  int by_lo = bx_lo, by_hi = bx_hi;
  for (const auto & c : pov_layer.cells) {
    const double x_lo = c.lon.p_lo + offset - half_l;
    const double x_hi = c.lon.p_hi + offset + half_l;
    const double y_lo = c.lat.p_lo - half_w;
    const double y_hi = c.lat.p_hi + half_w;
    // Cells whose interior meets the open interval (lo, hi).
    const Box box{
      static_cast<int>(std::floor(x_lo / grid.dx + kSnap)), static_cast<int>(std::ceil(x_hi / grid.dx - kSnap)) - 1,
      static_cast<int>(std::floor(y_lo / grid.dy + kSnap)), static_cast<int>(std::ceil(y_hi / grid.dy - kSnap)) - 1};
    if (box.i0 > box.i1 || box.j0 > box.j1) continue;
    bx_lo = std::min(bx_lo, box.i0);
    bx_hi = std::max(bx_hi, box.i1);
    by_lo = std::min(by_lo, box.j0);
    by_hi = std::max(by_hi, box.j1);
    boxes.push_back(box);
  }
  if (boxes.empty()) return {};
  const int nx = bx_hi - bx_lo + 1;
  const int ny = by_hi - by_lo + 1;
  // 2D difference array, then prefix sums.
  std::vector<int> diff(static_cast<std::size_t>(nx + 1) * static_cast<std::size_t>(ny + 1), 0);
  auto at = [&](int a, int b) -> int & {
    return diff[static_cast<std::size_t>(a) * static_cast<std::size_t>(ny + 1) + static_cast<std::size_t>(b)];
  };
  for (const auto & box : boxes) {
    const int a0 = box.i0 - bx_lo, a1 = box.i1 - bx_lo + 1;
    const int b0 = box.j0 - by_lo, b1 = box.j1 - by_lo + 1;
    ++at(a0, b0);
    --at(a1, b0);
    --at(a0, b1);
    ++at(a1, b1);
  }
  OccupancyGrid occ(bx_lo, by_lo, nx, ny);
  for (int a = 0; a < nx; ++a) {
    for (int b = 0; b < ny; ++b) {
      int v = at(a, b);
      if (a > 0) v += at(a - 1, b);
      if (b > 0) v += at(a, b - 1);
      if (a > 0 && b > 0) v -= at(a - 1, b - 1);
      at(a, b) = v;
      if (v > 0) occ.bits_[static_cast<std::size_t>(a) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(b)] = 1;
    }
  }
  return occ;
}

ReachLayer remove_occupied(const ReachLayer & layer, const OccupancyGrid & occupancy)
{
  ReachLayer out;
  out.tau = layer.tau;
  out.cells.reserve(layer.cells.size());
  for (const auto & c : layer.cells) {
    if (!occupancy.occupied(c.ix, c.iy)) out.cells.push_back(c);
  }
  return out;
}

DrivableArea compute_drivable_area(
  const WorldState & world, PovPredictionMode mode, const ScenarioSpec & scenario,
  const PredictionConfig & config, const DrivableOptions & options)
{
  config.validate();
  const auto grid = config.grid();
  const auto & road = scenario.road;
  DrivableArea area;
  area.t = world.sv.t;
  area.grid = grid;
  area.mode = mode;

  const auto sv0 = admissible_state(world.sv, config.sv_limits);
  const auto pov0 = admissible_state(world.pov, config.pov_limits);
  const double lane_lo = 0.5 * scenario.pov_spec.width;
  const double lane_hi = road.lane_width - 0.5 * scenario.pov_spec.width;
  const double corridor = road.lane_width + road.shoulder_margin;

  auto shape_pov = [&](ReachLayer layer) {
    if (mode == PovPredictionMode::normative) layer = clip_lateral(layer, lane_lo, lane_hi, grid);
    return layer;
  };
  auto prune_sv = [&](ReachLayer layer, const ReachLayer & pov_layer) {
    if (config.road_pruning == RoadPruning::corridor) {
      layer = clip_lateral(layer, -corridor, corridor, grid);
    }
    const auto occ = pov_occupancy(
      pov_layer, pov0.heading_sign, scenario.pov_spec, scenario.sv_spec, sv0.heading_sign, grid);
    return remove_occupied(layer, occ);
  };

  auto pov = shape_pov(initial_layer(pov0, grid));
  area.pov_layers.push_back(pov);
  area.layers.push_back(prune_sv(initial_layer(sv0, grid), pov));
  const int steps = config.steps();
  for (int k = 1; k <= steps; ++k) {
    const double tau = k * config.tau_step;
    if (options.stop_when_empty && area.layers.back().empty()) {
      area.layers.push_back(ReachLayer{tau, {}});
      continue;
    }
    pov = shape_pov(propagate_step(
      pov, config.pov_limits, pov0.heading_sign, grid, config.tau_step, config.continuous_hull));
    pov.tau = tau;
    area.pov_layers.push_back(pov);
    auto sv = propagate_step(
      area.layers.back(), config.sv_limits, sv0.heading_sign, grid, config.tau_step,
      config.continuous_hull);
    sv.tau = tau;
    area.layers.push_back(prune_sv(std::move(sv), pov));
  }
  area.exists = !area.layers.back().empty();
  return area;
}

DrivableTimeline drivable_timeline(
  const TrajectoryLog & log, const PredictionConfig & config, double eval_step, double onset_delay)
{
  require(eval_step > 0.0, "eval_step must be positive");
  log.validate();
  DrivableTimeline out;
  out.t_T = log.t_T;
  out.t_B = log.t_T + onset_delay;
  out.t_E = time_of_closest_proximity(log);
  out.eval_step = eval_step;
  if (out.t_B < log.samples.front().t - 1e-9 || out.t_E > log.samples.back().t + 1e-9) {
    fail(ErrorCode::invalid_argument, "analysis window is not covered by the log");
  }
  require(out.t_B < out.t_E, "analysis window is empty");

  // First sample at which the POV leaves the detection band; the mode latches from there.
  const auto & road = log.scenario.road;
  std::size_t latch = log.samples.size();
  for (std::size_t i = 0; i < log.samples.size(); ++i) {
    if (std::abs(log.samples[i].pov.y - road.pov_lane_center()) > config.incursion_detect_threshold) {
      latch = i;
      break;
    }
  }
  const DrivableOptions options{true};
  for (int k = 0;; ++k) {
    const double t = out.t_B + k * eval_step;
    if (t > out.t_E + 1e-9) break;
    const auto idx = log.index_at(t);
    const auto mode = idx >= latch ? PovPredictionMode::kinematic_envelope : PovPredictionMode::normative;
    const auto area = compute_drivable_area(world_state_at(log, idx), mode, log.scenario, config, options);
    out.points.push_back({t, area.exists, mode});
  }
  return out;
}

double sorted_quantile(std::span<const double> sorted, double q)
{
  require(!sorted.empty(), "quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<PrevalencePoint> bootstrap_prevalence(
  const std::vector<std::vector<std::uint8_t>> & indicators, double t_rel0, double step,
  const std::vector<int> & carried, const BootstrapOptions & options)
{
  require(!indicators.empty(), "cannot aggregate an empty cohort");
  require(options.resamples >= 1, "bootstrap needs at least one resample");
  require(options.level > 0.0 && options.level < 1.0, "confidence level must be in (0, 1)");
  const std::size_t n = indicators.size();
  const std::size_t steps = indicators.front().size();
  for (const auto & row : indicators) require(row.size() == steps, "indicator rows must align");

  std::vector<PrevalencePoint> out(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    double sum = 0.0;
    for (const auto & row : indicators) sum += row[s];
    out[s].t_rel = t_rel0 + static_cast<double>(s) * step;
    out[s].fraction = sum / static_cast<double>(n);
    out[s].n_carried = s < carried.size() ? carried[s] : 0;
  }

  const auto b_count = static_cast<std::size_t>(options.resamples);
  std::vector<double> stats(steps * b_count);
  std::mt19937_64 rng(options.seed);
  std::vector<double> sums(steps);
  for (std::size_t b = 0; b < b_count; ++b) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const auto & row = indicators[rng() % n];
      for (std::size_t s = 0; s < steps; ++s) sums[s] += row[s];
    }
    for (std::size_t s = 0; s < steps; ++s) stats[s * b_count + b] = sums[s] / static_cast<double>(n);
  }
  const double tail = 0.5 * (1.0 - options.level);
  for (std::size_t s = 0; s < steps; ++s) {
    std::span<double> col(stats.data() + s * b_count, b_count);
    std::sort(col.begin(), col.end());
    out[s].ci_lo = sorted_quantile(col, tail);
    out[s].ci_hi = sorted_quantile(col, 1.0 - tail);
  }
  return out;
}

std::vector<PrevalencePoint> aggregate_prevalence(
  std::span<const DrivableTimeline> timelines, const BootstrapOptions & options)
{
  require(!timelines.empty(), "cannot aggregate an empty cohort");
  const double step = timelines.front().eval_step;
  const double t_rel0 = timelines.front().t_B - timelines.front().t_T;
  std::size_t steps = 0;
  for (const auto & tl : timelines) {
    require(!tl.points.empty(), "timeline has no evaluation points");
    require(std::abs(tl.eval_step - step) < 1e-12, "timelines use different eval steps");
    require(std::abs((tl.t_B - tl.t_T) - t_rel0) < 1e-9, "timelines use different onset delays");
    steps = std::max(steps, tl.points.size());
  }
  std::vector<std::vector<std::uint8_t>> rows;
  std::vector<int> carried(steps, 0);
  rows.reserve(timelines.size());
  for (const auto & tl : timelines) {
    std::vector<std::uint8_t> row(steps);
    for (std::size_t s = 0; s < steps; ++s) {
      if (s < tl.points.size()) {
        row[s] = tl.points[s].exists ? 1 : 0;
      } else {
        row[s] = tl.points.back().exists ? 1 : 0;
        ++carried[s];
      }
    }
    rows.push_back(std::move(row));
  }
  return bootstrap_prevalence(rows, t_rel0, step, carried, options);
}

}  // namespace odli
