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

#include "odli/sampling_oracle.hpp"

#include "odli/error.hpp"
#include "odli/response_analysis.hpp"
#include "odli/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace odli
{

SubstreamRng::SubstreamRng(std::uint64_t seed, std::uint64_t index)
: state_(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)))
{
  next();
}

std::uint64_t SubstreamRng::next()
{
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SubstreamRng::uniform()
{
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SubstreamRng::uniform(double lo, double hi)
{
  return lo + (hi - lo) * uniform();
}

SampleCloud sample_trajectories(
  const VehicleState & initial, const KinematicLimits & limits, double horizon, double dt,
  std::size_t n, std::uint64_t seed)
{
  require(n >= 1, "at least one sampled trajectory is required");
  require(dt > 0.0 && horizon >= 0.0, "invalid sampling clock");
  require(initial.is_finite(), "initial state must be finite");
  const auto lon = longitudinal_bounds(limits, initial.heading_sign);
  const auto lat = lateral_bounds(limits, initial.heading_sign);
  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  const std::size_t total = n + 4;

  SampleCloud cloud;
  cloud.t0 = initial.t;
  cloud.dt = dt;
  cloud.steps.assign(steps + 1, std::vector<VehicleState>(total));
  const double corners[4][2] = {
    {lon.j_lo, lat.j_lo}, {lon.j_lo, lat.j_hi}, {lon.j_hi, lat.j_lo}, {lon.j_hi, lat.j_hi}};
  for (std::size_t tr = 0; tr < total; ++tr) {
    SubstreamRng rng(seed, tr);
    VehicleState s = initial;
    cloud.steps[0][tr] = s;
    for (std::size_t k = 1; k <= steps; ++k) {
      double jx, jy;
      if (tr < 4) {
        jx = corners[tr][0];
        jy = corners[tr][1];
      } else {
        jx = rng.uniform(lon.j_lo, lon.j_hi);
        jy = rng.uniform(lat.j_lo, lat.j_hi);
      }
      s = step_vehicle(s, jx, jy, limits, dt);
      cloud.steps[k][tr] = s;
    }
  }
  return cloud;
}

namespace
{

// Root of f(t) = c + b t + q t^2 on [0, h] when f changes sign there, else +inf.
double crossing(double q, double b, double c, double h)
{
  const double fh = c + b * h + q * h * h;
  if ((c > 0.0) == (fh > 0.0) && fh != 0.0) return std::numeric_limits<double>::infinity();
  if (q == 0.0) return b == 0.0 ? 0.0 : std::clamp(-c / b, 0.0, h);
  const double disc = std::max(0.0, b * b - 4.0 * q * c);
  const double r1 = (-b - std::sqrt(disc)) / (2.0 * q);
  const double r2 = (-b + std::sqrt(disc)) / (2.0 * q);
  const double tol = 1e-12 * std::max(1.0, h);
  if (r1 >= -tol && r1 <= h + tol) return std::clamp(r1, 0.0, h);
  return std::clamp(r2, 0.0, h);
}

// One piece on which the acceleration a_s + js t keeps its sign. Velocity moves monotonically
// toward `bound` and sticks there once reached.
void sweep(double & p, double & v, double a_s, double js, double h, double bound, bool rising)
{
  if (h <= 0.0) return;
  if (rising ? v >= bound : v <= bound) {
    v = bound;
    p += bound * h;
    return;
  }
  const double t_hit = crossing(0.5 * js, a_s, v - bound, h);
  if (t_hit >= h) {
    p += v * h + 0.5 * a_s * h * h + js * h * h * h / 6.0;
    v += a_s * h + 0.5 * js * h * h;
    return;
  }
  p += v * t_hit + 0.5 * a_s * t_hit * t_hit + js * t_hit * t_hit * t_hit / 6.0;
  v = bound;
  p += bound * (h - t_hit);
}

// Piece with acceleration a_s + js t, js >= 0, split where the acceleration turns positive.
void piece(double & p, double & v, double a_s, double js, double h, double v_lo, double v_hi)
{
  if (a_s < 0.0) {
    const double t0 = js > 0.0 ? -a_s / js : std::numeric_limits<double>::infinity();
    if (t0 >= h) {
      sweep(p, v, a_s, js, h, v_lo, false);
      return;
    }
    sweep(p, v, a_s, js, t0, v_lo, false);
    sweep(p, v, 0.0, js, h - t0, v_hi, true);
    return;
  }
  sweep(p, v, a_s, js, h, v_hi, true);
}

// Maximal trajectory under constant jerk j >= 0 with acceleration cap a_max.
std::pair<double, double> upper_extremal(
  double p, double v, double a, double j, double a_max, double v_lo, double v_hi, double tau)
{
  const double t_sat = j > 0.0 ? std::clamp((a_max - a) / j, 0.0, tau) : tau;
  piece(p, v, a, j, t_sat, v_lo, v_hi);
  const double a_after = j > 0.0 ? a_max : a;
  piece(p, v, a_after, 0.0, tau - t_sat, v_lo, v_hi);
  return {p, v};
}

}  // namespace

Bounds1D analytic_1d_bounds(double p0, double v0, double a0, const AxisBounds & b, double tau)
{
  require(tau >= 0.0, "tau must be >= 0");
  require(b.j_lo <= 0.0 && b.j_hi >= 0.0, "jerk bounds must straddle zero");
  const double v = std::clamp(v0, b.v_lo, b.v_hi);
  const double a = std::clamp(a0, b.a_lo, b.a_hi);
  const auto hi = upper_extremal(p0, v, a, b.j_hi, b.a_hi, b.v_lo, b.v_hi, tau);
  // The minimum is the maximum of the mirrored axis.
  const auto lo = upper_extremal(-p0, -v, -a, -b.j_lo, -b.a_lo, -b.v_hi, -b.v_lo, tau);
  return {-lo.first, hi.first, -lo.second, hi.second};
}

ContainmentReport containment_check(const SampleCloud & samples, const ReachableSet & reach)
{
  if (std::abs(samples.t0 - reach.t) > 1e-9) {
    fail(ErrorCode::invalid_argument, "sample clock starts at a different time than the reachable set");
  }
  if (std::abs(samples.dt - reach.tau_step) > 1e-12) {
    fail(ErrorCode::invalid_argument, "sample step differs from the reachable-set tau step");
  }
  if (samples.steps.size() != reach.layers.size()) {
    fail(ErrorCode::invalid_argument, "sample horizon differs from the reachable-set horizon");
  }
  ContainmentReport report;
  for (std::size_t k = 0; k < samples.steps.size(); ++k) {
    const auto & layer = reach.layers[k];
    for (std::size_t n = 0; n < samples.steps[k].size(); ++n) {
      const auto & s = samples.steps[k][n];
      ++report.total;
      const auto * cell = layer.find(reach.grid.ix(s.x), reach.grid.iy(s.y));
      std::string reason;
      if (cell == nullptr) {
        reason = "position outside occupied cells";
      } else if (!cell->lon.contains({s.x, s.vx, s.ax})) {
        reason = "longitudinal state outside cell intervals";
      } else if (!cell->lat.contains({s.y, s.vy, s.ay})) {
        reason = "lateral state outside cell intervals";
      }
      if (reason.empty()) {
        ++report.contained;
      } else if (!report.has_violation) {
        report.has_violation = true;
        report.violation_step = k;
        report.violation_trajectory = n;
        report.violation_state = s;
        report.violation_reason = reason;
      }
    }
  }
  report.fraction =
    report.total == 0 ? 1.0 : static_cast<double>(report.contained) / static_cast<double>(report.total);
  return report;
}

Tightness tightness(const SampleCloud & samples, const ReachableSet & reach)
{
  require(!samples.steps.empty() && !reach.layers.empty(), "empty samples or reachable set");
  const auto & last = samples.steps.back();
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto & s : last) {
    x_lo = std::min(x_lo, s.x);
    x_hi = std::max(x_hi, s.x);
    y_lo = std::min(y_lo, s.y);
    y_hi = std::max(y_hi, s.y);
  }
  double rx_lo = std::numeric_limits<double>::infinity(), rx_hi = -rx_lo;
  double ry_lo = rx_lo, ry_hi = -rx_lo;
  for (const auto & c : reach.layers.back().cells) {
    rx_lo = std::min(rx_lo, c.lon.p_lo);
    rx_hi = std::max(rx_hi, c.lon.p_hi);
    ry_lo = std::min(ry_lo, c.lat.p_lo);
    ry_hi = std::max(ry_hi, c.lat.p_hi);
  }
  auto ratio = [](double s, double r) { return r > 0.0 ? s / r : 1.0; };
  return {ratio(x_hi - x_lo, rx_hi - rx_lo), ratio(y_hi - y_lo, ry_hi - ry_lo)};
}

OracleReport verify_soundness(
  const std::vector<double> & incursion_levels, const ScenarioSpec & base,
  const PredictionConfig & config, const OracleOptions & options, double sim_dt)
{
  require(options.anchors >= 1, "at least one anchor time is required");
  config.validate();
  OracleReport out;
  std::uint64_t case_index = 0;
  for (const double il : incursion_levels) {
    ScenarioSpec spec = base;
    spec.incursion_level = il;
    const auto log = rollout(spec, PolicySpec{}, sim_dt, default_horizon(spec));
    const auto timing = make_timing(spec);
    const double t_B = timing.t_T + AnalysisOptions{}.onset_delay;
    for (int a = 0; a < options.anchors; ++a) {
      const double frac = options.anchors == 1 ? 0.0 : static_cast<double>(a) / (options.anchors - 1);
      const double t = t_B + frac * (timing.t_C - t_B);
      const auto world = world_state_at(log, log.index_at(t));
      const std::pair<const char *, std::pair<VehicleState, const KinematicLimits *>> vehicles[] = {
        {"sv", {world.sv, &config.sv_limits}}, {"pov", {world.pov, &config.pov_limits}}};
      for (const auto & [name, entry] : vehicles) {
        const auto start = admissible_state(entry.first, *entry.second);
        const auto reach = compute_reachable_set(start, *entry.second, config);
        const auto cloud = sample_trajectories(
          start, *entry.second, config.horizon, config.tau_step, options.samples,
          SubstreamRng(options.seed, case_index++).next());
        OracleCase c{il, name, start.t, containment_check(cloud, reach), tightness(cloud, reach)};
        out.min_fraction = std::min(out.min_fraction, c.report.fraction);
        out.cases.push_back(std::move(c));
      }
    }
  }
  return out;
}

}  // namespace odli
