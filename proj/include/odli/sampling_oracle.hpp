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

#ifndef ODLI__SAMPLING_ORACLE_HPP_
#define ODLI__SAMPLING_ORACLE_HPP_

#include "odli/reachability.hpp"
#include "odli/road_frame.hpp"
#include "odli/scenario.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace odli
{

/// States of every sampled trajectory at tau = 0, dt, 2 dt, ...; steps[k][n] is trajectory n.
struct SampleCloud
{
  double t0{0.0};
  double dt{0.1};
  std::vector<std::vector<VehicleState>> steps;

  std::size_t trajectories() const { return steps.empty() ? 0 : steps.front().size(); }
};

/// Counter-based stream: trajectory `index` draws from splitmix64 seeded by (seed, index), so
/// results do not depend on evaluation order.
class SubstreamRng
{
public:
  SubstreamRng(std::uint64_t seed, std::uint64_t index);
  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

private:
  std::uint64_t state_;
};

/// The four constant corner-jerk trajectories come first, then N uniformly random ones.
SampleCloud sample_trajectories(
  const VehicleState & initial, const KinematicLimits & limits, double horizon, double dt,
  std::size_t n, std::uint64_t seed);

struct Bounds1D
{
  double p_lo, p_hi;
  double v_lo, v_hi;
};

/// Continuous-time extremal position and velocity of one clamped triple-integrator axis
/// after `tau`, reached by constant extremal jerk.
Bounds1D analytic_1d_bounds(double p0, double v0, double a0, const AxisBounds & bounds, double tau);

struct ContainmentReport
{
  std::size_t total{0};
  std::size_t contained{0};
  double fraction{0.0};
  bool has_violation{false};
  std::size_t violation_step{0};
  std::size_t violation_trajectory{0};
  VehicleState violation_state{};
  std::string violation_reason;
};

/// Throws on clock misalignment (start time, step or layer count).
ContainmentReport containment_check(const SampleCloud & samples, const ReachableSet & reach);

/// Sampled position extent over reachable-set tight extent along each axis at the horizon.
struct Tightness
{
  double lon;
  double lat;
};

Tightness tightness(const SampleCloud & samples, const ReachableSet & reach);

struct OracleOptions
{
  std::size_t samples{10000};
  int anchors{5};
  std::uint64_t seed{7};
};

struct OracleCase
{
  double incursion_level;
  std::string vehicle;
  double t;
  ContainmentReport report;
  Tightness tight;
};

struct OracleReport
{
  std::vector<OracleCase> cases;
  double min_fraction{1.0};
  bool sound() const { return min_fraction == 1.0; }
};

/// Soundness certificate: for each incursion level, anchors evenly spaced over [t_B, t_C] of
/// the no-response rollout, both vehicles, unpruned reachable sets against sampled clouds.
OracleReport verify_soundness(
  const std::vector<double> & incursion_levels, const ScenarioSpec & base,
  const PredictionConfig & config, const OracleOptions & options, double sim_dt = 0.01);

}  // namespace odli

#endif  // ODLI__SAMPLING_ORACLE_HPP_
