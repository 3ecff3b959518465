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

#include "odli/trajectory_log.hpp"

#include "odli/error.hpp"

#include <cmath>
#include <string>

namespace odli
{

void TrajectoryLog::validate() const
{
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCode::invalid_argument, "log dt must be positive");
  const double tol = 1e-6 * dt;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double step = samples[i].t - samples[i - 1].t;
    if (!(step > 0.0)) {
      fail(ErrorCode::parse, "non-monotone timestamps at sample " + std::to_string(i));
    }
    if (std::abs(step - dt) > tol) {
      fail(ErrorCode::parse, "mixed sample spacing at sample " + std::to_string(i));
    }
  }
}

std::size_t TrajectoryLog::index_at(double t) const
{
  if (samples.empty()) fail(ErrorCode::invalid_argument, "empty log");
  const double k = std::round((t - samples.front().t) / dt);
  if (k < 0.0) return 0;
  const auto idx = static_cast<std::size_t>(k);
  return idx >= samples.size() ? samples.size() - 1 : idx;
}

WorldState world_state_at(const TrajectoryLog & log, std::size_t index)
{
  if (index >= log.samples.size()) fail(ErrorCode::invalid_argument, "sample index out of range");
  const auto & cur = log.samples[index];
  WorldState w{cur.sv, cur.pov};
  w.sv.t = cur.t;
  w.pov.t = cur.t;
  w.sv.heading_sign = +1;
  w.pov.heading_sign = -1;
  const bool have_prev = index > 0;
  const auto & prev = have_prev ? log.samples[index - 1] : cur;
  if (!log.has_sv_accel) {
    w.sv.ax = have_prev ? (cur.sv.vx - prev.sv.vx) / log.dt : 0.0;
    w.sv.ay = have_prev ? (cur.sv.vy - prev.sv.vy) / log.dt : 0.0;
  }
  // POV accelerations are not part of the log format.
  w.pov.ax = have_prev ? (cur.pov.vx - prev.pov.vx) / log.dt : 0.0;
  w.pov.ay = have_prev ? (cur.pov.vy - prev.pov.vy) / log.dt : 0.0;
  return w;
}

}  // namespace odli
