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

#include "odli/response_analysis.hpp"

#include "odli/error.hpp"

#include <algorithm>
#include <cmath>

namespace odli
{

namespace
{

constexpr double kEps = 1e-9;

}  // namespace

std::string to_string(AccelSource source)
{
  switch (source) {
    case AccelSource::logged:
      return "logged";
    case AccelSource::derived:
      return "derived";
    default:
      return "auto";
  }
}

AccelSource parse_accel_source(const std::string & text)
{
  if (text == "auto") return AccelSource::automatic;
  if (text == "logged") return AccelSource::logged;
  if (text == "derived") return AccelSource::derived;
  fail(ErrorCode::parse, "unknown accel source '" + text + "'");
}

AnalysisWindow make_window(const TrajectoryLog & log, double onset_delay)
{
  const double t_p = time_of_closest_proximity(log);
  const AnalysisWindow window{log.t_T + onset_delay, t_p};
  if (!(window.t_B < window.t_E)) {
    fail(ErrorCode::invalid_argument, "analysis window is empty: closest proximity precedes t_B");
  }
  return window;
}

std::vector<ResponseEvent> detect_responses(
  const TrajectoryLog & log, const AnalysisWindow & window, const ResponseThresholds & thr)
{
  if (log.samples.size() < 2) fail(ErrorCode::invalid_argument, "log too short for detection");
  if (
    window.t_B < log.samples.front().t - kEps || window.t_E > log.samples.back().t + kEps ||
    window.t_B > window.t_E) {
    fail(ErrorCode::invalid_argument, "analysis window is not covered by the log");
  }
  std::vector<ResponseEvent> events;
  for (std::size_t i = 1; i < log.samples.size(); ++i) {
    const double t = log.samples[i].t;
    if (t < window.t_B - kEps) continue;
    if (t > window.t_E + kEps) break;
    const auto & prev = log.samples[i - 1].controls;
    const auto & cur = log.samples[i].controls;
    if (prev.accel_pct >= thr.accel_release_pct && cur.accel_pct < thr.accel_release_pct) {
      events.push_back({ResponseKind::accel_release, t});
    }
    if (prev.brake_pct <= thr.brake_onset_pct && cur.brake_pct > thr.brake_onset_pct) {
      events.push_back({ResponseKind::brake_onset, t});
    }
    if (prev.steer_deg > -thr.steer_onset_deg && cur.steer_deg <= -thr.steer_onset_deg) {
      events.push_back({ResponseKind::steer_shoulder, t});
    }
    if (prev.steer_deg < thr.steer_onset_deg && cur.steer_deg >= thr.steer_onset_deg) {
      events.push_back({ResponseKind::steer_center, t});
    }
  }
  return events;
}

ResponseTimes response_times(std::span<const ResponseEvent> events, double t_T)
{
  ResponseTimes out;
  for (const auto & e : events) {
    auto & slot = out.first[static_cast<std::size_t>(e.kind)];
    const double rt = e.t - t_T;
    if (!slot || rt < *slot) slot = rt;
  }
  for (std::size_t k = 0; k < out.first.size(); ++k) {
    const auto & slot = out.first[k];
    if (!slot) continue;
    if (!out.initial_reaction || *slot < *out.initial_reaction) out.initial_reaction = slot;
    if (static_cast<ResponseKind>(k) == ResponseKind::accel_release) continue;
    if (!out.evasive_response || *slot < *out.evasive_response) out.evasive_response = slot;
  }
  return out;
}

std::string to_string(LateralState state)
{
  switch (state) {
    case LateralState::steer_shoulder:
      return "steer-shoulder";
    case LateralState::steer_center:
      return "steer-center";
    default:
      return "no-steering";
  }
}

std::string to_string(LongitudinalState state)
{
  switch (state) {
    case LongitudinalState::soft_braking:
      return "soft-braking";
    case LongitudinalState::hard_braking:
      return "hard-braking";
    default:
      return "cruising";
  }
}

LateralState lateral_state(double steer_deg, double threshold)
{
  if (steer_deg <= -threshold) return LateralState::steer_shoulder;
  if (steer_deg >= threshold) return LateralState::steer_center;
  return LateralState::no_steering;
}

LongitudinalState longitudinal_state(double ax, double soft, double hard)
{
  if (ax >= soft) return LongitudinalState::cruising;
  if (ax >= hard) return LongitudinalState::soft_braking;
  return LongitudinalState::hard_braking;
}

std::vector<double> sv_longitudinal_accel(
  const TrajectoryLog & log, AccelSource source, double smoothing_window)
{
  const auto n = log.samples.size();
  if (n < 3) fail(ErrorCode::invalid_argument, "too few samples to derive acceleration");
  if (source == AccelSource::automatic) {
    source = log.has_sv_accel ? AccelSource::logged : AccelSource::derived;
  }
  std::vector<double> out(n);
  if (source == AccelSource::logged) {
    if (!log.has_sv_accel) fail(ErrorCode::invalid_argument, "log has no ax channel");
    for (std::size_t i = 0; i < n; ++i) out[i] = log.samples[i].sv.ax;
    return out;
  }
  std::vector<double> raw(n);
  const double dt = log.dt;
  raw[0] = (log.samples[1].sv.vx - log.samples[0].sv.vx) / dt;
  raw[n - 1] = (log.samples[n - 1].sv.vx - log.samples[n - 2].sv.vx) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    raw[i] = (log.samples[i + 1].sv.vx - log.samples[i - 1].sv.vx) / (2.0 * dt);
  }
  const auto half = static_cast<std::size_t>(std::max(0.0, std::round(0.5 * smoothing_window / dt)));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) sum += raw[k];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

ControlState ControlState::from_index(int index)
{
  return {static_cast<LateralState>(index / 3), static_cast<LongitudinalState>(index % 3)};
}

std::string node_name(int node)
{
  if (node >= kOutcomeNodeBase) {
    return to_string(static_cast<Outcome>(node - kOutcomeNodeBase));
  }
  const auto s = ControlState::from_index(node);
  return to_string(s.lateral) + "|" + to_string(s.longitudinal);
}

int outcome_node(Outcome outcome)
{
  return kOutcomeNodeBase + static_cast<int>(outcome);
}

void SequenceGraph::add_transition(int from, int to, long count)
{
  if (from == to) return;
  edges_[{from, to}] += count;
}

void SequenceGraph::add_initial(int node, long count)
{
  initial_[static_cast<std::size_t>(node)] += count;
}

void SequenceGraph::add_occupancy(int node, long count)
{
  occupancy_[static_cast<std::size_t>(node)] += count;
}

void SequenceGraph::merge(const SequenceGraph & other)
{
  for (const auto & [key, count] : other.edges_) edges_[key] += count;
  for (std::size_t i = 0; i < initial_.size(); ++i) {
    initial_[i] += other.initial_[i];
    occupancy_[i] += other.occupancy_[i];
  }
  runs_ += other.runs_;
}

long SequenceGraph::edge_count(int from, int to) const
{
  const auto it = edges_.find({from, to});
  return it == edges_.end() ? 0 : it->second;
}

long SequenceGraph::inflow(int node) const
{
  long sum = 0;
  for (const auto & [key, count] : edges_) {
    if (key.second == node) sum += count;
  }
  return sum;
}

long SequenceGraph::outflow(int node) const
{
  long sum = 0;
  for (const auto & [key, count] : edges_) {
    if (key.first == node) sum += count;
  }
  return sum;
}

namespace
{

std::vector<std::pair<ControlState, long>> state_runs(
  const TrajectoryLog & log, const AnalysisWindow & window, const AnalysisOptions & options)
{
  const auto ax = sv_longitudinal_accel(log, options.accel_source, options.smoothing_window);
  std::vector<std::pair<ControlState, long>> out;
  for (std::size_t i = 0; i < log.samples.size(); ++i) {
    const double t = log.samples[i].t;
    if (t < window.t_B - kEps) continue;
    if (t > window.t_E + kEps) break;
    const ControlState s{
      lateral_state(log.samples[i].controls.steer_deg, options.thresholds.steer_onset_deg),
      longitudinal_state(ax[i], options.soft_brake_accel, options.hard_brake_accel)};
    if (out.empty() || !(out.back().first == s)) {
      out.push_back({s, 1});
    } else {
      ++out.back().second;
    }
  }
  if (out.empty()) fail(ErrorCode::invalid_argument, "analysis window contains no samples");
  return out;
}

}  // namespace

std::vector<ControlState> state_path(
  const TrajectoryLog & log, const AnalysisWindow & window, const AnalysisOptions & options)
{
  std::vector<ControlState> out;
  for (const auto & [state, count] : state_runs(log, window, options)) out.push_back(state);
  return out;
}

SequenceGraph build_sequence_graph(
  std::span<const SequenceRun> runs, const AnalysisOptions & options,
  std::vector<std::string> * diagnostics)
{
  SequenceGraph graph;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto & run = runs[r];
    if (run.log == nullptr || !run.outcome) {
      if (diagnostics) {
        diagnostics->push_back("run " + std::to_string(r) + " skipped: missing outcome");
      }
      continue;
    }
    const auto path = state_runs(*run.log, run.window, options);
    graph.add_run();
    graph.add_initial(path.front().first.index());
    for (std::size_t i = 0; i < path.size(); ++i) {
      graph.add_occupancy(path[i].first.index(), path[i].second);
      if (i > 0) graph.add_transition(path[i - 1].first.index(), path[i].first.index());
    }
    graph.add_transition(path.back().first.index(), outcome_node(*run.outcome));
  }
  return graph;
}

}  // namespace odli
