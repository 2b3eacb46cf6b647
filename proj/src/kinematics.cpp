// Copyright 2026 The mergevis Authors
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

#include "mergevis/kinematics.hpp"

#include "mergevis/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mergevis
{

std::string_view to_string(Lane lane)
{
  return lane == Lane::Mainline ? "mainline" : "onramp";
}

Lane lane_from_string(std::string_view text)
{
  if (text == "mainline") {
    return Lane::Mainline;
  }
  if (text == "onramp") {
    return Lane::OnRamp;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown lane '" + std::string(text) + "'");
}

StepResult step(const VehicleState & state, double u, double dt)
{
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "step requires dt > 0");
  }
  StepResult out;
  out.state.t = state.t + dt;
  out.state.a = u;
  const double v_next = state.v + u * dt;
  if (v_next < 0.0) {
    // u < 0 here; the vehicle stops after v / |u| seconds and stays put.
    const double t_stop = -state.v / u;
    out.state.p = state.p + state.v * t_stop + 0.5 * u * t_stop * t_stop;
    out.state.v = 0.0;
    out.speed_clamped = true;
  } else {
    out.state.p = state.p + state.v * dt + 0.5 * u * dt * dt;
    out.state.v = v_next;
  }
  return out;
}

double grid_time(std::size_t k, double dt) { return static_cast<double>(k) * dt; }

std::size_t grid_index(double t, double dt)
{
  const double k = std::round(t / dt);
  return k < 0.0 ? 0U : static_cast<std::size_t>(k);
}

bool on_grid(double t, double dt)
{
  return t >= -kTimeTolerance && std::abs(grid_time(grid_index(t, dt), dt) - t) <= kTimeTolerance;
}

namespace
{

void require_samples(const Trajectory & traj, const char * op)
{
  if (traj.empty()) {
    throw Error(ErrorCode::InvalidArgument, std::string(op) + " on an empty trajectory");
  }
}

// Index of the first sample with p >= target, or size() if never reached.
std::size_t first_reaching(const Trajectory & traj, double p_target)
{
  const auto it = std::find_if(
    traj.samples.begin(), traj.samples.end(),
    [p_target](const VehicleState & s) { return s.p >= p_target; });
  return static_cast<std::size_t>(it - traj.samples.begin());
}

}  // namespace

double crossing_time(const Trajectory & traj, double p_target)
{
  require_samples(traj, "crossing_time");
  const auto & s = traj.samples;
  if (p_target < s.front().p) {
    throw Error(
      ErrorCode::InvalidArgument,
      "target " + std::to_string(p_target) + " m lies before the first sample");
  }
  const std::size_t k = first_reaching(traj, p_target);
  if (k == s.size()) {
    throw Error(
      ErrorCode::NotReached, "position " + std::to_string(p_target) + " m is never reached");
  }
  if (k == 0) {
    return s.front().t;
  }
  const VehicleState & lo = s[k - 1];
  const VehicleState & hi = s[k];
  const double frac = (p_target - lo.p) / (hi.p - lo.p);
  return lo.t + frac * (hi.t - lo.t);
}

double crossing_time_extrapolated(const Trajectory & traj, double p_target)
{
  require_samples(traj, "crossing_time_extrapolated");
  const VehicleState & first = traj.front();
  const VehicleState & last = traj.back();
  if (p_target < first.p) {
    if (first.v <= 0.0) {
      throw Error(ErrorCode::NotReached, "stationary at the first sample, cannot extrapolate");
    }
    return first.t - (first.p - p_target) / first.v;
  }
  if (first_reaching(traj, p_target) == traj.size()) {
    if (last.v <= 0.0) {
      throw Error(
        ErrorCode::NotReached,
        "position " + std::to_string(p_target) + " m is never reached (vehicle stopped)");
    }
    return last.t + (p_target - last.p) / last.v;
  }
  return crossing_time(traj, p_target);
}

VehicleState state_at(const Trajectory & traj, double t)
{
  require_samples(traj, "state_at");
  const auto & s = traj.samples;
  if (t < s.front().t - kTimeTolerance || t > s.back().t + kTimeTolerance) {
    throw Error(ErrorCode::OutOfSpan, "time " + std::to_string(t) + " s outside trajectory span");
  }
  // Last sample with t_k <= t.
  auto it = std::upper_bound(
    s.begin(), s.end(), t + kTimeTolerance,
    [](double value, const VehicleState & x) { return value < x.t; });
  const std::size_t k = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
  const VehicleState & lo = s[k];
  if (std::abs(lo.t - t) <= kTimeTolerance || k + 1 == s.size()) {
    return lo;
  }
  const VehicleState & hi = s[k + 1];
  const double tau = t - lo.t;
  VehicleState out;
  out.t = t;
  if (traj.ingested) {
    const double frac = tau / (hi.t - lo.t);
    out.p = lo.p + frac * (hi.p - lo.p);
    out.v = lo.v + frac * (hi.v - lo.v);
    out.a = lo.a + frac * (hi.a - lo.a);
  } else {
    out.p = lo.p + lo.v * tau + 0.5 * lo.a * tau * tau;
    out.v = lo.v + lo.a * tau;
    out.a = lo.a;
  }
  return out;
}

Trajectory resample_window(const Trajectory & traj, double t0, double t1)
{
  require_samples(traj, "resample_window");
  if (!(t0 < t1) || t0 < traj.front().t - kTimeTolerance || t1 > traj.back().t + kTimeTolerance) {
    throw Error(
      ErrorCode::OutOfSpan, "window [" + std::to_string(t0) + ", " + std::to_string(t1) +
                              "] not inside the trajectory span");
  }
  Trajectory out;
  out.vehicle_id = traj.vehicle_id;
  out.lane = traj.lane;
  out.ingested = traj.ingested;
  out.samples.push_back(state_at(traj, t0));
  for (const VehicleState & s : traj.samples) {
    if (s.t > t0 + kTimeTolerance && s.t < t1 - kTimeTolerance) {
      out.samples.push_back(s);
    }
  }
  out.samples.push_back(state_at(traj, t1));
  return out;
}

double max_kinematic_residual(const Trajectory & traj)
{
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const VehicleState & s = traj.samples[k];
    const VehicleState & n = traj.samples[k + 1];
    const double dt = n.t - s.t;
    worst = std::max(worst, std::abs(n.p - (s.p + s.v * dt + 0.5 * s.a * dt * dt)));
    worst = std::max(worst, std::abs(n.v - (s.v + s.a * dt)));
  }
  return worst;
}

}  // namespace mergevis
