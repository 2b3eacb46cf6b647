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

#ifndef MERGEVIS__KINEMATICS_HPP_
#define MERGEVIS__KINEMATICS_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mergevis
{

/// Sampling step of the simulation grid (25 Hz, the exiD frame rate).
inline constexpr double kSampleStep = 0.04;
inline constexpr double kTimeTolerance = 1e-9;

enum class Lane { Mainline, OnRamp };

std::string_view to_string(Lane lane);
Lane lane_from_string(std::string_view text);

/// Longitudinal state of one vehicle. `p` is the front bumper position along
/// the lane with the Start Line at 0; the rear bumper is at `p - l`.
struct VehicleState
{
  double t{0.0};
  double p{0.0};
  double v{0.0};
  double a{0.0};
};

struct StepResult
{
  VehicleState state;
  bool speed_clamped{false};
};

/// Exact double-integrator update under a constant input `u` held for `dt`.
/// If the vehicle would reverse, it stops at v = 0 (at the stopping
/// position) and `speed_clamped` is set.
StepResult step(const VehicleState & state, double u, double dt);

struct Trajectory
{
  std::string vehicle_id;
  Lane lane{Lane::Mainline};
  /// Real data does not satisfy the simulator's kinematic consistency.
  bool ingested{false};
  std::vector<VehicleState> samples;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
  const VehicleState & front() const { return samples.front(); }
  const VehicleState & back() const { return samples.back(); }
  double duration() const { return empty() ? 0.0 : back().t - front().t; }
};

/// Grid helpers. Times are always rebuilt as k * dt rather than accumulated.
double grid_time(std::size_t k, double dt = kSampleStep);
std::size_t grid_index(double t, double dt = kSampleStep);
bool on_grid(double t, double dt = kSampleStep);

/// First time the trajectory reaches `p_target`, linearly interpolated
/// between the bracketing samples. Throws NotReached past the last sample
/// and InvalidArgument before the first one.
double crossing_time(const Trajectory & traj, double p_target);

/// Same as crossing_time, but outside the recorded span the vehicle is
/// assumed to hold its boundary speed. Throws NotReached when the boundary
/// speed is zero and the target lies outside the span.
double crossing_time_extrapolated(const Trajectory & traj, double p_target);

/// State at time `t` inside the span. Simulator trajectories use the exact
/// constant-acceleration update from the preceding sample; ingested ones are
/// linearly interpolated.
VehicleState state_at(const Trajectory & traj, double t);

/// Sub-trajectory on [t0, t1]. Grid samples strictly inside the window are
/// copied; off-grid endpoints are interpolated with state_at.
Trajectory resample_window(const Trajectory & traj, double t0, double t1);

/// Largest violation of p' = p + v dt + a dt^2 / 2 and v' = v + a dt over
/// consecutive samples, using each interval's actual length.
double max_kinematic_residual(const Trajectory & traj);

}  // namespace mergevis

#endif  // MERGEVIS__KINEMATICS_HPP_
