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

#ifndef MERGEVIS__OPTIMAL_CONTROL_HPP_
#define MERGEVIS__OPTIMAL_CONTROL_HPP_

#include "mergevis/kinematics.hpp"

namespace mergevis
{

/// Shortest horizon accepted by the solver; guards the T^3 division.
inline constexpr double kDefaultMinHorizon = 0.2;

/// Fixed-endpoint transfer of a double integrator from (p0, v0) at t0 to
/// (pf, vf) at tf.
struct BoundaryValueProblem
{
  double t0{0.0};
  double tf{0.0};
  double p0{0.0};
  double v0{0.0};
  double pf{0.0};
  double vf{0.0};
};

/// Affine acceleration profile u(t) = alpha + beta * (t - t0) on [t0, tf].
struct ControlLaw
{
  double alpha{0.0};
  double beta{0.0};
  double t0{0.0};
  double tf{0.0};

  double horizon() const { return tf - t0; }
};

inline ControlLaw zero_law(double t0, double tf) { return ControlLaw{0.0, 0.0, t0, tf}; }

/// Minimum of the integral of u^2 / 2 subject to the boundary states.
///
/// Pontryagin's conditions make the speed costate linear in time and u equal
/// to its negative, so the optimal input is affine. With T = tf - t0,
/// A = vf - v0 and B = pf - p0 - v0 T the two endpoint conditions give
///
///   beta  =  6 A / T^2 - 12 B / T^3
///   alpha = -2 A / T   +  6 B / T^2
///
/// Acceleration is not bounded here; comfort limits are checked downstream.
/// Throws HorizonTooShort when T < min_horizon and InvalidArgument for
/// negative boundary speeds.
ControlLaw solve_min_energy(
  const BoundaryValueProblem & bvp, double min_horizon = kDefaultMinHorizon);

/// u(t); throws OutOfWindow outside [t0, tf].
double eval_control(const ControlLaw & law, double t);

/// State reached at absolute time `t` when the law is applied from
/// (p0, v0) at law.t0. Uses the closed-form cubic; `t` may lie beyond tf.
VehicleState propagate(const ControlLaw & law, double p0, double v0, double t);

/// Samples of the closed-form motion every `dt` from t0 to tf inclusive.
/// Sample accelerations are the instantaneous u(t). Throws InvalidArgument
/// unless dt divides the horizon within 1e-9 s.
Trajectory rollout(const ControlLaw & law, double p0, double v0, double dt = kSampleStep);

/// Integral of u^2 / 2 over the window, in (m/s^2)^2 s.
double energy_cost(const ControlLaw & law);

}  // namespace mergevis

#endif  // MERGEVIS__OPTIMAL_CONTROL_HPP_
