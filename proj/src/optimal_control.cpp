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

#include "mergevis/optimal_control.hpp"

#include "mergevis/error.hpp"

#include <cmath>
#include <string>

namespace mergevis
{

ControlLaw solve_min_energy(const BoundaryValueProblem & bvp, double min_horizon)
{
  const double T = bvp.tf - bvp.t0;
  if (!(T >= min_horizon - kTimeTolerance)) {
    throw Error(
      ErrorCode::HorizonTooShort, "horizon " + std::to_string(T) + " s below minimum " +
                                    std::to_string(min_horizon) + " s");
  }
  if (bvp.v0 < 0.0 || bvp.vf < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "boundary speeds must be non-negative");
  }
  const double A = bvp.vf - bvp.v0;
  const double B = bvp.pf - bvp.p0 - bvp.v0 * T;
  const double T2 = T * T;
  ControlLaw law;
  law.t0 = bvp.t0;
  law.tf = bvp.tf;
  law.alpha = -2.0 * A / T + 6.0 * B / T2;
  law.beta = 6.0 * A / T2 - 12.0 * B / (T2 * T);
  return law;
}

double eval_control(const ControlLaw & law, double t)
{
  if (t < law.t0 - kTimeTolerance || t > law.tf + kTimeTolerance) {
    throw Error(
      ErrorCode::OutOfWindow, "t = " + std::to_string(t) + " s outside [" +
                                std::to_string(law.t0) + ", " + std::to_string(law.tf) + "]");
  }
  return law.alpha + law.beta * (t - law.t0);
}

VehicleState propagate(const ControlLaw & law, double p0, double v0, double t)
{
  const double tau = t - law.t0;
  VehicleState s;
  s.t = t;
  s.p = p0 + v0 * tau + 0.5 * law.alpha * tau * tau + law.beta * tau * tau * tau / 6.0;
  s.v = v0 + law.alpha * tau + 0.5 * law.beta * tau * tau;
  s.a = law.alpha + law.beta * tau;
  return s;
}

Trajectory rollout(const ControlLaw & law, double p0, double v0, double dt)
{
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "rollout requires dt > 0");
  }
  const double T = law.horizon();
  const double n_real = std::round(T / dt);
  if (n_real < 0.0 || std::abs(n_real * dt - T) > kTimeTolerance) {
    throw Error(
      ErrorCode::InvalidArgument,
      "dt = " + std::to_string(dt) + " does not divide horizon " + std::to_string(T));
  }
  const auto n = static_cast<std::size_t>(n_real);
  Trajectory out;
  out.samples.reserve(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double t = j == n ? law.tf : law.t0 + static_cast<double>(j) * dt;
    out.samples.push_back(propagate(law, p0, v0, t));
  }
  return out;
}

double energy_cost(const ControlLaw & law)
{
  const double T = law.horizon();
  const double a = law.alpha;
  const double b = law.beta;
  return 0.5 * (a * a * T + a * b * T * T + b * b * T * T * T / 3.0);
}

}  // namespace mergevis
