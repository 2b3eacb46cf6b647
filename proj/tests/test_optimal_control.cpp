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

#include "mergevis/error.hpp"
#include "mergevis/kinematics.hpp"
#include "mergevis/optimal_control.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace mergevis
{
namespace
{

TEST(SolveMinEnergyTest, AlreadyOnTarget)
{
  const ControlLaw law = solve_min_energy({0.0, 10.0, 0.0, 10.0, 100.0, 10.0});
  EXPECT_NEAR(law.alpha, 0.0, 1e-12);
  EXPECT_NEAR(law.beta, 0.0, 1e-12);
}

TEST(SolveMinEnergyTest, ConstantAcceleration)
{
  const ControlLaw law = solve_min_energy({0.0, 10.0, 0.0, 10.0, 110.0, 12.0});
  EXPECT_NEAR(law.alpha, 0.2, 1e-12);
  EXPECT_NEAR(law.beta, 0.0, 1e-12);
  const VehicleState end = propagate(law, 0.0, 10.0, 10.0);
  EXPECT_NEAR(end.p, 110.0, 1e-9);
  EXPECT_NEAR(end.v, 12.0, 1e-9);
}

TEST(SolveMinEnergyTest, AffineLaw)
{
  // T = 5, A = 2, B = 10: beta = 12/25 - 120/125, alpha = -4/5 + 60/25.
  const ControlLaw law = solve_min_energy({0.0, 5.0, 0.0, 20.0, 110.0, 22.0});
  EXPECT_NEAR(law.alpha, 1.6, 1e-12);
  EXPECT_NEAR(law.beta, -0.48, 1e-12);
}

TEST(SolveMinEnergyTest, Errors)
{
  try {
    solve_min_energy({0.0, 0.1, 0.0, 10.0, 1.0, 10.0});
    FAIL() << "expected HorizonTooShort";
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::HorizonTooShort);
  }
  EXPECT_THROW(solve_min_energy({0.0, 5.0, 0.0, -1.0, 10.0, 1.0}), Error);
  EXPECT_THROW(solve_min_energy({0.0, 5.0, 0.0, 1.0, 10.0, -1.0}), Error);
}

TEST(SolveMinEnergyTest, TimeTranslationInvariance)
{
  const ControlLaw a = solve_min_energy({0.0, 7.0, 3.0, 14.0, 130.0, 21.0});
  const ControlLaw b = solve_min_energy({42.0, 49.0, 3.0, 14.0, 130.0, 21.0});
  EXPECT_NEAR(a.alpha, b.alpha, 1e-10);
  EXPECT_NEAR(a.beta, b.beta, 1e-10);
}

TEST(EvalControlTest, Values)
{
  const ControlLaw law{1.6, -0.48, 2.0, 7.0};
  EXPECT_DOUBLE_EQ(eval_control(law, 2.0), 1.6);
  EXPECT_NEAR(eval_control(law, 7.0), -0.8, 1e-12);
  EXPECT_DOUBLE_EQ(eval_control(zero_law(0.0, 3.0), 1.7), 0.0);
  try {
    eval_control(law, 7.5);
    FAIL() << "expected OutOfWindow";
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfWindow);
  }
}

TEST(RolloutTest, ZeroLawIsStraightLine)
{
  const Trajectory traj = rollout(zero_law(0.0, 1.0), 0.0, 10.0, 0.04);
  ASSERT_EQ(traj.size(), 26U);
  EXPECT_NEAR(traj.back().p, 10.0, 1e-12);
  EXPECT_NEAR(traj.back().t, 1.0, 1e-12);
}

TEST(RolloutTest, AffineLawHitsEndpoints)
{
  const ControlLaw law = solve_min_energy({0.0, 5.0, 0.0, 20.0, 110.0, 22.0});
  const Trajectory traj = rollout(law, 0.0, 20.0, 0.04);
  EXPECT_NEAR(traj.back().p, 110.0, 1e-6);
  EXPECT_NEAR(traj.back().v, 22.0, 1e-6);
}

TEST(RolloutTest, RejectsStepThatDoesNotDivideHorizon)
{
  EXPECT_THROW(rollout(zero_law(0.0, 1.0), 0.0, 10.0, 0.3), Error);
}

TEST(RolloutTest, MatchesRepeatedStepping)
{
  // Stepping holds u(t_k) over each interval, so it departs from the cubic
  // closed form by O(|beta| T dt) in position; a constant law agrees exactly.
  const ControlLaw constant = solve_min_energy({0.0, 10.0, 0.0, 10.0, 110.0, 12.0});
  const Trajectory rolled = rollout(constant, 0.0, 10.0, 0.04);
  VehicleState s{0.0, 0.0, 10.0, 0.0};
  for (std::size_t k = 0; k + 1 < rolled.size(); ++k) {
    s = step(s, eval_control(constant, s.t), 0.04).state;
    EXPECT_NEAR(s.p, rolled.samples[k + 1].p, 1e-4);
  }

  const ControlLaw affine = solve_min_energy({0.0, 10.0, 0.0, 15.0, 180.0, 20.0});
  const Trajectory rolled2 = rollout(affine, 0.0, 15.0, 0.04);
  s = VehicleState{0.0, 0.0, 15.0, 0.0};
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < rolled2.size(); ++k) {
    s = step(s, eval_control(affine, s.t), 0.04).state;
    worst = std::max(worst, std::abs(s.p - rolled2.samples[k + 1].p));
  }
  const double bound = std::abs(affine.beta) * 10.0 * 10.0 * 0.04;
  EXPECT_LT(worst, bound);
}

TEST(EnergyCostTest, ClosedForm)
{
  EXPECT_NEAR(energy_cost(ControlLaw{0.2, 0.0, 0.0, 10.0}), 0.2, 1e-12);
  EXPECT_DOUBLE_EQ(energy_cost(zero_law(0.0, 10.0)), 0.0);
  // 0.5 * (2.56 * 5 - 0.768 * 25 + 0.2304 * 125 / 3) = 0.5 * (12.8 - 19.2 + 9.6)
  EXPECT_NEAR(energy_cost(ControlLaw{1.6, -0.48, 0.0, 5.0}), 1.6, 1e-12);
}

TEST(EnergyCostTest, MatchesQuadrature)
{
  const ControlLaw law{1.6, -0.48, 0.0, 5.0};
  const int n = 20000;
  const double h = 5.0 / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = eval_control(law, (i + 0.5) * h);
    sum += 0.5 * u * u * h;
  }
  EXPECT_NEAR(sum, energy_cost(law), 1e-6);
  EXPECT_NEAR(sum, 1.6, 1e-6);
}

class RandomBvpTest : public ::testing::Test
{
protected:
  BoundaryValueProblem draw()
  {
    std::uniform_real_distribution<double> horizon(0.2, 20.0);
    std::uniform_real_distribution<double> speed(0.0, 35.0);
    std::uniform_real_distribution<double> offset(-50.0, 50.0);
    BoundaryValueProblem bvp;
    bvp.t0 = std::round(offset(rng_) * 25.0) * 0.04;
    bvp.tf = bvp.t0 + std::max(0.2, std::round(horizon(rng_) * 25.0) * 0.04);
    bvp.p0 = offset(rng_);
    bvp.v0 = speed(rng_);
    bvp.vf = speed(rng_);
    const double T = bvp.tf - bvp.t0;
    bvp.pf = bvp.p0 + 0.5 * (bvp.v0 + bvp.vf) * T + offset(rng_) * 0.1 * T;
    return bvp;
  }

  std::mt19937_64 rng_{2026};
};

TEST_F(RandomBvpTest, RolloutReachesTerminalState)
{
  for (int i = 0; i < 1000; ++i) {
    const BoundaryValueProblem bvp = draw();
    const ControlLaw law = solve_min_energy(bvp);
    const Trajectory traj = rollout(law, bvp.p0, bvp.v0, 0.04);
    EXPECT_NEAR(traj.back().p, bvp.pf, 1e-6);
    EXPECT_NEAR(traj.back().v, bvp.vf, 1e-6);
    EXPECT_NEAR(traj.back().t, bvp.tf, 1e-9);
  }
}

TEST_F(RandomBvpTest, BeatsTwoSegmentCompetitors)
{
  // Piecewise-constant controls u1 on [0, s], u2 on [s, T] hitting the same
  // endpoints: u1 s + u2 r = A and u1 (s^2/2 + s r) + u2 r^2/2 = B, r = T - s.
  std::uniform_real_distribution<double> split(0.05, 0.95);
  for (int i = 0; i < 300; ++i) {
    const BoundaryValueProblem bvp = draw();
    const ControlLaw law = solve_min_energy(bvp);
    const double T = bvp.tf - bvp.t0;
    const double A = bvp.vf - bvp.v0;
    const double B = bvp.pf - bvp.p0 - bvp.v0 * T;
    const double s = split(rng_) * T;
    const double r = T - s;
    const double det = -0.5 * s * r * T;
    const double u1 = (0.5 * r * r * A - r * B) / det;
    const double u2 = (s * B - (0.5 * s * s + s * r) * A) / det;
    ASSERT_NEAR(u1 * s + u2 * r, A, 1e-8);
    const double competitor = 0.5 * (u1 * u1 * s + u2 * u2 * r);
    EXPECT_LE(energy_cost(law), competitor + 1e-9);
  }
}

}  // namespace
}  // namespace mergevis
