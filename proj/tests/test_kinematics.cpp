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
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace mergevis
{
namespace
{

TEST(StepTest, ZeroInputDrift)
{
  const StepResult r = step(VehicleState{0.0, 0.0, 10.0, 0.0}, 0.0, 0.04);
  EXPECT_NEAR(r.state.p, 0.4, 1e-12);
  EXPECT_NEAR(r.state.v, 10.0, 1e-12);
  EXPECT_NEAR(r.state.t, 0.04, 1e-12);
  EXPECT_FALSE(r.speed_clamped);
}

TEST(StepTest, ConstantAcceleration)
{
  const StepResult r = step(VehicleState{0.0, 0.0, 10.0, 0.0}, 2.0, 1.0);
  EXPECT_NEAR(r.state.p, 11.0, 1e-12);
  EXPECT_NEAR(r.state.v, 12.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.state.a, 2.0);
}

TEST(StepTest, BrakingQuadraticUpdate)
{
  // 100 + 20 * 0.04 - 0.5 * 0.0016
  const StepResult r = step(VehicleState{0.0, 100.0, 20.0, 0.0}, -1.0, 0.04);
  EXPECT_NEAR(r.state.p, 100.7992, 1e-9);
  EXPECT_NEAR(r.state.v, 19.96, 1e-9);
}

TEST(StepTest, ReversalIsClampedAtTheStoppingPoint)
{
  const StepResult r = step(VehicleState{0.0, 0.0, 1.0, 0.0}, -2.0, 1.0);
  EXPECT_TRUE(r.speed_clamped);
  EXPECT_DOUBLE_EQ(r.state.v, 0.0);
  EXPECT_NEAR(r.state.p, 0.25, 1e-12);  // v^2 / (2|u|)
  EXPECT_DOUBLE_EQ(r.state.a, -2.0);
}

TEST(StepTest, RejectsNonPositiveStep)
{
  EXPECT_THROW(step(VehicleState{}, 0.0, 0.0), Error);
}

TEST(StepTest, ComposedStepsMatchOneLongStep)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> v0(0.0, 35.0);
  std::uniform_real_distribution<double> u(-1.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    VehicleState s{0.0, 0.0, v0(rng), 0.0};
    const double ui = u(rng);
    if (s.v + ui * 4.0 < 0.0) {
      continue;
    }
    const StepResult once = step(s, ui, 4.0);
    for (int k = 0; k < 100; ++k) {
      s = step(s, ui, 0.04).state;
    }
    EXPECT_NEAR(s.p, once.state.p, 1e-9);
    EXPECT_NEAR(s.v, once.state.v, 1e-9);
  }
}

TEST(GridTest, IndexAndMembership)
{
  EXPECT_EQ(grid_index(3.52), 88U);
  EXPECT_NEAR(grid_time(88), 3.52, 1e-12);
  EXPECT_TRUE(on_grid(3.52));
  EXPECT_FALSE(on_grid(3.5));
  EXPECT_FALSE(on_grid(-0.04));
}

TEST(CrossingTimeTest, ConstantSpeed)
{
  const Trajectory traj = test::constant_speed(0.0, 20.0, 200);
  EXPECT_NEAR(crossing_time(traj, 100.0), 5.0, 1e-9);
}

TEST(CrossingTimeTest, LinearMidpoint)
{
  Trajectory traj;
  traj.samples = {VehicleState{0.0, 0.0, 10.0, 0.0}, VehicleState{0.04, 0.4, 10.0, 0.0}};
  EXPECT_NEAR(crossing_time(traj, 0.2), 0.02, 1e-12);
}

TEST(CrossingTimeTest, AcceleratingProfileMatchesQuadraticRoot)
{
  // p(t) = 10 t + t^2 under u = 2; crossing of 30 m solves t^2 + 10 t - 30 = 0.
  const Trajectory traj = test::stepped(0.0, 10.0, 2.0, 200);
  const double root = (-10.0 + std::sqrt(100.0 + 120.0)) / 2.0;
  // Chord interpolation of a parabola errs by at most u dt^2 / 8 in position.
  EXPECT_NEAR(crossing_time(traj, 30.0), root, 2.0 * 0.04 * 0.04 / 8.0 / 10.0);
}

TEST(CrossingTimeTest, OutOfSpan)
{
  const Trajectory traj = test::constant_speed(10.0, 20.0, 10);
  try {
    crossing_time(traj, 1000.0);
    FAIL() << "expected NotReached";
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::NotReached);
  }
  EXPECT_THROW(crossing_time(traj, 0.0), Error);
}

TEST(CrossingTimeTest, ExtrapolatesAtBoundarySpeed)
{
  const Trajectory traj = test::constant_speed(10.0, 20.0, 26);  // [0, 1] s, p in [10, 30]
  EXPECT_NEAR(crossing_time_extrapolated(traj, 50.0), 2.0, 1e-9);
  EXPECT_NEAR(crossing_time_extrapolated(traj, 0.0), -0.5, 1e-9);
  EXPECT_NEAR(crossing_time_extrapolated(traj, 20.0), 0.5, 1e-9);
}

TEST(CrossingTimeTest, MonotoneInTarget)
{
  const Trajectory traj = test::stepped(0.0, 5.0, 0.7, 300);
  double prev = -1.0;
  for (double p = 0.0; p <= traj.back().p; p += 0.37) {
    const double t = crossing_time(traj, p);
    EXPECT_GE(t, prev);
    prev = t;
  }
}

TEST(ResampleWindowTest, FullSpanIsIdentity)
{
  const Trajectory traj = test::stepped(0.0, 12.0, 0.5, 50);
  const Trajectory out = resample_window(traj, traj.front().t, traj.back().t);
  ASSERT_EQ(out.size(), traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    EXPECT_DOUBLE_EQ(out.samples[k].p, traj.samples[k].p);
    EXPECT_DOUBLE_EQ(out.samples[k].v, traj.samples[k].v);
  }
}

TEST(ResampleWindowTest, TwoSampleWindow)
{
  const Trajectory traj = test::stepped(0.0, 12.0, 0.5, 2);
  const Trajectory out = resample_window(traj, 0.0, 0.04);
  ASSERT_EQ(out.size(), 2U);
  EXPECT_DOUBLE_EQ(out.back().p, traj.back().p);
}

TEST(ResampleWindowTest, MidSampleStartStaysKinematicallyConsistent)
{
  const Trajectory traj = test::stepped(0.0, 12.0, 0.5, 50);
  ASSERT_LT(max_kinematic_residual(traj), 1e-9);
  const Trajectory out = resample_window(traj, 0.1, 1.5);
  EXPECT_NEAR(out.front().t, 0.1, 1e-12);
  EXPECT_NEAR(out.front().p, 12.0 * 0.1 + 0.25 * 0.01, 1e-9);
  EXPECT_LT(max_kinematic_residual(out), 1e-6);
}

TEST(ResampleWindowTest, OutOfSpan)
{
  const Trajectory traj = test::stepped(0.0, 12.0, 0.5, 10);
  try {
    resample_window(traj, 0.0, 5.0);
    FAIL() << "expected OutOfSpan";
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfSpan);
  }
}

TEST(KinematicResidualTest, DetectsInconsistentSamples)
{
  Trajectory traj = test::stepped(0.0, 12.0, 0.5, 10);
  traj.samples[5].p += 0.01;
  EXPECT_GT(max_kinematic_residual(traj), 1e-3);
}

}  // namespace
}  // namespace mergevis
