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

#ifndef MERGEVIS__METRICS_HPP_
#define MERGEVIS__METRICS_HPP_

#include "mergevis/kinematics.hpp"
#include "mergevis/merge_planning.hpp"

#include <cstddef>
#include <optional>
#include <span>

namespace mergevis
{

/// Polynomial fuel-rate model: cruise term in v, plus an acceleration term
/// a (s0 + s1 v + s2 v^2). Units give mL/s for v in m/s and a in m/s^2.
struct FuelCoefficients
{
  double theta0{0.1569};
  double theta1{0.0245};
  double theta2{-7.415e-4};
  double theta3{5.975e-5};
  double sig0{7.224e-2};
  double sig1{9.681e-2};
  double sig2{1.075e-3};
};

/// What a decelerating sample (a < 0) consumes.
enum class DecelerationRule {
  ZeroTotalRate,         // the whole instantaneous rate is neglected
  ZeroAccelerationTerm,  // only the acceleration term is dropped
};

struct MetricsConfig
{
  FuelCoefficients fuel;
  DecelerationRule deceleration{DecelerationRule::ZeroTotalRate};
  double dt{kSampleStep};
};

/// Crossing-time gap at a critical position: the follower's front arrival
/// minus the moment the leader's rear clears it (leader front at
/// p_critical + l). Positions beyond either trajectory are extrapolated at
/// the boundary speed. A value <= 0 means the two vehicles overlap.
double merging_time_gap(
  const Trajectory & lead, const Trajectory & follow, double p_critical, double l);

/// Critical position of a merge: where the leader's rear is at t_mer.
double merge_critical_position(const Trajectory & lead, double t_mer, double l);

/// merging_time_gap evaluated at the merge's critical position, with the
/// lead/follow roles taken from the merge sequence.
double pair_merging_time_gap(
  const Trajectory & onramp, const Trajectory & mainline, const MergeSpec & spec);

/// Root mean square acceleration. A trajectory of n > 1 samples covers n - 1
/// sampling intervals and each interval contributes its starting sample.
double a_rms(const Trajectory & traj);

double fuel_rate(
  double v, double a, const FuelCoefficients & coeffs = {},
  DecelerationRule rule = DecelerationRule::ZeroTotalRate);

/// Rectangle-rule fuel use over the same samples a_rms uses, in mL.
double fuel(
  const Trajectory & traj, const FuelCoefficients & coeffs = {}, double dt = kSampleStep,
  DecelerationRule rule = DecelerationRule::ZeroTotalRate);

struct PairMetrics
{
  double gap_s{0.0};
  double arms_onramp{0.0};
  double arms_mainline{0.0};
  double fuel_onramp{0.0};
  double fuel_mainline{0.0};
  bool collision{false};
};

/// All measures over the window [0, t_mer].
PairMetrics evaluate_pair(
  const Trajectory & onramp, const Trajectory & mainline, const MergeSpec & spec,
  const MetricsConfig & cfg = {});

struct MetricsAggregate
{
  std::size_t n{0};
  std::size_t collisions{0};
  double gap_s{0.0};
  double arms_onramp{0.0};
  double arms_mainline{0.0};
  double fuel_onramp{0.0};
  double fuel_mainline{0.0};
};

/// Means in input order (callers pass metrics sorted by pair id).
MetricsAggregate aggregate(std::span<const PairMetrics> metrics);

/// Percent improvement of a case over the baseline. Fuel and A-RMS improve
/// when they drop, the merging gap improves when it grows. A zero baseline
/// leaves the rate undefined.
struct ImprovementRates
{
  std::optional<double> gap_s;
  std::optional<double> arms_onramp;
  std::optional<double> arms_mainline;
  std::optional<double> fuel_onramp;
  std::optional<double> fuel_mainline;
};

ImprovementRates improvement_rates(const MetricsAggregate & baseline, const MetricsAggregate & other);

struct WelchResult
{
  double t_stat{0.0};
  double dof{0.0};
  double p_value{1.0};
  bool significant_95{false};
};

/// Welch's unequal-variance t test, two-sided. t_stat has the sign of
/// mean(xs) - mean(ys). Throws DegenerateSamples when a sample has fewer
/// than two values or both variances vanish.
WelchResult welch_t_test(std::span<const double> xs, std::span<const double> ys);

}  // namespace mergevis

#endif  // MERGEVIS__METRICS_HPP_
