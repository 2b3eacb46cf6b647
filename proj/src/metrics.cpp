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

#include "mergevis/metrics.hpp"

#include "mergevis/error.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <numeric>

namespace mergevis
{

double merging_time_gap(
  const Trajectory & lead, const Trajectory & follow, double p_critical, double l)
{
  const double follow_arrives = crossing_time_extrapolated(follow, p_critical);
  const double lead_clears = crossing_time_extrapolated(lead, p_critical + l);
  return follow_arrives - lead_clears;
}

double merge_critical_position(const Trajectory & lead, double t_mer, double l)
{
  return state_at(lead, t_mer).p - l;
}

double pair_merging_time_gap(
  const Trajectory & onramp, const Trajectory & mainline, const MergeSpec & spec)
{
  const bool onramp_leads = spec.sequence == MergeSequence::OnRampLeads;
  const Trajectory & lead = onramp_leads ? onramp : mainline;
  const Trajectory & follow = onramp_leads ? mainline : onramp;
  return merging_time_gap(lead, follow, merge_critical_position(lead, spec.t_mer, spec.l), spec.l);
}

namespace
{

std::span<const VehicleState> interval_samples(const Trajectory & traj)
{
  if (traj.empty()) {
    throw Error(ErrorCode::InvalidArgument, "metric on an empty trajectory");
  }
  const std::size_t n = traj.size() == 1 ? 1 : traj.size() - 1;
  return std::span<const VehicleState>(traj.samples.data(), n);
}

}  // namespace

double a_rms(const Trajectory & traj)
{
  const auto samples = interval_samples(traj);
  double sum = 0.0;
  for (const VehicleState & s : samples) {
    sum += s.a * s.a;
  }
  return std::sqrt(sum / static_cast<double>(samples.size()));
}

double fuel_rate(double v, double a, const FuelCoefficients & c, DecelerationRule rule)
{
  if (a < 0.0 && rule == DecelerationRule::ZeroTotalRate) {
    return 0.0;
  }
  const double cruise = c.theta0 + v * (c.theta1 + v * (c.theta2 + v * c.theta3));
  const double accel = a < 0.0 ? 0.0 : a * (c.sig0 + v * (c.sig1 + v * c.sig2));
  return cruise + accel;
}

double fuel(const Trajectory & traj, const FuelCoefficients & coeffs, double dt, DecelerationRule rule)
{
  double total = 0.0;
  for (const VehicleState & s : interval_samples(traj)) {
    total += fuel_rate(s.v, s.a, coeffs, rule) * dt;
  }
  return total;
}

PairMetrics evaluate_pair(
  const Trajectory & onramp, const Trajectory & mainline, const MergeSpec & spec,
  const MetricsConfig & cfg)
{
  auto window = [&spec](const Trajectory & traj) {
    const bool exact = std::abs(traj.front().t) <= kTimeTolerance &&
                       std::abs(traj.back().t - spec.t_mer) <= kTimeTolerance;
    return exact ? traj : resample_window(traj, 0.0, spec.t_mer);
  };
  const Trajectory on = window(onramp);
  const Trajectory main = window(mainline);
  PairMetrics m;
  m.gap_s = pair_merging_time_gap(on, main, spec);
  m.collision = m.gap_s <= 0.0;
  m.arms_onramp = a_rms(on);
  m.arms_mainline = a_rms(main);
  m.fuel_onramp = fuel(on, cfg.fuel, cfg.dt, cfg.deceleration);
  m.fuel_mainline = fuel(main, cfg.fuel, cfg.dt, cfg.deceleration);
  return m;
}

MetricsAggregate aggregate(std::span<const PairMetrics> metrics)
{
  MetricsAggregate agg;
  agg.n = metrics.size();
  if (metrics.empty()) {
    return agg;
  }
  for (const PairMetrics & m : metrics) {
    agg.gap_s += m.gap_s;
    agg.arms_onramp += m.arms_onramp;
    agg.arms_mainline += m.arms_mainline;
    agg.fuel_onramp += m.fuel_onramp;
    agg.fuel_mainline += m.fuel_mainline;
    agg.collisions += m.collision ? 1 : 0;
  }
  const double n = static_cast<double>(agg.n);
  agg.gap_s /= n;
  agg.arms_onramp /= n;
  agg.arms_mainline /= n;
  agg.fuel_onramp /= n;
  agg.fuel_mainline /= n;
  return agg;
}

namespace
{

std::optional<double> lower_is_better(double base, double value)
{
  if (base == 0.0) {
    return std::nullopt;
  }
  return 100.0 * (base - value) / base;
}

std::optional<double> higher_is_better(double base, double value)
{
  if (base == 0.0) {
    return std::nullopt;
  }
  return 100.0 * (value - base) / base;
}

}  // namespace

ImprovementRates improvement_rates(const MetricsAggregate & baseline, const MetricsAggregate & other)
{
  ImprovementRates r;
  r.gap_s = higher_is_better(baseline.gap_s, other.gap_s);
  r.arms_onramp = lower_is_better(baseline.arms_onramp, other.arms_onramp);
  r.arms_mainline = lower_is_better(baseline.arms_mainline, other.arms_mainline);
  r.fuel_onramp = lower_is_better(baseline.fuel_onramp, other.fuel_onramp);
  r.fuel_mainline = lower_is_better(baseline.fuel_mainline, other.fuel_mainline);
  return r;
}

WelchResult welch_t_test(std::span<const double> xs, std::span<const double> ys)
{
  if (xs.size() < 2 || ys.size() < 2) {
    throw Error(ErrorCode::DegenerateSamples, "each sample needs at least two values");
  }
  auto moments = [](std::span<const double> s) {
    const double n = static_cast<double>(s.size());
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : s) {
      ss += (x - mean) * (x - mean);
    }
    return std::pair{mean, ss / (n - 1.0)};
  };
  const auto [mx, vx] = moments(xs);
  const auto [my, vy] = moments(ys);
  const double sx = vx / static_cast<double>(xs.size());
  const double sy = vy / static_cast<double>(ys.size());
  const double se2 = sx + sy;
  if (!(se2 > 0.0)) {
    throw Error(ErrorCode::DegenerateSamples, "both samples have zero variance");
  }
  WelchResult r;
  r.t_stat = (mx - my) / std::sqrt(se2);
  r.dof = se2 * se2 /
          (sx * sx / static_cast<double>(xs.size() - 1) + sy * sy / static_cast<double>(ys.size() - 1));
  const boost::math::students_t dist(r.dof);
  r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t_stat)));
  r.significant_95 = r.p_value < 0.05;
  return r;
}

}  // namespace mergevis
