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

#ifndef MERGEVIS__MERGE_PLANNING_HPP_
#define MERGEVIS__MERGE_PLANNING_HPP_

#include "mergevis/kinematics.hpp"
#include "mergevis/optimal_control.hpp"

#include <string_view>

namespace mergevis
{

enum class MergeSequence { MainlineLeads, OnRampLeads };

std::string_view to_string(MergeSequence sequence);
MergeSequence sequence_from_string(std::string_view text);

struct MergeSpec
{
  double t_mer{0.0};
  double p_merge{0.0};
  MergeSequence sequence{MergeSequence::OnRampLeads};
  /// Safe merging time gap, s.
  double h{1.8};
  /// Vehicle length, m.
  double l{2.5};
};

/// Bilateral plans both vehicles to a shared terminal speed; Unilateral
/// only plans the on-ramp vehicle while the mainline vehicle holds speed.
enum class CooperationMode { Bilateral, Unilateral };

std::string_view to_string(CooperationMode mode);
CooperationMode cooperation_mode_from_string(std::string_view text);

struct TerminalTarget
{
  double pf{0.0};
  double vf{0.0};
};

/// On-ramp terminal state at t_mer under a constant-speed prediction of the
/// mainline vehicle: matched speed, and the time-gap constraint at equality
/// on the side given by the merge sequence. When the on-ramp vehicle leads,
/// it never targets a point short of the preset merging position.
TerminalTarget terminal_target(
  const MergeSpec & spec, const VehicleState & mainline, double t_now,
  double min_horizon = kDefaultMinHorizon);

/// One re-solve of the recursive controller at t_s: the full minimum-energy
/// law from the on-ramp state to the freshly predicted target. The caller
/// applies its first Δt segment and calls again with new observations.
ControlLaw recursive_plan(
  const VehicleState & onramp, const VehicleState & mainline_observed, const MergeSpec & spec,
  double t_s, double min_horizon = kDefaultMinHorizon);

/// First control input of recursive_plan, u(t_s).
double recursive_step(
  const VehicleState & onramp, const VehicleState & mainline_observed, const MergeSpec & spec,
  double t_s, double min_horizon = kDefaultMinHorizon);

struct CooperativePlan
{
  ControlLaw onramp;
  ControlLaw mainline;
};

/// One-shot plan at t_c for a connected pair. Throws HorizonTooShort when
/// t_mer - t_c is below the minimum horizon.
CooperativePlan plan_cooperative(
  const VehicleState & onramp, const VehicleState & mainline, const MergeSpec & spec,
  CooperationMode mode, double t_c, double min_horizon = kDefaultMinHorizon);

struct MergeCheck
{
  bool speed_ok{false};
  double gap_s{0.0};
  bool gap_ok{false};
};

struct MergeTolerances
{
  double eps_v{0.05};
  double eps_g{0.05};
};

/// Terminal speed match and time gap (lead.p - follow.p - l) / follow.v.
/// Throws DegenerateSpeed when the follower is slower than 0.1 m/s.
MergeCheck check_merge_constraints(
  const VehicleState & onramp, const VehicleState & mainline, const MergeSpec & spec,
  const MergeTolerances & tol = {});

}  // namespace mergevis

#endif  // MERGEVIS__MERGE_PLANNING_HPP_
