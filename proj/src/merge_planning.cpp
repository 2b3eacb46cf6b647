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

#include "mergevis/merge_planning.hpp"

#include "mergevis/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mergevis
{

std::string_view to_string(MergeSequence sequence)
{
  return sequence == MergeSequence::MainlineLeads ? "mainline_leads" : "onramp_leads";
}

MergeSequence sequence_from_string(std::string_view text)
{
  if (text == "mainline_leads") {
    return MergeSequence::MainlineLeads;
  }
  if (text == "onramp_leads") {
    return MergeSequence::OnRampLeads;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown merge sequence '" + std::string(text) + "'");
}

std::string_view to_string(CooperationMode mode)
{
  return mode == CooperationMode::Bilateral ? "bilateral" : "unilateral";
}

CooperationMode cooperation_mode_from_string(std::string_view text)
{
  if (text == "bilateral") {
    return CooperationMode::Bilateral;
  }
  if (text == "unilateral") {
    return CooperationMode::Unilateral;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown cooperation mode '" + std::string(text) + "'");
}

namespace
{

void require_horizon(const MergeSpec & spec, double t_now, double min_horizon)
{
  const double horizon = spec.t_mer - t_now;
  if (!(horizon >= min_horizon - kTimeTolerance)) {
    throw Error(
      ErrorCode::HorizonTooShort,
      "only " + std::to_string(horizon) + " s left before the merge at t = " +
        std::to_string(spec.t_mer));
  }
}

}  // namespace

TerminalTarget terminal_target(
  const MergeSpec & spec, const VehicleState & mainline, double t_now, double min_horizon)
{
  require_horizon(spec, t_now, min_horizon);
  TerminalTarget target;
  target.vf = mainline.v;
  const double predicted = mainline.p + mainline.v * (spec.t_mer - t_now);
  const double clearance = spec.l + spec.h * target.vf;
  if (spec.sequence == MergeSequence::MainlineLeads) {
    target.pf = predicted - clearance;
  } else {
    target.pf = std::max(spec.p_merge, predicted + clearance);
  }
  return target;
}

ControlLaw recursive_plan(
  const VehicleState & onramp, const VehicleState & mainline_observed, const MergeSpec & spec,
  double t_s, double min_horizon)
{
  const TerminalTarget target = terminal_target(spec, mainline_observed, t_s, min_horizon);
  return solve_min_energy(
    BoundaryValueProblem{t_s, spec.t_mer, onramp.p, onramp.v, target.pf, target.vf},
    min_horizon);
}

double recursive_step(
  const VehicleState & onramp, const VehicleState & mainline_observed, const MergeSpec & spec,
  double t_s, double min_horizon)
{
  return recursive_plan(onramp, mainline_observed, spec, t_s, min_horizon).alpha;
}

CooperativePlan plan_cooperative(
  const VehicleState & onramp, const VehicleState & mainline, const MergeSpec & spec,
  CooperationMode mode, double t_c, double min_horizon)
{
  require_horizon(spec, t_c, min_horizon);
  CooperativePlan plan;
  if (mode == CooperationMode::Unilateral) {
    const TerminalTarget target = terminal_target(spec, mainline, t_c, min_horizon);
    plan.onramp = solve_min_energy(
      BoundaryValueProblem{t_c, spec.t_mer, onramp.p, onramp.v, target.pf, target.vf},
      min_horizon);
    plan.mainline = zero_law(t_c, spec.t_mer);
    return plan;
  }
  const double vf = mainline.v;
  const double clearance = spec.l + spec.h * vf;
  const double mainline_pf = spec.sequence == MergeSequence::OnRampLeads
                               ? spec.p_merge - clearance
                               : spec.p_merge + clearance;
  plan.onramp = solve_min_energy(
    BoundaryValueProblem{t_c, spec.t_mer, onramp.p, onramp.v, spec.p_merge, vf}, min_horizon);
  plan.mainline = solve_min_energy(
    BoundaryValueProblem{t_c, spec.t_mer, mainline.p, mainline.v, mainline_pf, vf},
    min_horizon);
  return plan;
}

MergeCheck check_merge_constraints(
  const VehicleState & onramp, const VehicleState & mainline, const MergeSpec & spec,
  const MergeTolerances & tol)
{
  if (std::abs(onramp.t - mainline.t) > kTimeTolerance) {
    throw Error(ErrorCode::InvalidArgument, "merge check needs states at the same time");
  }
  const bool onramp_leads = spec.sequence == MergeSequence::OnRampLeads;
  const VehicleState & lead = onramp_leads ? onramp : mainline;
  const VehicleState & follow = onramp_leads ? mainline : onramp;
  if (follow.v < 0.1) {
    throw Error(ErrorCode::DegenerateSpeed, "follower speed below 0.1 m/s, time gap undefined");
  }
  MergeCheck check;
  check.speed_ok = std::abs(onramp.v - mainline.v) <= tol.eps_v;
  check.gap_s = (lead.p - follow.p - spec.l) / follow.v;
  check.gap_ok = check.gap_s >= spec.h - tol.eps_g;
  return check;
}

}  // namespace mergevis
