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

#include "mergevis/simulation.hpp"

#include "mergevis/error.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace mergevis
{

std::string_view to_string(CaseKind kind)
{
  switch (kind) {
    case CaseKind::Baseline:
      return "baseline";
    case CaseKind::Case1CavThv:
      return "case1";
    case CaseKind::Case2CavCavVis:
      return "case2";
    case CaseKind::Case3CavCavNoVis:
      return "case3";
  }
  return "unknown";
}

CaseKind case_from_string(std::string_view text)
{
  for (CaseKind kind :
       {CaseKind::Baseline, CaseKind::Case1CavThv, CaseKind::Case2CavCavVis,
        CaseKind::Case3CavCavNoVis}) {
    if (text == to_string(kind)) {
      return kind;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown case '" + std::string(text) + "'");
}

std::string_view to_string(EventKind kind)
{
  switch (kind) {
    case EventKind::SLCross:
      return "sl_cross";
    case EventKind::IdentificationDone:
      return "identification_done";
    case EventKind::CooperationStart:
      return "cooperation_start";
    case EventKind::RecursiveStart:
      return "recursive_start";
    case EventKind::Merge:
      return "merge";
  }
  return "unknown";
}

std::optional<double> SimOutput::event_time(EventKind k) const
{
  for (const SimEvent & e : events) {
    if (e.kind == k) {
      return e.t;
    }
  }
  return std::nullopt;
}

std::uint64_t run_seed(std::uint64_t global_seed, std::string_view pair_id)
{
  // FNV-1a over the id, then a splitmix64 finaliser over the combination.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : pair_id) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = global_seed ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace
{

constexpr int kTargetVehicle = 1;

struct Identification
{
  std::optional<double> t_id;
  Verdict verdict;
  std::vector<VerdictEvent> log;
};

// Runs the identification system along the baseline motion (both vehicles
// replay the baseline while it runs). Frames arrive at the end of each
// sampling interval after the Start Line crossing.
Identification identify(const VehiclePair & pair, bool target_is_cav, const SimConfig & cfg)
{
  std::mt19937_64 rng(run_seed(cfg.seed, pair.pair_id));
  IdentificationState state(0.0);
  Identification result;
  std::vector<VehicleTruth> vehicles;
  for (std::size_t k = 1; k < pair.onramp.size(); ++k) {
    const VehicleState & ego = pair.onramp.samples[k];
    const VehicleState & target = pair.mainline.samples[k];
    vehicles.clear();
    vehicles.push_back(
      VehicleTruth{kTargetVehicle, RelPos{target.p - ego.p, cfg.lateral_offset}, target.v,
                   target_is_cav});
    for (std::size_t i = 0; i < cfg.decoy_offsets.size(); ++i) {
      const double x = target.p + cfg.decoy_offsets[i] - ego.p;
      vehicles.push_back(VehicleTruth{
        kTargetVehicle + 1 + static_cast<int>(i), RelPos{x, cfg.lateral_offset}, target.v, true});
    }
    const double t = grid_time(k);
    state.update(observe(t, vehicles, cfg.vis, rng), cfg.vis);
    const Verdict v = state.verdict(track_id_for(kTargetVehicle));
    if (v.kind != VerdictKind::Pending) {
      result.t_id = t;
      result.verdict = v;
      break;
    }
  }
  result.log = state.log();
  return result;
}

void clamp_speed(VehicleState & s, SimFlags & flags)
{
  if (s.v < 0.0) {
    s.v = 0.0;
    flags.clamped_speed = true;
  }
}

// Overwrites samples k0..N with the closed-form motion under `law`.
void apply_law(Trajectory & traj, const ControlLaw & law, std::size_t k0, SimFlags & flags)
{
  const VehicleState start = traj.samples[k0];
  const Trajectory rolled = rollout(law, start.p, start.v, kSampleStep);
  for (std::size_t j = 0; j < rolled.size(); ++j) {
    VehicleState s = rolled.samples[j];
    s.t = grid_time(k0 + j);
    clamp_speed(s, flags);
    traj.samples[k0 + j] = s;
  }
}

// Recursive control of the on-ramp vehicle from sample k0. Each step
// re-solves against the observed mainline state and applies the first Δt of
// the new law; once the horizon is too short the last law keeps running.
void run_recursive(SimOutput & out, const MergeSpec & spec, std::size_t k0, const SimConfig & cfg)
{
  const std::size_t n = grid_index(spec.t_mer);
  std::optional<ControlLaw> law;
  VehicleState anchor;
  VehicleState state = out.onramp.samples[k0];
  for (std::size_t k = k0; k < n; ++k) {
    const double t_s = grid_time(k);
    state.t = t_s;
    try {
      law = recursive_plan(state, out.mainline.samples[k], spec, t_s, cfg.min_horizon);
      anchor = state;
      if (k == k0) {
        out.events.push_back(SimEvent{EventKind::RecursiveStart, t_s});
      }
    } catch (const Error & e) {
      if (e.code() != ErrorCode::HorizonTooShort) {
        throw;
      }
      if (!law) {
        // Nothing to hold: the on-ramp vehicle keeps its baseline motion.
        out.flags.insufficient_horizon = true;
        return;
      }
      ++out.flags.terminal_hold_steps;
    }
    state.a = law->alpha + law->beta * (t_s - law->t0);
    out.onramp.samples[k] = state;
    state = propagate(*law, anchor.p, anchor.v, grid_time(k + 1));
    clamp_speed(state, out.flags);
  }
  if (law) {
    state.t = grid_time(n);
    state.a = law->alpha + law->beta * (state.t - law->t0);
    out.onramp.samples[n] = state;
  }
}

void check_accel_bound(SimOutput & out, double bound)
{
  for (const Trajectory * traj : {&out.onramp, &out.mainline}) {
    for (const VehicleState & s : traj->samples) {
      if (std::abs(s.a) > bound) {
        out.flags.accel_bound_exceeded = true;
        return;
      }
    }
  }
}

}  // namespace

SimOutput run_case(const VehiclePair & pair, CaseKind kind, const SimConfig & cfg)
{
  validate_pair(pair);
  cfg.vis.validate();
  const MergeSpec & spec = pair.spec;
  SimOutput out;
  out.pair_id = pair.pair_id;
  out.kind = kind;
  out.onramp = pair.onramp;
  out.mainline = pair.mainline;
  out.events.push_back(SimEvent{EventKind::SLCross, 0.0});

  if (kind == CaseKind::Baseline) {
    out.events.push_back(SimEvent{EventKind::Merge, spec.t_mer});
    return out;
  }

  std::size_t k_start = 0;
  bool cooperate = kind != CaseKind::Case1CavThv;
  if (kind != CaseKind::Case3CavCavNoVis) {
    const bool target_is_cav = kind == CaseKind::Case2CavCavVis;
    Identification id = identify(pair, target_is_cav, cfg);
    out.verdicts = std::move(id.log);
    if (!id.t_id) {
      out.flags.identification_failed = true;
      out.events.push_back(SimEvent{EventKind::Merge, spec.t_mer});
      check_accel_bound(out, cfg.accel_bound);
      return out;
    }
    out.events.push_back(SimEvent{EventKind::IdentificationDone, *id.t_id});
    k_start = grid_index(*id.t_id);
    const bool identified_target = id.verdict.kind == VerdictKind::IdentifiedCav &&
                                   id.verdict.msg_id == msg_id_for(kTargetVehicle);
    const bool correct =
      target_is_cav ? identified_target : id.verdict.kind == VerdictKind::RejectedThv;
    if (!correct) {
      out.flags.misidentified = true;
      // Without a confirmed partner the on-ramp vehicle treats the target as
      // a human-driven vehicle.
      cooperate = false;
    }
  }

  if (cooperate) {
    const double t_c = grid_time(k_start);
    try {
      CooperativePlan plan = plan_cooperative(
        out.onramp.samples[k_start], out.mainline.samples[k_start], spec, cfg.cooperation, t_c,
        cfg.min_horizon);
      out.events.push_back(SimEvent{EventKind::CooperationStart, t_c});
      apply_law(out.onramp, plan.onramp, k_start, out.flags);
      apply_law(out.mainline, plan.mainline, k_start, out.flags);
      out.plan = plan;
    } catch (const Error & e) {
      if (e.code() != ErrorCode::HorizonTooShort) {
        throw;
      }
      out.flags.insufficient_horizon = true;
      run_recursive(out, spec, k_start, cfg);
    }
  } else {
    run_recursive(out, spec, k_start, cfg);
  }
  out.events.push_back(SimEvent{EventKind::Merge, spec.t_mer});
  check_accel_bound(out, cfg.accel_bound);
  return out;
}

BatchResult run_batch(
  const std::vector<VehiclePair> & pairs, const std::vector<CaseKind> & cases,
  const SimConfig & cfg, unsigned jobs)
{
  if (pairs.empty() || cases.empty()) {
    throw Error(ErrorCode::InvalidArgument, "run_batch needs at least one pair and one case");
  }
  BatchResult result;
  result.cases = cases;
  const std::size_t total = pairs.size() * cases.size();
  result.runs.resize(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < total; i = next++) {
      const VehiclePair & pair = pairs[i / cases.size()];
      const CaseKind kind = cases[i % cases.size()];
      try {
        result.runs[i] = run_case(pair, kind, cfg);
      } catch (const std::exception & e) {
        SimOutput failed;
        failed.pair_id = pair.pair_id;
        failed.kind = kind;
        failed.error = e.what();
        result.runs[i] = std::move(failed);
      }
    }
  };

  if (jobs == 0) {
    jobs = std::max(1U, std::thread::hardware_concurrency());
  }
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, total));
  if (jobs <= 1) {
    worker();
    return result;
  }
  std::vector<std::jthread> threads;
  threads.reserve(jobs);
  for (unsigned j = 0; j < jobs; ++j) {
    threads.emplace_back(worker);
  }
  threads.clear();
  return result;
}

}  // namespace mergevis
