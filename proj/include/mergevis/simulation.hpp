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

#ifndef MERGEVIS__SIMULATION_HPP_
#define MERGEVIS__SIMULATION_HPP_

#include "mergevis/kinematics.hpp"
#include "mergevis/merge_planning.hpp"
#include "mergevis/optimal_control.hpp"
#include "mergevis/scenario.hpp"
#include "mergevis/vis.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mergevis
{

enum class CaseKind {
  Baseline,          // replay of the recorded pair
  Case1CavThv,       // identification, then recursive control
  Case2CavCavVis,    // identification, then one-shot cooperation
  Case3CavCavNoVis,  // cooperation from the Start Line
};

std::string_view to_string(CaseKind kind);
CaseKind case_from_string(std::string_view text);

struct SimConfig
{
  VisConfig vis;
  CooperationMode cooperation{CooperationMode::Bilateral};
  double min_horizon{kDefaultMinHorizon};
  /// Comfort bound on |u|; exceeding it is flagged, not enforced.
  double accel_bound{4.0};
  MergeTolerances tolerances;
  /// Other connected mainline vehicles broadcasting near the target,
  /// as longitudinal offsets from it in metres.
  std::vector<double> decoy_offsets{-40.0, 40.0};
  /// Lateral offset of the mainline lane in the ego frame, m.
  double lateral_offset{3.5};
  std::uint64_t seed{0};
};

enum class EventKind { SLCross, IdentificationDone, CooperationStart, RecursiveStart, Merge };

std::string_view to_string(EventKind kind);

struct SimEvent
{
  EventKind kind{EventKind::SLCross};
  double t{0.0};
};

struct SimFlags
{
  bool clamped_speed{false};
  bool insufficient_horizon{false};
  bool accel_bound_exceeded{false};
  /// The target track never resolved before the merge.
  bool identification_failed{false};
  /// The target resolved to the wrong vehicle type or message.
  bool misidentified{false};
  /// Steps at the end of recursive control where the horizon was too short
  /// to re-solve and the last law kept running.
  int terminal_hold_steps{0};

  bool any_fallback() const { return insufficient_horizon || identification_failed || misidentified; }
};

struct SimOutput
{
  std::string pair_id;
  CaseKind kind{CaseKind::Baseline};
  Trajectory onramp;
  Trajectory mainline;
  std::vector<SimEvent> events;
  SimFlags flags;
  std::vector<VerdictEvent> verdicts;
  /// Set when a cooperative plan was computed.
  std::optional<CooperativePlan> plan;
  /// Non-empty when the run failed; trajectories are then empty.
  std::string error;

  bool failed() const { return !error.empty(); }
  std::optional<double> event_time(EventKind kind) const;
};

/// Per-run RNG stream derived from the global seed and the pair id only, so
/// results do not depend on scheduling.
std::uint64_t run_seed(std::uint64_t global_seed, std::string_view pair_id);

/// Simulates one pair under one case on the grid [0, t_mer]. Errors raised
/// by the planners are turned into flags; malformed pairs throw.
SimOutput run_case(const VehiclePair & pair, CaseKind kind, const SimConfig & cfg);

struct BatchResult
{
  std::vector<CaseKind> cases;
  /// Row-major: runs[pair_index * cases.size() + case_index].
  std::vector<SimOutput> runs;

  const SimOutput & at(std::size_t pair_index, std::size_t case_index) const
  {
    return runs[pair_index * cases.size() + case_index];
  }
};

/// Runs every (pair, case) combination on `jobs` worker threads (0 picks the
/// hardware concurrency). Failing runs are recorded and the batch continues.
BatchResult run_batch(
  const std::vector<VehiclePair> & pairs, const std::vector<CaseKind> & cases,
  const SimConfig & cfg, unsigned jobs = 0);

}  // namespace mergevis

#endif  // MERGEVIS__SIMULATION_HPP_
