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

#ifndef MERGEVIS__SCENARIO_HPP_
#define MERGEVIS__SCENARIO_HPP_

#include "mergevis/kinematics.hpp"
#include "mergevis/merge_planning.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace mergevis
{

/// Merging zones of the auxiliary lane, measured from the Start Line.
enum class Zone { OneThird, TwoThirds };

std::string_view to_string(Zone zone);
Zone zone_from_string(std::string_view text);

/// OneThird is [230, 300) m, TwoThirds is [300, 370] m.
bool in_zone(double p, Zone zone);

/// A baseline on-ramp/mainline pair; the unit every case is evaluated on.
/// Both trajectories start at the on-ramp vehicle's Start Line crossing
/// (t = 0) and end at the merge (t = t_mer) on the sampling grid.
struct VehiclePair
{
  std::string pair_id;
  Trajectory onramp;
  Trajectory mainline;
  MergeSpec spec;
  Zone zone{Zone::OneThird};
  double baseline_gap_s{0.0};
  bool collision{false};
};

/// Throws InvalidArgument unless the pair's trajectories sit on the grid
/// over [0, t_mer].
void validate_pair(const VehiclePair & pair);

struct GeneratorConfig
{
  std::size_t n_pairs{100};
  Zone zone{Zone::OneThird};
  double danger_threshold_s{1.8};
  double lead_fraction{0.82};
  double onramp_v_min{15.0};
  double onramp_v_max{30.0};
  double mainline_v_min{20.0};
  double mainline_v_max{35.0};
  double h{1.8};
  double l{2.5};
  std::uint64_t seed{0};

  void validate() const;
};

/// Merge time of a constant-speed on-ramp vehicle, snapped to the grid.
double constant_speed_merge_time(double p_merge, double v0, double dt = kSampleStep);

/// Per-sample lane labels travel with an ingested trajectory so the lane
/// change (the merge) can be located.
struct TrajectoryRecord
{
  Trajectory trajectory;
  std::vector<Lane> lanes;
};

/// Canonical tracks CSV: frame,vehicle_id,lane,t,p,v,a. Records come out in
/// order of first appearance. Throws EmptyFile or SchemaError.
std::vector<TrajectoryRecord> parse_tracks_csv(std::istream & in);
std::vector<TrajectoryRecord> ingest_csv(const std::filesystem::path & path);

/// Pairs every on-ramp vehicle whose lane change falls in `zone` with the
/// mainline vehicle crossing the merge position closest in time. Vehicles
/// without a usable partner are skipped and reported in `skipped`.
std::vector<VehiclePair> extract_pairs(
  const std::vector<TrajectoryRecord> & records, Zone zone, double h = 1.8, double l = 2.5,
  std::vector<std::string> * skipped = nullptr);

/// Keeps pairs whose baseline gap is below the threshold (collisions
/// included) and marks the collisions.
std::vector<VehiclePair> danger_filter(std::vector<VehiclePair> pairs, double threshold_s);

/// Reproducible dangerous constant-speed pairs. Throws RejectionOverflow if a
/// pair cannot be drawn within 1000 attempts.
std::vector<VehiclePair> generate_synthetic(const GeneratorConfig & cfg);

}  // namespace mergevis

#endif  // MERGEVIS__SCENARIO_HPP_
