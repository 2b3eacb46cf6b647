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

#ifndef MERGEVIS__VIS_HPP_
#define MERGEVIS__VIS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mergevis
{

/// Verdicts resolve exactly `t_id` seconds after the Start Line crossing,
/// using the simulator's ground truth.
struct FixedDelay
{
  double t_id{3.5};
};

/// M-of-N rule: a (track, message) pair qualifies when at least
/// `min_matches` of `window_n` consecutive samples pass the chi-square test.
struct Statistical
{
  int window_n{88};
  int min_matches{70};
};

struct VisConfig
{
  /// Per-axis GPS error std, m.
  double sigma_g{1.0};
  /// Per-axis radar error std, m.
  double sigma_r{0.1};
  /// Per-sample significance level of the match test.
  double alpha{0.05};
  std::variant<FixedDelay, Statistical> mode{FixedDelay{}};
  /// Radar only reports vehicles within this distance of the ego vehicle.
  double radar_range{200.0};
  std::uint64_t seed{0};

  /// Throws InvalidArgument on a malformed configuration.
  void validate() const;
  bool fixed_delay() const { return std::holds_alternative<FixedDelay>(mode); }
};

/// Position relative to the ego vehicle: x along its heading, y to the left.
struct RelPos
{
  double x{0.0};
  double y{0.0};
};

struct BsmObservation
{
  RelPos pos;
  double speed{0.0};
};

struct SensorFrame
{
  double t{0.0};
  std::map<int, RelPos> radar_tracks;
  std::map<int, BsmObservation> bsm_obs;
  /// Simulator ground truth: which message stream (if any) each track's
  /// vehicle broadcasts. Only FixedDelay mode reads it.
  std::map<int, std::optional<int>> truth;
};

/// Ground-truth description of one surrounding vehicle for `observe`.
struct VehicleTruth
{
  int vehicle_id{0};
  RelPos rel;
  double speed{0.0};
  bool is_cav{false};
};

inline int track_id_for(int vehicle_id) { return vehicle_id; }
inline int msg_id_for(int vehicle_id) { return 1000 + vehicle_id; }

/// 1 - alpha quantile of the chi-square distribution with two degrees of
/// freedom, -2 ln(alpha).
double chi2_threshold(double alpha);

/// Normalised squared GPS/radar discrepancy; chi-square(2) for a true pair.
double match_statistic(const RelPos & gps, const RelPos & radar, const VisConfig & cfg);

bool match_sample(const RelPos & gps, const RelPos & radar, const VisConfig & cfg);

/// Noisy radar tracks for every vehicle in range and noisy V2V positions for
/// every connected vehicle. Radar is blind before the Start Line (t < 0).
SensorFrame observe(
  double t, std::span<const VehicleTruth> vehicles, const VisConfig & cfg, std::mt19937_64 & rng);

enum class VerdictKind { Pending, IdentifiedCav, RejectedThv };

std::string_view to_string(VerdictKind kind);

struct Verdict
{
  VerdictKind kind{VerdictKind::Pending};
  std::optional<int> msg_id;
};

struct PairCounts
{
  int sample_count{0};
  int match_count{0};
};

struct VerdictEvent
{
  double t{0.0};
  int track_id{0};
  VerdictKind verdict{VerdictKind::Pending};
  std::optional<int> msg_id;
};

class IdentificationState
{
public:
  explicit IdentificationState(double t_start = 0.0) : t_start_(t_start) {}

  /// Folds one frame into the matching evidence. Resolved tracks are left
  /// untouched.
  void update(const SensorFrame & frame, const VisConfig & cfg);

  Verdict verdict(int track_id) const;
  PairCounts counts(int track_id, int msg_id) const;
  const std::vector<VerdictEvent> & log() const { return log_; }
  double t_start() const { return t_start_; }

private:
  void resolve(double t, int track_id, Verdict verdict);
  void update_fixed_delay(const SensorFrame & frame, const FixedDelay & mode);
  void update_statistical(const SensorFrame & frame, const VisConfig & cfg, const Statistical & mode);

  double t_start_;
  std::map<int, Verdict> verdicts_;
  std::map<std::pair<int, int>, PairCounts> counts_;
  std::map<int, int> window_samples_;
  std::set<int> assigned_msgs_;
  std::vector<VerdictEvent> log_;
};

/// Value-semantics wrapper around IdentificationState::update.
IdentificationState update(IdentificationState state, const SensorFrame & frame, const VisConfig & cfg);

/// First time the given track left Pending. Throws NeverResolved if it did
/// not resolve by `t_deadline`.
double identification_done_time(
  std::span<const VerdictEvent> log, int track_id, double t_deadline);

}  // namespace mergevis

#endif  // MERGEVIS__VIS_HPP_
