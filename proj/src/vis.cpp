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

#include "mergevis/vis.hpp"

#include "mergevis/error.hpp"
#include "mergevis/kinematics.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mergevis
{

void VisConfig::validate() const
{
  if (!(sigma_g > 0.0) || !(sigma_r > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "sensor noise std must be positive");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "significance level must lie in (0, 1)");
  }
  if (!(radar_range > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "radar range must be positive");
  }
  if (const auto * stat = std::get_if<Statistical>(&mode)) {
    if (!(stat->min_matches > 0 && stat->min_matches <= stat->window_n)) {
      throw Error(ErrorCode::InvalidArgument, "need 0 < min_matches <= window_n");
    }
  } else if (!(std::get<FixedDelay>(mode).t_id >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "identification time must be non-negative");
  }
}

double chi2_threshold(double alpha)
{
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
  // The chi-square(2) CDF is 1 - exp(-x / 2).
  return -2.0 * std::log(alpha);
}

double match_statistic(const RelPos & gps, const RelPos & radar, const VisConfig & cfg)
{
  const double var = cfg.sigma_g * cfg.sigma_g + cfg.sigma_r * cfg.sigma_r;
  const double dx = gps.x - radar.x;
  const double dy = gps.y - radar.y;
  return (dx * dx + dy * dy) / var;
}

bool match_sample(const RelPos & gps, const RelPos & radar, const VisConfig & cfg)
{
  return match_statistic(gps, radar, cfg) < chi2_threshold(cfg.alpha);
}

SensorFrame observe(
  double t, std::span<const VehicleTruth> vehicles, const VisConfig & cfg, std::mt19937_64 & rng)
{
  auto noise = [&rng](double sigma) {
    if (sigma <= 0.0) {
      return 0.0;
    }
    return std::normal_distribution<double>(0.0, sigma)(rng);
  };
  SensorFrame frame;
  frame.t = t;
  const bool radar_visible = t >= -kTimeTolerance;
  for (const VehicleTruth & veh : vehicles) {
    const int track = track_id_for(veh.vehicle_id);
    if (radar_visible && std::hypot(veh.rel.x, veh.rel.y) <= cfg.radar_range) {
      const double ex = noise(cfg.sigma_r);
      const double ey = noise(cfg.sigma_r);
      frame.radar_tracks[track] = RelPos{veh.rel.x + ex, veh.rel.y + ey};
    }
    if (veh.is_cav) {
      const double ex = noise(cfg.sigma_g);
      const double ey = noise(cfg.sigma_g);
      frame.bsm_obs[msg_id_for(veh.vehicle_id)] =
        BsmObservation{RelPos{veh.rel.x + ex, veh.rel.y + ey}, veh.speed};
      frame.truth[track] = msg_id_for(veh.vehicle_id);
    } else {
      frame.truth[track] = std::nullopt;
    }
  }
  return frame;
}

std::string_view to_string(VerdictKind kind)
{
  switch (kind) {
    case VerdictKind::Pending:
      return "pending";
    case VerdictKind::IdentifiedCav:
      return "identified_cav";
    case VerdictKind::RejectedThv:
      return "rejected_thv";
  }
  return "unknown";
}

Verdict IdentificationState::verdict(int track_id) const
{
  const auto it = verdicts_.find(track_id);
  return it == verdicts_.end() ? Verdict{} : it->second;
}

PairCounts IdentificationState::counts(int track_id, int msg_id) const
{
  const auto it = counts_.find({track_id, msg_id});
  return it == counts_.end() ? PairCounts{} : it->second;
}

void IdentificationState::resolve(double t, int track_id, Verdict verdict)
{
  if (verdict.msg_id) {
    assigned_msgs_.insert(*verdict.msg_id);
  }
  verdicts_[track_id] = verdict;
  log_.push_back(VerdictEvent{t, track_id, verdict.kind, verdict.msg_id});
}

void IdentificationState::update(const SensorFrame & frame, const VisConfig & cfg)
{
  if (const auto * fixed = std::get_if<FixedDelay>(&cfg.mode)) {
    update_fixed_delay(frame, *fixed);
  } else {
    update_statistical(frame, cfg, std::get<Statistical>(cfg.mode));
  }
}

void IdentificationState::update_fixed_delay(const SensorFrame & frame, const FixedDelay & mode)
{
  if (frame.t - t_start_ < mode.t_id - kTimeTolerance) {
    return;
  }
  for (const auto & [track, msg] : frame.truth) {
    if (verdict(track).kind != VerdictKind::Pending) {
      continue;
    }
    if (msg && !assigned_msgs_.contains(*msg)) {
      resolve(frame.t, track, Verdict{VerdictKind::IdentifiedCav, msg});
    } else {
      resolve(frame.t, track, Verdict{VerdictKind::RejectedThv, std::nullopt});
    }
  }
}

void IdentificationState::update_statistical(
  const SensorFrame & frame, const VisConfig & cfg, const Statistical & mode)
{
  std::vector<int> closing;
  for (const auto & [track, radar] : frame.radar_tracks) {
    if (verdict(track).kind != VerdictKind::Pending) {
      continue;
    }
    for (const auto & [msg, bsm] : frame.bsm_obs) {
      if (assigned_msgs_.contains(msg)) {
        continue;
      }
      PairCounts & c = counts_[{track, msg}];
      ++c.sample_count;
      if (match_sample(bsm.pos, radar, cfg)) {
        ++c.match_count;
      }
    }
    if (++window_samples_[track] >= mode.window_n) {
      closing.push_back(track);
    }
  }

  std::map<int, std::vector<int>> qualifying;
  std::map<int, int> claims;
  for (int track : closing) {
    auto & q = qualifying[track];
    for (auto it = counts_.lower_bound({track, std::numeric_limits<int>::min()}); it != counts_.end() && it->first.first == track;
         ++it) {
      const int msg = it->first.second;
      if (it->second.match_count >= mode.min_matches && !assigned_msgs_.contains(msg)) {
        q.push_back(msg);
        ++claims[msg];
      }
    }
  }

  for (int track : closing) {
    const auto & q = qualifying[track];
    if (q.empty()) {
      resolve(frame.t, track, Verdict{VerdictKind::RejectedThv, std::nullopt});
    } else if (q.size() == 1 && claims[q.front()] == 1) {
      resolve(frame.t, track, Verdict{VerdictKind::IdentifiedCav, q.front()});
    } else {
      // Ambiguous: start a fresh window for this track.
      window_samples_[track] = 0;
      for (auto it = counts_.lower_bound({track, std::numeric_limits<int>::min()});
           it != counts_.end() && it->first.first == track;) {
        it = counts_.erase(it);
      }
    }
  }
}

IdentificationState update(IdentificationState state, const SensorFrame & frame, const VisConfig & cfg)
{
  state.update(frame, cfg);
  return state;
}

double identification_done_time(std::span<const VerdictEvent> log, int track_id, double t_deadline)
{
  for (const VerdictEvent & e : log) {
    if (e.track_id == track_id && e.verdict != VerdictKind::Pending) {
      if (e.t > t_deadline + kTimeTolerance) {
        break;
      }
      return e.t;
    }
  }
  throw Error(
    ErrorCode::NeverResolved,
    "track " + std::to_string(track_id) + " unresolved by t = " + std::to_string(t_deadline));
}

}  // namespace mergevis
