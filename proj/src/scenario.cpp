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

#include "mergevis/scenario.hpp"

#include "mergevis/error.hpp"
#include "mergevis/metrics.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

namespace mergevis
{

std::string_view to_string(Zone zone)
{
  return zone == Zone::OneThird ? "one-third" : "two-thirds";
}

Zone zone_from_string(std::string_view text)
{
  if (text == "one-third") {
    return Zone::OneThird;
  }
  if (text == "two-thirds") {
    return Zone::TwoThirds;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown zone '" + std::string(text) + "'");
}

bool in_zone(double p, Zone zone)
{
  if (zone == Zone::OneThird) {
    return p >= 230.0 && p < 300.0;
  }
  return p >= 300.0 && p <= 370.0;
}

void validate_pair(const VehiclePair & pair)
{
  const double t_mer = pair.spec.t_mer;
  if (!(t_mer > 0.0) || !on_grid(t_mer)) {
    throw Error(ErrorCode::InvalidArgument, pair.pair_id + ": t_mer must be a positive grid time");
  }
  const std::size_t n = grid_index(t_mer) + 1;
  for (const Trajectory * traj : {&pair.onramp, &pair.mainline}) {
    if (traj->size() != n) {
      throw Error(
        ErrorCode::InvalidArgument, pair.pair_id + ": trajectory " + traj->vehicle_id +
                                      " must have one sample per grid step on [0, t_mer]");
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(traj->samples[k].t - grid_time(k)) > kTimeTolerance) {
        throw Error(
          ErrorCode::InvalidArgument,
          pair.pair_id + ": sample " + std::to_string(k) + " of " + traj->vehicle_id + " off grid");
      }
    }
  }
  if (!(pair.spec.h > 0.0) || !(pair.spec.l > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, pair.pair_id + ": h and l must be positive");
  }
}

void GeneratorConfig::validate() const
{
  if (n_pairs == 0) {
    throw Error(ErrorCode::InvalidArgument, "n_pairs must be positive");
  }
  if (!(lead_fraction >= 0.0 && lead_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "lead_fraction must lie in [0, 1]");
  }
  if (!(danger_threshold_s > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "danger threshold must be positive");
  }
  if (!(onramp_v_min > 0.0 && onramp_v_min <= onramp_v_max) ||
      !(mainline_v_min > 0.0 && mainline_v_min <= mainline_v_max)) {
    throw Error(ErrorCode::InvalidArgument, "speed ranges must be positive and ordered");
  }
  if (!(h > 0.0) || !(l > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "h and l must be positive");
  }
}

double constant_speed_merge_time(double p_merge, double v0, double dt)
{
  return grid_time(grid_index(p_merge / v0, dt), dt);
}

// ---------------------------------------------------------------------------
// Ingestion

namespace
{

constexpr std::array<std::string_view, 7> kColumns{"frame", "vehicle_id", "lane", "t",
                                                   "p",     "v",          "a"};

std::vector<std::string> split_csv_line(const std::string & line)
{
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

double parse_double(const std::string & text, std::size_t line_no)
{
  double value = 0.0;
  const char * end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(
      ErrorCode::SchemaError,
      "line " + std::to_string(line_no) + ": '" + text + "' is not a number");
  }
  return value;
}

long long parse_int(const std::string & text, std::size_t line_no)
{
  long long value = 0;
  const char * end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(
      ErrorCode::SchemaError,
      "line " + std::to_string(line_no) + ": '" + text + "' is not an integer frame");
  }
  return value;
}

}  // namespace

std::vector<TrajectoryRecord> parse_tracks_csv(std::istream & in)
{
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::EmptyFile, "tracks file has no header");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  const std::vector<std::string> header = split_csv_line(line);
  std::array<std::size_t, kColumns.size()> col{};
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    const auto it = std::find(header.begin(), header.end(), kColumns[c]);
    if (it == header.end()) {
      throw Error(ErrorCode::SchemaError, "missing column '" + std::string(kColumns[c]) + "'");
    }
    col[c] = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<TrajectoryRecord> records;
  std::map<std::string, std::size_t> index;
  std::map<std::string, long long> last_frame;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(
        ErrorCode::SchemaError, "line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields");
    }
    const long long frame = parse_int(fields[col[0]], line_no);
    const std::string & id = fields[col[1]];
    Lane lane;
    try {
      lane = lane_from_string(fields[col[2]]);
    } catch (const Error &) {
      throw Error(
        ErrorCode::SchemaError, "line " + std::to_string(line_no) + ": bad lane '" +
                                  fields[col[2]] + "'");
    }
    VehicleState s{
      parse_double(fields[col[3]], line_no), parse_double(fields[col[4]], line_no),
      parse_double(fields[col[5]], line_no), parse_double(fields[col[6]], line_no)};

    auto [it, inserted] = index.try_emplace(id, records.size());
    if (inserted) {
      TrajectoryRecord rec;
      rec.trajectory.vehicle_id = id;
      rec.trajectory.lane = lane;
      rec.trajectory.ingested = true;
      records.push_back(std::move(rec));
    } else {
      const VehicleState & prev = records[it->second].trajectory.samples.back();
      const bool frame_ok = frame == last_frame[id] + 1;
      const bool step_ok = std::abs(s.t - prev.t - kSampleStep) <= 1e-6;
      if (!frame_ok || !step_ok) {
        throw Error(
          ErrorCode::SchemaError, "vehicle " + id + ": non-uniform sampling at frame " +
                                    std::to_string(frame));
      }
    }
    last_frame[id] = frame;
    records[it->second].trajectory.samples.push_back(s);
    records[it->second].lanes.push_back(lane);
  }
  if (records.empty()) {
    throw Error(ErrorCode::EmptyFile, "tracks file has no rows");
  }
  return records;
}

std::vector<TrajectoryRecord> ingest_csv(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  return parse_tracks_csv(in);
}

// ---------------------------------------------------------------------------
// Pair extraction

namespace
{

// Re-anchors a window of `traj` so that `t_anchor` becomes 0, snapping the
// shifted times to the grid.
Trajectory anchored_window(const Trajectory & traj, double t_anchor, double t_end)
{
  Trajectory out = resample_window(traj, t_anchor, t_end);
  for (VehicleState & s : out.samples) {
    s.t = grid_time(grid_index(s.t - t_anchor));
  }
  return out;
}

bool all_mainline(const TrajectoryRecord & rec)
{
  return std::all_of(rec.lanes.begin(), rec.lanes.end(), [](Lane l) { return l == Lane::Mainline; });
}

}  // namespace

std::vector<VehiclePair> extract_pairs(
  const std::vector<TrajectoryRecord> & records, Zone zone, double h, double l,
  std::vector<std::string> * skipped)
{
  auto skip = [skipped](const std::string & why) {
    if (skipped) {
      skipped->push_back(why);
    }
  };
  std::vector<VehiclePair> pairs;
  for (const TrajectoryRecord & rec : records) {
    if (rec.lanes.empty() || rec.lanes.front() != Lane::OnRamp) {
      continue;
    }
    const auto change = std::find(rec.lanes.begin(), rec.lanes.end(), Lane::Mainline);
    if (change == rec.lanes.end()) {
      continue;
    }
    const auto & samples = rec.trajectory.samples;
    const std::size_t j = static_cast<std::size_t>(change - rec.lanes.begin());
    const double t_change = samples[j].t;
    const double p_merge = samples[j].p;
    if (!in_zone(p_merge, zone)) {
      continue;
    }
    const auto sl = std::find_if(
      samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(j) + 1,
      [](const VehicleState & s) { return s.p >= 0.0; });
    if (sl == samples.begin() + static_cast<std::ptrdiff_t>(j) + 1 || sl->t >= t_change) {
      skip(rec.trajectory.vehicle_id + ": no Start Line crossing before the merge");
      continue;
    }
    const double t_anchor = sl->t;

    const TrajectoryRecord * best = nullptr;
    double best_cross = 0.0;
    for (const TrajectoryRecord & cand : records) {
      if (&cand == &rec || cand.lanes.empty() || !all_mainline(cand)) {
        continue;
      }
      const Trajectory & ct = cand.trajectory;
      if (ct.front().t > t_anchor + kTimeTolerance || ct.back().t < t_change - kTimeTolerance) {
        continue;
      }
      double cross = 0.0;
      try {
        cross = crossing_time(ct, p_merge);
      } catch (const Error &) {
        continue;
      }
      if (!best || std::abs(cross - t_change) < std::abs(best_cross - t_change)) {
        best = &cand;
        best_cross = cross;
      }
    }
    if (!best) {
      skip(rec.trajectory.vehicle_id + ": no conflicting mainline vehicle");
      continue;
    }

    VehiclePair pair;
    pair.pair_id = "ingest-" + rec.trajectory.vehicle_id;
    pair.zone = zone;
    pair.onramp = anchored_window(rec.trajectory, t_anchor, t_change);
    pair.onramp.lane = Lane::OnRamp;
    pair.mainline = anchored_window(best->trajectory, t_anchor, t_change);
    pair.mainline.lane = Lane::Mainline;
    pair.spec.t_mer = grid_time(grid_index(t_change - t_anchor));
    pair.spec.p_merge = p_merge;
    pair.spec.sequence =
      best_cross > t_change ? MergeSequence::OnRampLeads : MergeSequence::MainlineLeads;
    pair.spec.h = h;
    pair.spec.l = l;
    try {
      pair.baseline_gap_s = pair_merging_time_gap(pair.onramp, pair.mainline, pair.spec);
    } catch (const Error & e) {
      skip(rec.trajectory.vehicle_id + ": " + e.what());
      continue;
    }
    pair.collision = pair.baseline_gap_s <= 0.0;
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<VehiclePair> danger_filter(std::vector<VehiclePair> pairs, double threshold_s)
{
  std::vector<VehiclePair> kept;
  for (VehiclePair & pair : pairs) {
    if (pair.baseline_gap_s < threshold_s) {
      pair.collision = pair.baseline_gap_s <= 0.0;
      kept.push_back(std::move(pair));
    }
  }
  return kept;
}

// ---------------------------------------------------------------------------
// Synthetic generation

namespace
{

constexpr int kMaxAttempts = 1000;
// Quantisation keeps every serialised CSV value exact at six decimals:
// speeds carry 4 decimals, grid times 2, positions 6.
double round_to(double x, double scale) { return std::round(x * scale) / scale; }

Trajectory constant_speed(std::string id, Lane lane, double p0, double v, std::size_t n)
{
  Trajectory traj;
  traj.vehicle_id = std::move(id);
  traj.lane = lane;
  traj.samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = grid_time(k);
    traj.samples.push_back(VehicleState{t, p0 + v * t, v, 0.0});
  }
  return traj;
}

std::string synthetic_pair_id(Zone zone, std::size_t index)
{
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03zu", index);
  return std::string(to_string(zone)) + "-" + buf;
}

}  // namespace

std::vector<VehiclePair> generate_synthetic(const GeneratorConfig & cfg)
{
  cfg.validate();
  const double zone_lo = cfg.zone == Zone::OneThird ? 230.0 : 300.0;
  const double zone_hi = cfg.zone == Zone::OneThird ? 300.0 : 370.0;
  const double gap_lo = std::min(0.2, 0.5 * cfg.danger_threshold_s);

  std::vector<VehiclePair> pairs;
  pairs.reserve(cfg.n_pairs);
  for (std::size_t i = 0; i < cfg.n_pairs; ++i) {
    std::seed_seq seq{
      static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
      static_cast<std::uint32_t>(cfg.zone), static_cast<std::uint32_t>(i)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

    std::optional<VehiclePair> drawn;
    for (int attempt = 0; attempt < kMaxAttempts && !drawn; ++attempt) {
      const double v0 = round_to(uniform(cfg.onramp_v_min, cfg.onramp_v_max), 1e4);
      const double p_draw = uniform(zone_lo, zone_hi);
      const bool onramp_leads = unit(rng) < cfg.lead_fraction;
      const double vm = round_to(uniform(cfg.mainline_v_min, cfg.mainline_v_max), 1e4);
      const double gap = uniform(gap_lo, cfg.danger_threshold_s);

      const double t_mer = constant_speed_merge_time(p_draw, v0);
      const double p_merge = round_to(v0 * t_mer, 1e6);
      if (!in_zone(p_merge, cfg.zone) || t_mer <= 0.0) {
        continue;
      }
      // Mainline front position at t_mer that realises the drawn gap at the
      // leader's rear.
      const double mainline_end = onramp_leads ? p_merge - cfg.l - gap * vm
                                               : p_merge + cfg.l + gap * v0;
      const double mainline_p0 = round_to(mainline_end - vm * t_mer, 1e6);

      VehiclePair pair;
      pair.pair_id = synthetic_pair_id(cfg.zone, i);
      pair.zone = cfg.zone;
      pair.spec = MergeSpec{
        t_mer, p_merge,
        onramp_leads ? MergeSequence::OnRampLeads : MergeSequence::MainlineLeads, cfg.h, cfg.l};
      const std::size_t n = grid_index(t_mer) + 1;
      pair.onramp = constant_speed("onramp", Lane::OnRamp, 0.0, v0, n);
      pair.mainline = constant_speed("mainline", Lane::Mainline, mainline_p0, vm, n);
      pair.baseline_gap_s = pair_merging_time_gap(pair.onramp, pair.mainline, pair.spec);
      if (std::abs(pair.baseline_gap_s - gap) > 0.05 ||
          !(pair.baseline_gap_s < cfg.danger_threshold_s)) {
        continue;
      }
      pair.collision = pair.baseline_gap_s <= 0.0;
      drawn = std::move(pair);
    }
    if (!drawn) {
      throw Error(
        ErrorCode::RejectionOverflow,
        "could not draw pair " + std::to_string(i) + " within " + std::to_string(kMaxAttempts) +
          " attempts");
    }
    pairs.push_back(std::move(*drawn));
  }
  return pairs;
}

}  // namespace mergevis
