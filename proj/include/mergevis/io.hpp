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

#ifndef MERGEVIS__IO_HPP_
#define MERGEVIS__IO_HPP_

#include "mergevis/metrics.hpp"
#include "mergevis/scenario.hpp"
#include "mergevis/simulation.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mergevis
{

/// Rounds to the 6-decimal precision used by every output file.
double round6(double x);

/// Single-trajectory CSV: header t,p,v,a, 6 decimals, rows in time order.
void write_trajectory_csv(std::ostream & out, const Trajectory & traj);
/// Throws SchemaError on a malformed row and EmptyFile without samples.
Trajectory read_trajectory_csv(std::istream & in);

/// Writes both trajectories of a pair in the canonical tracks format
/// (frame,vehicle_id,lane,t,p,v,a) with frame = sample index.
void write_pair_csv(std::ostream & out, const Trajectory & onramp, const Trajectory & mainline);

/// Reads a pair file back; the two vehicles are looked up by id.
void read_pair_csv(
  const std::filesystem::path & path, const std::string & onramp_id,
  const std::string & mainline_id, Trajectory & onramp, Trajectory & mainline);

nlohmann::json pair_to_json(const VehiclePair & pair, const std::string & trajectory_file);

/// Writes `dir`/manifest.json and `dir`/trajectories/<pair_id>.csv.
/// `source` is stored verbatim under the "source" key.
void write_manifest(
  const std::filesystem::path & dir, const std::vector<VehiclePair> & pairs,
  const nlohmann::json & source);

/// Loads every pair listed in a manifest, resolving trajectory files
/// relative to the manifest. Throws IoError or SchemaError.
std::vector<VehiclePair> read_manifest(const std::filesystem::path & manifest);

nlohmann::json to_json(const SimFlags & flags);
nlohmann::json events_to_json(const SimOutput & run);

/// Writes one directory per case with a pair CSV per run, events.jsonl,
/// verdicts.jsonl and batch.json (pair specs, run index and failures).
void export_batch(
  const std::filesystem::path & dir, const std::vector<VehiclePair> & pairs,
  const BatchResult & batch);

/// Per-zone, per-case metrics recomputed from an exported batch.
struct CaseReport
{
  CaseKind kind{CaseKind::Baseline};
  MetricsAggregate aggregate;
  /// Per-run values in pair-id order, for significance testing.
  std::vector<PairMetrics> runs;
};

struct ZoneReport
{
  Zone zone{Zone::OneThird};
  std::vector<CaseReport> cases;

  const CaseReport * find(CaseKind kind) const;
};

struct BatchReport
{
  std::vector<ZoneReport> zones;
  std::size_t failed_runs{0};
};

BatchReport compute_report(const std::filesystem::path & run_dir, const MetricsConfig & cfg = {});

/// Writes report_<zone>.csv, improvement_rates.json and significance.json.
void write_report(const std::filesystem::path & dir, const BatchReport & report);

void write_text_file(const std::filesystem::path & path, const std::string & text);
nlohmann::json read_json_file(const std::filesystem::path & path);

}  // namespace mergevis

#endif  // MERGEVIS__IO_HPP_
