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

#include "mergevis/io.hpp"

#include "mergevis/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mergevis
{

namespace fs = std::filesystem;
using nlohmann::json;

double round6(double x)
{
  const double r = std::round(x * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // no negative zero in outputs
}

namespace
{

std::string fmt6(double x)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", round6(x));
  return buf;
}

void append_rows(std::string & out, const Trajectory & traj)
{
  const std::string_view lane = to_string(traj.lane);
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const VehicleState & s = traj.samples[k];
    out += std::to_string(k);
    out += ',';
    out += traj.vehicle_id;
    out += ',';
    out += lane;
    for (double x : {s.t, s.p, s.v, s.a}) {
      out += ',';
      out += fmt6(x);
    }
    out += '\n';
  }
}

std::string pair_csv(const Trajectory & onramp, const Trajectory & mainline)
{
  std::string out = "frame,vehicle_id,lane,t,p,v,a\n";
  append_rows(out, onramp);
  append_rows(out, mainline);
  return out;
}

template <typename T>
T get_field(const json & j, const char * key, const std::string & where)
{
  if (!j.contains(key)) {
    throw Error(ErrorCode::SchemaError, where + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception & e) {
    throw Error(ErrorCode::SchemaError, where + ": field '" + key + "': " + e.what());
  }
}

VehiclePair pair_from_json(const json & j, const fs::path & base, std::string * file_out)
{
  VehiclePair pair;
  pair.pair_id = get_field<std::string>(j, "pair_id", "manifest pair");
  const std::string where = "pair " + pair.pair_id;
  try {
    pair.zone = zone_from_string(get_field<std::string>(j, "zone", where));
    pair.spec.sequence = sequence_from_string(get_field<std::string>(j, "sequence", where));
  } catch (const Error & e) {
    throw Error(ErrorCode::SchemaError, where + ": " + e.what());
  }
  pair.spec.t_mer = get_field<double>(j, "t_mer", where);
  pair.spec.p_merge = get_field<double>(j, "p_merge", where);
  pair.spec.h = get_field<double>(j, "h", where);
  pair.spec.l = get_field<double>(j, "l", where);
  pair.baseline_gap_s = get_field<double>(j, "baseline_gap_s", where);
  pair.collision = get_field<bool>(j, "collision", where);
  const bool ingested = j.value("ingested", false);
  const auto file = get_field<std::string>(j, "trajectory_file", where);
  read_pair_csv(
    base / file, get_field<std::string>(j, "onramp_id", where),
    get_field<std::string>(j, "mainline_id", where), pair.onramp, pair.mainline);
  pair.onramp.ingested = ingested;
  pair.mainline.ingested = ingested;
  if (file_out != nullptr) {
    *file_out = file;
  }
  return pair;
}

std::string jsonl_line(const json & j) { return j.dump() + "\n"; }

}  // namespace

void write_text_file(const fs::path & path, const std::string & text)
{
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
      throw Error(ErrorCode::IoError, "cannot create " + path.parent_path().string() + ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
}

json read_json_file(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error & e) {
    throw Error(ErrorCode::SchemaError, path.string() + ": " + e.what());
  }
}

void write_trajectory_csv(std::ostream & out, const Trajectory & traj)
{
  std::string text = "t,p,v,a\n";
  for (const VehicleState & s : traj.samples) {
    text += fmt6(s.t) + ',' + fmt6(s.p) + ',' + fmt6(s.v) + ',' + fmt6(s.a) + '\n';
  }
  out << text;
}

Trajectory read_trajectory_csv(std::istream & in)
{
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::EmptyFile, "trajectory CSV has no header");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != "t,p,v,a") {
    throw Error(ErrorCode::SchemaError, "trajectory CSV header must be 't,p,v,a', got '" + line + "'");
  }
  Trajectory traj;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") {
      continue;
    }
    VehicleState s;
    char tail = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf%c", &s.t, &s.p, &s.v, &s.a, &tail) < 4 ||
        (tail != 0 && tail != '\r')) {
      throw Error(ErrorCode::SchemaError, "line " + std::to_string(line_no) + ": malformed row");
    }
    traj.samples.push_back(s);
  }
  if (traj.samples.empty()) {
    throw Error(ErrorCode::EmptyFile, "trajectory CSV has no samples");
  }
  return traj;
}

void write_pair_csv(std::ostream & out, const Trajectory & onramp, const Trajectory & mainline)
{
  out << pair_csv(onramp, mainline);
}

void read_pair_csv(
  const fs::path & path, const std::string & onramp_id, const std::string & mainline_id,
  Trajectory & onramp, Trajectory & mainline)
{
  std::vector<TrajectoryRecord> records = ingest_csv(path);
  auto take = [&](const std::string & id, Trajectory & dst) {
    auto it = std::find_if(records.begin(), records.end(), [&](const TrajectoryRecord & r) {
      return r.trajectory.vehicle_id == id;
    });
    if (it == records.end()) {
      throw Error(ErrorCode::SchemaError, path.string() + ": no vehicle '" + id + "'");
    }
    dst = std::move(it->trajectory);
    dst.ingested = false;
  };
  take(onramp_id, onramp);
  take(mainline_id, mainline);
}

json pair_to_json(const VehiclePair & pair, const std::string & trajectory_file)
{
  return json{
    {"pair_id", pair.pair_id},
    {"zone", to_string(pair.zone)},
    {"t_mer", round6(pair.spec.t_mer)},
    {"p_merge", round6(pair.spec.p_merge)},
    {"sequence", to_string(pair.spec.sequence)},
    {"h", round6(pair.spec.h)},
    {"l", round6(pair.spec.l)},
    {"baseline_gap_s", round6(pair.baseline_gap_s)},
    {"collision", pair.collision},
    {"ingested", pair.onramp.ingested},
    {"onramp_id", pair.onramp.vehicle_id},
    {"mainline_id", pair.mainline.vehicle_id},
    {"trajectory_file", trajectory_file},
  };
}

void write_manifest(const fs::path & dir, const std::vector<VehiclePair> & pairs, const json & source)
{
  json list = json::array();
  for (const VehiclePair & pair : pairs) {
    const std::string file = "trajectories/" + pair.pair_id + ".csv";
    write_text_file(dir / file, pair_csv(pair.onramp, pair.mainline));
    list.push_back(pair_to_json(pair, file));
  }
  const json manifest{{"format", "mergevis-pairs-1"}, {"source", source}, {"pairs", list}};
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<VehiclePair> read_manifest(const fs::path & manifest)
{
  const json j = read_json_file(manifest);
  if (!j.contains("pairs") || !j["pairs"].is_array()) {
    throw Error(ErrorCode::SchemaError, manifest.string() + ": no 'pairs' array");
  }
  std::vector<VehiclePair> pairs;
  for (const json & entry : j["pairs"]) {
    pairs.push_back(pair_from_json(entry, manifest.parent_path(), nullptr));
  }
  return pairs;
}

json to_json(const SimFlags & flags)
{
  return json{
    {"clamped_speed", flags.clamped_speed},
    {"insufficient_horizon", flags.insufficient_horizon},
    {"accel_bound_exceeded", flags.accel_bound_exceeded},
    {"identification_failed", flags.identification_failed},
    {"misidentified", flags.misidentified},
    {"terminal_hold_steps", flags.terminal_hold_steps},
  };
}

json events_to_json(const SimOutput & run)
{
  json events = json::array();
  for (const SimEvent & e : run.events) {
    events.push_back(json{{"kind", to_string(e.kind)}, {"t", round6(e.t)}});
  }
  json j{{"pair_id", run.pair_id}, {"case", to_string(run.kind)}, {"events", events},
         {"flags", to_json(run.flags)}};
  if (run.failed()) {
    j["error"] = run.error;
  }
  return j;
}

void export_batch(
  const fs::path & dir, const std::vector<VehiclePair> & pairs, const BatchResult & batch)
{
  std::string events;
  std::string verdicts;
  json runs = json::array();
  std::size_t failures = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t c = 0; c < batch.cases.size(); ++c) {
      const SimOutput & run = batch.at(i, c);
      json entry{{"pair_id", run.pair_id}, {"case", to_string(run.kind)}};
      if (run.failed()) {
        ++failures;
        entry["error"] = run.error;
      } else {
        const std::string file =
          "runs/" + std::string(to_string(run.kind)) + "/" + run.pair_id + ".csv";
        write_text_file(dir / file, pair_csv(run.onramp, run.mainline));
        entry["trajectory_file"] = file;
        entry["onramp_id"] = run.onramp.vehicle_id;
        entry["mainline_id"] = run.mainline.vehicle_id;
      }
      runs.push_back(entry);
      events += jsonl_line(events_to_json(run));
      for (const VerdictEvent & v : run.verdicts) {
        json line{{"pair_id", run.pair_id}, {"case", to_string(run.kind)}, {"t", round6(v.t)},
                  {"track_id", v.track_id}, {"verdict", to_string(v.verdict)}};
        line["msg_id"] = v.msg_id ? json(*v.msg_id) : json(nullptr);
        verdicts += jsonl_line(line);
      }
    }
  }
  json pair_list = json::array();
  for (const VehiclePair & pair : pairs) {
    json p = pair_to_json(pair, "");
    p.erase("trajectory_file");
    pair_list.push_back(p);
  }
  json cases = json::array();
  for (CaseKind kind : batch.cases) {
    cases.push_back(to_string(kind));
  }
  const json manifest{{"format", "mergevis-batch-1"}, {"cases", cases}, {"pairs", pair_list},
                      {"runs", runs}, {"failed_runs", failures}};
  write_text_file(dir / "events.jsonl", events);
  write_text_file(dir / "verdicts.jsonl", verdicts);
  write_text_file(dir / "batch.json", manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Reports

const CaseReport * ZoneReport::find(CaseKind kind) const
{
  for (const CaseReport & c : cases) {
    if (c.kind == kind) {
      return &c;
    }
  }
  return nullptr;
}

BatchReport compute_report(const fs::path & run_dir, const MetricsConfig & cfg)
{
  const json batch = read_json_file(run_dir / "batch.json");
  std::map<std::string, VehiclePair> specs;
  for (const json & p : batch.at("pairs")) {
    VehiclePair pair;
    pair.pair_id = p.at("pair_id").get<std::string>();
    pair.zone = zone_from_string(p.at("zone").get<std::string>());
    pair.spec.t_mer = p.at("t_mer").get<double>();
    pair.spec.p_merge = p.at("p_merge").get<double>();
    pair.spec.sequence = sequence_from_string(p.at("sequence").get<std::string>());
    pair.spec.h = p.at("h").get<double>();
    pair.spec.l = p.at("l").get<double>();
    pair.onramp.ingested = p.value("ingested", false);
    specs.emplace(pair.pair_id, std::move(pair));
  }
  std::vector<CaseKind> cases;
  for (const json & c : batch.at("cases")) {
    cases.push_back(case_from_string(c.get<std::string>()));
  }

  // zone -> case -> pair_id -> metrics; maps keep the fold ordered by pair id.
  std::map<Zone, std::map<CaseKind, std::map<std::string, PairMetrics>>> grouped;
  BatchReport report;
  for (const json & r : batch.at("runs")) {
    if (r.contains("error")) {
      ++report.failed_runs;
      continue;
    }
    const std::string id = r.at("pair_id").get<std::string>();
    const auto it = specs.find(id);
    if (it == specs.end()) {
      throw Error(ErrorCode::SchemaError, "batch.json: run for unknown pair '" + id + "'");
    }
    const VehiclePair & pair = it->second;
    Trajectory onramp;
    Trajectory mainline;
    read_pair_csv(
      run_dir / r.at("trajectory_file").get<std::string>(), r.at("onramp_id").get<std::string>(),
      r.at("mainline_id").get<std::string>(), onramp, mainline);
    const CaseKind kind = case_from_string(r.at("case").get<std::string>());
    grouped[pair.zone][kind][id] = evaluate_pair(onramp, mainline, pair.spec, cfg);
  }

  for (auto & [zone, by_case] : grouped) {
    ZoneReport zr;
    zr.zone = zone;
    for (CaseKind kind : cases) {
      CaseReport cr;
      cr.kind = kind;
      for (auto & [id, m] : by_case[kind]) {
        cr.runs.push_back(m);
      }
      cr.aggregate = aggregate(cr.runs);
      zr.cases.push_back(std::move(cr));
    }
    report.zones.push_back(std::move(zr));
  }
  return report;
}

namespace
{

struct Measure
{
  const char * name;
  double PairMetrics::*field;
  double MetricsAggregate::*mean;
  std::optional<double> ImprovementRates::*rate;
  bool higher_is_better;
};

constexpr Measure kMeasures[] = {
  {"gap_s", &PairMetrics::gap_s, &MetricsAggregate::gap_s, &ImprovementRates::gap_s, true},
  {"arms_onramp", &PairMetrics::arms_onramp, &MetricsAggregate::arms_onramp,
   &ImprovementRates::arms_onramp, false},
  {"arms_mainline", &PairMetrics::arms_mainline, &MetricsAggregate::arms_mainline,
   &ImprovementRates::arms_mainline, false},
  {"fuel_onramp", &PairMetrics::fuel_onramp, &MetricsAggregate::fuel_onramp,
   &ImprovementRates::fuel_onramp, false},
  {"fuel_mainline", &PairMetrics::fuel_mainline, &MetricsAggregate::fuel_mainline,
   &ImprovementRates::fuel_mainline, false},
};

std::string zone_csv(const ZoneReport & zr)
{
  std::string out = "measure";
  for (const CaseReport & c : zr.cases) {
    out += ',';
    out += to_string(c.kind);
  }
  out += '\n';
  out += "n";
  for (const CaseReport & c : zr.cases) {
    out += ',' + std::to_string(c.aggregate.n);
  }
  out += "\ncollisions";
  for (const CaseReport & c : zr.cases) {
    out += ',' + std::to_string(c.aggregate.collisions);
  }
  out += '\n';
  for (const Measure & m : kMeasures) {
    out += m.name;
    for (const CaseReport & c : zr.cases) {
      out += ',';
      out += c.aggregate.n > 0 ? fmt6(c.aggregate.*m.mean) : "";
    }
    out += '\n';
  }
  return out;
}

json rates_json(const BatchReport & report)
{
  json conventions;
  for (const Measure & m : kMeasures) {
    conventions[m.name] = m.higher_is_better ? "higher_is_better: 100*(case-baseline)/baseline"
                                             : "lower_is_better: 100*(baseline-case)/baseline";
  }
  json zones = json::object();
  for (const ZoneReport & zr : report.zones) {
    const CaseReport * base = zr.find(CaseKind::Baseline);
    if (base == nullptr || base->aggregate.n == 0) {
      continue;
    }
    json per_case = json::object();
    for (const CaseReport & c : zr.cases) {
      if (c.kind == CaseKind::Baseline || c.aggregate.n == 0) {
        continue;
      }
      const ImprovementRates rates = improvement_rates(base->aggregate, c.aggregate);
      json entry;
      for (const Measure & m : kMeasures) {
        const std::optional<double> & r = rates.*m.rate;
        entry[m.name] = r ? json(round6(*r)) : json(nullptr);
      }
      per_case[std::string(to_string(c.kind))] = entry;
    }
    zones[std::string(to_string(zr.zone))] = per_case;
  }
  return json{{"unit", "percent"}, {"conventions", conventions}, {"zones", zones}};
}

json significance_json(const BatchReport & report)
{
  json zones = json::object();
  for (const ZoneReport & zr : report.zones) {
    const CaseReport * c3 = zr.find(CaseKind::Case3CavCavNoVis);
    const CaseReport * c2 = zr.find(CaseKind::Case2CavCavVis);
    if (c3 == nullptr || c2 == nullptr) {
      continue;
    }
    json per_measure;
    for (const Measure & m : kMeasures) {
      if (std::string_view(m.name) == "gap_s") {
        continue;
      }
      std::vector<double> xs;
      std::vector<double> ys;
      for (const PairMetrics & pm : c3->runs) {
        xs.push_back(pm.*m.field);
      }
      for (const PairMetrics & pm : c2->runs) {
        ys.push_back(pm.*m.field);
      }
      json entry{{"mean_case3", round6(c3->aggregate.*m.mean)},
                 {"mean_case2", round6(c2->aggregate.*m.mean)}};
      try {
        const WelchResult w = welch_t_test(xs, ys);
        entry["t_stat"] = round6(w.t_stat);
        entry["dof"] = round6(w.dof);
        entry["p_value"] = round6(w.p_value);
        entry["significant_95"] = w.significant_95;
        entry["direction"] = w.t_stat < 0.0 ? "case3_lower" : (w.t_stat > 0.0 ? "case3_higher" : "equal");
      } catch (const Error & e) {
        entry["error"] = e.what();
      }
      per_measure[m.name] = entry;
    }
    zones[std::string(to_string(zr.zone))] = per_measure;
  }
  return json{{"test", "welch_two_sided"}, {"x", "case3"}, {"y", "case2"}, {"zones", zones}};
}

}  // namespace

void write_report(const fs::path & dir, const BatchReport & report)
{
  for (const ZoneReport & zr : report.zones) {
    write_text_file(dir / ("report_" + std::string(to_string(zr.zone)) + ".csv"), zone_csv(zr));
  }
  write_text_file(dir / "improvement_rates.json", rates_json(report).dump(2) + "\n");
  write_text_file(dir / "significance.json", significance_json(report).dump(2) + "\n");
}

}  // namespace mergevis
