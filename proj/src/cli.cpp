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

#include "mergevis/cli.hpp"

#include "mergevis/error.hpp"
#include "mergevis/io.hpp"
#include "mergevis/metrics.hpp"
#include "mergevis/scenario.hpp"
#include "mergevis/simulation.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace mergevis
{

namespace
{

namespace fs = std::filesystem;
using nlohmann::json;

/// Thrown for semantically invalid option combinations found after parsing.
struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

const std::map<std::string, DecelerationRule> kDecelMap{
  {"zero-rate", DecelerationRule::ZeroTotalRate},
  {"zero-accel-term", DecelerationRule::ZeroAccelerationTerm}};

struct GenerateOptions
{
  GeneratorConfig gen;
  std::string out_dir;
};

struct IngestOptions
{
  std::string input;
  Zone zone{Zone::OneThird};
  double danger_threshold_s{1.8};
  double h{1.8};
  double l{2.5};
  std::string out_dir;
};

struct RunOptions
{
  std::string manifest;
  std::vector<std::string> cases{"baseline", "case1", "case2", "case3"};
  std::string vis_mode{"fixed"};
  double t_id{3.5};
  int window_n{88};
  int min_matches{70};
  double sigma_g{1.0};
  double sigma_r{0.1};
  double alpha{0.05};
  double radar_range{200.0};
  CooperationMode cooperation{CooperationMode::Bilateral};
  double min_horizon{kDefaultMinHorizon};
  double accel_bound{4.0};
  DecelerationRule deceleration{DecelerationRule::ZeroTotalRate};
  std::uint64_t seed{0};
  unsigned jobs{0};
  std::string out_dir;
};

struct ReportOptions
{
  std::string run_dir;
  std::string out_dir;
  DecelerationRule deceleration{DecelerationRule::ZeroTotalRate};
};

std::string name_of(const std::map<std::string, DecelerationRule> & m, DecelerationRule v)
{
  for (const auto & [k, x] : m) {
    if (x == v) {
      return k;
    }
  }
  return "";
}

json generator_json(const GeneratorConfig & g)
{
  return json{
    {"n_pairs", g.n_pairs},
    {"zone", to_string(g.zone)},
    {"danger_threshold_s", g.danger_threshold_s},
    {"lead_fraction", g.lead_fraction},
    {"onramp_v", {g.onramp_v_min, g.onramp_v_max}},
    {"mainline_v", {g.mainline_v_min, g.mainline_v_max}},
    {"h", g.h},
    {"l", g.l},
    {"seed", g.seed},
  };
}

int cmd_generate(const GenerateOptions & opt, std::ostream & out)
{
  try {
    opt.gen.validate();
  } catch (const Error & e) {
    throw UsageError(e.what());
  }
  const std::vector<VehiclePair> pairs = generate_synthetic(opt.gen);
  json source = generator_json(opt.gen);
  source["kind"] = "synthetic";
  write_manifest(opt.out_dir, pairs, source);
  const auto leads = std::count_if(pairs.begin(), pairs.end(), [](const VehiclePair & p) {
    return p.spec.sequence == MergeSequence::OnRampLeads;
  });
  out << "generated " << pairs.size() << " pairs in zone " << to_string(opt.gen.zone) << " ("
      << leads << " on-ramp leads) -> " << (fs::path(opt.out_dir) / "manifest.json").string()
      << "\n";
  return kExitOk;
}

int cmd_ingest(const IngestOptions & opt, std::ostream & out, std::ostream & err)
{
  if (!(opt.danger_threshold_s > 0.0) || !(opt.h > 0.0) || !(opt.l > 0.0)) {
    throw UsageError("danger threshold, h and l must be positive");
  }
  const std::vector<TrajectoryRecord> records = ingest_csv(opt.input);
  std::vector<std::string> skipped;
  std::vector<VehiclePair> pairs = extract_pairs(records, opt.zone, opt.h, opt.l, &skipped);
  const std::size_t extracted = pairs.size();
  pairs = danger_filter(std::move(pairs), opt.danger_threshold_s);
  for (const std::string & s : skipped) {
    err << "skipped " << s << "\n";
  }
  json source{{"kind", "ingested"}, {"input", opt.input}, {"zone", to_string(opt.zone)},
              {"danger_threshold_s", opt.danger_threshold_s}, {"h", opt.h}, {"l", opt.l}};
  write_manifest(opt.out_dir, pairs, source);
  out << "ingested " << records.size() << " vehicles from " << opt.input << ": " << extracted
      << " pairs in zone " << to_string(opt.zone) << ", " << pairs.size()
      << " kept by the danger filter -> "
      << (fs::path(opt.out_dir) / "manifest.json").string() << "\n";
  return kExitOk;
}

SimConfig sim_config(const RunOptions & opt)
{
  SimConfig cfg;
  cfg.vis.sigma_g = opt.sigma_g;
  cfg.vis.sigma_r = opt.sigma_r;
  cfg.vis.alpha = opt.alpha;
  cfg.vis.radar_range = opt.radar_range;
  cfg.vis.seed = opt.seed;
  if (opt.vis_mode == "fixed") {
    cfg.vis.mode = FixedDelay{opt.t_id};
  } else {
    cfg.vis.mode = Statistical{opt.window_n, opt.min_matches};
  }
  cfg.cooperation = opt.cooperation;
  cfg.min_horizon = opt.min_horizon;
  cfg.accel_bound = opt.accel_bound;
  cfg.seed = opt.seed;
  try {
    cfg.vis.validate();
  } catch (const Error & e) {
    throw UsageError(e.what());
  }
  return cfg;
}

// The worker count is deliberately absent: it never changes results.
json effective_run_config(const RunOptions & opt, const std::vector<CaseKind> & cases)
{
  json case_list = json::array();
  for (CaseKind k : cases) {
    case_list.push_back(to_string(k));
  }
  json vis{{"mode", opt.vis_mode}, {"sigma_g", opt.sigma_g}, {"sigma_r", opt.sigma_r},
           {"alpha", opt.alpha}, {"radar_range", opt.radar_range}};
  if (opt.vis_mode == "fixed") {
    vis["t_id"] = opt.t_id;
  } else {
    vis["window_n"] = opt.window_n;
    vis["min_matches"] = opt.min_matches;
  }
  return json{
    {"command", "run"},
    {"manifest", opt.manifest},
    {"cases", case_list},
    {"vis", vis},
    {"cooperation", to_string(opt.cooperation)},
    {"min_horizon", opt.min_horizon},
    {"accel_bound", opt.accel_bound},
    {"deceleration_rule", name_of(kDecelMap, opt.deceleration)},
    {"seed", opt.seed},
  };
}

std::string fixed(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

void print_report(const BatchReport & report, std::ostream & out)
{
  for (const ZoneReport & zr : report.zones) {
    out << "zone " << to_string(zr.zone) << ":\n";
    for (const CaseReport & c : zr.cases) {
      const MetricsAggregate & a = c.aggregate;
      out << "  " << to_string(c.kind) << ": n=" << a.n << " gap=" << fixed(a.gap_s)
          << " arms_onramp=" << fixed(a.arms_onramp) << " fuel_onramp=" << fixed(a.fuel_onramp)
          << " collisions=" << a.collisions << "\n";
    }
  }
}

int cmd_run(const RunOptions & opt, std::ostream & out, std::ostream & err)
{
  std::vector<CaseKind> cases;
  for (const std::string & name : opt.cases) {
    try {
      const CaseKind kind = case_from_string(name);
      if (std::find(cases.begin(), cases.end(), kind) == cases.end()) {
        cases.push_back(kind);
      }
    } catch (const Error & e) {
      throw UsageError(e.what());
    }
  }
  if (cases.empty()) {
    throw UsageError("at least one case must be selected");
  }
  const SimConfig cfg = sim_config(opt);
  const std::vector<VehiclePair> pairs = read_manifest(opt.manifest);
  if (pairs.empty()) {
    err << "error: manifest " << opt.manifest << " lists no pairs\n";
    return kExitFailure;
  }

  const BatchResult batch = run_batch(pairs, cases, cfg, opt.jobs);
  const fs::path dir(opt.out_dir);
  export_batch(dir, pairs, batch);
  write_text_file(dir / "config.json", effective_run_config(opt, cases).dump(2) + "\n");

  std::size_t failures = 0;
  std::map<std::string, std::size_t> flag_counts;
  double coop_min = 0.0;
  double coop_max = 0.0;
  bool coop_seen = false;
  for (const SimOutput & run : batch.runs) {
    if (run.failed()) {
      ++failures;
      err << "run " << run.pair_id << "/" << to_string(run.kind) << " failed: " << run.error << "\n";
      continue;
    }
    const json flags = to_json(run.flags);
    for (const auto & [name, value] : flags.items()) {
      if (value.is_boolean() ? value.get<bool>() : value.get<int>() > 0) {
        ++flag_counts[name];
      }
    }
    if (run.kind == CaseKind::Case2CavCavVis) {
      if (const auto t = run.event_time(EventKind::CooperationStart)) {
        coop_min = coop_seen ? std::min(coop_min, *t) : *t;
        coop_max = coop_seen ? std::max(coop_max, *t) : *t;
        coop_seen = true;
      }
    }
  }

  MetricsConfig mcfg;
  mcfg.deceleration = opt.deceleration;
  const BatchReport report = compute_report(dir, mcfg);
  write_report(dir, report);

  out << "ran " << batch.runs.size() << " runs (" << pairs.size() << " pairs x " << cases.size()
      << " cases), " << failures << " failed -> " << dir.string() << "\n";
  for (const auto & [name, count] : flag_counts) {
    out << "  flag " << name << ": " << count << " runs\n";
  }
  if (coop_seen) {
    out << "  case2 cooperation start: " << fixed(coop_min) << " .. " << fixed(coop_max)
        << " s (per pair in events.jsonl)\n";
  }
  print_report(report, out);
  return failures == 0 ? kExitOk : kExitFailure;
}

int cmd_report(const ReportOptions & opt, std::ostream & out)
{
  MetricsConfig mcfg;
  mcfg.deceleration = opt.deceleration;
  const BatchReport report = compute_report(opt.run_dir, mcfg);
  const fs::path dir = opt.out_dir.empty() ? fs::path(opt.run_dir) : fs::path(opt.out_dir);
  write_report(dir, report);
  print_report(report, out);
  out << "report written to " << dir.string() << "\n";
  return report.failed_runs == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Cooperative on-ramp merging with vehicle identification"};
  app.set_config("--config", "", "TOML or INI file with option defaults; flags take precedence");
  app.require_subcommand(1);

  GenerateOptions gen;
  auto * generate = app.add_subcommand("generate", "Generate synthetic dangerous merging pairs");
  std::string gen_zone{"one-third"};
  generate->add_option("--zone", gen_zone, "Merging zone")
    ->check(CLI::IsMember({"one-third", "two-thirds"}));
  generate->add_option("--n", gen.gen.n_pairs, "Number of pairs")->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.gen.seed, "Generator seed");
  generate->add_option("--lead-fraction", gen.gen.lead_fraction, "Share of on-ramp-leads pairs")
    ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--danger-threshold", gen.gen.danger_threshold_s, "Baseline gap cutoff, s")
    ->check(CLI::PositiveNumber);
  generate->add_option("--headway", gen.gen.h, "Safe time gap, s")->check(CLI::PositiveNumber);
  generate->add_option("--length", gen.gen.l, "Vehicle length, m")->check(CLI::PositiveNumber);
  generate->add_option("--out", gen.out_dir, "Output directory")->required();

  IngestOptions ing;
  auto * ingest = app.add_subcommand("ingest", "Extract dangerous pairs from a tracks CSV");
  ingest->add_option("--input", ing.input, "Tracks CSV (frame,vehicle_id,lane,t,p,v,a)")->required();
  std::string ing_zone{"one-third"};
  ingest->add_option("--zone", ing_zone, "Merging zone")
    ->check(CLI::IsMember({"one-third", "two-thirds"}));
  ingest->add_option("--danger-threshold", ing.danger_threshold_s, "Baseline gap cutoff, s");
  ingest->add_option("--headway", ing.h, "Safe time gap, s");
  ingest->add_option("--length", ing.l, "Vehicle length, m");
  ingest->add_option("--out", ing.out_dir, "Output directory")->required();

  RunOptions run;
  auto * run_cmd = app.add_subcommand("run", "Run cases over a pair manifest and report");
  run_cmd->add_option("--manifest", run.manifest, "Pair manifest")->required();
  run_cmd->add_option("--cases", run.cases, "Cases to run")->delimiter(',');
  run_cmd->add_option("--vis-mode", run.vis_mode, "Identification mode")
    ->check(CLI::IsMember({"fixed", "statistical"}));
  run_cmd->add_option("--t-id", run.t_id, "Fixed identification delay, s");
  run_cmd->add_option("--window-n", run.window_n, "Statistical window length, samples");
  run_cmd->add_option("--min-matches", run.min_matches, "Matches required in the window");
  run_cmd->add_option("--sigma-g", run.sigma_g, "GPS error std, m");
  run_cmd->add_option("--sigma-r", run.sigma_r, "Radar error std, m");
  run_cmd->add_option("--alpha", run.alpha, "Match test significance level");
  run_cmd->add_option("--radar-range", run.radar_range, "Radar range, m");
  std::string cooperation{"bilateral"};
  run_cmd->add_option("--cooperation", cooperation, "Cooperative planning mode")
    ->check(CLI::IsMember({"bilateral", "unilateral"}));
  run_cmd->add_option("--min-horizon", run.min_horizon, "Shortest plannable horizon, s")
    ->check(CLI::PositiveNumber);
  run_cmd->add_option("--accel-bound", run.accel_bound, "Comfort bound on |u|, m/s^2")
    ->check(CLI::PositiveNumber);
  run_cmd->add_option("--deceleration-rule", run.deceleration, "Fuel use while decelerating")
    ->transform(CLI::CheckedTransformer(kDecelMap, CLI::ignore_case));
  run_cmd->add_option("--seed", run.seed, "Global seed");
  run_cmd->add_option("--jobs", run.jobs, "Worker threads (0 = all cores)");
  run_cmd->add_option("--out", run.out_dir, "Output directory")->required();

  ReportOptions rep;
  auto * report = app.add_subcommand("report", "Recompute reports from a run directory");
  report->add_option("--run-dir", rep.run_dir, "Directory written by `run`")->required();
  report->add_option("--out", rep.out_dir, "Output directory (default: the run directory)");
  report->add_option("--deceleration-rule", rep.deceleration, "Fuel use while decelerating")
    ->transform(CLI::CheckedTransformer(kDecelMap, CLI::ignore_case));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    gen.gen.zone = zone_from_string(gen_zone);
    ing.zone = zone_from_string(ing_zone);
    run.cooperation = cooperation_mode_from_string(cooperation);
    if (*generate) {
      return cmd_generate(gen, out);
    }
    if (*ingest) {
      return cmd_ingest(ing, out, err);
    }
    if (*run_cmd) {
      return cmd_run(run, out, err);
    }
    return cmd_report(rep, out);
  } catch (const UsageError & e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace mergevis
