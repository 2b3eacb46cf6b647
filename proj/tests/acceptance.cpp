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

// Acceptance harness: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include "mergevis/cli.hpp"
#include "mergevis/io.hpp"
#include "mergevis/merge_planning.hpp"
#include "mergevis/metrics.hpp"
#include "mergevis/optimal_control.hpp"
#include "mergevis/scenario.hpp"
#include "mergevis/simulation.hpp"
#include "mergevis/vis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace mergevis
{
namespace
{

namespace fs = std::filesystem;

constexpr std::uint64_t kSeed = 2026;

struct Outcome
{
  bool pass{false};
  std::string detail;
};

std::string fmt(const char * format, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

double elapsed_s(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<VehiclePair> seeded_pairs(Zone zone)
{
  GeneratorConfig cfg;
  cfg.n_pairs = 100;
  cfg.zone = zone;
  cfg.seed = kSeed;
  return generate_synthetic(cfg);
}

SimConfig seeded_sim()
{
  SimConfig cfg;
  cfg.seed = kSeed;
  cfg.vis.seed = kSeed;
  return cfg;
}

const std::vector<CaseKind> kAllCases{
  CaseKind::Baseline, CaseKind::Case1CavThv, CaseKind::Case2CavCavVis, CaseKind::Case3CavCavNoVis};

Outcome bvp_oracle()
{
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> horizon(1.0, 20.0);
  std::uniform_real_distribution<double> speed(5.0, 35.0);
  std::uniform_real_distribution<double> accel(-2.0, 2.0);
  double worst_p = 0.0;
  double worst_v = 0.0;
  for (int i = 0; i < 1000; ++i) {
    // Horizons are whole grid steps so the rollout lands on tf.
    const double T = std::round(horizon(rng) / kSampleStep) * kSampleStep;
    const double v0 = speed(rng);
    const double vf = speed(rng);
    const double pf = 0.5 * (v0 + vf) * T + accel(rng) * T;
    const ControlLaw law = solve_min_energy({0.0, T, 0.0, v0, pf, vf});
    const Trajectory traj = rollout(law, 0.0, v0);
    worst_p = std::max(worst_p, std::abs(traj.back().p - pf));
    worst_v = std::max(worst_v, std::abs(traj.back().v - vf));
  }
  double worst_u = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double T = horizon(rng);
    const double v0 = speed(rng);
    const double a = (speed(rng) - v0) / T;
    const double p0 = 100.0 * accel(rng);
    const ControlLaw law =
      solve_min_energy({0.0, T, p0, v0, p0 + v0 * T + 0.5 * a * T * T, v0 + a * T});
    for (int j = 0; j <= 10; ++j) {
      worst_u = std::max(worst_u, std::abs(eval_control(law, T * j / 10.0) - a));
    }
  }
  const double t = elapsed_s(start);
  return {worst_p < 1e-6 && worst_v < 1e-6 && worst_u < 1e-9 && t < 1.0,
          fmt("max |dp| %.2e m, max |dv| %.2e m/s, max |u-a| %.2e, %.3f s", worst_p, worst_v,
              worst_u, t)};
}

Outcome recursive_equivalence()
{
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::size_t checked = 0;
  for (const VehiclePair & pair : seeded_pairs(Zone::OneThird)) {
    const SimOutput out = run_case(pair, CaseKind::Case1CavThv, seeded_sim());
    const auto t_id = out.event_time(EventKind::IdentificationDone);
    if (!t_id || out.flags.any_fallback()) {
      return {false, fmt("%s fell back", pair.pair_id.c_str())};
    }
    const std::size_t k_id = grid_index(*t_id);
    const VehicleState s = pair.onramp.samples[k_id];
    const CooperativePlan one_shot = plan_cooperative(
      s, pair.mainline.samples[k_id], pair.spec, CooperationMode::Unilateral, grid_time(k_id));
    for (std::size_t k = 0; k < out.onramp.size(); ++k) {
      const double ref = k < k_id ? pair.onramp.samples[k].p
                                  : propagate(one_shot.onramp, s.p, s.v, grid_time(k)).p;
      worst = std::max(worst, std::abs(out.onramp.samples[k].p - ref));
      ++checked;
    }
  }
  const double t = elapsed_s(start);
  return {worst < 1e-6 && t < 5.0,
          fmt("max deviation %.2e m over %zu samples, %.3f s", worst, checked, t)};
}

struct ZoneBatch
{
  Zone zone;
  std::vector<VehiclePair> pairs;
  BatchResult batch;
};

const std::vector<ZoneBatch> & seeded_batches()
{
  static const std::vector<ZoneBatch> batches = [] {
    std::vector<ZoneBatch> out;
    for (Zone zone : {Zone::OneThird, Zone::TwoThirds}) {
      ZoneBatch zb{zone, seeded_pairs(zone), {}};
      zb.batch = run_batch(zb.pairs, kAllCases, seeded_sim());
      out.push_back(std::move(zb));
    }
    return out;
  }();
  return batches;
}

double mean(const std::vector<double> & xs)
{
  double s = 0.0;
  for (double x : xs) {
    s += x;
  }
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

std::vector<double> measure(const ZoneBatch & zb, std::size_t case_index, double PairMetrics::*field)
{
  std::vector<double> out;
  for (std::size_t i = 0; i < zb.pairs.size(); ++i) {
    const SimOutput & run = zb.batch.at(i, case_index);
    out.push_back(evaluate_pair(run.onramp, run.mainline, zb.pairs[i].spec).*field);
  }
  return out;
}

Outcome safe_gap()
{
  bool pass = true;
  std::string detail;
  for (const ZoneBatch & zb : seeded_batches()) {
    double worst = 0.0;
    std::size_t fallbacks = 0;
    for (std::size_t i = 0; i < zb.pairs.size(); ++i) {
      for (std::size_t c : {2U, 3U}) {
        const SimOutput & run = zb.batch.at(i, c);
        if (run.failed()) {
          pass = false;
          continue;
        }
        if (run.flags.any_fallback()) {
          ++fallbacks;
          continue;
        }
        const double gap = pair_merging_time_gap(run.onramp, run.mainline, zb.pairs[i].spec);
        worst = std::max(worst, std::abs(gap - 1.8));
      }
    }
    const double case1 = mean(measure(zb, 1, &PairMetrics::gap_s));
    const double base = mean(measure(zb, 0, &PairMetrics::gap_s));
    pass = pass && worst <= 0.05 && case1 >= 1.7 && case1 <= 1.9 && base < 1.8;
    detail += fmt("%s: max |gap-1.8| %.4f s (%zu fallbacks), case1 mean %.4f, baseline mean %.4f; ",
                  std::string(to_string(zb.zone)).c_str(), worst, fallbacks, case1, base);
  }
  return {pass, detail};
}

Outcome orderings()
{
  bool pass = true;
  std::string detail;
  for (const ZoneBatch & zb : seeded_batches()) {
    for (auto [name, field] : {std::pair{"arms_onramp", &PairMetrics::arms_onramp},
                               std::pair{"fuel_onramp", &PairMetrics::fuel_onramp}}) {
      const auto c2 = measure(zb, 2, field);
      const auto c3 = measure(zb, 3, field);
      const WelchResult w = welch_t_test(c3, c2);
      const double diff = mean(c3) - mean(c2);
      const bool consistent = (w.t_stat < 0.0) == (diff < 0.0);
      pass = pass && diff <= 0.0 && consistent;
      detail += fmt("%s %s: case3 %.4f vs case2 %.4f, t %.3f p %.3g; ",
                    std::string(to_string(zb.zone)).c_str(), name, mean(c3), mean(c2), w.t_stat,
                    w.p_value);
    }
  }
  return {pass, detail};
}

Outcome vis_timing()
{
  bool pass = true;
  std::size_t n = 0;
  double c2_min = 1e9;
  double c2_max = -1e9;
  double c3_max = -1e9;
  for (const ZoneBatch & zb : seeded_batches()) {
    for (std::size_t i = 0; i < zb.pairs.size(); ++i) {
      const auto c2 = zb.batch.at(i, 2).event_time(EventKind::CooperationStart);
      const auto c3 = zb.batch.at(i, 3).event_time(EventKind::CooperationStart);
      if (!c2 || !c3) {
        pass = false;
        continue;
      }
      c2_min = std::min(c2_min, *c2);
      c2_max = std::max(c2_max, *c2);
      c3_max = std::max(c3_max, std::abs(*c3));
      pass = pass && std::abs(*c2 - 3.52) < 1e-9 && std::abs(*c3) < 1e-12;
      ++n;
    }
  }
  return {pass, fmt("%zu runs: case2 start in [%.4f, %.4f] s, case3 max |start| %.2e s", n, c2_min,
                    c2_max, c3_max)};
}

Outcome chi_square()
{
  const double thr = chi2_threshold(0.05);
  VisConfig cfg;
  std::mt19937_64 rng(kSeed);
  const int n = 100000;
  auto rate = [&](double offset, bool true_pair) {
    const std::vector<VehicleTruth> vehicles{
      {1, RelPos{15.0, 3.5}, 25.0, true_pair}, {2, RelPos{15.0 + offset, 3.5}, 25.0, true}};
    const int msg = msg_id_for(true_pair ? 1 : 2);
    int hits = 0;
    for (int i = 0; i < n; ++i) {
      const SensorFrame f = observe(0.0, vehicles, cfg, rng);
      hits += match_sample(f.bsm_obs.at(msg).pos, f.radar_tracks.at(1), cfg);
    }
    return static_cast<double>(hits) / n;
  };
  const double true_rate = rate(50.0, true);
  const double w0 = rate(0.0, false);
  const double w2 = rate(2.0, false);
  const double w5 = rate(5.0, false);
  const bool pass = std::abs(thr - 5.9915) <= 1e-3 && std::abs(true_rate - 0.95) <= 0.01 &&
                    w0 > w2 && w2 > w5;
  return {pass, fmt("threshold %.5f, true-pair rate %.4f, wrong-pair rates %.4f > %.4f > %.4f", thr,
                    true_rate, w0, w2, w5)};
}

Outcome fuel_point()
{
  const double rate = fuel_rate(20.0, 0.0);
  bool decel_zero = true;
  for (double v = 0.0; v <= 40.0; v += 0.5) {
    for (double a = -5.0; a < 0.0; a += 0.25) {
      decel_zero = decel_zero && fuel_rate(v, a) == 0.0;
    }
  }
  // A braking trajectory consumes only over its non-negative samples.
  const ControlLaw law = solve_min_energy({0.0, 8.0, 0.0, 25.0, 150.0, 15.0});
  const Trajectory traj = rollout(law, 0.0, 25.0);
  double expected = 0.0;
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    if (traj.samples[k].a >= 0.0) {
      expected += fuel_rate(traj.samples[k].v, traj.samples[k].a) * kSampleStep;
    }
  }
  const double total = fuel(traj);
  const bool pass =
    std::abs(rate - 0.8283) <= 1e-4 && decel_zero && std::abs(total - expected) < 1e-12;
  return {pass, fmt("rate(20, 0) = %.6f mL/s, braking samples contribute 0: %s", rate,
                    decel_zero && std::abs(total - expected) < 1e-12 ? "yes" : "no")};
}

Outcome collision()
{
  MergeSpec spec;
  spec.t_mer = 10.0;
  spec.p_merge = 250.0;
  auto constant = [](double p0, double v, std::string id, Lane lane) {
    Trajectory traj;
    traj.vehicle_id = std::move(id);
    traj.lane = lane;
    for (std::size_t k = 0; k <= 250; ++k) {
      const double t = grid_time(k);
      traj.samples.push_back({t, p0 + v * t, v, 0.0});
    }
    return traj;
  };
  const Trajectory onramp = constant(0.0, 25.0, "onramp", Lane::OnRamp);
  const Trajectory mainline = constant(-50.0, 30.0, "mainline", Lane::Mainline);
  const PairMetrics m = evaluate_pair(onramp, mainline, spec);
  std::vector<VehiclePair> pairs{VehiclePair{"c", onramp, mainline, spec, Zone::OneThird, m.gap_s, m.collision}};
  const auto kept = danger_filter(pairs, 1.8);
  const bool pass = m.gap_s <= 0.0 && m.collision && kept.size() == 1 && kept.front().collision;
  return {pass, fmt("gap %.4f s, collision %s", m.gap_s, m.collision ? "true" : "false")};
}

Outcome zone_split()
{
  bool pass = true;
  std::string detail;
  for (Zone zone : {Zone::OneThird, Zone::TwoThirds}) {
    const auto pairs = seeded_pairs(zone);
    std::size_t leads = 0;
    double lo = 1e9;
    double hi = -1e9;
    for (const VehiclePair & p : pairs) {
      leads += p.spec.sequence == MergeSequence::OnRampLeads;
      lo = std::min(lo, p.spec.p_merge);
      hi = std::max(hi, p.spec.p_merge);
      pass = pass && in_zone(p.spec.p_merge, zone);
    }
    const bool in_range = zone == Zone::OneThird ? lo >= 230.0 && hi < 300.0 : lo >= 300.0 && hi <= 370.0;
    pass = pass && pairs.size() == 100 && in_range && leads >= 74 && leads <= 90;
    detail += fmt("%s: %zu pairs, p_merge in [%.2f, %.2f], %zu on-ramp leads; ",
                  std::string(to_string(zone)).c_str(), pairs.size(), lo, hi, leads);
  }
  return {pass, detail};
}

int cli(const std::vector<std::string> & args)
{
  std::vector<const char *> argv{"mergevis"};
  for (const std::string & a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out;
  std::ostringstream err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::string slurp(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

using Snapshot = std::map<std::string, std::string>;

Snapshot snapshot(const fs::path & root)
{
  Snapshot out;
  for (const auto & e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      out[fs::relative(e.path(), root).string()] = slurp(e.path());
    }
  }
  return out;
}

Outcome end_to_end()
{
  // Every pipeline writes to the same place so paths echoed into the
  // outputs match too.
  const fs::path dir = fs::temp_directory_path() / "mergevis_acceptance";
  auto pipeline = [&](const std::string & jobs) {
    fs::remove_all(dir);
    const int g = cli({"generate", "--zone", "one-third", "--n", "100", "--seed", std::to_string(kSeed),
                       "--out", (dir / "pairs").string()});
    const int r = cli({"run", "--manifest", (dir / "pairs" / "manifest.json").string(), "--cases",
                       "baseline,case1,case2,case3", "--seed", std::to_string(kSeed), "--jobs", jobs,
                       "--out", (dir / "run").string()});
    const int p = cli({"report", "--run-dir", (dir / "run").string(), "--out", (dir / "report").string()});
    return g == kExitOk && r == kExitOk && p == kExitOk;
  };
  const auto start = std::chrono::steady_clock::now();
  const bool ok1 = pipeline("1");
  const double t1 = elapsed_s(start);
  const Snapshot first = snapshot(dir);
  const bool ok2 = pipeline("1");
  const bool rerun_same = snapshot(dir) == first;
  const bool ok3 = pipeline("4");
  const bool jobs_same = snapshot(dir) == first;
  const bool pass = ok1 && ok2 && ok3 && !first.empty() && rerun_same && jobs_same && t1 < 30.0;
  return {pass, fmt("single pipeline %.3f s, %zu files, rerun identical %s, --jobs 1 vs 4 identical %s",
                    t1, first.size(), rerun_same ? "yes" : "no", jobs_same ? "yes" : "no")};
}

}  // namespace
}  // namespace mergevis

int main()
{
  using mergevis::Outcome;
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
    {"BVP solver oracle", mergevis::bvp_oracle},
    {"recursive equals one-shot", mergevis::recursive_equivalence},
    {"safe-gap attainment", mergevis::safe_gap},
    {"qualitative orderings", mergevis::orderings},
    {"VIS timing", mergevis::vis_timing},
    {"chi-square machinery", mergevis::chi_square},
    {"fuel model point check", mergevis::fuel_point},
    {"collision detection", mergevis::collision},
    {"zone and split conformance", mergevis::zone_split},
    {"end-to-end determinism and runtime", mergevis::end_to_end},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception & e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf(
      "criterion %2zu: %s  %s (%s) [%.3f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
      o.detail.c_str(), mergevis::elapsed_s(start));
    failures += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
