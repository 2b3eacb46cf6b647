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
#include "mergevis/kinematics.hpp"
#include "mergevis/metrics.hpp"
#include "mergevis/optimal_control.hpp"
#include "mergevis/scenario.hpp"
#include "mergevis/simulation.hpp"
#include "mergevis/vis.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace mergevis;

namespace
{

py::dict trajectory_dict(const Trajectory & traj)
{
  std::vector<double> t, p, v, a;
  for (const VehicleState & s : traj.samples) {
    t.push_back(s.t);
    p.push_back(s.p);
    v.push_back(s.v);
    a.push_back(s.a);
  }
  py::dict d;
  d["vehicle_id"] = traj.vehicle_id;
  d["lane"] = std::string(to_string(traj.lane));
  d["t"] = t;
  d["p"] = p;
  d["v"] = v;
  d["a"] = a;
  return d;
}

Trajectory trajectory_from(
  const std::vector<double> & t, const std::vector<double> & p, const std::vector<double> & v,
  const std::vector<double> & a)
{
  if (t.size() != p.size() || t.size() != v.size() || t.size() != a.size()) {
    throw Error(ErrorCode::InvalidArgument, "t, p, v and a must have equal lengths");
  }
  Trajectory traj;
  for (std::size_t k = 0; k < t.size(); ++k) {
    traj.samples.push_back(VehicleState{t[k], p[k], v[k], a[k]});
  }
  return traj;
}

SimConfig sim_config(const std::string & vis_mode, double t_id, const std::string & cooperation, std::uint64_t seed)
{
  SimConfig cfg;
  cfg.seed = seed;
  cfg.vis.seed = seed;
  if (vis_mode == "fixed") {
    cfg.vis.mode = FixedDelay{t_id};
  } else if (vis_mode == "statistical") {
    cfg.vis.mode = Statistical{};
  } else {
    throw Error(ErrorCode::InvalidArgument, "vis_mode must be 'fixed' or 'statistical'");
  }
  cfg.cooperation = cooperation_mode_from_string(cooperation);
  return cfg;
}

py::dict run_dict(const SimOutput & run)
{
  py::dict d;
  d["pair_id"] = run.pair_id;
  d["case"] = std::string(to_string(run.kind));
  d["error"] = run.error;
  d["onramp"] = trajectory_dict(run.onramp);
  d["mainline"] = trajectory_dict(run.mainline);
  py::list events;
  for (const SimEvent & e : run.events) {
    events.append(py::make_tuple(std::string(to_string(e.kind)), e.t));
  }
  d["events"] = events;
  d["flags"] = py::module_::import("json").attr("loads")(to_json(run.flags).dump());
  return d;
}

}  // namespace

PYBIND11_MODULE(_mergevis, m)
{
  m.doc() = "Cooperative on-ramp merging with vehicle identification";

  py::register_exception<Error>(m, "MergevisError", PyExc_RuntimeError);

  py::class_<ControlLaw>(m, "ControlLaw")
    .def_readonly("alpha", &ControlLaw::alpha)
    .def_readonly("beta", &ControlLaw::beta)
    .def_readonly("t0", &ControlLaw::t0)
    .def_readonly("tf", &ControlLaw::tf)
    .def("__call__", [](const ControlLaw & law, double t) { return eval_control(law, t); })
    .def("energy", &energy_cost)
    .def("__repr__", [](const ControlLaw & law) {
      std::ostringstream ss;
      ss << "ControlLaw(alpha=" << law.alpha << ", beta=" << law.beta << ", t0=" << law.t0
         << ", tf=" << law.tf << ")";
      return ss.str();
    });

  m.def(
    "solve_min_energy",
    [](double t0, double tf, double p0, double v0, double pf, double vf, double min_horizon) {
      return solve_min_energy(BoundaryValueProblem{t0, tf, p0, v0, pf, vf}, min_horizon);
    },
    py::arg("t0"), py::arg("tf"), py::arg("p0"), py::arg("v0"), py::arg("pf"), py::arg("vf"),
    py::arg("min_horizon") = kDefaultMinHorizon);
  m.def(
    "rollout",
    [](const ControlLaw & law, double p0, double v0, double dt) {
      return trajectory_dict(rollout(law, p0, v0, dt));
    },
    py::arg("law"), py::arg("p0"), py::arg("v0"), py::arg("dt") = kSampleStep);

  m.def("chi2_threshold", &chi2_threshold, py::arg("alpha"));
  m.def(
    "match_statistic",
    [](double gx, double gy, double rx, double ry, double sigma_g, double sigma_r) {
      VisConfig cfg;
      cfg.sigma_g = sigma_g;
      cfg.sigma_r = sigma_r;
      return match_statistic(RelPos{gx, gy}, RelPos{rx, ry}, cfg);
    },
    py::arg("gps_x"), py::arg("gps_y"), py::arg("radar_x"), py::arg("radar_y"),
    py::arg("sigma_g") = 1.0, py::arg("sigma_r") = 0.1);

  m.def(
    "fuel_rate", [](double v, double a) { return fuel_rate(v, a); }, py::arg("v"), py::arg("a"));
  m.def(
    "a_rms",
    [](const std::vector<double> & a) {
      std::vector<double> zeros(a.size(), 0.0);
      std::vector<double> t(a.size());
      for (std::size_t k = 0; k < a.size(); ++k) {
        t[k] = grid_time(k);
      }
      return a_rms(trajectory_from(t, zeros, zeros, a));
    },
    py::arg("a"));
  m.def(
    "welch_t_test",
    [](const std::vector<double> & xs, const std::vector<double> & ys) {
      const WelchResult r = welch_t_test(xs, ys);
      py::dict d;
      d["t_stat"] = r.t_stat;
      d["dof"] = r.dof;
      d["p_value"] = r.p_value;
      d["significant_95"] = r.significant_95;
      return d;
    },
    py::arg("xs"), py::arg("ys"));

  m.def(
    "generate_pairs",
    [](const std::string & zone, std::size_t n, std::uint64_t seed) {
      GeneratorConfig cfg;
      cfg.zone = zone_from_string(zone);
      cfg.n_pairs = n;
      cfg.seed = seed;
      py::list out;
      for (const VehiclePair & pair : generate_synthetic(cfg)) {
        py::dict d;
        d["pair_id"] = pair.pair_id;
        d["t_mer"] = pair.spec.t_mer;
        d["p_merge"] = pair.spec.p_merge;
        d["sequence"] = std::string(to_string(pair.spec.sequence));
        d["baseline_gap_s"] = pair.baseline_gap_s;
        out.append(d);
      }
      return out;
    },
    py::arg("zone") = "one-third", py::arg("n") = 100, py::arg("seed") = 0);

  m.def(
    "run_pair",
    [](const std::string & zone, std::size_t index, std::uint64_t seed, const std::string & kind,
       const std::string & vis_mode, const std::string & cooperation) {
      GeneratorConfig gen;
      gen.zone = zone_from_string(zone);
      gen.n_pairs = index + 1;
      gen.seed = seed;
      const std::vector<VehiclePair> pairs = generate_synthetic(gen);
      const SimConfig cfg = sim_config(vis_mode, 3.5, cooperation, seed);
      const SimOutput run = run_case(pairs.back(), case_from_string(kind), cfg);
      py::dict d = run_dict(run);
      const PairMetrics pm = evaluate_pair(run.onramp, run.mainline, pairs.back().spec);
      py::dict metrics;
      metrics["gap_s"] = pm.gap_s;
      metrics["arms_onramp"] = pm.arms_onramp;
      metrics["arms_mainline"] = pm.arms_mainline;
      metrics["fuel_onramp"] = pm.fuel_onramp;
      metrics["fuel_mainline"] = pm.fuel_mainline;
      metrics["collision"] = pm.collision;
      d["metrics"] = metrics;
      return d;
    },
    py::arg("zone"), py::arg("index"), py::arg("seed"), py::arg("case"),
    py::arg("vis_mode") = "fixed", py::arg("cooperation") = "bilateral",
    "Generates the pair with the given index and runs one case on it.");

  m.def(
    "cli",
    [](const std::vector<std::string> & args) {
      std::vector<const char *> argv{"mergevis"};
      for (const std::string & a : args) {
        argv.push_back(a.c_str());
      }
      std::ostringstream out;
      std::ostringstream err;
      const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
      return py::make_tuple(code, out.str(), err.str());
    },
    py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
