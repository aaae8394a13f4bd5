// Python face of the library.  Everything crosses the boundary as plain
// lists/dicts so the module stays numpy-agnostic; callers who want arrays
// can wrap the output themselves.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "hygame/cost.hpp"
#include "hygame/errors.hpp"
#include "hygame/hjbi.hpp"
#include "hygame/manifest.hpp"
#include "hygame/riccati.hpp"
#include "hygame/scenarios.hpp"
#include "hygame/simulator.hpp"
#include "hygame/stability.hpp"
#include "hygame/system.hpp"

namespace py = pybind11;
using namespace hygame;

namespace {

py::list to_py(const Vec& v) {
  py::list out;
  for (double x : v) out.append(x);
  return out;
}

py::list to_py(const Mat& m) {
  py::list out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    py::list row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.append(m(i, j));
    out.append(row);
  }
  return out;
}

Vec vec_arg(const py::object& obj, const Vec& fallback) {
  if (obj.is_none()) return fallback;
  Vec v;
  for (const auto& item : obj) v.push_back(item.cast<double>());
  return v;
}

// (V, law) for a scenario, solving for them when no closed form is attached.
struct Certified {
  ValueCertificate V;
  FeedbackLaw law;
  std::optional<PeriodicSolution> periodic;
};

Certified certified_data(const Scenario& sc) {
  Certified out;
  if (sc.V && sc.law) {
    out.V = *sc.V;
    out.law = *sc.law;
    return out;
  }
  if (sc.quad && sc.quad->T1) {
    out.periodic = solve_periodic(*sc.quad);
    out.V = out.periodic->V;
    out.law = out.periodic->law;
    return out;
  }
  if (sc.V) {
    out.V = *sc.V;
    out.law = synthesize_feedback(sc, out.V);
    return out;
  }
  if (sc.quad) {
    const ConstantSolution sol = solve_constant(*sc.quad);
    out.V = quadratic_certificate(sol.P);
    out.law = law_from_gains(sc.sys.dims, sol.KC1, sol.KC2, sol.KD1, sol.KD2);
    return out;
  }
  throw ParseError("scenario '" + sc.name + "' has no value data");
}

SimConfig make_config(double t_budget, int j_budget, double dt_max,
                      const std::string& policy) {
  SimConfig cfg;
  cfg.t_budget = t_budget;
  cfg.j_budget = j_budget;
  cfg.dt_max = dt_max;
  cfg.policy = parse_jump_policy(policy);
  return cfg;
}

py::dict run_to_py(const SolutionPair& sp, const StageCosts& costs,
                   bool with_samples) {
  py::dict out;
  out["stop"] = to_string(sp.status.reason);
  out["branch"] = sp.branch_id;
  const auto& last = sp.arc.intervals.back();
  out["t_end"] = last.t1();
  out["j_end"] = static_cast<int>(sp.arc.intervals.size()) - 1;
  if (sp.status.hit) {
    out["hit"] = py::make_tuple(sp.status.hit->t, sp.status.hit->j);
  } else {
    out["hit"] = py::none();
  }
  const CostReport cost = evaluate_cost(sp, costs);
  py::dict c;
  c["flow"] = cost.flow_cost;
  c["jump"] = cost.jump_cost;
  c["terminal"] = cost.terminal_cost;
  c["total"] = cost.total;
  c["tail_bound"] =
      cost.tail_bound ? py::cast(*cost.tail_bound) : py::object(py::none());
  c["terminal_converged"] = cost.terminal_converged;
  out["cost"] = c;
  if (with_samples) {
    py::list intervals;
    for (std::size_t j = 0; j < sp.arc.intervals.size(); ++j) {
      const auto& iv = sp.arc.intervals[j];
      py::dict d;
      d["j"] = static_cast<int>(j);
      py::list ts, xs;
      for (std::size_t k = 0; k < iv.t.size(); ++k) {
        ts.append(iv.t[k]);
        xs.append(to_py(iv.v[k]));
      }
      d["t"] = ts;
      d["x"] = xs;
      intervals.append(d);
    }
    out["intervals"] = intervals;
  }
  return out;
}

py::list py_scenario_names() {
  py::list out;
  for (const auto& n : builtin_scenario_names()) out.append(n);
  return out;
}

py::dict py_scenario_info(const std::string& ref) {
  const Scenario sc = resolve_scenario(ref);
  py::dict out;
  out["name"] = sc.name;
  out["n"] = sc.sys.n;
  py::dict dims;
  dims["mC1"] = sc.sys.dims.mC1;
  dims["mC2"] = sc.sys.dims.mC2;
  dims["mD1"] = sc.sys.dims.mD1;
  dims["mD2"] = sc.sys.dims.mD2;
  out["dims"] = dims;
  out["default_x0"] = to_py(sc.default_x0);
  out["grid_lo"] = to_py(sc.grid_lo);
  out["grid_hi"] = to_py(sc.grid_hi);
  out["has_terminal_set"] = sc.sys.X.present;
  out["has_value"] = static_cast<bool>(sc.V);
  out["has_law"] = static_cast<bool>(sc.law);
  out["has_quadratic_data"] = static_cast<bool>(sc.quad);
  return out;
}

py::object py_simulate(const std::string& ref, const py::object& x0,
                       const std::string& policy, double t_budget,
                       int j_budget, double dt_max, bool samples) {
  const Scenario sc = resolve_scenario(ref);
  const Certified cd = certified_data(sc);
  const ClosedLoopSystem cl = close_loop(sc.sys, cd.law);
  const Vec start = vec_arg(x0, sc.default_x0);
  const SimConfig cfg = make_config(t_budget, j_budget, dt_max, policy);
  if (cfg.policy == JumpPolicy::EnumerateBoth) {
    py::list out;
    for (const auto& sp : simulate_branches(cl, start, cfg))
      out.append(run_to_py(sp, sc.costs, samples));
    return out;
  }
  return run_to_py(simulate(cl, start, cfg), sc.costs, samples);
}

py::dict py_evaluate_cost(const std::string& ref, const py::object& x0,
                          const std::string& policy, double t_budget,
                          int j_budget) {
  const Scenario sc = resolve_scenario(ref);
  const Certified cd = certified_data(sc);
  const SimConfig cfg = make_config(t_budget, j_budget, 1e-3, policy);
  const SolutionPair sp =
      simulate(close_loop(sc.sys, cd.law), vec_arg(x0, sc.default_x0), cfg);
  py::dict run = run_to_py(sp, sc.costs, false);
  return run["cost"].cast<py::dict>();
}

py::dict py_solve_periodic(const std::string& ref) {
  const Scenario sc = resolve_scenario(ref);
  if (!sc.quad || !sc.quad->T1)
    throw ParseError("scenario '" + sc.name + "' has no periodic data");
  const PeriodicSolution sol = solve_periodic(*sc.quad);
  py::dict out;
  out["P0"] = to_py(sol.P0);
  out["PT"] = to_py(sol.PT);
  out["iterations"] = sol.iterations;
  out["residual"] = sol.residual;
  return out;
}

py::dict py_solve_constant(const std::string& ref) {
  const Scenario sc = resolve_scenario(ref);
  if (!sc.quad)
    throw ParseError("scenario '" + sc.name + "' has no quadratic data");
  const ConstantSolution sol = solve_constant(*sc.quad);
  py::dict out;
  out["P"] = to_py(sol.P);
  out["flow_residual"] = sol.flow_residual;
  out["jump_residual"] = sol.jump_residual;
  out["iterations"] = sol.iterations;
  out["KC1"] = to_py(sol.KC1);
  out["KC2"] = to_py(sol.KC2);
  out["KD1"] = to_py(sol.KD1);
  out["KD2"] = to_py(sol.KD2);
  return out;
}

py::dict py_solve_security(const std::string& ref) {
  const Scenario sc = resolve_scenario(ref);
  if (!sc.quad)
    throw ParseError("scenario '" + sc.name + "' has no quadratic data");
  const SecuritySolution sol =
      solve_security(*sc.quad, sc.sys, sc.grid_lo, sc.grid_hi);
  py::dict out;
  out["P"] = to_py(sol.jump.P);
  out["jump_residual"] = sol.jump.jump_residual;
  out["iterations"] = sol.jump.iterations;
  out["flow_orthogonality"] = sol.flow_orthogonality;
  out["samples"] = sol.samples;
  out["KD1"] = to_py(sol.jump.KD1);
  out["KD2"] = to_py(sol.jump.KD2);
  return out;
}

py::dict py_check_hjbi(const std::string& ref, double tol) {
  const Scenario sc = resolve_scenario(ref);
  const Certified cd = certified_data(sc);
  const HjbiReport rep = check_hjbi(sc, cd.V, {}, tol);
  py::dict out;
  out["passed"] = rep.passed;
  out["flow_worst"] = rep.flow_worst;
  out["jump_worst"] = rep.jump_worst;
  out["isaacs_worst"] = rep.isaacs_worst;
  out["flow_points"] = rep.flow_points;
  out["jump_points"] = rep.jump_points;
  return out;
}

py::dict py_check_equivalent(const std::string& ref, double tol) {
  const Scenario sc = resolve_scenario(ref);
  const Certified cd = certified_data(sc);
  const ConditionReport rep =
      check_equivalent_conditions(sc, cd.V, cd.law, {}, 40, tol);
  py::dict out;
  out["passed"] = rep.passed;
  out["eq_flow"] = rep.eq_flow;
  out["dev_flow_min"] = rep.dev_flow_min;
  out["dev_flow_max"] = rep.dev_flow_max;
  out["eq_jump"] = rep.eq_jump;
  out["dev_jump_min"] = rep.dev_jump_min;
  out["dev_jump_max"] = rep.dev_jump_max;
  return out;
}

py::dict py_check_stability(const std::string& ref) {
  const Scenario sc = resolve_scenario(ref);
  const Certified cd = certified_data(sc);
  const TargetSet target = default_target(sc);

  const PdReport pd =
      check_pd([&](const Vec& x) { return cd.V.value(x); }, target,
               sc.grid_lo, sc.grid_hi);
  const DecreaseReport dec = check_lyapunov_decrease(sc, cd.V, cd.law);
  const SolutionPair sp =
      simulate(close_loop(sc.sys, cd.law), sc.default_x0, {});
  const ConvergenceReport conv = check_trajectory_convergence(sp, target);
  const bool run_ok =
      conv.converged || sp.status.reason == StopReason::ReachedTerminalSet;
  const BasinReport basin = estimate_basin(sc, cd.law, target);

  py::dict out;
  py::dict pd_d;
  pd_d["passed"] = pd.passed;
  pd_d["floor"] = pd.floor;
  pd_d["near_worst"] = pd.near_worst;
  out["pd"] = pd_d;
  py::dict dec_d;
  dec_d["passed"] = dec.passed;
  dec_d["worst_flow"] = dec.worst_flow;
  dec_d["worst_jump"] = dec.worst_jump;
  out["decrease"] = dec_d;
  py::dict conv_d;
  conv_d["converged"] = conv.converged;
  conv_d["final_distance"] = conv.final_distance;
  conv_d["geometric_ratio"] = conv.geometric_ratio;
  conv_d["decay_rate"] = conv.decay_rate;
  out["convergence"] = conv_d;
  py::dict basin_d;
  basin_d["tried"] = basin.tried;
  basin_d["converged"] = basin.converged;
  basin_d["fraction"] = basin.fraction;
  out["basin"] = basin_d;
  out["passed"] = pd.passed && dec.passed && run_ok;
  return out;
}

py::dict py_saddle_sweep(const std::string& ref, double eps_lo, double eps_hi,
                         int points) {
  const Scenario sc = resolve_scenario(ref);
  const Certified cd = certified_data(sc);
  std::vector<double> eps(points);
  for (int i = 0; i < points; ++i)
    eps[i] = eps_lo + (eps_hi - eps_lo) * i / (points - 1);
  const SweepResult sw = saddle_sweep(sc, cd.law, eps, eps);
  py::dict out;
  out["eps"] = to_py(Vec(sw.eps_u));
  out["J"] = to_py(sw.J);
  out["j_star"] = sw.j_star;
  out["worst_low"] = sw.worst_low;
  out["worst_high"] = sw.worst_high;
  out["saddle_ordering"] = sw.saddle_ordering;
  return out;
}

std::string py_fingerprint(const std::string& text) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

}  // namespace

PYBIND11_MODULE(_hygame, m) {
  m.doc() = "two-player zero-sum hybrid games: simulation, solvers, audits";

  m.def("scenario_names", &py_scenario_names,
        "names of the built-in scenarios");
  m.def("scenario_info", &py_scenario_info, py::arg("scenario"),
        "dimensions, boxes, and attached data of a scenario");
  m.def("simulate", &py_simulate, py::arg("scenario"),
        py::arg("x0") = py::none(), py::arg("policy") = "jump",
        py::arg("t_budget") = 20.0, py::arg("j_budget") = 500,
        py::arg("dt_max") = 1e-3, py::arg("samples") = false,
        "closed-loop run under the scenario's saddle law; policy 'both' "
        "returns a list of branch runs");
  m.def("evaluate_cost", &py_evaluate_cost, py::arg("scenario"),
        py::arg("x0") = py::none(), py::arg("policy") = "jump",
        py::arg("t_budget") = 20.0, py::arg("j_budget") = 500,
        "accumulated game cost of a closed-loop run");
  m.def("solve_periodic", &py_solve_periodic, py::arg("scenario"),
        "periodic two-point solve of the quadratic game data");
  m.def("solve_constant", &py_solve_constant, py::arg("scenario"),
        "constant stationary solve of the quadratic game data");
  m.def("solve_security", &py_solve_security, py::arg("scenario"),
        "jump-side solve plus flow orthogonality audit");
  m.def("check_hjbi", &py_check_hjbi, py::arg("scenario"),
        py::arg("tol") = 1e-7, "stationary-equation audit on the state grid");
  m.def("check_equivalent", &py_check_equivalent, py::arg("scenario"),
        py::arg("tol") = 1e-7,
        "pointwise equality and deviation-sign audit of the certified pair");
  m.def("check_stability", &py_check_stability, py::arg("scenario"),
        "positive-definiteness, decrease, convergence, and basin evidence");
  m.def("saddle_sweep", &py_saddle_sweep, py::arg("scenario"),
        py::arg("eps_lo") = 0.8, py::arg("eps_hi") = 1.2,
        py::arg("points") = 5,
        "cost matrix of scaled unilateral deviations from the law");
  m.def("fingerprint", &py_fingerprint, py::arg("text"),
        "16-hex-digit content fingerprint used in run manifests");
}
