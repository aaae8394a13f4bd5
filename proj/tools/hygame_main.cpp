// hygame: simulate, solve, and audit two-player hybrid games from the
// command line.  Exit codes: 0 success / check passed, 1 check failed,
// 2 bad usage or bad input, 3 numerical failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hygame/cost.hpp"
#include "hygame/errors.hpp"
#include "hygame/hjbi.hpp"
#include "hygame/manifest.hpp"
#include "hygame/riccati.hpp"
#include "hygame/scenarios.hpp"
#include "hygame/simulator.hpp"
#include "hygame/stability.hpp"
#include "hygame/system.hpp"

namespace hg = hygame;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerics = 3;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string vec_str(const hg::Vec& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += num(v[i]);
  }
  return out;
}

hg::Vec parse_vec(const std::string& s) {
  hg::Vec out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw hg::ParseError("not a number list: '" + s + "'");
    }
  }
  if (out.empty()) throw hg::ParseError("empty number list");
  return out;
}

json mat_json(const hg::Mat& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json r = json::array();
    for (std::size_t k = 0; k < a.cols(); ++k) r.push_back(a(i, k));
    rows.push_back(r);
  }
  return rows;
}

// Shared per-invocation settings and output plumbing.
struct Ctx {
  std::string scenario_ref;
  std::string out_dir;
  hg::Vec x0;
  std::string policy = "jump";
  double t_budget = 20.0;
  int j_budget = 500;
  double dt_max = 1e-3;
  double tol = 1e-6;
  int state_points = 11;
  unsigned seed = 7;

  std::string command;  // argv joined, for the manifest
  std::vector<std::pair<std::string, std::string>> cfg;

  void put(const std::string& k, const std::string& v) { cfg.emplace_back(k, v); }

  hg::RunManifest manifest() const {
    hg::RunManifest m;
    m.command = command;
    m.config = hg::canonical_config(cfg);
    m.timestamp = hg::utc_timestamp();
    return m;
  }

  hg::SimConfig sim_config() const {
    hg::SimConfig c;
    c.t_budget = t_budget;
    c.j_budget = j_budget;
    c.dt_max = dt_max;
    c.policy = hg::parse_jump_policy(policy);
    return c;
  }

  std::filesystem::path out_path(const std::string& name) const {
    std::filesystem::create_directories(out_dir);
    return std::filesystem::path(out_dir) / name;
  }

  void write_json(const std::string& name, json j) const {
    const hg::RunManifest m = manifest();
    j["manifest"] = {{"tool", m.tool},         {"version", m.version},
                     {"command", m.command},   {"config", m.config},
                     {"timestamp", m.timestamp}, {"hash", m.hash()}};
    std::ofstream os(out_path(name));
    os << j.dump(2) << "\n";
  }
};

void add_common(CLI::App* cmd, Ctx& ctx, bool wants_sim) {
  cmd->add_option("--scenario", ctx.scenario_ref,
                  "builtin name or scenario file")->required();
  cmd->add_option("--out-dir", ctx.out_dir, "output directory");
  if (wants_sim) {
    cmd->add_option("--x0", [&ctx](const std::vector<std::string>& v) {
      try {
        ctx.x0 = parse_vec(v.back());
      } catch (const hg::Error&) {
        return false;  // surfaces as a CLI11 conversion error
      }
      return true;
    }, "initial state, comma separated");
    cmd->add_option("--policy", ctx.policy, "jump | flow | both");
    cmd->add_option("--t-budget", ctx.t_budget, "flow-time budget");
    cmd->add_option("--j-budget", ctx.j_budget, "jump budget");
    cmd->add_option("--dt-max", ctx.dt_max, "integrator step ceiling");
  }
  cmd->add_option("--tol", ctx.tol, "check tolerance");
  cmd->add_option("--grid-points", ctx.state_points, "grid points per state dim");
  cmd->add_option("--seed", ctx.seed, "sampling seed");
}

void record_common(Ctx& ctx, bool wants_sim) {
  ctx.put("scenario", ctx.scenario_ref);
  if (wants_sim) {
    if (!ctx.x0.empty()) ctx.put("x0", vec_str(ctx.x0));
    ctx.put("policy", ctx.policy);
    ctx.put("t_budget", num(ctx.t_budget));
    ctx.put("j_budget", std::to_string(ctx.j_budget));
    ctx.put("dt_max", num(ctx.dt_max));
  }
  ctx.put("tol", num(ctx.tol));
  ctx.put("grid_points", std::to_string(ctx.state_points));
  ctx.put("seed", std::to_string(ctx.seed));
}

json pair_summary(const hg::SolutionPair& sp) {
  json j;
  j["stop"] = hg::to_string(sp.status.reason);
  j["t_end"] = sp.arc.end().t;
  j["j_end"] = sp.arc.end().j;
  if (sp.status.hit) {
    j["hit_t"] = sp.status.hit->t;
    j["hit_j"] = sp.status.hit->j;
  }
  if (!sp.branch_id.empty()) j["branch"] = sp.branch_id;
  return j;
}

// The periodic solver owns the value data for timer scenarios; everything
// else carries a closed-form certificate.  The law falls back to
// stationary-point synthesis from the certificate.
struct Certified {
  hg::ValueCertificate V;
  hg::FeedbackLaw law;
  std::optional<hg::PeriodicSolution> periodic;  // kept alive for its grid
};

Certified certified_data(const hg::Scenario& sc) {
  Certified out;
  if (sc.V && sc.law) {
    out.V = *sc.V;
    out.law = *sc.law;
    return out;
  }
  if (sc.quad && sc.quad->T1) {
    out.periodic = hg::solve_periodic(*sc.quad);
    out.V = out.periodic->V;
    out.law = out.periodic->law;
    return out;
  }
  if (sc.V) {
    out.V = *sc.V;
    out.law = hg::synthesize_feedback(sc, out.V);
    return out;
  }
  if (sc.quad) {
    const hg::ConstantSolution sol = hg::solve_constant(*sc.quad);
    out.V = hg::quadratic_certificate(sol.P);
    out.law = hg::law_from_gains(sc.sys.dims, sol.KC1, sol.KC2, sol.KD1,
                                 sol.KD2);
    return out;
  }
  throw hg::ParseError("scenario '" + sc.name +
                       "' has no value data to check against");
}

int cmd_simulate(Ctx& ctx) {
  record_common(ctx, true);
  const hg::Scenario sc = hg::resolve_scenario(ctx.scenario_ref);
  const Certified cd = certified_data(sc);
  const hg::ClosedLoopSystem cl = hg::close_loop(sc.sys, cd.law);
  const hg::Vec x0 = ctx.x0.empty() ? sc.default_x0 : ctx.x0;
  const hg::SimConfig cfg = ctx.sim_config();
  const std::string hash = ctx.manifest().hash();

  std::vector<hg::SolutionPair> runs;
  if (cfg.policy == hg::JumpPolicy::EnumerateBoth)
    runs = hg::simulate_branches(cl, x0, cfg);
  else
    runs.push_back(hg::simulate(cl, x0, cfg));

  json out;
  out["scenario"] = sc.name;
  out["x0"] = x0;
  json branches = json::array();
  for (const auto& sp : runs) {
    const std::string name =
        runs.size() == 1 ? std::string("trajectory.csv")
                         : "trajectory_" + (sp.branch_id.empty()
                                                ? std::string("root")
                                                : sp.branch_id) + ".csv";
    std::ofstream os(ctx.out_path(name));
    hg::write_trajectory_csv(os, sp, hash);
    json b = pair_summary(sp);
    b["file"] = name;
    b["cost"] = hg::evaluate_cost(sp, sc.costs).total;
    branches.push_back(b);
    std::cout << sc.name << ": " << hg::to_string(sp.status.reason) << " at t="
              << b["t_end"].get<double>() << " j=" << b["j_end"].get<int>()
              << " cost=" << b["cost"].get<double>()
              << (sp.branch_id.empty() ? "" : " branch=" + sp.branch_id)
              << "\n";
  }
  out["runs"] = branches;
  ctx.write_json("simulate.json", out);
  return kExitOk;
}

int cmd_evaluate_cost(Ctx& ctx) {
  record_common(ctx, true);
  const hg::Scenario sc = hg::resolve_scenario(ctx.scenario_ref);
  const Certified cd = certified_data(sc);
  const hg::ClosedLoopSystem cl = hg::close_loop(sc.sys, cd.law);
  const hg::Vec x0 = ctx.x0.empty() ? sc.default_x0 : ctx.x0;
  const hg::SolutionPair sp = hg::simulate(cl, x0, ctx.sim_config());
  const hg::CostReport rep = hg::evaluate_cost(sp, sc.costs);

  json out;
  out["scenario"] = sc.name;
  out["x0"] = x0;
  out["run"] = pair_summary(sp);
  out["flow_cost"] = rep.flow_cost;
  out["jump_cost"] = rep.jump_cost;
  out["terminal_cost"] = rep.terminal_cost;
  out["total"] = rep.total;
  if (rep.tail_bound) out["tail_bound"] = *rep.tail_bound;
  out["tail_variation"] = rep.tail_variation;
  out["terminal_converged"] = rep.terminal_converged;
  ctx.write_json("cost.json", out);
  std::cout << sc.name << ": total=" << num(rep.total)
            << " (flow=" << num(rep.flow_cost) << " jump=" << num(rep.jump_cost)
            << " terminal=" << num(rep.terminal_cost) << ")\n";
  return kExitOk;
}

int cmd_solve_riccati(Ctx& ctx) {
  record_common(ctx, false);
  const hg::Scenario sc = hg::resolve_scenario(ctx.scenario_ref);
  if (!sc.quad || !sc.quad->T1)
    throw hg::ParseError("scenario '" + sc.name +
                         "' has no periodic quadratic data");
  const hg::PeriodicSolution sol = hg::solve_periodic(*sc.quad);
  json out;
  out["scenario"] = sc.name;
  out["P0"] = mat_json(sol.P0);
  out["PT"] = mat_json(sol.PT);
  out["iterations"] = sol.iterations;
  out["residual"] = sol.residual;
  ctx.write_json("riccati.json", out);
  std::cout << sc.name << ": P0=" << num(sol.P0(0, 0)) << " PT="
            << num(sol.PT(0, 0)) << " iterations=" << sol.iterations
            << " residual=" << num(sol.residual) << "\n";
  return kExitOk;
}

int cmd_solve_robust(Ctx& ctx) {
  record_common(ctx, false);
  const hg::Scenario sc = hg::resolve_scenario(ctx.scenario_ref);
  if (!sc.quad)
    throw hg::ParseError("scenario '" + sc.name + "' has no quadratic data");
  const hg::ConstantSolution sol = hg::solve_constant(*sc.quad);
  json out;
  out["scenario"] = sc.name;
  out["P"] = mat_json(sol.P);
  out["flow_residual"] = sol.flow_residual;
  out["jump_residual"] = sol.jump_residual;
  out["iterations"] = sol.iterations;
  out["KC1"] = mat_json(sol.KC1);
  out["KC2"] = mat_json(sol.KC2);
  out["KD1"] = mat_json(sol.KD1);
  out["KD2"] = mat_json(sol.KD2);
  ctx.write_json("robust.json", out);
  std::cout << sc.name << ": P=" << num(sol.P(0, 0))
            << " flow_residual=" << num(sol.flow_residual)
            << " jump_residual=" << num(sol.jump_residual)
            << " iterations=" << sol.iterations << "\n";
  return kExitOk;
}

int cmd_solve_security(Ctx& ctx) {
  record_common(ctx, false);
  const hg::Scenario sc = hg::resolve_scenario(ctx.scenario_ref);
  if (!sc.quad)
    throw hg::ParseError("scenario '" + sc.name + "' has no quadratic data");
  const hg::SecuritySolution sol = hg::solve_security(
      *sc.quad, sc.sys, sc.grid_lo, sc.grid_hi, 10000, ctx.seed);
  json out;
  out["scenario"] = sc.name;
  out["P"] = mat_json(sol.jump.P);
  out["jump_residual"] = sol.jump.jump_residual;
  out["iterations"] = sol.jump.iterations;
  out["flow_orthogonality"] = sol.flow_orthogonality;
  out["samples"] = sol.samples;
  out["KD1"] = mat_json(sol.jump.KD1);
  out["KD2"] = mat_json(sol.jump.KD2);
  ctx.write_json("security.json", out);
  std::cout << sc.name << ": P(0,0)=" << num(sol.jump.P(0, 0))
            << " jump_residual=" << num(sol.jump.jump_residual)
            << " flow_orthogonality=" << num(sol.flow_orthogonality) << "\n";
  return kExitOk;
}

int cmd_check_hjbi(Ctx& ctx) {
  record_common(ctx, false);
  const hg::Scenario sc = hg::resolve_scenario(ctx.scenario_ref);
  const Certified cd = certified_data(sc);
  hg::GridSpec grid;
  grid.state_points = ctx.state_points;
  const hg::HjbiReport rep = hg::check_hjbi(sc, cd.V, grid, ctx.tol);
  json out;
  out["scenario"] = sc.name;
  out["flow_worst"] = rep.flow_worst;
  out["jump_worst"] = rep.jump_worst;
  out["isaacs_worst"] = rep.isaacs_worst;
  out["flow_points"] = rep.flow_points;
  out["jump_points"] = rep.jump_points;
  out["passed"] = rep.passed;
  ctx.write_json("check_hjbi.json", out);
  std::cout << sc.name << ": flow_worst=" << num(rep.flow_worst)
            << " jump_worst=" << num(rep.jump_worst)
            << " isaacs_worst=" << num(rep.isaacs_worst) << " -> "
            << (rep.passed ? "pass" : "FAIL") << "\n";
  return rep.passed ? kExitOk : kExitCheckFailed;
}

int cmd_check_equivalent(Ctx& ctx) {
  record_common(ctx, false);
  const hg::Scenario sc = hg::resolve_scenario(ctx.scenario_ref);
  const Certified cd = certified_data(sc);
  hg::GridSpec grid;
  grid.state_points = ctx.state_points;
  const hg::ConditionReport rep = hg::check_equivalent_conditions(
      sc, cd.V, cd.law, grid, 40, ctx.tol, ctx.seed);
  json out;
  out["scenario"] = sc.name;
  out["eq_flow"] = rep.eq_flow;
  out["dev_flow_min"] = rep.dev_flow_min;
  out["dev_flow_max"] = rep.dev_flow_max;
  out["eq_jump"] = rep.eq_jump;
  out["dev_jump_min"] = rep.dev_jump_min;
  out["dev_jump_max"] = rep.dev_jump_max;
  out["flow_points"] = rep.flow_points;
  out["jump_points"] = rep.jump_points;
  out["passed"] = rep.passed;
  ctx.write_json("check_equivalent.json", out);
  std::cout << sc.name << ": eq_flow=" << num(rep.eq_flow)
            << " eq_jump=" << num(rep.eq_jump)
            << " dev=[" << num(rep.dev_flow_min) << "," << num(rep.dev_flow_max)
            << "," << num(rep.dev_jump_min) << "," << num(rep.dev_jump_max)
            << "] -> " << (rep.passed ? "pass" : "FAIL") << "\n";
  return rep.passed ? kExitOk : kExitCheckFailed;
}

int cmd_check_stability(Ctx& ctx) {
  record_common(ctx, true);
  const hg::Scenario sc = hg::resolve_scenario(ctx.scenario_ref);
  const Certified cd = certified_data(sc);
  const hg::TargetSet target = hg::default_target(sc);

  const hg::PdReport pd = hg::check_pd(
      [&](const hg::Vec& x) { return cd.V.value(x); }, target, sc.grid_lo,
      sc.grid_hi, 4000, 24, ctx.seed);
  const hg::DecreaseReport dec =
      hg::check_lyapunov_decrease(sc, cd.V, cd.law, ctx.state_points, ctx.tol);

  const hg::ClosedLoopSystem cl = hg::close_loop(sc.sys, cd.law);
  const hg::Vec x0 = ctx.x0.empty() ? sc.default_x0 : ctx.x0;
  const hg::SolutionPair sp = hg::simulate(cl, x0, ctx.sim_config());
  const hg::ConvergenceReport conv =
      hg::check_trajectory_convergence(sp, target);
  const bool run_ok =
      conv.converged || sp.status.reason == hg::StopReason::ReachedTerminalSet;

  const hg::BasinReport basin =
      hg::estimate_basin(sc, cd.law, target, 5, ctx.sim_config());

  const bool passed = pd.passed && dec.passed && run_ok;
  json out;
  out["scenario"] = sc.name;
  out["pd"] = {{"passed", pd.passed},
               {"floor", pd.floor},
               {"near_worst", pd.near_worst},
               {"samples", pd.samples}};
  out["decrease"] = {{"passed", dec.passed},
                     {"worst_flow", dec.worst_flow},
                     {"worst_jump", dec.worst_jump},
                     {"flow_points", dec.flow_points},
                     {"jump_points", dec.jump_points}};
  out["convergence"] = {{"final_distance", conv.final_distance},
                        {"geometric_ratio", conv.geometric_ratio},
                        {"decay_rate", conv.decay_rate},
                        {"converged", conv.converged},
                        {"run", pair_summary(sp)}};
  out["basin"] = {{"tried", basin.tried},
                  {"converged", basin.converged},
                  {"fraction", basin.fraction}};
  out["passed"] = passed;
  ctx.write_json("check_stability.json", out);
  std::cout << sc.name << ": pd=" << (pd.passed ? "pass" : "FAIL")
            << " decrease=" << (dec.passed ? "pass" : "FAIL")
            << " convergence=" << (run_ok ? "pass" : "FAIL")
            << " basin=" << basin.converged << "/" << basin.tried << " -> "
            << (passed ? "pass" : "FAIL") << "\n";
  return passed ? kExitOk : kExitCheckFailed;
}

int cmd_sweep_saddle(Ctx& ctx, double lo, double hi, int points) {
  record_common(ctx, true);
  ctx.put("eps_lo", num(lo));
  ctx.put("eps_hi", num(hi));
  ctx.put("eps_points", std::to_string(points));
  if (points < 2 || hi <= lo)
    throw hg::ParseError("sweep needs at least two scale points, lo < hi");
  const hg::Scenario sc = hg::resolve_scenario(ctx.scenario_ref);
  const Certified cd = certified_data(sc);
  std::vector<double> eps(points);
  for (int i = 0; i < points; ++i)
    eps[i] = lo + (hi - lo) * i / (points - 1);
  const hg::SweepResult sw =
      hg::saddle_sweep(sc, cd.law, eps, eps, ctx.sim_config());

  std::ofstream os(ctx.out_path("sweep.csv"));
  os << "eps_u";
  for (double w : eps) os << "," << num(w);
  os << "\n";
  for (std::size_t i = 0; i < eps.size(); ++i) {
    os << num(eps[i]);
    for (std::size_t k = 0; k < eps.size(); ++k) os << "," << num(sw.J(i, k));
    os << "\n";
  }

  json out;
  out["scenario"] = sc.name;
  out["eps"] = eps;
  out["j_star"] = sw.j_star;
  out["worst_low"] = sw.worst_low;
  out["worst_high"] = sw.worst_high;
  out["saddle_ordering"] = sw.saddle_ordering;
  ctx.write_json("sweep.json", out);
  std::cout << sc.name << ": J*=" << num(sw.j_star)
            << " worst_low=" << num(sw.worst_low)
            << " worst_high=" << num(sw.worst_high) << " -> "
            << (sw.saddle_ordering ? "pass" : "FAIL") << "\n";
  return sw.saddle_ordering ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-player zero-sum hybrid games: simulate, solve, audit"};
  app.require_subcommand(1);

  Ctx ctx;
  if (const char* env = std::getenv("HYGAME_OUT")) ctx.out_dir = env;
  if (ctx.out_dir.empty()) ctx.out_dir = ".";
  ctx.command = hg::join_command(argc, argv);

  int (*action)(Ctx&) = nullptr;
  double sweep_lo = 0.7, sweep_hi = 1.3;
  int sweep_points = 11;
  bool sweep_mode = false;

  CLI::App* simulate = app.add_subcommand("simulate", "integrate a closed loop");
  add_common(simulate, ctx, true);
  simulate->callback([&] { action = cmd_simulate; });

  CLI::App* cost = app.add_subcommand("evaluate-cost",
                                      "accumulated cost of one run");
  add_common(cost, ctx, true);
  cost->callback([&] { action = cmd_evaluate_cost; });

  CLI::App* solve = app.add_subcommand("solve", "stationary value data");
  solve->require_subcommand(1);
  CLI::App* riccati = solve->add_subcommand(
      "riccati", "periodic flow/jump quadratic recursion");
  add_common(riccati, ctx, false);
  riccati->callback([&] { action = cmd_solve_riccati; });
  CLI::App* robust = solve->add_subcommand(
      "robust", "constant quadratic value, flow and/or jump equations");
  add_common(robust, ctx, false);
  robust->callback([&] { action = cmd_solve_robust; });
  CLI::App* security = solve->add_subcommand(
      "security", "jump equation plus costless-flow audit");
  add_common(security, ctx, false);
  security->callback([&] { action = cmd_solve_security; });

  CLI::App* check = app.add_subcommand("check", "audit value data");
  check->require_subcommand(1);
  CLI::App* hjbi = check->add_subcommand(
      "hjbi", "pointwise min-max stationarity of the value");
  add_common(hjbi, ctx, false);
  hjbi->callback([&] { action = cmd_check_hjbi; });
  CLI::App* equiv = check->add_subcommand(
      "equivalent", "at-law equalities and one-sided deviations");
  add_common(equiv, ctx, false);
  equiv->callback([&] { action = cmd_check_equivalent; });
  CLI::App* stab = check->add_subcommand(
      "stability", "positive definiteness, decrease, convergence");
  add_common(stab, ctx, true);
  stab->callback([&] { action = cmd_check_stability; });

  CLI::App* sweep = app.add_subcommand("sweep", "deviation grids");
  sweep->require_subcommand(1);
  CLI::App* saddle = sweep->add_subcommand(
      "saddle", "cost of scaled unilateral deviations from the law");
  add_common(saddle, ctx, true);
  saddle->add_option("--eps-lo", sweep_lo, "smallest gain scale");
  saddle->add_option("--eps-hi", sweep_hi, "largest gain scale");
  saddle->add_option("--eps-points", sweep_points, "scales per player");
  saddle->callback([&] { sweep_mode = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sweep_mode) return cmd_sweep_saddle(ctx, sweep_lo, sweep_hi, sweep_points);
    if (!action) return kExitUsage;
    return action(ctx);
  } catch (const hg::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hg::UnknownScenario& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hg::InvalidInitialState& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hg::InfeasibleInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hg::OutOfDomain& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hg::EmptyDomain& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hg::NoInputBox& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hg::ResidualTooLarge& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const hg::CertificateViolated& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const hg::Error& e) {
    // Remaining taxonomy: numerical failures.
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerics;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitNumerics;
  }
}
