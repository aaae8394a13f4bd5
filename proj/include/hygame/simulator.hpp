#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hygame/system.hpp"

namespace hygame {

// What to do at a state where a jump is enabled and flowing is also possible.
// JumpPriority takes the jump; FlowPriority keeps flowing (jumping only when
// flow becomes inadmissible); EnumerateBoth explores both continuations.
enum class JumpPolicy { JumpPriority, FlowPriority, EnumerateBoth };

const char* to_string(JumpPolicy p);
JumpPolicy parse_jump_policy(const std::string& s);  // throws ParseError

struct SimConfig {
  double t_budget = 20.0;        // flow-time budget
  int j_budget = 500;            // jump budget
  double dt_max = 1e-3;          // integrator step ceiling
  double event_tol = 1e-9;       // time resolution of event localization
  double min_flow_interval = 1e-7;  // flights shorter than this count as Zeno
  JumpPolicy policy = JumpPolicy::JumpPriority;
  int max_branches = 8;          // EnumerateBoth leaf budget
};

// One classic fourth-order step of xdot = rhs(t, x).
Vec rk4_step(const std::function<Vec(double, const Vec&)>& rhs, double t,
             const Vec& x, double h);

// Closed-loop play from x0.  Flow accumulates fixed RK4 steps; watched set
// margins (flow-set exit, jump-set entry, terminal-set entry) are localized
// by bisecting the step that crosses them.  A jump is forced whenever a trial
// step would leave the flow set, regardless of policy; when both flowing and
// jumping are admissible the policy decides.  Play stops at the first
// terminal-set hit, at either budget, when neither flowing nor jumping is
// possible, or when consecutive positive flights shorter than
// min_flow_interval indicate an accumulation point (zero-length jump chains
// are ordinary discrete steps and only consume the jump budget).
//
// Under EnumerateBoth this returns the first branch in branch-id order.
SolutionPair simulate(const ClosedLoopSystem& cl, const Vec& x0,
                      const SimConfig& cfg = {});

// All continuations under EnumerateBoth, sorted by branch id ('0' = jumped,
// '1' = flowed, one character per decision).  Throws BranchLimitExceeded if
// the leaf count would pass cfg.max_branches.  Under the other two policies
// returns the single trajectory.
std::vector<SolutionPair> simulate_branches(const ClosedLoopSystem& cl,
                                            const Vec& x0,
                                            const SimConfig& cfg = {});

// Replay a recorded input signal against the system: flow over the signal's
// own intervals (inputs interpolated), jump with the stored u_D at each
// interval end.  Throws InfeasibleInput when the state leaves the flow set
// mid-interval or a commanded jump point is not in the jump set.  Stops early
// on a terminal-set hit or the budgets; otherwise runs the signal to its end.
SolutionPair simulate_open_loop(const GameSystem& sys, const Vec& x0,
                                const HybridInputSignal& input,
                                const SimConfig& cfg = {});

}  // namespace hygame
