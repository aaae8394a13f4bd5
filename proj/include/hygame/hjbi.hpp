#pragma once

#include <vector>

#include "hygame/cost.hpp"
#include "hygame/scenarios.hpp"
#include "hygame/simulator.hpp"
#include "hygame/system.hpp"

namespace hygame {

// Sampling layout for state-space checks and for grid min-max fallbacks.
struct GridSpec {
  int state_points = 11;   // per state dimension
  int input_points = 9;    // per input dimension
  int refine_rounds = 3;   // nested shrink-and-research rounds
};

// Outcome of one pointwise two-player optimization.  When the problem has
// affine maps and quadratic stage data the saddle is computed in closed form
// and the gap is evaluated by playing each player's closed-form best response
// against the other's optimizer; otherwise nested grid search is used and
// the gap reflects the grid resolution.
struct MinMaxResult {
  double value = 0.0;      // min over u1 of max over u2
  Vec u1, u2;              // optimizers at the saddle candidate
  double isaacs_gap = 0.0; // |min-max minus max-min|
  bool analytic = false;
};

// Flow-side optimization at x: L_C(x,u) + <grad V(x), f(x,u)>.
MinMaxResult hamiltonian_minmax(const GameSystem& sys, const StageCosts& costs,
                                const ValueCertificate& V, const Vec& x,
                                const Vec& u_lo, const Vec& u_hi,
                                const GridSpec& grid = {});

// Jump-side optimization at x: L_D(x,u) + V(g(x,u)).
MinMaxResult jump_minmax(const GameSystem& sys, const StageCosts& costs,
                         const ValueCertificate& V, const Vec& x,
                         const Vec& u_lo, const Vec& u_hi,
                         const GridSpec& grid = {});

// Stationarity audit of a candidate value function over the scenario's
// sampling box: the flow optimization should return zero on the flow set and
// the jump optimization should return V(x) on the jump set.
struct HjbiReport {
  double flow_worst = 0.0;    // max |flow equation residual|
  double jump_worst = 0.0;    // max |jump equation residual|
  double isaacs_worst = 0.0;  // max gap seen on either side
  int flow_points = 0, jump_points = 0;
  Vec flow_argworst, jump_argworst;
  bool passed = false;
};
HjbiReport check_hjbi(const Scenario& sc, const ValueCertificate& V,
                      const GridSpec& grid = {}, double tol = 1e-7);

// Closed-form stationary-point feedback from a candidate value function:
// flow channels from the gradient, jump channels from the quadratic data at
// the unforced jump target.  Needs affine maps and quadratic stage costs on
// the sides that have inputs.
FeedbackLaw synthesize_feedback(const Scenario& sc, const ValueCertificate& V);

// Pointwise play audit of a (V, law) pair.  Equalities hold at the law;
// unilateral deviations move the expression the right way:
//   flow:  at-law value == 0; player-1 deviations >= 0; player-2 <= 0
//   jump:  at-law value == V(x); deviations likewise
struct ConditionReport {
  double eq_flow = 0.0;       // worst |at-law flow value|
  double dev_flow_min = 0.0;  // most negative player-1 deviation value
  double dev_flow_max = 0.0;  // most positive player-2 deviation value
  double eq_jump = 0.0;
  double dev_jump_min = 0.0;
  double dev_jump_max = 0.0;
  int flow_points = 0, jump_points = 0;
  bool passed = false;
};
ConditionReport check_equivalent_conditions(const Scenario& sc,
                                            const ValueCertificate& V,
                                            const FeedbackLaw& law,
                                            const GridSpec& grid = {},
                                            int deviations = 40,
                                            double tol = 1e-7,
                                            unsigned seed = 11u);

// Cost matrix of scaled unilateral deviations from a law: entry (i, k) plays
// eps_u[i] times player 1's component against eps_w[k] times player 2's.
// Ordering holds when every (1, eps_w) cost stays below the (1,1) cost and
// every (eps_u, 1) cost stays above it, within rel_slack.
struct SweepResult {
  std::vector<double> eps_u, eps_w;
  Mat J;
  double j_star = 0.0;
  double worst_low = 0.0;   // max of J(1, w) - J*  (should be <= slack)
  double worst_high = 0.0;  // max of J* - J(u, 1)  (should be <= slack)
  bool saddle_ordering = false;
};
SweepResult saddle_sweep(const Scenario& sc, const FeedbackLaw& law,
                         const std::vector<double>& eps_u,
                         const std::vector<double>& eps_w,
                         const SimConfig& cfg = {}, double rel_slack = 1e-6);

}  // namespace hygame
