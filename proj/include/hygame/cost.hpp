#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hygame/domain.hpp"
#include "hygame/system.hpp"

namespace hygame {

// Quadratic stage-cost data, kept separately from the callables so the
// closed-form play in the HJ layer can read the R blocks.  Matrices act on
// the full state (timer coordinate rows/cols zeroed when present).
struct QuadFlowCost {
  Mat QC, RC1, RC2;
};
struct QuadJumpCost {
  Mat QD, RD1, RD2;
};

struct StageCosts {
  std::function<double(const Vec&, const Vec&)> LC;  // (x, u_C)
  std::function<double(const Vec&, const Vec&)> LD;  // (x, u_D)
  std::function<double(const Vec&)> q;               // terminal
  std::optional<QuadFlowCost> flow_quad;
  std::optional<QuadJumpCost> jump_quad;
};

// y' P y + c' y + d — local quadratic data of a value function on the affine
// slice through a base point (exact everywhere for the builtin certificates).
struct QuadForm {
  Mat P;
  Vec c;
  double d = 0.0;
  double eval(const Vec& y) const { return quad_form(P, y) + dot(c, y) + d; }
};

// A candidate value function with its gradient.  quad_at, when set, returns
// the quadratic data valid on the slice through the queried point; the HJ
// layer uses it for closed-form stationary points.
struct ValueCertificate {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  std::function<QuadForm(const Vec&)> quad_at;
  bool has_quad() const { return static_cast<bool>(quad_at); }
};

// Gradient vs central finite differences of value at random points in a box;
// returns the worst relative error.  step_scale multiplies the per-coordinate
// box width to form the FD step.
double certificate_gradient_check(const ValueCertificate& v, const Vec& lo,
                                  const Vec& hi, int points = 100,
                                  double step_scale = 1e-5,
                                  unsigned seed = 2024u);

struct IntervalCost {
  int j = 0;
  double flow = 0.0;  // integral of L_C over interval j
  double jump = 0.0;  // L_D charged at the end of interval j (0 for the last)
};

struct CostReport {
  double flow_cost = 0.0;
  double jump_cost = 0.0;
  double terminal_cost = 0.0;
  double total = 0.0;
  // Geometric-series bound on the dropped tail of a Zeno-truncated pair,
  // when the trailing jump costs exhibit a stable ratio < 1.
  std::optional<double> tail_bound;
  std::vector<IntervalCost> per_interval;
  // Variation of q over the last tenth of the samples; small values indicate
  // the terminal limit has settled.
  double tail_variation = 0.0;
  bool terminal_converged = false;
};

// Composite Simpson over the stored samples (no resampling), plus the jump
// sum and q at the final state.  Throws EmptyDomain for an empty pair.
CostReport evaluate_cost(const SolutionPair& sp, const StageCosts& costs);

enum class CertSense { UpperBound, LowerBound, Exact };

struct CertCheck {
  bool passed = true;
  double worst = 0.0;        // most violating residual (signed)
  HybridTime where{0.0, 0};  // sample at which it occurred
  int samples = 0;
};

// Flow residual r = L_C(x, u_C) + <grad V(x), F(x, u_C)> at every stored flow
// sample.  Sense: UpperBound requires r <= tol, LowerBound r >= -tol, Exact
// |r| <= tol.
CertCheck check_flow_certificate(const SolutionPair& sp, const GameSystem& sys,
                                 const StageCosts& costs,
                                 const ValueCertificate& v, CertSense sense,
                                 double tol);

// Jump residual r_j = L_D(x, u_D) + V(x_plus) - V(x) at every jump.
CertCheck check_jump_certificate(const SolutionPair& sp, const GameSystem& sys,
                                 const StageCosts& costs,
                                 const ValueCertificate& v, CertSense sense,
                                 double tol);

struct TelescopeResult {
  double partial_plus_final = 0.0;  // flow + jump cost, plus V at the end
  double v_start = 0.0;
  double gap = 0.0;  // partial_plus_final - v_start
  bool passed = false;
};

// Accumulated cost of the (possibly truncated) pair plus V at its final
// state, compared against V at the start per the sense.  Runs the two
// certificate checks first and throws CertificateViolated if either fails.
TelescopeResult telescoped_bound(const SolutionPair& sp, const GameSystem& sys,
                                 const StageCosts& costs,
                                 const ValueCertificate& v, CertSense sense,
                                 double tol);

}  // namespace hygame
