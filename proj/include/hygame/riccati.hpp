#pragma once

#include <vector>

#include "hygame/cost.hpp"
#include "hygame/system.hpp"

namespace hygame {

// P(tau) sampled on ascending knots with the ODE slope stored at each knot;
// eval/deriv are the C1 cubic Hermite interpolants built from both.  Queries
// outside [tau.front(), tau.back()] clamp to the ends.
struct TauGrid {
  std::vector<double> tau;
  std::vector<Mat> P;
  std::vector<Mat> dP;

  Mat eval(double t) const;
  Mat deriv(double t) const;
};

struct RiccatiOptions {
  int knots = 2000;        // interpolation knots on [0, T]
  double damping = 0.5;    // fixed-point relaxation factor
  double tol = 1e-10;      // fixed-point / root tolerances
  int max_iter = 500;
  int warm_iters = 100;    // discrete-update iterations for the initial guess
};

// S = BC1 RC1^-1 BC1' + BC2 RC2^-1 BC2' (RC2 enters with its stored sign).
Mat flow_quadratic_term(const QuadraticGameSpec& spec);

// Residual of the stationary flow equation QC + P AC + AC'P - P S P at a
// constant P.
Mat care_residual(const QuadraticGameSpec& spec, const Mat& P);

// One discrete value-recursion step
//   QD + AD'P AD - [AD'P BD1  AD'P BD2] Rv^-1 [BD1'P AD; BD2'P AD]
// with Rv the 2x2 block matrix of RDi + BDi'P BDj couplings.  Throws
// DefinitenessViolated unless RD1 + BD1'P BD1 >= 0 and RD2 + BD2'P BD2 <= 0,
// and SingularRv when the coupling block cannot be inverted.
Mat jump_update(const QuadraticGameSpec& spec, const Mat& P);

// jump_update(P) - P.
Mat dare_residual(const QuadraticGameSpec& spec, const Mat& P);

// Saddle gains of the flow stage at constant P: u_i = KCi x with
// KCi = -RCi^-1 BCi' P.
void flow_gains(const QuadraticGameSpec& spec, const Mat& P, Mat& KC1,
                Mat& KC2);

// Saddle gains of the jump stage against post-jump quadratic data P:
// [u1; u2] = -Rv^-1 [BD1'P AD; BD2'P AD] x, split per player.
void jump_gains(const QuadraticGameSpec& spec, const Mat& P, Mat& KD1,
                Mat& KD2);

// Backward integration of dP/dtau = P S P - QC - P AC - AC'P from
// P(tau_max) = PT down to tau = 0 on a uniform grid.
TauGrid integrate_riccati_ode(const QuadraticGameSpec& spec, const Mat& PT,
                              double tau_max, int knots);

// Periodic solution for a timer game with T1 == T2 == T: the fixed point of
// P(0) -> backward flow from P(T) = jump_update(P(0)).  Solved by damped
// fixed-point iteration.  The returned law and certificate act on the timer
// state (x_p, tau).
struct PeriodicSolution {
  TauGrid grid;
  Mat P0, PT;
  int iterations = 0;
  double residual = 0.0;  // fixed-point gap at exit
  FeedbackLaw law;
  ValueCertificate V;
};
PeriodicSolution solve_periodic(const QuadraticGameSpec& spec,
                                const RiccatiOptions& opt = {});

// Constant P solving whichever stationary equations the spec carries (flow,
// jump, or both simultaneously) by Gauss-Newton on the stacked symmetric
// residual.  Throws InconsistentEquations when the iteration stalls with a
// residual above opt.tol scale — the two equations then have no common
// constant solution.
struct ConstantSolution {
  Mat P;
  double flow_residual = 0.0;  // max-abs entries at exit
  double jump_residual = 0.0;
  int iterations = 0;
  Mat KC1, KC2, KD1, KD2;  // gains for the sides present (0x0 otherwise)
};
ConstantSolution solve_constant(const QuadraticGameSpec& spec,
                                const RiccatiOptions& opt = {});
ConstantSolution solve_constant(const QuadraticGameSpec& spec, const Mat& P0,
                                const RiccatiOptions& opt);

// Jump-equation solve plus a flow-compatibility audit for games whose flow
// is costless: checks 2 x'P f(x) = 0 (value constant along flow) at random
// states in the box.  Throws FlowConditionViolated when the flow bends the
// value by more than opt.tol * scale.
struct SecuritySolution {
  ConstantSolution jump;
  double flow_orthogonality = 0.0;  // worst |<grad V, f>| over the samples
  int samples = 0;
};
SecuritySolution solve_security(const QuadraticGameSpec& spec,
                                const GameSystem& sys, const Vec& box_lo,
                                const Vec& box_hi, int samples = 10000,
                                unsigned seed = 7u,
                                const RiccatiOptions& opt = {});

// Certificate x'Px (+ timer handling is solve_periodic's job; this is the
// constant case).
ValueCertificate quadratic_certificate(const Mat& P);

// Feedback law from constant-P gains, sized for the given dims/state.
FeedbackLaw law_from_gains(const InputDims& dims, const Mat& KC1,
                           const Mat& KC2, const Mat& KD1, const Mat& KD2);

}  // namespace hygame
