#pragma once

#include <functional>
#include <vector>

#include "hygame/cost.hpp"
#include "hygame/scenarios.hpp"
#include "hygame/simulator.hpp"

namespace hygame {

// Compact attractor described by a distance function: zero on the set,
// positive and continuous off it.
struct TargetSet {
  std::function<double(const Vec&)> distance;
};

TargetSet point_target(Vec center);
// Distance to a closed ball: max(0, |x - center| - radius).
TargetSet ball_target(Vec center, double radius);
// Distance measured on a subset of coordinates (clock states get excluded
// this way for timer systems).
TargetSet coord_target(Vec center, std::vector<std::size_t> coords);
// Origin of the non-clock coordinates when the system carries a timer,
// otherwise the plain origin.
TargetSet default_target(const Scenario& sc);

// Positive-definiteness probe by distance shells.  Random samples in the box
// are binned by distance to the target; the lower envelope is the running
// minimum of bin minima taken from the outermost shell inward (largest
// nondecreasing minorant), the upper envelope the running maximum of bin
// maxima from the innermost shell outward.  The function passes when it is
// nowhere visibly negative and every off-target shell has a positive floor.
struct PdReport {
  std::vector<double> shell_radius;  // right edge of each shell
  std::vector<double> lower, upper;  // envelopes; NaN for empty shells
  double floor = 0.0;                // min sampled value overall
  double near_worst = 0.0;           // max |value| in the innermost shell
  int samples = 0;
  bool passed = false;
};
PdReport check_pd(const std::function<double(const Vec&)>& value,
                  const TargetSet& target, const Vec& box_lo,
                  const Vec& box_hi, int samples = 4000, int shells = 24,
                  unsigned seed = 5u, double tol = 1e-9);

// Decrease audit of a value function against a law: along flows the stage
// cost plus the directional derivative should not be positive, across jumps
// the stage cost plus the value change should not be positive.  Both are
// zero at a saddle certificate, so passing means the value falls by at least
// the accumulated cost.
struct DecreaseReport {
  double worst_flow = 0.0;  // max of L_C + <grad V, f> at the law over C
  double worst_jump = 0.0;  // max of L_D + V(g) - V at the law over D
  Vec arg_flow, arg_jump;
  int flow_points = 0, jump_points = 0;
  bool passed = false;
};
DecreaseReport check_lyapunov_decrease(const Scenario& sc,
                                       const ValueCertificate& V,
                                       const FeedbackLaw& law,
                                       int state_points = 11,
                                       double tol = 1e-7);

// Convergence evidence extracted from one solution: distances to the target
// at interval ends, the median ratio of consecutive pre-jump distances, and
// a least-squares decay exponent of log-distance against elapsed t + j.
struct ConvergenceReport {
  std::vector<double> pre_jump_distance;
  double geometric_ratio = 1.0;  // median ratio; 1 when fewer than 2 jumps
  double decay_rate = 0.0;       // fitted d/d(t+j) of log distance
  double final_distance = 0.0;
  bool converged = false;
};
ConvergenceReport check_trajectory_convergence(const SolutionPair& sp,
                                               const TargetSet& target,
                                               double ratio_tol = 0.999,
                                               double dist_tol = 1e-6);

// Smallest offset M that dominates the chosen rates over a realized time
// domain: lambda_c * t + lambda_d * j <= M - gamma * (t + j) at every
// interval endpoint.  Negative rates with a positive margin gamma certify a
// uniform (t, j) budget for the decay they encode.
struct DwellReport {
  double M = 0.0;
  double lambda_c = 0.0, lambda_d = 0.0, gamma = 0.0;
};
DwellReport dwell_certificate(const HybridTimeDomain& dom, double lambda_c,
                              double lambda_d, double gamma);

// Grid sweep of initial conditions: simulate each start in the scenario box
// and count the runs that end on the terminal set or pass the convergence
// probe.  Starts the closed loop rejects are skipped, not counted.
struct BasinReport {
  int tried = 0;
  int converged = 0;
  double fraction = 0.0;
  std::vector<Vec> failures;  // capped at 32 entries
};
BasinReport estimate_basin(const Scenario& sc, const FeedbackLaw& law,
                           const TargetSet& target, int per_dim = 5,
                           const SimConfig& cfg = {}, double dist_tol = 1e-3);

}  // namespace hygame
