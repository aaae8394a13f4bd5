#pragma once

// Hand-derived reference values for the test suite, computed through scalar
// routes that avoid the library's linear algebra and integrators entirely.
// The decimal literals were frozen from an independent scalar computation
// before the solvers existed; the formulas regenerate them at test time so
// any drift in either side trips an assertion.

#include <cmath>

namespace oracle {

// ---- robust_1d_nonunique ---------------------------------------------------
// Plant xdot = -x + u1 + u2, weights qc = 1, rc1 = 1.304, rc2 = -4.
// Stationary quadratic value p x^2 solves k p^2 - 2 a p - qc = 0 with
// k = 1/rc1 + 1/rc2; p is the positive root, and the closed-loop flow rate
// is a - p k.

inline constexpr double kRobustP = 0.44810632210079826;
inline constexpr double kRobustRate = -1.2316132370367623;

inline double robust_channel_sum() { return 1.0 / 1.304 - 0.25; }

inline double robust_p(bool positive_root = true) {
  const double k = robust_channel_sum();
  const double root = std::sqrt(1.0 + k);
  return (positive_root ? -1.0 + root : -1.0 - root) / k;
}

inline double robust_rate() { return -1.0 - robust_p() * robust_channel_sum(); }

// Value of the game started at x0 (flow certificate telescopes exactly).
inline double robust_cost_from(double x0) { return robust_p() * x0 * x0; }

// Flow time for the closed loop to decay from x0 to x1 (pure exponential).
inline double robust_flow_time(double x0, double x1) {
  return std::log(x0 / x1) / -robust_rate();
}

// ---- lq_periodic_1d --------------------------------------------------------
// Scalar plant with a unit-period clock: flow a = 1.8, s = 1/1.304 - 1/4,
// q = 0.1; jump ad = 2, qd = 1, rd1 = 1.304, rd2 = -8.  The periodic value
// weight p(0) is the fixed point of (backward flow over one period) composed
// with the jump recursion.

inline constexpr double kLqPeriodicP0 = 6.965348865312708;
inline constexpr double kLqPeriodicPT = 6.092693434005184;

// Backward scalar flow recursion in time-to-go form: dp/ds = q + 2ap - sp^2,
// integrated with a hand-rolled scalar RK4 loop.
inline double scalar_flow_backward(double a, double s, double q, double pT,
                                   double T, int steps = 200000) {
  const double h = T / steps;
  double p = pT;
  auto f = [&](double x) { return q + 2.0 * a * x - s * x * x; };
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(p);
    const double k2 = f(p + 0.5 * h * k1);
    const double k3 = f(p + 0.5 * h * k2);
    const double k4 = f(p + h * k3);
    p += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  }
  return p;
}

// Scalar two-input jump recursion with unit input maps:
//   p  ->  qd + ad^2 p - ad^2 p^2 (rd1 + rd2) / (rd1 rd2 + p (rd1 + rd2)).
inline double scalar_jump_map(double p, double qd, double ad, double rd1,
                              double rd2) {
  const double det = rd1 * rd2 + p * (rd1 + rd2);
  return qd + ad * ad * p - ad * ad * p * p * (rd1 + rd2) / det;
}

inline double lq_jump_map(double p) {
  return scalar_jump_map(p, 1.0, 2.0, 1.304, -8.0);
}

inline double lq_periodic_p0() {
  double p = 1.0;
  for (int i = 0; i < 120; ++i)
    p = scalar_flow_backward(1.8, robust_channel_sum(), 0.1, lq_jump_map(p),
                             1.0, 20000);
  for (int i = 0; i < 4; ++i)
    p = scalar_flow_backward(1.8, robust_channel_sum(), 0.1, lq_jump_map(p),
                             1.0, 400000);
  return p;
}

// ---- bouncing_ball ---------------------------------------------------------
// Unit gravity, restitution 0.8, jump weights rd1 = 10, rd2 = -20.  The
// stage weight below makes v(x) = x1 + x2^2/2 drain exactly through the
// jumps; the post/pre speed ratio under the resulting gains is 32/41.

inline double ball_qd() { return 77.0 / 410.0; }
inline double ball_k1() { return 8.0 / 205.0; }
inline double ball_k2() { return -4.0 / 205.0; }
inline double ball_retention() { return 32.0 / 41.0; }

inline double ball_value(double height, double speed) {
  return height + 0.5 * speed * speed;
}

// Drop from (1, 1): first impact at t = 1 + sqrt(3) with speed sqrt(3);
// flight k lasts twice its launch speed r^k sqrt(3).  The box
// [0, 0.3] x [-0.37, 0.37] is first entered on the fourth flight, on the way
// up, when the speed has fallen to 0.37.
inline double ball_first_impact_time() { return 1.0 + std::sqrt(3.0); }
inline double ball_first_impact_speed() { return std::sqrt(3.0); }

inline double ball_box_entry_time() {
  const double r = ball_retention();
  const double s3 = std::sqrt(3.0);
  return (1.0 + s3) + 2.0 * r * s3 + 2.0 * r * r * s3 +
         (r * r * r * s3 - 0.37);
}
inline constexpr int kBallBoxEntryJumps = 3;
inline constexpr double kBallBoxEntryTime = 7.999427472937205;

// Total flow time of the undamped-box variant (geometric flight series).
inline double ball_zeno_total_time() {
  const double r = ball_retention();
  return 1.0 + std::sqrt(3.0) * (1.0 + 2.0 * r / (1.0 - r));
}

// ---- security_jump ---------------------------------------------------------
// Norm-preserving rotation between jumps x+ = x/2 + u1 + u2 with weights
// rd1 = 1, rd2 = -10.  The stage weight below makes |x|^2 the exact value;
// the closed-loop jump contracts by 5/19.

inline double security_qd() { return 33.0 / 38.0; }
inline double security_g1() { return -5.0 / 19.0; }
inline double security_g2() { return 1.0 / 38.0; }
inline double security_contraction() { return 5.0 / 19.0; }
inline double security_jump_map(double p) {
  return scalar_jump_map(p, 33.0 / 38.0, 0.5, 1.0, -10.0);
}

// ---- hashes ----------------------------------------------------------------
// Published FNV-1a 64 test vectors.
inline constexpr const char* kFnvEmpty = "cbf29ce484222325";
inline constexpr const char* kFnvA = "af63dc4c8601ec8c";
inline constexpr const char* kFnvFoobar = "85944171f73967e8";

}  // namespace oracle
