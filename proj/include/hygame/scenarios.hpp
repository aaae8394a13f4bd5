#pragma once

#include <string>
#include <vector>

#include "hygame/cost.hpp"
#include "hygame/system.hpp"

namespace hygame {

// A ready-to-play game: system, stage costs, and whatever closed-form data
// is known at construction time (quadratic data for the solvers, exact value
// certificate and saddle law when they have closed forms).
struct Scenario {
  std::string name;
  GameSystem sys;
  StageCosts costs;
  std::optional<QuadraticGameSpec> quad;
  std::optional<ValueCertificate> V;
  std::optional<FeedbackLaw> law;

  Vec default_x0;
  // Default sampling boxes for grid-based checks.
  Vec grid_lo, grid_hi;
  Vec u_flow_lo, u_flow_hi;  // length mC1 + mC2
  Vec u_jump_lo, u_jump_hi;  // length mD1 + mD2
};

// Builtin names: lq_periodic_1d, robust_1d_nonunique, bouncing_ball,
// security_jump.  Throws UnknownScenario otherwise.
Scenario builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

// Closed-form constants of robust_1d_nonunique, shared by the certificate,
// the stage costs, and the tests.
struct Robust1dConstants {
  double a, b1, b2, qc, rc1, rc2;  // plant and flow cost
  double delta, mu, sigma;         // flow interval and jump location/target
  double p;                        // exact root of the scalar value equation
  double g1, g2;                   // feedback gains (u_i = g_i x)
  double rate;                     // closed-loop flow rate a + b1 g1 + b2 g2
};
Robust1dConstants robust_1d_constants();

// Closed-form constants of bouncing_ball.
struct BouncingBallConstants {
  double lambda, rd1, rd2;
  double qd;        // jump state weight making the certificate exact
  double k1, k2;    // jump feedback gains (u_i = k_i * x2)
  double retention; // |post/pre| velocity ratio under the saddle law
};
BouncingBallConstants bouncing_ball_constants();

// Scenario file loader (JSON, linear maps only) and the reference resolver
// used by the CLI: builtin name first, then a path.
Scenario load_scenario_file(const std::string& path);
Scenario resolve_scenario(const std::string& ref);

}  // namespace hygame
