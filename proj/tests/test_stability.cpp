#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hygame/errors.hpp"
#include "hygame/riccati.hpp"
#include "hygame/scenarios.hpp"
#include "hygame/simulator.hpp"
#include "hygame/stability.hpp"
#include "support/oracles.hpp"

using namespace hygame;

namespace {

SolutionPair play(const Scenario& sc, const Vec& x0) {
  return simulate(close_loop(sc.sys, *sc.law), x0);
}

}  // namespace

TEST_CASE("target distances") {
  CHECK(point_target({1.0, 2.0}).distance({4.0, 6.0}) == doctest::Approx(5.0));
  CHECK(ball_target({0.0, 0.0}, 1.0).distance({3.0, 4.0}) ==
        doctest::Approx(4.0));
  CHECK(ball_target({0.0, 0.0}, 1.0).distance({0.3, -0.4}) == 0.0);
  CHECK(coord_target({0.0}, {0}).distance({3.0, 4.0}) == doctest::Approx(3.0));

  // Timer games measure the plant only; plain games the whole state.
  const TargetSet lq = default_target(builtin_scenario("lq_periodic_1d"));
  CHECK(lq.distance({0.5, 0.7}) == doctest::Approx(0.5));
  const TargetSet rb = default_target(builtin_scenario("robust_1d_nonunique"));
  CHECK(rb.distance({-2.0}) == doctest::Approx(2.0));
}

TEST_CASE("shell probe accepts a definite value and rejects a dented one") {
  const Scenario sc = builtin_scenario("robust_1d_nonunique");
  const TargetSet target = default_target(sc);
  const PdReport good =
      check_pd(sc.V->value, target, sc.grid_lo, sc.grid_hi);
  CHECK(good.passed);
  CHECK(good.samples == 4000);
  CHECK(good.floor >= -1e-9);

  const auto dented = [](const Vec& x) {
    return x[0] * x[0] * (x[0] - 1.5);
  };
  const PdReport bad = check_pd(dented, target, sc.grid_lo, sc.grid_hi);
  CHECK(!bad.passed);
  CHECK(bad.floor < 0.0);
}

TEST_CASE("decrease audit passes on every builtin") {
  for (const char* name :
       {"robust_1d_nonunique", "bouncing_ball", "security_jump"}) {
    INFO(name);
    const Scenario sc = builtin_scenario(name);
    const DecreaseReport rep =
        check_lyapunov_decrease(sc, *sc.V, *sc.law, 11, 1e-6);
    CHECK(rep.passed);
    CHECK(rep.flow_points > 0);
  }
  // Airborne segments are costless and keep the value exactly level.
  const Scenario ball = builtin_scenario("bouncing_ball");
  const DecreaseReport brep =
      check_lyapunov_decrease(ball, *ball.V, *ball.law, 11, 1e-6);
  CHECK(brep.worst_flow == 0.0);

  const Scenario lq = builtin_scenario("lq_periodic_1d");
  const PeriodicSolution sol = solve_periodic(*lq.quad);
  const DecreaseReport lrep =
      check_lyapunov_decrease(lq, sol.V, sol.law, 11, 1e-6);
  CHECK(lrep.passed);
  CHECK(lrep.jump_points > 0);
}

TEST_CASE("decrease audit flags a detuned law") {
  const Scenario sc = builtin_scenario("robust_1d_nonunique");
  const DecreaseReport rep = check_lyapunov_decrease(
      sc, *sc.V, scale_law(*sc.law, 1.3, 1.3), 11, 1e-6);
  CHECK(!rep.passed);
  CHECK(rep.worst_flow > 1e-3);
}

TEST_CASE("trajectory evidence: decaying scalar run") {
  const Scenario sc = builtin_scenario("robust_1d_nonunique");
  const SolutionPair sp = play(sc, {2.0});
  const ConvergenceReport rep =
      check_trajectory_convergence(sp, default_target(sc));
  CHECK(rep.converged);
  CHECK(rep.final_distance < 1e-6);
  REQUIRE(rep.pre_jump_distance.size() == 1);
  CHECK(rep.pre_jump_distance[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.geometric_ratio == 1.0);  // a single jump gives no ratio
  CHECK(rep.decay_rate > -1.5);
  CHECK(rep.decay_rate < -1.0);
}

TEST_CASE("trajectory evidence: impact speeds shrink geometrically") {
  const Scenario sc = builtin_scenario("bouncing_ball");
  const BouncingBallConstants c = bouncing_ball_constants();
  const SolutionPair sp = play(sc, {1.0, 1.0});
  const ConvergenceReport rep =
      check_trajectory_convergence(sp, default_target(sc));
  CHECK(rep.converged);
  CHECK(rep.geometric_ratio == doctest::Approx(c.retention).epsilon(1e-6));

  Scenario open = builtin_scenario("bouncing_ball");
  open.sys.X.present = false;
  const SolutionPair zsp = play(open, {1.0, 1.0});
  const ConvergenceReport zrep =
      check_trajectory_convergence(zsp, default_target(open));
  CHECK(zrep.geometric_ratio == doctest::Approx(c.retention).epsilon(1e-6));
  CHECK(zrep.pre_jump_distance.size() > 50);
}

TEST_CASE("trajectory evidence: contraction then coasting") {
  const Scenario sc = builtin_scenario("security_jump");
  const SolutionPair sp = play(sc, {1.0, 1.0});
  const ConvergenceReport rep =
      check_trajectory_convergence(sp, default_target(sc));
  REQUIRE(rep.pre_jump_distance.size() == 2);
  CHECK(rep.geometric_ratio ==
        doctest::Approx(oracle::security_contraction()).epsilon(1e-9));
  CHECK(rep.converged);
  CHECK(rep.decay_rate < 0.0);
}

TEST_CASE("dwell offset over a hand-built domain") {
  HybridTimeDomain dom;
  dom.boundaries = {0.0, 1.0, 1.5, 3.0};
  const DwellReport rep = dwell_certificate(dom, 1.0, 2.0, 0.5);
  CHECK(rep.M == 9.5);
  CHECK(rep.lambda_c == 1.0);
  // Strictly dissipative rates need no offset at all.
  const DwellReport neg = dwell_certificate(dom, -1.0, -1.0, 0.2);
  CHECK(neg.M < 2.0);
  CHECK(neg.M >= 0.0);
}

TEST_CASE("basin sweeps") {
  const Scenario rb = builtin_scenario("robust_1d_nonunique");
  const BasinReport rrep =
      estimate_basin(rb, *rb.law, default_target(rb), 5);
  CHECK(rrep.tried == 5);
  CHECK(rrep.converged == 5);
  CHECK(rrep.fraction == 1.0);
  CHECK(rrep.failures.empty());

  const Scenario ball = builtin_scenario("bouncing_ball");
  const BasinReport brep =
      estimate_basin(ball, *ball.law, default_target(ball), 3);
  CHECK(brep.tried == 9);
  CHECK(brep.fraction == 1.0);

  // Starts outside both sets are skipped, not counted as failures.
  Scenario shifted = builtin_scenario("robust_1d_nonunique");
  shifted.grid_lo = {-2.0};
  const BasinReport srep =
      estimate_basin(shifted, *shifted.law, default_target(shifted), 5);
  CHECK(srep.tried == 3);
  CHECK(srep.fraction == 1.0);
}
