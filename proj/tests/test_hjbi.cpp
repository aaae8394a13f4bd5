#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hygame/errors.hpp"
#include "hygame/hjbi.hpp"
#include "hygame/riccati.hpp"
#include "hygame/scenarios.hpp"
#include "support/oracles.hpp"

using namespace hygame;

namespace {

ValueCertificate scaled_value(const ValueCertificate& v, double s) {
  ValueCertificate w;
  const auto value = v.value;
  const auto grad = v.grad;
  w.value = [value, s](const Vec& x) { return s * value(x); };
  w.grad = [grad, s](const Vec& x) {
    Vec g = grad(x);
    for (auto& gi : g) gi *= s;
    return g;
  };
  if (v.quad_at) {
    const auto quad = v.quad_at;
    w.quad_at = [quad, s](const Vec& x) {
      QuadForm q = quad(x);
      q.P *= s;
      for (auto& ci : q.c) ci *= s;
      q.d *= s;
      return q;
    };
  }
  return w;
}

}  // namespace

TEST_CASE("flow-side saddle in closed form") {
  const Scenario sc = builtin_scenario("robust_1d_nonunique");
  const Robust1dConstants c = robust_1d_constants();
  const MinMaxResult r = hamiltonian_minmax(sc.sys, sc.costs, *sc.V, {1.5},
                                            sc.u_flow_lo, sc.u_flow_hi);
  CHECK(r.analytic);
  CHECK(std::fabs(r.value) < 1e-12);
  CHECK(r.u1[0] == doctest::Approx(c.g1 * 1.5).epsilon(1e-12));
  CHECK(r.u2[0] == doctest::Approx(c.g2 * 1.5).epsilon(1e-12));
  CHECK(r.isaacs_gap < 1e-12);
}

TEST_CASE("jump-side saddle in closed form") {
  const Scenario sec = builtin_scenario("security_jump");
  const MinMaxResult r = jump_minmax(sec.sys, sec.costs, *sec.V, {1.0, 1.0},
                                     sec.u_jump_lo, sec.u_jump_hi);
  CHECK(r.analytic);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.u1[0] == doctest::Approx(oracle::security_g1()).epsilon(1e-10));
  CHECK(r.u1[1] == doctest::Approx(oracle::security_g1()).epsilon(1e-10));
  CHECK(r.u2[0] == doctest::Approx(oracle::security_g2()).epsilon(1e-10));
  CHECK(r.isaacs_gap < 1e-12);

  const Scenario ball = builtin_scenario("bouncing_ball");
  const double v = oracle::ball_first_impact_speed();
  const MinMaxResult b = jump_minmax(ball.sys, ball.costs, *ball.V, {0.0, -v},
                                     ball.u_jump_lo, ball.u_jump_hi);
  CHECK(b.value == doctest::Approx(0.5 * v * v).epsilon(1e-12));
  CHECK(b.u1[0] == doctest::Approx(oracle::ball_k1() * -v).epsilon(1e-10));
  CHECK(b.u2[0] == doctest::Approx(oracle::ball_k2() * -v).epsilon(1e-10));
}

TEST_CASE("grid fallback approaches the closed form") {
  Scenario sec = builtin_scenario("security_jump");
  sec.sys.lin_g.reset();  // forces the sampled path
  const MinMaxResult r = jump_minmax(sec.sys, sec.costs, *sec.V, {1.0, 1.0},
                                     sec.u_jump_lo, sec.u_jump_hi);
  CHECK(!r.analytic);
  CHECK(r.value == doctest::Approx(2.0).epsilon(5e-3));
}

TEST_CASE("missing input boxes are reported") {
  Scenario sc = builtin_scenario("robust_1d_nonunique");
  sc.sys.lin_f.reset();
  CHECK_THROWS_AS(
      hamiltonian_minmax(sc.sys, sc.costs, *sc.V, {1.0}, {}, {}),
      NoInputBox);
}

TEST_CASE("stationarity audit passes on every builtin") {
  for (const char* name :
       {"robust_1d_nonunique", "bouncing_ball", "security_jump"}) {
    INFO(name);
    const Scenario sc = builtin_scenario(name);
    const HjbiReport rep = check_hjbi(sc, *sc.V);
    CHECK(rep.passed);
    CHECK(rep.flow_worst <= 1e-7);
    CHECK(rep.jump_worst <= 1e-7);
    CHECK(rep.isaacs_worst <= 1e-9);
    CHECK(rep.flow_points > 0);
  }
  const Scenario lq = builtin_scenario("lq_periodic_1d");
  const PeriodicSolution sol = solve_periodic(*lq.quad);
  const HjbiReport rep = check_hjbi(lq, sol.V);
  CHECK(rep.passed);
  CHECK(rep.jump_points > 0);
}

TEST_CASE("stationarity audit flags an inflated candidate") {
  const Scenario sc = builtin_scenario("robust_1d_nonunique");
  const HjbiReport rep = check_hjbi(sc, scaled_value(*sc.V, 1.02));
  CHECK(!rep.passed);
  CHECK(rep.flow_worst > 1e-3);
}

TEST_CASE("feedback synthesis recovers the known gains") {
  const Scenario rb = builtin_scenario("robust_1d_nonunique");
  const Robust1dConstants rc = robust_1d_constants();
  const FeedbackLaw rl = synthesize_feedback(rb, *rb.V);
  CHECK(rl.kC1({1.5})[0] == doctest::Approx(rc.g1 * 1.5).epsilon(1e-10));
  CHECK(rl.kC2({1.5})[0] == doctest::Approx(rc.g2 * 1.5).epsilon(1e-10));

  const Scenario ball = builtin_scenario("bouncing_ball");
  const FeedbackLaw bl = synthesize_feedback(ball, *ball.V);
  CHECK(bl.kD1({0.0, -3.0})[0] ==
        doctest::Approx(oracle::ball_k1() * -3.0).epsilon(1e-10));
  CHECK(bl.kD2({0.0, -3.0})[0] ==
        doctest::Approx(oracle::ball_k2() * -3.0).epsilon(1e-10));

  const Scenario sec = builtin_scenario("security_jump");
  const FeedbackLaw sl = synthesize_feedback(sec, *sec.V);
  CHECK(sl.kD1({1.0, 0.0})[0] ==
        doctest::Approx(oracle::security_g1()).epsilon(1e-10));
  CHECK(sl.kD1({1.0, 0.0})[1] == doctest::Approx(0.0));
  CHECK(sl.kD2({1.0, 0.0})[0] ==
        doctest::Approx(oracle::security_g2()).epsilon(1e-10));

  const Scenario lq = builtin_scenario("lq_periodic_1d");
  const PeriodicSolution sol = solve_periodic(*lq.quad);
  const FeedbackLaw ll = synthesize_feedback(lq, sol.V);
  CHECK(ll.kC1({1.0, 0.0})[0] ==
        doctest::Approx(sol.law.kC1({1.0, 0.0})[0]).epsilon(1e-8));
  CHECK(ll.kD1({1.0, 1.0})[0] ==
        doctest::Approx(sol.law.kD1({1.0, 1.0})[0]).epsilon(1e-6));
}

TEST_CASE("play audit: equalities at the law, deviations one-sided") {
  for (const char* name :
       {"robust_1d_nonunique", "bouncing_ball", "security_jump"}) {
    INFO(name);
    const Scenario sc = builtin_scenario(name);
    const ConditionReport rep =
        check_equivalent_conditions(sc, *sc.V, *sc.law);
    CHECK(rep.passed);
    CHECK(rep.eq_flow <= 1e-7);
    CHECK(rep.eq_jump <= 1e-7);
    CHECK(rep.dev_flow_min >= -1e-7);
    CHECK(rep.dev_flow_max <= 1e-7);
  }
  const Scenario lq = builtin_scenario("lq_periodic_1d");
  const PeriodicSolution sol = solve_periodic(*lq.quad);
  const ConditionReport rep =
      check_equivalent_conditions(lq, sol.V, sol.law);
  CHECK(rep.passed);
}

TEST_CASE("play audit flags a detuned law") {
  const Scenario sc = builtin_scenario("robust_1d_nonunique");
  const FeedbackLaw off = scale_law(*sc.law, 1.15, 1.15);
  const ConditionReport rep = check_equivalent_conditions(sc, *sc.V, off);
  CHECK(!rep.passed);
  CHECK(rep.eq_flow > 1e-4);
}

TEST_CASE("play audit needs deviation boxes") {
  Scenario sc = builtin_scenario("robust_1d_nonunique");
  sc.u_flow_lo.clear();
  sc.u_flow_hi.clear();
  CHECK_THROWS_AS(check_equivalent_conditions(sc, *sc.V, *sc.law),
                  NoInputBox);
}

TEST_CASE("deviation sweep brackets the at-law cost") {
  const Scenario sc = builtin_scenario("robust_1d_nonunique");
  const std::vector<double> eps{0.8, 0.9, 1.0, 1.1, 1.2};
  const SweepResult sw = saddle_sweep(sc, *sc.law, eps, eps);
  CHECK(sw.J.rows() == 5);
  CHECK(sw.J.cols() == 5);
  CHECK(sw.j_star ==
        doctest::Approx(oracle::robust_cost_from(2.0)).epsilon(2e-3));
  CHECK(sw.J(2, 2) == sw.j_star);
  CHECK(sw.saddle_ordering);
  CHECK(sw.worst_low <= 1e-6 * (1.0 + std::fabs(sw.j_star)));
  CHECK(sw.worst_high <= 1e-6 * (1.0 + std::fabs(sw.j_star)));

  const Scenario sec = builtin_scenario("security_jump");
  const std::vector<double> eps3{0.9, 1.0, 1.1};
  const SweepResult s3 = saddle_sweep(sec, *sec.law, eps3, eps3);
  CHECK(s3.j_star == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(s3.saddle_ordering);
}
