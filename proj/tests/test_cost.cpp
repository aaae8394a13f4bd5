#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hygame/cost.hpp"
#include "hygame/errors.hpp"
#include "hygame/scenarios.hpp"
#include "hygame/simulator.hpp"
#include "support/oracles.hpp"

using namespace hygame;

namespace {

SolutionPair play(const Scenario& sc, const Vec& x0, JumpPolicy policy) {
  SimConfig cfg;
  cfg.policy = policy;
  return simulate(close_loop(sc.sys, *sc.law), x0, cfg);
}

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
  return w;
}

}  // namespace

TEST_CASE("empty pairs are rejected") {
  CHECK_THROWS_AS(evaluate_cost(SolutionPair{}, StageCosts{}), EmptyDomain);
}

TEST_CASE("scalar game: both continuations cost the same") {
  const Scenario sc = builtin_scenario("robust_1d_nonunique");
  const double expect = oracle::robust_cost_from(2.0);

  const SolutionPair jp = play(sc, {2.0}, JumpPolicy::JumpPriority);
  const CostReport a = evaluate_cost(jp, sc.costs);
  CHECK(a.total == doctest::Approx(expect).epsilon(1e-6));
  CHECK(a.flow_cost + a.jump_cost + a.terminal_cost ==
        doctest::Approx(a.total).epsilon(1e-12));
  REQUIRE(a.per_interval.size() == 2);
  const Robust1dConstants c = robust_1d_constants();
  CHECK(a.per_interval[0].jump ==
        doctest::Approx(c.p * (1.0 - c.sigma * c.sigma)).epsilon(1e-6));
  CHECK(a.per_interval[1].jump == 0.0);

  const SolutionPair fp = play(sc, {2.0}, JumpPolicy::FlowPriority);
  const CostReport b = evaluate_cost(fp, sc.costs);
  CHECK(b.total == doctest::Approx(expect).epsilon(1e-6));
  CHECK(std::fabs(a.total - b.total) < 2e-6);
  // The run decays for long enough that the terminal term has settled.
  CHECK(b.terminal_converged);
  CHECK(b.tail_variation < 1e-6);
}

TEST_CASE("enumerated branches agree on the value") {
  const Scenario sc = builtin_scenario("robust_1d_nonunique");
  SimConfig cfg;
  cfg.policy = JumpPolicy::EnumerateBoth;
  const auto branches = simulate_branches(close_loop(sc.sys, *sc.law), {2.0}, cfg);
  REQUIRE(branches.size() == 2);
  const double j0 = evaluate_cost(branches[0], sc.costs).total;
  const double j1 = evaluate_cost(branches[1], sc.costs).total;
  CHECK(std::fabs(j0 - j1) < 2e-6);
}

TEST_CASE("ball run telescopes to the initial value") {
  const Scenario sc = builtin_scenario("bouncing_ball");
  const BouncingBallConstants c = bouncing_ball_constants();
  const SolutionPair sp = play(sc, {1.0, 1.0}, JumpPolicy::JumpPriority);
  REQUIRE(sp.status.reason == StopReason::ReachedTerminalSet);

  const CostReport r = evaluate_cost(sp, sc.costs);
  CHECK(r.total == doctest::Approx(oracle::ball_value(1.0, 1.0)).epsilon(1e-7));
  CHECK(r.flow_cost == 0.0);  // no running cost while airborne

  // Each impact charges (qd + rd1 k1^2 + rd2 k2^2) v^2 = (1 - r^2)/2 v^2.
  const double per_v2 = 0.5 * (1.0 - c.retention * c.retention);
  const double v1 = oracle::ball_first_impact_speed();
  CHECK(r.per_interval[0].jump ==
        doctest::Approx(per_v2 * v1 * v1).epsilon(1e-7));
}

TEST_CASE("rattling ball: tail bound accounts for the dropped impacts") {
  Scenario sc = builtin_scenario("bouncing_ball");
  sc.sys.X.present = false;
  const SolutionPair sp = play(sc, {1.0, 1.0}, JumpPolicy::JumpPriority);
  REQUIRE(sp.status.reason == StopReason::ZenoTruncated);

  const CostReport r = evaluate_cost(sp, sc.costs);
  REQUIRE(r.tail_bound.has_value());
  CHECK(*r.tail_bound >= 0.0);
  CHECK(std::fabs(r.total + *r.tail_bound - oracle::ball_value(1.0, 1.0)) <
        1e-4);
}

TEST_CASE("rotation game value is exact from the start state") {
  const Scenario sc = builtin_scenario("security_jump");
  const SolutionPair sp = play(sc, {1.0, 1.0}, JumpPolicy::JumpPriority);
  const CostReport r = evaluate_cost(sp, sc.costs);
  CHECK(r.total == doctest::Approx(2.0).epsilon(2e-8));
  CHECK(r.flow_cost == 0.0);
}

TEST_CASE("flow certificate senses") {
  const Scenario sc = builtin_scenario("robust_1d_nonunique");
  const SolutionPair sp = play(sc, {2.0}, JumpPolicy::JumpPriority);

  const CertCheck exact =
      check_flow_certificate(sp, sc.sys, sc.costs, *sc.V, CertSense::Exact,
                             1e-7);
  CHECK(exact.passed);
  CHECK(exact.samples > 1000);

  // Inflating the certificate leaves it an upper bound but not a lower one.
  const ValueCertificate big = scaled_value(*sc.V, 1.01);
  CHECK(check_flow_certificate(sp, sc.sys, sc.costs, big,
                               CertSense::UpperBound, 1e-7)
            .passed);
  CHECK(!check_flow_certificate(sp, sc.sys, sc.costs, big,
                                CertSense::LowerBound, 1e-7)
             .passed);
  CHECK(!check_flow_certificate(sp, sc.sys, sc.costs, big, CertSense::Exact,
                                1e-7)
             .passed);
}

TEST_CASE("jump certificate senses") {
  const Scenario sc = builtin_scenario("robust_1d_nonunique");
  const SolutionPair sp = play(sc, {2.0}, JumpPolicy::JumpPriority);
  CHECK(check_jump_certificate(sp, sc.sys, sc.costs, *sc.V, CertSense::Exact,
                               1e-9)
            .passed);
  const ValueCertificate big = scaled_value(*sc.V, 1.01);
  const CertCheck bad = check_jump_certificate(sp, sc.sys, sc.costs, big,
                                               CertSense::Exact, 1e-7);
  CHECK(!bad.passed);
  CHECK(bad.worst < 0.0);  // inflated V makes the jump overshoot downward
}

TEST_CASE("telescoping holds at every truncation") {
  const Scenario rb = builtin_scenario("robust_1d_nonunique");
  const SolutionPair rsp = play(rb, {2.0}, JumpPolicy::JumpPriority);
  for (const HybridTime cut : {HybridTime{0.25, 0}, HybridTime{1.7, 1},
                               HybridTime{8.0, 1}, rsp.arc.end()}) {
    const SolutionPair part = truncate(rsp, cut);
    const TelescopeResult res = telescoped_bound(part, rb.sys, rb.costs,
                                                 *rb.V, CertSense::Exact,
                                                 1e-5);
    CHECK(res.passed);
    CHECK(res.v_start ==
          doctest::Approx(oracle::robust_cost_from(2.0)).epsilon(1e-12));
    CHECK(std::fabs(res.gap) < 1e-5);
  }

  const Scenario ball = builtin_scenario("bouncing_ball");
  const SolutionPair bsp = play(ball, {1.0, 1.0}, JumpPolicy::JumpPriority);
  for (const HybridTime cut :
       {HybridTime{1.0, 0}, HybridTime{4.0, 1}, HybridTime{6.5, 2}}) {
    const TelescopeResult res = telescoped_bound(
        truncate(bsp, cut), ball.sys, ball.costs, *ball.V, CertSense::Exact,
        1e-5);
    CHECK(res.passed);
    CHECK(res.v_start == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(std::fabs(res.gap) < 1e-5);
  }
}

TEST_CASE("telescoping rejects a wrong certificate") {
  const Scenario sc = builtin_scenario("robust_1d_nonunique");
  const SolutionPair sp = play(sc, {2.0}, JumpPolicy::JumpPriority);
  const ValueCertificate big = scaled_value(*sc.V, 1.01);
  CHECK_THROWS_AS(telescoped_bound(sp, sc.sys, sc.costs, big,
                                   CertSense::Exact, 1e-7),
                  CertificateViolated);
}

TEST_CASE("certificate gradients match finite differences") {
  for (const char* name :
       {"robust_1d_nonunique", "bouncing_ball", "security_jump"}) {
    const Scenario sc = builtin_scenario(name);
    REQUIRE(sc.V.has_value());
    const double worst =
        certificate_gradient_check(*sc.V, sc.grid_lo, sc.grid_hi, 50);
    CHECK(worst < 1e-8);
  }
}
