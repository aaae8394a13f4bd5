#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "hygame/errors.hpp"
#include "hygame/scenarios.hpp"
#include "hygame/system.hpp"
#include "support/oracles.hpp"

using namespace hygame;

TEST_CASE("builtin catalog") {
  const auto names = builtin_scenario_names();
  REQUIRE(names.size() == 4);
  for (const auto& n : names) CHECK(builtin_scenario(n).name == n);
  CHECK_THROWS_AS(builtin_scenario("no_such_game"), UnknownScenario);
  CHECK_THROWS_AS(resolve_scenario("also_not_a_file"), UnknownScenario);
}

TEST_CASE("set membership uses the shared tolerance") {
  const Scenario sc = builtin_scenario("robust_1d_nonunique");
  CHECK(sc.sys.in_C({-0.5 * kSetTol}, {0.0, 0.0}));
  CHECK(!sc.sys.in_C({-1e-6}, {0.0, 0.0}));
  CHECK(sc.sys.in_D({1.0}, {}));
  CHECK(!sc.sys.in_D({1.001}, {}));
}

TEST_CASE("closing the loop substitutes the law into maps and sets") {
  const Scenario sc = builtin_scenario("robust_1d_nonunique");
  REQUIRE(sc.law.has_value());
  const ClosedLoopSystem cl = close_loop(sc.sys, *sc.law);

  CHECK(cl.sys.dims.mC() == 0);
  CHECK(cl.sys.dims.mD() == 0);
  // Closed flow map realizes the closed-loop rate.
  const Vec fx = cl.sys.f({1.0}, {});
  CHECK(fx[0] == doctest::Approx(oracle::kRobustRate).epsilon(1e-12));
  // Substituted membership: the input argument is gone.
  CHECK(cl.sys.in_C({0.5}, {}));
  CHECK(!cl.sys.in_C({2.5}, {}));
  CHECK(cl.sys.in_D({1.0}, {}));
  // The base system and law ride along for input recording.
  CHECK(cl.base.dims.mC() == 2);
  CHECK(cl.law.uC({1.0}).size() == 2);
}

TEST_CASE("law concatenation and scaling") {
  const Scenario sc = builtin_scenario("robust_1d_nonunique");
  const Robust1dConstants c = robust_1d_constants();
  const Vec u = sc.law->uC({2.0});
  REQUIRE(u.size() == 2);
  CHECK(u[0] == doctest::Approx(2.0 * c.g1));
  CHECK(u[1] == doctest::Approx(2.0 * c.g2));
  CHECK(sc.law->uD({2.0}).empty());

  const FeedbackLaw scaled = scale_law(*sc.law, 1.5, 0.25);
  const Vec su = scaled.uC({2.0});
  CHECK(su[0] == doctest::Approx(3.0 * c.g1));
  CHECK(su[1] == doctest::Approx(0.5 * c.g2));
  REQUIRE(scaled.KC1.has_value());
  CHECK((*scaled.KC1)(0, 0) == doctest::Approx(1.5 * c.g1));

  const Scenario sec = builtin_scenario("security_jump");
  CHECK(sec.law->uC({1.0, 1.0}).empty());
  const Vec ud = sec.law->uD({1.0, 0.0});
  REQUIRE(ud.size() == 4);
  CHECK(ud[0] == doctest::Approx(oracle::security_g1()));
  CHECK(ud[2] == doctest::Approx(oracle::security_g2()));
}

TEST_CASE("timer system wiring") {
  const Scenario sc = builtin_scenario("lq_periodic_1d");
  const GameSystem& sys = sc.sys;
  CHECK(sys.n == 2);
  REQUIRE(sys.timer_index.has_value());
  CHECK(*sys.timer_index == 1);

  // Clock runs at rate one and is reset by the jump.
  const Vec fx = sys.f({1.0, 0.3}, {0.0, 0.0});
  CHECK(fx[0] == doctest::Approx(1.8));
  CHECK(fx[1] == 1.0);
  const Vec gx = sys.g({1.0, 1.0}, {0.25, -0.5});
  CHECK(gx[0] == doctest::Approx(2.0 + 0.25 - 0.5));
  CHECK(gx[1] == 0.0);

  // Flowing is allowed until the clock hits the upper threshold; jumping
  // arms at the lower one (equal here).
  CHECK(sys.C.margin({0.0, 0.3}) == doctest::Approx(0.7));
  CHECK(sys.in_C({0.0, 1.0}, {0.0, 0.0}));
  CHECK(!sys.in_C({0.0, 1.1}, {0.0, 0.0}));
  REQUIRE(!sys.D.margins.empty());
  CHECK(sys.D.margins[0]({0.0, 1.0}) == doctest::Approx(0.0));
  CHECK(sys.in_D({0.0, 1.0}, {0.0, 0.0}));
  CHECK(!sys.in_D({0.0, 0.5}, {0.0, 0.0}));

  // Input maps ignore the clock coordinate.
  REQUIRE(sys.lin_f.has_value());
  CHECK(sys.lin_f->B1(1, 0) == 0.0);
  CHECK(sys.lin_f->B1(0, 0) == 1.0);
}

TEST_CASE("terminal set membership") {
  const Scenario sc = builtin_scenario("bouncing_ball");
  CHECK(sc.sys.in_X({0.2, 0.0}));
  CHECK(sc.sys.in_X({0.2, 0.37}));
  CHECK(!sc.sys.in_X({0.2, 0.5}));
  CHECK(!sc.sys.in_X({0.5, 0.0}));
  const Scenario rb = builtin_scenario("robust_1d_nonunique");
  CHECK(!rb.sys.X.present);
  CHECK(!rb.sys.in_X({0.0}));
}

TEST_CASE("flow map difference quotients stay near the linear rate") {
  const Scenario sc = builtin_scenario("robust_1d_nonunique");
  const double lip = lipschitz_spot_check(sc.sys, {1.0}, 0.5);
  CHECK(lip > 0.5);
  CHECK(lip < 1.5);  // |a| = 1 plus sampling slack
}

TEST_CASE("scenario files: linear quadratic games load") {
  const char* path = "test_scenario_tmp.json";
  {
    std::ofstream os(path);
    os << R"({
      "name": "file_game",
      "n": 2,
      "dims": {"mD1": 2, "mD2": 2},
      "jump": {"kind": "linear",
               "A": [[0.5, 0.0], [0.0, 0.5]],
               "B1": [[1.0, 0.0], [0.0, 1.0]],
               "B2": [[1.0, 0.0], [0.0, 1.0]]},
      "costs": {"QD": [[0.868421052631578949, 0.0], [0.0, 0.868421052631578949]],
                "RD1": [[1.0, 0.0], [0.0, 1.0]],
                "RD2": [[-10.0, 0.0], [0.0, -10.0]]},
      "jump_set": {"kind": "norm_outside", "r": 0.1}
    })";
  }
  const Scenario sc = resolve_scenario(path);
  CHECK(sc.name == "file_game");
  CHECK(sc.sys.n == 2);
  CHECK(sc.sys.dims.mD() == 4);
  REQUIRE(sc.quad.has_value());
  CHECK(sc.quad->has_jump);
  CHECK(!sc.quad->has_flow);
  CHECK(sc.sys.in_D({1.0, 0.0}, Vec(4, 0.0)));
  CHECK(!sc.sys.in_D({0.05, 0.0}, Vec(4, 0.0)));
  // Flow map defaults to rest; jump map matches the matrices.
  CHECK(sc.sys.f({1.0, 1.0}, {})[0] == 0.0);
  CHECK(sc.sys.g({1.0, 0.0}, {0.1, 0.0, 0.0, 0.0})[0] ==
        doctest::Approx(0.6));
  std::remove(path);
}

TEST_CASE("scenario files: custom map kinds are rejected") {
  const char* path = "test_scenario_bad_tmp.json";
  {
    std::ofstream os(path);
    os << R"({"name": "bad", "n": 1, "flow": {"kind": "cubic", "A": [[1.0]]},
              "costs": {"QC": [[1.0]]}})";
  }
  CHECK_THROWS_AS(load_scenario_file(path), ParseError);
  std::remove(path);
  CHECK_THROWS_AS(load_scenario_file("missing_file.json"), UnknownScenario);
}
