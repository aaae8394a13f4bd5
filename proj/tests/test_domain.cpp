#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hygame/domain.hpp"
#include "hygame/errors.hpp"

using namespace hygame;

namespace {

// Two flow intervals joined by one jump, with enough irrational content to
// make the serialization round trip meaningful.
SolutionPair sample_pair() {
  SolutionPair sp;
  sp.arc.n = 1;
  IntervalSamples i0;
  i0.t = {0.0, 0.5, 1.0};
  i0.v = {{1.0 / 3.0}, {std::sqrt(2.0)}, {0.1 + 0.2}};
  IntervalSamples i1;
  i1.t = {1.0, 2.0};
  i1.v = {{-1.0 / 7.0}, {1e-17}};
  sp.arc.intervals = {i0, i1};

  sp.input.dims = InputDims{1, 1, 1, 1};
  IntervalSamples u0;
  u0.t = i0.t;
  u0.v = {{0.25, -0.5}, {0.125, 0.75}, {1.0 / 9.0, -2.0 / 3.0}};
  IntervalSamples u1;
  u1.t = i1.t;
  u1.v = {{0.0, 0.0}, {std::sqrt(3.0), -0.001}};
  sp.input.flow = {u0, u1};
  sp.input.jumps = {{0.5, -0.25}};

  sp.status.reason = StopReason::BudgetExhausted;
  return sp;
}

}  // namespace

TEST_CASE("hybrid time ordering: elapsed total first, then jumps") {
  CHECK(HybridTime{1.0, 0} < HybridTime{0.75, 1});    // 1.0 < 1.75
  CHECK(HybridTime{0.75, 1} < HybridTime{2.0, 0});    // 1.75 < 2.0
  CHECK(HybridTime{1.0, 1} < HybridTime{0.0, 2});     // tie on 2: fewer jumps first
  CHECK(!(HybridTime{0.0, 2} < HybridTime{1.0, 1}));
  CHECK(HybridTime{1.0, 1} == HybridTime{1.0, 1});
  CHECK(HybridTime{1.0, 1} <= HybridTime{1.0, 1});
}

TEST_CASE("arc evaluation interpolates within the right interval") {
  const SolutionPair sp = sample_pair();
  // Midpoint of the first segment of interval 0.
  const Vec a = eval_arc(sp.arc, {0.25, 0});
  CHECK(a[0] == doctest::Approx(0.5 * (1.0 / 3.0 + std::sqrt(2.0))));
  // Pre- and post-jump states share t = 1 but differ by j.
  CHECK(eval_arc(sp.arc, {1.0, 0})[0] == doctest::Approx(0.1 + 0.2));
  CHECK(eval_arc(sp.arc, {1.0, 1})[0] == doctest::Approx(-1.0 / 7.0));
  // Exact sample times return exact values.
  CHECK(eval_arc(sp.arc, {0.5, 0})[0] == std::sqrt(2.0));

  CHECK_THROWS_AS(eval_arc(sp.arc, {0.5, 1}), OutOfDomain);
  CHECK_THROWS_AS(eval_arc(sp.arc, {3.0, 1}), OutOfDomain);
  CHECK_THROWS_AS(eval_arc(sp.arc, {0.0, 5}), OutOfDomain);
}

TEST_CASE("signal evaluation mirrors arc rules") {
  const SolutionPair sp = sample_pair();
  const Vec u = eval_signal(sp.input, {0.25, 0});
  CHECK(u[0] == doctest::Approx(0.5 * (0.25 + 0.125)));
  CHECK(u[1] == doctest::Approx(0.5 * (-0.5 + 0.75)));
  CHECK_THROWS_AS(eval_signal(sp.input, {0.5, 1}), OutOfDomain);
}

TEST_CASE("domain boundaries") {
  const SolutionPair sp = sample_pair();
  const HybridTimeDomain dom = sp.arc.domain();
  REQUIRE(dom.boundaries.size() == 3);
  CHECK(dom.boundaries[0] == 0.0);
  CHECK(dom.boundaries[1] == 1.0);
  CHECK(dom.boundaries[2] == 2.0);
  CHECK(dom.num_jumps() == 1);
  CHECK(sp.arc.start().j == 0);
  CHECK(sp.arc.end().t == 2.0);
  CHECK(sp.arc.end().j == 1);
}

TEST_CASE("truncation cuts mid-interval and keeps end status") {
  const SolutionPair sp = sample_pair();

  const SolutionPair cut = truncate(sp, {1.5, 1});
  REQUIRE(cut.arc.intervals.size() == 2);
  CHECK(cut.arc.end().t == doctest::Approx(1.5));
  CHECK(cut.arc.intervals[1].v.back()[0] ==
        doctest::Approx(0.5 * (-1.0 / 7.0 + 1e-17)));
  CHECK(cut.status.reason == StopReason::BudgetExhausted);
  CHECK(cut.input.jumps.size() == 1);

  // Cutting before the jump drops the second interval and its jump input.
  const SolutionPair early = truncate(sp, {0.75, 0});
  CHECK(early.arc.intervals.size() == 1);
  CHECK(early.input.jumps.empty());

  // Cutting at the exact end is the identity on the status.
  SolutionPair hit = sp;
  hit.status.reason = StopReason::ReachedTerminalSet;
  hit.status.hit = HybridTime{2.0, 1};
  const SolutionPair same = truncate(hit, {2.0, 1});
  CHECK(same.status.reason == StopReason::ReachedTerminalSet);

  CHECK_THROWS_AS(truncate(sp, {2.5, 1}), OutOfDomain);
}

TEST_CASE("trajectory csv round trip is bit exact") {
  const SolutionPair sp = sample_pair();
  std::ostringstream first;
  write_trajectory_csv(first, sp, "00f00f00f00f00f0");

  std::istringstream in(first.str());
  const SolutionPair back = read_trajectory_csv(in, 1, sp.input.dims);

  REQUIRE(back.arc.intervals.size() == sp.arc.intervals.size());
  for (std::size_t j = 0; j < sp.arc.intervals.size(); ++j) {
    const auto& a = sp.arc.intervals[j];
    const auto& b = back.arc.intervals[j];
    REQUIRE(a.t.size() == b.t.size());
    for (std::size_t i = 0; i < a.t.size(); ++i) {
      CHECK(a.t[i] == b.t[i]);  // exact doubles, not approx
      CHECK(a.v[i][0] == b.v[i][0]);
    }
  }
  REQUIRE(back.input.jumps.size() == 1);
  CHECK(back.input.jumps[0][0] == 0.5);
  CHECK(back.input.jumps[0][1] == -0.25);
  CHECK(back.status.reason == StopReason::BudgetExhausted);

  // Re-serializing the parsed pair reproduces the file byte for byte.
  std::ostringstream second;
  write_trajectory_csv(second, back, "00f00f00f00f00f0");
  CHECK(first.str() == second.str());
}

TEST_CASE("csv parser rejects malformed input") {
  std::istringstream bad("t,j,phase,x0\n0,zero,flow,1\n");
  CHECK_THROWS_AS(read_trajectory_csv(bad, 1, InputDims{0, 0, 0, 0}),
                  ParseError);
}

TEST_CASE("stop reasons have stable names") {
  CHECK(std::string(to_string(StopReason::ReachedTerminalSet)) ==
        "ReachedTerminalSet");
  CHECK(std::string(to_string(StopReason::ZenoTruncated)) == "ZenoTruncated");
}
