#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hygame/linalg.hpp"

namespace hygame {

// A point (t, j) of a hybrid time domain: t is elapsed flow time, j counts
// jumps taken so far.  Ordering is by total progress t + j, ties broken by j,
// so the instant just after a jump sorts later than the instant just before.
struct HybridTime {
  double t = 0.0;
  int j = 0;
};

inline bool operator<(const HybridTime& a, const HybridTime& b) {
  const double pa = a.t + a.j, pb = b.t + b.j;
  if (pa != pb) return pa < pb;
  return a.j < b.j;
}
inline bool operator==(const HybridTime& a, const HybridTime& b) {
  return a.t == b.t && a.j == b.j;
}
inline bool operator<=(const HybridTime& a, const HybridTime& b) {
  return !(b < a);
}

// How many inputs each player contributes to the flow and jump channels.
// Player 1 minimizes, player 2 maximizes; either side may be absent (dim 0).
struct InputDims {
  int mC1 = 0, mC2 = 0, mD1 = 0, mD2 = 0;
  int mC() const { return mC1 + mC2; }
  int mD() const { return mD1 + mD2; }
};

// Dense samples over one flow interval [t0, t1] x {j}.  Times are strictly
// increasing; a degenerate interval (t0 == t1) holds exactly one sample.
struct IntervalSamples {
  std::vector<double> t;
  std::vector<Vec> v;  // state or input vectors, aligned with t
  double t0() const { return t.front(); }
  double t1() const { return t.back(); }
};

struct HybridTimeDomain {
  // t_0 = 0, t_1, ..., t_{J+1}: interval j spans [t_j, t_{j+1}].
  std::vector<double> boundaries;
  bool complete = false;
  int num_jumps() const { return static_cast<int>(boundaries.size()) - 2; }
};

struct HybridArc {
  int n = 0;
  std::vector<IntervalSamples> intervals;  // indexed by j

  HybridTimeDomain domain() const;
  HybridTime start() const { return {intervals.front().t0(), 0}; }
  HybridTime end() const {
    return {intervals.back().t1(), static_cast<int>(intervals.size()) - 1};
  }
};

// Inputs paired with an arc: flow inputs are sampled on their own grids
// (closed-loop simulation uses the arc's grids), jump inputs hold the u_D
// applied at the end of interval j.
struct HybridInputSignal {
  InputDims dims;
  std::vector<IntervalSamples> flow;
  std::vector<Vec> jumps;
};

enum class StopReason {
  ReachedTerminalSet,
  BudgetExhausted,
  ZenoTruncated,
  FlowStalled,
};

struct TerminalStatus {
  StopReason reason = StopReason::BudgetExhausted;
  // Set only for ReachedTerminalSet: first hybrid time inside the set.
  std::optional<HybridTime> hit;
};

const char* to_string(StopReason r);

struct SolutionPair {
  HybridArc arc;
  HybridInputSignal input;
  TerminalStatus status;
  // For enumerated branches: one character per two-viable overlap event,
  // '0' = jumped, '1' = flowed through.  Empty when no choice arose.
  std::string branch_id;
};

// State at hybrid time (t, j); linear interpolation between samples of
// interval j.  Pre-/post-jump values at a shared t are distinguished by j.
// Throws OutOfDomain when (t, j) is not in the arc's domain.
Vec eval_arc(const HybridArc& arc, const HybridTime& at);
// Flow input at (t, j), same interpolation rules.
Vec eval_signal(const HybridInputSignal& sig, const HybridTime& at);

// Restriction of the pair to all (t, j) <= upto, interpolating a final sample
// at the cut.  Throws OutOfDomain when upto lies outside the domain.  The
// truncated pair reports BudgetExhausted unless the cut equals the original
// end, in which case the original status is kept.
SolutionPair truncate(const SolutionPair& sp, const HybridTime& upto);

// -- trajectory CSV ----------------------------------------------------------
// Layout: optional "# ..." comment lines, then a header
//   t,j,phase,x0..x{n-1},uC0..,uD0..
// Flow rows carry the flow input and zeros in the uD columns.  A jump row is
// the first sample of the post-jump interval: it carries the post-jump state,
// the jump input, and the flow input in effect at that instant.  Values are
// printed with 17 significant digits so re-parsing is bit-exact.
void write_trajectory_csv(std::ostream& os, const SolutionPair& sp,
                          const std::string& manifest_hash = "");
SolutionPair read_trajectory_csv(std::istream& is, int n, InputDims dims);

}  // namespace hygame
