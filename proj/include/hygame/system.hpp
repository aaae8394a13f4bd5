#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hygame/domain.hpp"
#include "hygame/linalg.hpp"

namespace hygame {

// Membership tolerance for set predicates.  Event localization is much
// tighter (see SimConfig::event_tol); this slack only decides yes/no
// membership questions for states produced by that localization.
inline constexpr double kSetTol = 1e-7;

// Flow set: member() answers (x, u_C) in C; margin() is a continuous
// state-only function that is >= 0 on the projection of C and crosses zero
// where flow becomes inadmissible (used to localize forced transitions).
struct FlowSetSpec {
  std::function<bool(const Vec&, const Vec&)> member;
  std::function<double(const Vec&)> margin;
};

// Jump set: member() answers (x, u_D) in D.  Each entry of margins is a
// continuous function crossing zero exactly where the state reaches the
// corresponding face/level of D along a flow; sign changes are what the
// simulator bisects on.
struct JumpSetSpec {
  std::function<bool(const Vec&, const Vec&)> member;
  std::vector<std::function<double(const Vec&)>> margins;
};

// Terminal set X: play stops at the first hybrid time the state enters it.
// margin() <= 0 inside, continuous; box carries the structured description
// when X is an axis-aligned box (serialization + docs).
struct TerminalSetSpec {
  bool present = false;
  std::function<bool(const Vec&)> member;
  std::function<double(const Vec&)> margin;
  std::optional<std::pair<Vec, Vec>> box;  // lo, hi
};

// Affine map data: x' = A x + B1 u1 + B2 u2 + c.  Present on a GameSystem
// whenever the corresponding map is affine, enabling closed-form play below.
struct AffineMap {
  Mat A, B1, B2;
  Vec c;
};

struct GameSystem {
  int n = 0;
  InputDims dims;
  FlowSetSpec C;
  JumpSetSpec D;
  TerminalSetSpec X;
  std::function<Vec(const Vec&, const Vec&)> f;  // flow map (x, u_C)
  std::function<Vec(const Vec&, const Vec&)> g;  // jump map (x, u_D)
  std::optional<AffineMap> lin_f;
  std::optional<AffineMap> lin_g;
  // Index of a clock coordinate driven at rate 1 and reset by jumps, if any.
  std::optional<int> timer_index;

  bool in_C(const Vec& x, const Vec& uc) const { return C.member(x, uc); }
  bool in_D(const Vec& x, const Vec& ud) const { return D.member(x, ud); }
  bool in_X(const Vec& x) const { return X.present && X.member(x); }
};

// Rough Lipschitz sanity probe for the flow map: largest difference quotient
// over random pairs in a box around x0.  Diagnostic only.
double lipschitz_spot_check(const GameSystem& sys, const Vec& x0, double radius,
                            int pairs = 200, unsigned seed = 1u);

// State-feedback strategy for both players on both channels.  Components for
// absent channels (dim 0) may be left empty.
struct FeedbackLaw {
  InputDims dims;
  std::function<Vec(const Vec&)> kC1, kC2, kD1, kD2;
  // Constant gain matrices when the law is linear (u = K x); informational.
  std::optional<Mat> KC1, KC2, KD1, KD2;

  Vec uC(const Vec& x) const;  // concatenated (kC1 | kC2), empty-safe
  Vec uD(const Vec& x) const;
};

// Scale player 1's components by eps_u and player 2's by eps_w; used by the
// deviation sweep.  Gain matrices are scaled along when present.
FeedbackLaw scale_law(const FeedbackLaw& law, double eps_u, double eps_w);

// The loop closed with a feedback law.  `sys` is the induced autonomous
// system (zero input dims; C and D become the substituted-membership sets);
// base/law are retained so the simulator can record the inputs played.
struct ClosedLoopSystem {
  GameSystem sys;
  GameSystem base;
  FeedbackLaw law;
};

ClosedLoopSystem close_loop(const GameSystem& base, const FeedbackLaw& law);

// Data of a quadratic game on a plant of dimension np: flow side
// xdot = AC x + BC1 u1 + BC2 u2 with running cost x'QC x + u1'RC1 u1
// + u2'RC2 u2, jump side x+ = AD x + BD1 u1 + BD2 u2 with cost
// x'QD x + u1'RD1 u1 + u2'RD2 u2.  Sign conventions are stored exactly as
// given (RC2, RD2 negative definite for the maximizing player); solvers never
// flip signs.  For timer systems the matrices act on the plant block only.
struct QuadraticGameSpec {
  int np = 0;
  bool has_flow = false;
  Mat AC, BC1, BC2, QC, RC1, RC2;
  bool has_jump = false;
  Mat AD, BD1, BD2, QD, RD1, RD2;
  // Jump thresholds for a timer system; empty otherwise.  T1 == T2 is the
  // periodic case.
  std::optional<double> T1, T2;
};

// Timer game builder: state (x_p, tau), flow (AC x_p + BC u, 1) on
// tau in [0, T2], jumps (AD x_p + BD u, 0) enabled at tau in {T1, T2}.
GameSystem build_timer_lq_system(const QuadraticGameSpec& spec);

}  // namespace hygame
