#include "hygame/system.hpp"

#include <cmath>
#include <random>

#include "hygame/errors.hpp"

namespace hygame {

double lipschitz_spot_check(const GameSystem& sys, const Vec& x0, double radius,
                            int pairs, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  const Vec uc(sys.dims.mC(), 0.0);
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    Vec a = x0, b = x0;
    for (auto& v : a) v += u(rng);
    for (auto& v : b) v += u(rng);
    const double dx = norm2(vsub(a, b));
    if (dx < 1e-12) continue;
    const double df = norm2(vsub(sys.f(a, uc), sys.f(b, uc)));
    worst = std::max(worst, df / dx);
  }
  return worst;
}

Vec FeedbackLaw::uC(const Vec& x) const {
  Vec u1 = (dims.mC1 > 0 && kC1) ? kC1(x) : Vec{};
  Vec u2 = (dims.mC2 > 0 && kC2) ? kC2(x) : Vec{};
  return vcat(u1, u2);
}

Vec FeedbackLaw::uD(const Vec& x) const {
  Vec u1 = (dims.mD1 > 0 && kD1) ? kD1(x) : Vec{};
  Vec u2 = (dims.mD2 > 0 && kD2) ? kD2(x) : Vec{};
  return vcat(u1, u2);
}

FeedbackLaw scale_law(const FeedbackLaw& law, double eps_u, double eps_w) {
  FeedbackLaw s = law;
  if (law.kC1) s.kC1 = [f = law.kC1, eps_u](const Vec& x) { return vscale(eps_u, f(x)); };
  if (law.kD1) s.kD1 = [f = law.kD1, eps_u](const Vec& x) { return vscale(eps_u, f(x)); };
  if (law.kC2) s.kC2 = [f = law.kC2, eps_w](const Vec& x) { return vscale(eps_w, f(x)); };
  if (law.kD2) s.kD2 = [f = law.kD2, eps_w](const Vec& x) { return vscale(eps_w, f(x)); };
  auto scale_gain = [](std::optional<Mat>& m, double e) {
    if (m) *m *= e;
  };
  scale_gain(s.KC1, eps_u);
  scale_gain(s.KD1, eps_u);
  scale_gain(s.KC2, eps_w);
  scale_gain(s.KD2, eps_w);
  return s;
}

ClosedLoopSystem close_loop(const GameSystem& base, const FeedbackLaw& law) {
  ClosedLoopSystem cl;
  cl.base = base;
  cl.law = law;

  GameSystem a;  // the induced autonomous system
  a.n = base.n;
  a.dims = InputDims{};
  a.timer_index = base.timer_index;
  a.X = base.X;
  // Substituted membership: x is in the closed flow set iff (x, kappa_C(x))
  // lies in C; same for the jump side.
  a.C.member = [base, law](const Vec& x, const Vec&) {
    return base.C.member(x, law.uC(x));
  };
  a.C.margin = base.C.margin;
  a.D.member = [base, law](const Vec& x, const Vec&) {
    return base.D.member(x, law.uD(x));
  };
  a.D.margins = base.D.margins;
  a.f = [base, law](const Vec& x, const Vec&) { return base.f(x, law.uC(x)); };
  a.g = [base, law](const Vec& x, const Vec&) { return base.g(x, law.uD(x)); };
  // The closed-loop maps are generally nonlinear in x unless the law itself
  // is linear; keep the affine tags only when no input enters the map.
  if (base.lin_f && base.dims.mC() == 0) a.lin_f = base.lin_f;
  if (base.lin_g && base.dims.mD() == 0) a.lin_g = base.lin_g;
  cl.sys = std::move(a);
  return cl;
}

GameSystem build_timer_lq_system(const QuadraticGameSpec& spec) {
  if (!spec.has_flow || !spec.has_jump || !spec.T2)
    throw Error("build_timer_lq_system: need flow data, jump data and T2");
  const int np = spec.np;
  const int n = np + 1;  // plant + clock
  const double T1 = spec.T1.value_or(*spec.T2);
  const double T2 = *spec.T2;
  if (T1 > T2) throw Error("build_timer_lq_system: T1 > T2");

  GameSystem sys;
  sys.n = n;
  sys.timer_index = np;  // clock is the last coordinate
  sys.dims.mC1 = static_cast<int>(spec.BC1.cols());
  sys.dims.mC2 = static_cast<int>(spec.BC2.cols());
  sys.dims.mD1 = static_cast<int>(spec.BD1.cols());
  sys.dims.mD2 = static_cast<int>(spec.BD2.cols());

  // Embed the plant maps into (x_p, tau) space.
  AffineMap lf;
  lf.A = Mat(n, n);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j) lf.A(i, j) = spec.AC(i, j);
  lf.B1 = Mat(n, spec.BC1.cols());
  lf.B2 = Mat(n, spec.BC2.cols());
  for (int i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < spec.BC1.cols(); ++j) lf.B1(i, j) = spec.BC1(i, j);
    for (std::size_t j = 0; j < spec.BC2.cols(); ++j) lf.B2(i, j) = spec.BC2(i, j);
  }
  lf.c = Vec(n, 0.0);
  lf.c[np] = 1.0;  // clock rate

  AffineMap lg;
  lg.A = Mat(n, n);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j) lg.A(i, j) = spec.AD(i, j);
  lg.B1 = Mat(n, spec.BD1.cols());
  lg.B2 = Mat(n, spec.BD2.cols());
  for (int i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < spec.BD1.cols(); ++j) lg.B1(i, j) = spec.BD1(i, j);
    for (std::size_t j = 0; j < spec.BD2.cols(); ++j) lg.B2(i, j) = spec.BD2(i, j);
  }
  lg.c = Vec(n, 0.0);  // clock resets to 0

  sys.f = [lf](const Vec& x, const Vec& u) {
    Vec r = vadd(mat_vec(lf.A, x), lf.c);
    int m1 = static_cast<int>(lf.B1.cols());
    for (std::size_t i = 0; i < r.size(); ++i) {
      for (int j = 0; j < m1; ++j) r[i] += lf.B1(i, j) * u[j];
      for (std::size_t j = 0; j < lf.B2.cols(); ++j) r[i] += lf.B2(i, j) * u[m1 + j];
    }
    return r;
  };
  sys.g = [lg](const Vec& x, const Vec& u) {
    Vec r = vadd(mat_vec(lg.A, x), lg.c);
    int m1 = static_cast<int>(lg.B1.cols());
    for (std::size_t i = 0; i < r.size(); ++i) {
      for (int j = 0; j < m1; ++j) r[i] += lg.B1(i, j) * u[j];
      for (std::size_t j = 0; j < lg.B2.cols(); ++j) r[i] += lg.B2(i, j) * u[m1 + j];
    }
    return r;
  };
  sys.lin_f = lf;
  sys.lin_g = lg;

  const int ti = np;
  sys.C.member = [ti, T2](const Vec& x, const Vec&) {
    return x[ti] >= -kSetTol && x[ti] <= T2 + kSetTol;
  };
  sys.C.margin = [ti, T2](const Vec& x) { return T2 - x[ti]; };
  sys.D.member = [ti, T1, T2](const Vec& x, const Vec&) {
    return std::fabs(x[ti] - T1) <= kSetTol || std::fabs(x[ti] - T2) <= kSetTol;
  };
  sys.D.margins.push_back([ti, T1](const Vec& x) { return x[ti] - T1; });
  if (T2 > T1)
    sys.D.margins.push_back([ti, T2](const Vec& x) { return x[ti] - T2; });
  return sys;
}

}  // namespace hygame
