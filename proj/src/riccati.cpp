#include "hygame/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "hygame/errors.hpp"

namespace hygame {

namespace {

// Stack [top; bottom] by rows.
Mat vstack(const Mat& top, const Mat& bottom) {
  if (top.rows() == 0) return bottom;
  if (bottom.rows() == 0) return top;
  Mat out(top.rows() + bottom.rows(), top.cols());
  for (std::size_t i = 0; i < top.rows(); ++i)
    for (std::size_t j = 0; j < top.cols(); ++j) out(i, j) = top(i, j);
  for (std::size_t i = 0; i < bottom.rows(); ++i)
    for (std::size_t j = 0; j < bottom.cols(); ++j)
      out(top.rows() + i, j) = bottom(i, j);
  return out;
}

}  // namespace

Mat TauGrid::eval(double t) const {
  const double t0 = tau.front(), t1 = tau.back();
  t = std::clamp(t, t0, t1);
  auto it = std::upper_bound(tau.begin(), tau.end(), t);
  std::size_t i = (it == tau.begin()) ? 0 : (it - tau.begin() - 1);
  if (i + 1 >= tau.size()) i = tau.size() - 2;
  const double h = tau[i + 1] - tau[i];
  const double s = (t - tau[i]) / h;
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  Mat out = h00 * P[i];
  out += (h10 * h) * dP[i];
  out += h01 * P[i + 1];
  out += (h11 * h) * dP[i + 1];
  return out;
}

Mat TauGrid::deriv(double t) const {
  const double t0 = tau.front(), t1 = tau.back();
  t = std::clamp(t, t0, t1);
  auto it = std::upper_bound(tau.begin(), tau.end(), t);
  std::size_t i = (it == tau.begin()) ? 0 : (it - tau.begin() - 1);
  if (i + 1 >= tau.size()) i = tau.size() - 2;
  const double h = tau[i + 1] - tau[i];
  const double s = (t - tau[i]) / h;
  const double d00 = (6.0 * s * s - 6.0 * s) / h;
  const double d10 = 3.0 * s * s - 4.0 * s + 1.0;
  const double d01 = (6.0 * s - 6.0 * s * s) / h;
  const double d11 = 3.0 * s * s - 2.0 * s;
  Mat out = d00 * P[i];
  out += d10 * dP[i];
  out += d01 * P[i + 1];
  out += d11 * dP[i + 1];
  return out;
}

Mat flow_quadratic_term(const QuadraticGameSpec& spec) {
  const std::size_t n = spec.AC.rows();
  Mat S(n, n);
  if (spec.BC1.cols() > 0)
    S += spec.BC1 * lu_solve(lu_factor(spec.RC1), spec.BC1.transpose());
  if (spec.BC2.cols() > 0)
    S += spec.BC2 * lu_solve(lu_factor(spec.RC2), spec.BC2.transpose());
  return sym_part(S);
}

Mat care_residual(const QuadraticGameSpec& spec, const Mat& P) {
  const Mat S = flow_quadratic_term(spec);
  return sym_part(spec.QC + P * spec.AC + spec.AC.transpose() * P -
                  P * S * P);
}

Mat jump_update(const QuadraticGameSpec& spec, const Mat& P) {
  const Mat& AD = spec.AD;
  const Mat& B1 = spec.BD1;
  const Mat& B2 = spec.BD2;
  const std::size_t m1 = B1.cols(), m2 = B2.cols();
  const Mat APA = AD.transpose() * P * AD;
  if (m1 == 0 && m2 == 0) return sym_part(spec.QD + APA);

  const Mat M1 = sym_part(spec.RD1 + B1.transpose() * P * B1);
  const Mat M2 = sym_part(spec.RD2 + B2.transpose() * P * B2);
  const double scale = 1.0 + max_abs(P);
  if (m1 > 0 && sym_eig_min(M1) < -1e-9 * scale)
    throw DefinitenessViolated(
        "minimizer's jump curvature RD1 + BD1'P BD1 has a negative "
        "eigenvalue");
  if (m2 > 0 && sym_eig_max(M2) > 1e-9 * scale)
    throw DefinitenessViolated(
        "maximizer's jump curvature RD2 + BD2'P BD2 has a positive "
        "eigenvalue");

  const Mat M12 = B1.transpose() * P * B2;
  Mat Rv, W;
  if (m1 == 0) {
    Rv = M2;
    W = B2.transpose() * P * AD;
  } else if (m2 == 0) {
    Rv = M1;
    W = B1.transpose() * P * AD;
  } else {
    Rv = block2x2(M1, M12, M12.transpose(), M2);
    W = vstack(B1.transpose() * P * AD, B2.transpose() * P * AD);
  }
  Mat X;
  try {
    X = lu_solve(lu_factor(Rv), W);
  } catch (const SingularMatrix&) {
    throw SingularRv("jump coupling matrix is singular at this P");
  }
  return sym_part(spec.QD + APA - W.transpose() * X);
}

Mat dare_residual(const QuadraticGameSpec& spec, const Mat& P) {
  return jump_update(spec, P) - P;
}

void flow_gains(const QuadraticGameSpec& spec, const Mat& P, Mat& KC1,
                Mat& KC2) {
  KC1 = Mat(spec.BC1.cols(), P.cols());
  KC2 = Mat(spec.BC2.cols(), P.cols());
  if (spec.BC1.cols() > 0)
    KC1 = -lu_solve(lu_factor(spec.RC1), spec.BC1.transpose() * P);
  if (spec.BC2.cols() > 0)
    KC2 = -lu_solve(lu_factor(spec.RC2), spec.BC2.transpose() * P);
}

void jump_gains(const QuadraticGameSpec& spec, const Mat& P, Mat& KD1,
                Mat& KD2) {
  const Mat& B1 = spec.BD1;
  const Mat& B2 = spec.BD2;
  const std::size_t m1 = B1.cols(), m2 = B2.cols();
  const std::size_t n = spec.AD.cols();
  KD1 = Mat(m1, n);
  KD2 = Mat(m2, n);
  if (m1 == 0 && m2 == 0) return;
  const Mat M1 = sym_part(spec.RD1 + B1.transpose() * P * B1);
  const Mat M2 = sym_part(spec.RD2 + B2.transpose() * P * B2);
  const Mat M12 = B1.transpose() * P * B2;
  Mat Rv, W;
  if (m1 == 0) {
    Rv = M2;
    W = B2.transpose() * P * spec.AD;
  } else if (m2 == 0) {
    Rv = M1;
    W = B1.transpose() * P * spec.AD;
  } else {
    Rv = block2x2(M1, M12, M12.transpose(), M2);
    W = vstack(B1.transpose() * P * spec.AD, B2.transpose() * P * spec.AD);
  }
  Mat K;
  try {
    K = -lu_solve(lu_factor(Rv), W);
  } catch (const SingularMatrix&) {
    throw SingularRv("jump coupling matrix is singular at this P");
  }
  for (std::size_t i = 0; i < m1; ++i)
    for (std::size_t j = 0; j < n; ++j) KD1(i, j) = K(i, j);
  for (std::size_t i = 0; i < m2; ++i)
    for (std::size_t j = 0; j < n; ++j) KD2(i, j) = K(m1 + i, j);
}

TauGrid integrate_riccati_ode(const QuadraticGameSpec& spec, const Mat& PT,
                              double tau_max, int knots) {
  if (knots < 2) knots = 2;
  const Mat S = flow_quadratic_term(spec);
  const Mat ACt = spec.AC.transpose();
  auto rhs = [&](const Mat& P) {
    return sym_part(P * S * P - spec.QC - P * spec.AC - ACt * P);
  };

  TauGrid g;
  g.tau.resize(knots);
  g.P.resize(knots);
  g.dP.resize(knots);
  const double h = tau_max / (knots - 1);
  for (int i = 0; i < knots; ++i) g.tau[i] = h * i;
  g.tau.back() = tau_max;

  g.P[knots - 1] = sym_part(PT);
  g.dP[knots - 1] = rhs(g.P[knots - 1]);
  for (int i = knots - 2; i >= 0; --i) {
    const Mat& P1 = g.P[i + 1];
    const double hb = g.tau[i] - g.tau[i + 1];  // negative: stepping back
    const Mat k1 = rhs(P1);
    const Mat k2 = rhs(P1 + (0.5 * hb) * k1);
    const Mat k3 = rhs(P1 + (0.5 * hb) * k2);
    const Mat k4 = rhs(P1 + hb * k3);
    Mat Pn = P1 + (hb / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    Pn = sym_part(Pn);
    if (max_abs(Pn) > 1e12 || !std::isfinite(fro_norm(Pn)))
      throw BlowUp("value matrix escaped while integrating toward tau=0");
    g.P[i] = Pn;
    g.dP[i] = rhs(Pn);
  }
  return g;
}

PeriodicSolution solve_periodic(const QuadraticGameSpec& spec,
                                const RiccatiOptions& opt) {
  if (!spec.has_flow || !spec.has_jump || !spec.T1 || !spec.T2)
    throw Error("periodic solve needs flow and jump sides plus a timer");
  if (*spec.T1 != *spec.T2)
    throw Error("periodic solve needs equal jump thresholds");
  const double T = *spec.T2;
  const int np = spec.np;

  // Initial guess: run the discrete recursion by itself for a while.
  Mat P0 = sym_part(spec.QD);
  for (int i = 0; i < opt.warm_iters; ++i) {
    Mat next;
    try {
      next = jump_update(spec, P0);
    } catch (const Error&) {
      P0 = sym_part(spec.QC);
      break;
    }
    const double gap = fro_dist(next, P0);
    P0 = next;
    if (gap < 1e-6) break;
  }

  PeriodicSolution out;
  bool converged = false;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    const Mat PT = jump_update(spec, P0);
    const TauGrid g = integrate_riccati_ode(spec, PT, T, opt.knots);
    const Mat& back = g.P.front();
    const double gap = fro_dist(back, P0);
    if (gap < opt.tol) {
      converged = true;
      out.residual = gap;
      break;
    }
    P0 = sym_part(P0 + opt.damping * (back - P0));
  }
  if (!converged)
    throw NoConvergence("periodic value iteration did not settle in " +
                        std::to_string(opt.max_iter) + " rounds");

  out.iterations = it + 1;
  out.PT = jump_update(spec, P0);
  out.grid = integrate_riccati_ode(spec, out.PT, T, opt.knots);
  // Report the endpoint of the final sweep so the boundary value, the
  // interpolated curve, and the certificate built on it agree exactly;
  // the gap to the pre-sweep iterate is bounded by the fixed-point residual.
  out.P0 = out.grid.P.front();

  // Timer-state law: flow gains track P(tau), jump gains use the post-jump
  // value data P(0).
  InputDims dims;
  dims.mC1 = static_cast<int>(spec.BC1.cols());
  dims.mC2 = static_cast<int>(spec.BC2.cols());
  dims.mD1 = static_cast<int>(spec.BD1.cols());
  dims.mD2 = static_cast<int>(spec.BD2.cols());
  out.law.dims = dims;

  const Mat R1inv = inverse(spec.RC1);
  const Mat R2inv = inverse(spec.RC2);
  const Mat B1t = spec.BC1.transpose();
  const Mat B2t = spec.BC2.transpose();
  // The grid is shared with the certificate closures below.
  auto grid = std::make_shared<TauGrid>(out.grid);
  if (dims.mC1 > 0)
    out.law.kC1 = [grid, R1inv, B1t, np](const Vec& x) {
      const Vec xp(x.begin(), x.begin() + np);
      return vscale(-1.0, mat_vec(R1inv * B1t * grid->eval(x[np]), xp));
    };
  if (dims.mC2 > 0)
    out.law.kC2 = [grid, R2inv, B2t, np](const Vec& x) {
      const Vec xp(x.begin(), x.begin() + np);
      return vscale(-1.0, mat_vec(R2inv * B2t * grid->eval(x[np]), xp));
    };
  Mat KD1, KD2;
  jump_gains(spec, out.P0, KD1, KD2);
  if (dims.mD1 > 0) {
    out.law.kD1 = [KD1, np](const Vec& x) {
      const Vec xp(x.begin(), x.begin() + np);
      return mat_vec(KD1, xp);
    };
    Mat full(KD1.rows(), np + 1);
    for (std::size_t i = 0; i < KD1.rows(); ++i)
      for (int j = 0; j < np; ++j) full(i, j) = KD1(i, j);
    out.law.KD1 = full;
  }
  if (dims.mD2 > 0) {
    out.law.kD2 = [KD2, np](const Vec& x) {
      const Vec xp(x.begin(), x.begin() + np);
      return mat_vec(KD2, xp);
    };
    Mat full(KD2.rows(), np + 1);
    for (std::size_t i = 0; i < KD2.rows(); ++i)
      for (int j = 0; j < np; ++j) full(i, j) = KD2(i, j);
    out.law.KD2 = full;
  }

  out.V.value = [grid, np](const Vec& x) {
    const Vec xp(x.begin(), x.begin() + np);
    return quad_form(grid->eval(x[np]), xp);
  };
  out.V.grad = [grid, np](const Vec& x) {
    const Vec xp(x.begin(), x.begin() + np);
    Vec g = vscale(2.0, mat_vec(grid->eval(x[np]), xp));
    g.push_back(quad_form(grid->deriv(x[np]), xp));
    return g;
  };
  out.V.quad_at = [grid, np](const Vec& x) {
    const Mat Pt = grid->eval(x[np]);
    Mat full(np + 1, np + 1);
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < np; ++j) full(i, j) = Pt(i, j);
    return QuadForm{full, Vec(np + 1, 0.0), 0.0};
  };
  return out;
}

namespace {

struct ConstantResidual {
  const QuadraticGameSpec& spec;

  // Stacked symmetric residuals; throws only via jump_update.
  Vec operator()(const Mat& P) const {
    Vec r;
    if (spec.has_flow) {
      const Vec rf = vech(care_residual(spec, P));
      r.insert(r.end(), rf.begin(), rf.end());
    }
    if (spec.has_jump) {
      const Vec rj = vech(dare_residual(spec, P));
      r.insert(r.end(), rj.begin(), rj.end());
    }
    return r;
  }
};

double sumsq(const Vec& v) { return dot(v, v); }

}  // namespace

ConstantSolution solve_constant(const QuadraticGameSpec& spec, const Mat& P0,
                                const RiccatiOptions& opt) {
  if (!spec.has_flow && !spec.has_jump)
    throw Error("constant solve needs at least one of the two sides");
  const std::size_t n =
      spec.has_flow ? spec.AC.rows() : spec.AD.rows();
  ConstantResidual res{spec};

  Vec v = vech(sym_part(P0));
  Vec r;
  try {
    r = res(unvech(v, n));
  } catch (const Error&) {
    v = vech(Mat::identity(n));
    r = res(unvech(v, n));  // let a second failure propagate
  }

  const std::size_t k = v.size();
  int it = 0;
  int stalled = 0;
  for (; it < opt.max_iter; ++it) {
    if (norm_inf(r) < opt.tol) break;

    // Finite-difference Jacobian of the stacked residual.
    Mat J(r.size(), k);
    for (std::size_t j = 0; j < k; ++j) {
      const double eps = 1e-6 * (1.0 + std::fabs(v[j]));
      Vec vp = v;
      vp[j] += eps;
      Vec rp;
      try {
        rp = res(unvech(vp, n));
      } catch (const Error&) {
        vp[j] = v[j] - eps;  // one-sided the other way
        rp = res(unvech(vp, n));
        for (std::size_t i = 0; i < r.size(); ++i)
          J(i, j) = (r[i] - rp[i]) / eps;
        continue;
      }
      for (std::size_t i = 0; i < r.size(); ++i)
        J(i, j) = (rp[i] - r[i]) / eps;
    }

    // Regularized normal equations + backtracking.
    const Mat Jt = J.transpose();
    Mat JtJ = Jt * J;
    const double mu = 1e-12 * (1.0 + max_abs(JtJ));
    for (std::size_t d = 0; d < k; ++d) JtJ(d, d) += mu;
    const Vec g = mat_vec(Jt, r);
    Vec delta = lu_solve(lu_factor(JtJ), vscale(-1.0, g));

    const double base = sumsq(r);
    double step = 1.0;
    bool improved = false;
    Vec v_best, r_best;
    while (step > 1e-10) {
      Vec vt = vaxpy(v, step, delta);
      try {
        Vec rt = res(unvech(vt, n));
        if (sumsq(rt) < base) {
          v_best = std::move(vt);
          r_best = std::move(rt);
          improved = true;
          break;
        }
      } catch (const Error&) {
        // curvature condition failed at the trial point; shrink
      }
      step *= 0.5;
    }
    if (!improved) {
      ++stalled;
      if (stalled >= 3) break;
      continue;
    }
    const double drop = (base - sumsq(r_best)) / (base + 1e-300);
    stalled = (drop < 1e-12) ? stalled + 1 : 0;
    v = std::move(v_best);
    r = std::move(r_best);
    if (stalled >= 3) break;
  }

  const Mat P = unvech(v, n);
  ConstantSolution out;
  out.P = P;
  out.iterations = it;
  if (spec.has_flow) out.flow_residual = max_abs(care_residual(spec, P));
  if (spec.has_jump) out.jump_residual = max_abs(dare_residual(spec, P));
  const double worst = std::max(out.flow_residual, out.jump_residual);
  if (worst > 1e-6) {
    if (spec.has_flow && spec.has_jump)
      throw InconsistentEquations(
          "flow and jump stationary equations admit no common constant "
          "solution (stalled at residual " +
          std::to_string(worst) + ")");
    throw NoConvergence("stationary equation solve stalled at residual " +
                        std::to_string(worst));
  }
  if (spec.has_flow) flow_gains(spec, P, out.KC1, out.KC2);
  if (spec.has_jump) jump_gains(spec, P, out.KD1, out.KD2);
  return out;
}

ConstantSolution solve_constant(const QuadraticGameSpec& spec,
                                const RiccatiOptions& opt) {
  const std::size_t n =
      spec.has_flow ? spec.AC.rows() : spec.AD.rows();
  Mat P0 = spec.has_jump ? sym_part(spec.QD) : sym_part(spec.QC);
  if (max_abs(P0) < 1e-12) P0 = Mat::identity(n);
  if (spec.has_jump) {
    for (int i = 0; i < opt.warm_iters; ++i) {
      Mat next;
      try {
        next = jump_update(spec, P0);
      } catch (const Error&) {
        break;
      }
      const double gap = fro_dist(next, P0);
      P0 = next;
      if (gap < 1e-6) break;
    }
  }
  return solve_constant(spec, P0, opt);
}

SecuritySolution solve_security(const QuadraticGameSpec& spec,
                                const GameSystem& sys, const Vec& box_lo,
                                const Vec& box_hi, int samples, unsigned seed,
                                const RiccatiOptions& opt) {
  SecuritySolution out;
  out.jump = solve_constant(spec, opt);
  out.samples = samples;

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vec no_u;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x(box_lo.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = box_lo[i] + (box_hi[i] - box_lo[i]) * unit(rng);
    const Vec gradv = vscale(2.0, mat_vec(out.jump.P, x));
    const Vec fx = sys.f(x, no_u);
    const double bend = std::fabs(dot(gradv, fx));
    const double scale = 1.0 + norm2(gradv) * norm2(fx);
    worst = std::max(worst, bend / scale);
  }
  out.flow_orthogonality = worst;
  if (worst > 1e-7)
    throw FlowConditionViolated(
        "flow bends the candidate value: worst relative drift " +
        std::to_string(worst));
  return out;
}

ValueCertificate quadratic_certificate(const Mat& P) {
  ValueCertificate v;
  v.value = [P](const Vec& x) { return quad_form(P, x); };
  v.grad = [P](const Vec& x) { return vscale(2.0, mat_vec(P, x)); };
  v.quad_at = [P](const Vec&) {
    return QuadForm{P, Vec(P.rows(), 0.0), 0.0};
  };
  return v;
}

FeedbackLaw law_from_gains(const InputDims& dims, const Mat& KC1,
                           const Mat& KC2, const Mat& KD1, const Mat& KD2) {
  FeedbackLaw law;
  law.dims = dims;
  if (dims.mC1 > 0) {
    law.kC1 = [KC1](const Vec& x) { return mat_vec(KC1, x); };
    law.KC1 = KC1;
  }
  if (dims.mC2 > 0) {
    law.kC2 = [KC2](const Vec& x) { return mat_vec(KC2, x); };
    law.KC2 = KC2;
  }
  if (dims.mD1 > 0) {
    law.kD1 = [KD1](const Vec& x) { return mat_vec(KD1, x); };
    law.KD1 = KD1;
  }
  if (dims.mD2 > 0) {
    law.kD2 = [KD2](const Vec& x) { return mat_vec(KD2, x); };
    law.KD2 = KD2;
  }
  return law;
}

}  // namespace hygame
