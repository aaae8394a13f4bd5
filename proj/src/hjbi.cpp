#include "hygame/hjbi.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hygame/errors.hpp"

namespace hygame {

namespace {

// Visit the product grid with k points per dimension (midpoint when k == 1).
// A zero-dimensional box yields exactly one empty point.
template <class F>
void for_each_grid(const Vec& lo, const Vec& hi, int k, F&& fn) {
  const std::size_t m = lo.size();
  if (m == 0) {
    fn(Vec{});
    return;
  }
  std::vector<int> idx(m, 0);
  Vec u(m);
  while (true) {
    for (std::size_t d = 0; d < m; ++d)
      u[d] = (k == 1) ? 0.5 * (lo[d] + hi[d])
                      : lo[d] + (hi[d] - lo[d]) * idx[d] / (k - 1);
    fn(u);
    std::size_t d = 0;
    while (d < m && ++idx[d] == k) {
      idx[d] = 0;
      ++d;
    }
    if (d == m) break;
  }
}

void split_box(const Vec& lo, const Vec& hi, int m1, Vec& lo1, Vec& hi1,
               Vec& lo2, Vec& hi2) {
  lo1.assign(lo.begin(), lo.begin() + m1);
  hi1.assign(hi.begin(), hi.begin() + m1);
  lo2.assign(lo.begin() + m1, lo.end());
  hi2.assign(hi.begin() + m1, hi.end());
}

// Shrink a box to +-1.2 grid spacings around a center, clamped to the
// original bounds.
void shrink_around(const Vec& center, const Vec& lo0, const Vec& hi0, int k,
                   Vec& lo, Vec& hi) {
  for (std::size_t d = 0; d < center.size(); ++d) {
    const double span = (hi[d] - lo[d]) / std::max(1, k - 1);
    lo[d] = std::max(lo0[d], center[d] - 1.2 * span);
    hi[d] = std::min(hi0[d], center[d] + 1.2 * span);
  }
}

using Objective = std::function<double(const Vec&, const Vec&)>;

double grid_minmax(const Objective& phi, Vec lo1, Vec hi1, Vec lo2, Vec hi2,
                   int k, int rounds, Vec& arg1, Vec& arg2) {
  const Vec lo1_0 = lo1, hi1_0 = hi1, lo2_0 = lo2, hi2_0 = hi2;
  double best = 0.0;
  for (int r = 0; r < std::max(1, rounds); ++r) {
    double outer_best = 0.0;
    bool outer_first = true;
    for_each_grid(lo1, hi1, k, [&](const Vec& u1) {
      double inner_best = 0.0;
      bool inner_first = true;
      Vec inner_arg;
      for_each_grid(lo2, hi2, k, [&](const Vec& u2) {
        const double v = phi(u1, u2);
        if (inner_first || v > inner_best) {
          inner_best = v;
          inner_arg = u2;
          inner_first = false;
        }
      });
      if (outer_first || inner_best < outer_best) {
        outer_best = inner_best;
        arg1 = u1;
        arg2 = inner_arg;
        outer_first = false;
      }
    });
    best = outer_best;
    shrink_around(arg1, lo1_0, hi1_0, k, lo1, hi1);
    shrink_around(arg2, lo2_0, hi2_0, k, lo2, hi2);
  }
  return best;
}

double grid_maxmin(const Objective& phi, Vec lo1, Vec hi1, Vec lo2, Vec hi2,
                   int k, int rounds, Vec& arg1, Vec& arg2) {
  Vec a2, a1;
  const Objective flipped = [&phi](const Vec& u2, const Vec& u1) {
    return -phi(u1, u2);
  };
  const double v = grid_minmax(flipped, lo2, hi2, lo1, hi1, k, rounds, a2, a1);
  arg1 = a1;
  arg2 = a2;
  return -v;
}

struct JumpQuadData {
  Mat M1, M2, M12;  // curvatures RDi + Bi'P Bj
  Vec b1, b2;       // Bi'(P g0 + c/2)
  Mat B1t_P_B2;
};

}  // namespace

MinMaxResult hamiltonian_minmax(const GameSystem& sys, const StageCosts& costs,
                                const ValueCertificate& V, const Vec& x,
                                const Vec& u_lo, const Vec& u_hi,
                                const GridSpec& grid) {
  const int m1 = sys.dims.mC1, m2 = sys.dims.mC2;
  const Vec p = V.grad(x);
  MinMaxResult out;

  if (m1 == 0 && m2 == 0) {
    out.value = costs.LC(x, Vec{}) + dot(p, sys.f(x, Vec{}));
    out.analytic = true;
    return out;
  }

  const bool analytic = sys.lin_f.has_value() && costs.flow_quad.has_value();
  if (analytic) {
    const AffineMap& lf = *sys.lin_f;
    const QuadFlowCost& qc = *costs.flow_quad;
    const double scale = 1.0 + norm_inf(p);
    if (m1 > 0 && sym_eig_min(qc.RC1) <= 1e-12 * scale)
      throw DefinitenessViolated(
          "flow curvature RC1 must be positive definite");
    if (m2 > 0 && sym_eig_max(qc.RC2) >= -1e-12 * scale)
      throw DefinitenessViolated(
          "flow curvature RC2 must be negative definite");
    Vec u1, u2;
    if (m1 > 0)
      u1 = vscale(-0.5, lu_solve(lu_factor(qc.RC1), mat_tvec(lf.B1, p)));
    if (m2 > 0)
      u2 = vscale(-0.5, lu_solve(lu_factor(qc.RC2), mat_tvec(lf.B2, p)));
    const Vec u = vcat(u1, u2);
    out.value = costs.LC(x, u) + dot(p, sys.f(x, u));
    out.u1 = u1;
    out.u2 = u2;
    // The objective splits by player, so the two optimization orders agree
    // identically.
    out.isaacs_gap = 0.0;
    out.analytic = true;
    return out;
  }

  if (static_cast<int>(u_lo.size()) != m1 + m2 || u_lo.size() != u_hi.size())
    throw NoInputBox(
        "grid search over flow inputs needs bounds for every component");
  const Objective phi = [&](const Vec& u1, const Vec& u2) {
    const Vec u = vcat(u1, u2);
    return costs.LC(x, u) + dot(p, sys.f(x, u));
  };
  Vec lo1, hi1, lo2, hi2;
  split_box(u_lo, u_hi, m1, lo1, hi1, lo2, hi2);
  Vec a1, a2, b1, b2;
  const double mm = grid_minmax(phi, lo1, hi1, lo2, hi2, grid.input_points,
                                grid.refine_rounds, a1, a2);
  const double Mm = grid_maxmin(phi, lo1, hi1, lo2, hi2, grid.input_points,
                                grid.refine_rounds, b1, b2);
  out.value = mm;
  out.u1 = a1;
  out.u2 = a2;
  out.isaacs_gap = std::fabs(mm - Mm);
  return out;
}

MinMaxResult jump_minmax(const GameSystem& sys, const StageCosts& costs,
                         const ValueCertificate& V, const Vec& x,
                         const Vec& u_lo, const Vec& u_hi,
                         const GridSpec& grid) {
  const int m1 = sys.dims.mD1, m2 = sys.dims.mD2;
  MinMaxResult out;
  if (m1 == 0 && m2 == 0) {
    out.value = costs.LD(x, Vec{}) + V.value(sys.g(x, Vec{}));
    out.analytic = true;
    return out;
  }

  const Objective phi = [&](const Vec& u1, const Vec& u2) {
    const Vec u = vcat(u1, u2);
    return costs.LD(x, u) + V.value(sys.g(x, u));
  };

  const bool analytic = sys.lin_g.has_value() && costs.jump_quad.has_value() &&
                        V.has_quad();
  if (analytic) {
    const AffineMap& lg = *sys.lin_g;
    const QuadJumpCost& qd = *costs.jump_quad;
    const Vec g0 = sys.g(x, Vec(static_cast<std::size_t>(m1 + m2), 0.0));
    const QuadForm qf = V.quad_at(g0);
    const Mat& P = qf.P;
    const Mat M1 = sym_part(qd.RD1 + lg.B1.transpose() * P * lg.B1);
    const Mat M2 = sym_part(qd.RD2 + lg.B2.transpose() * P * lg.B2);
    const Mat M12 = lg.B1.transpose() * P * lg.B2;
    const double scale = 1.0 + max_abs(P);
    if (m1 > 0 && sym_eig_min(M1) <= 1e-12 * scale)
      throw DefinitenessViolated(
          "jump curvature RD1 + BD1'P BD1 must be positive definite");
    if (m2 > 0 && sym_eig_max(M2) >= -1e-12 * scale)
      throw DefinitenessViolated(
          "jump curvature RD2 + BD2'P BD2 must be negative definite");

    Vec w = mat_vec(P, g0);
    w = vaxpy(w, 0.5, qf.c);
    const Vec bb1 = mat_tvec(lg.B1, w);
    const Vec bb2 = mat_tvec(lg.B2, w);

    Vec u1, u2;
    if (m1 == 0) {
      u2 = vscale(-1.0, lu_solve(lu_factor(M2), bb2));
    } else if (m2 == 0) {
      u1 = vscale(-1.0, lu_solve(lu_factor(M1), bb1));
    } else {
      const Mat Rv = block2x2(M1, M12, M12.transpose(), M2);
      Vec b = vcat(bb1, bb2);
      Vec u;
      try {
        u = lu_solve(lu_factor(Rv), vscale(-1.0, b));
      } catch (const SingularMatrix&) {
        throw SingularRv("jump coupling matrix is singular at this state");
      }
      u1.assign(u.begin(), u.begin() + m1);
      u2.assign(u.begin() + m1, u.end());
    }
    out.u1 = u1;
    out.u2 = u2;
    out.value = phi(u1, u2);
    out.analytic = true;

    // Convex-concave curvature makes the orders agree; audit by playing each
    // optimizer against the other's closed-form best response.
    if (m1 > 0 && m2 > 0) {
      const Vec r2 = vscale(
          -1.0, lu_solve(lu_factor(M2),
                         vadd(bb2, mat_tvec(M12, u1))));  // argmax vs u1
      const Vec r1 = vscale(
          -1.0,
          lu_solve(lu_factor(M1), vadd(bb1, mat_vec(M12, u2))));  // argmin
      out.isaacs_gap = std::fabs(phi(u1, r2) - phi(r1, u2));
    }
    return out;
  }

  if (static_cast<int>(u_lo.size()) != m1 + m2 || u_lo.size() != u_hi.size())
    throw NoInputBox(
        "grid search over jump inputs needs bounds for every component");
  Vec lo1, hi1, lo2, hi2;
  split_box(u_lo, u_hi, m1, lo1, hi1, lo2, hi2);
  Vec a1, a2, b1, b2;
  const double mm = grid_minmax(phi, lo1, hi1, lo2, hi2, grid.input_points,
                                grid.refine_rounds, a1, a2);
  const double Mm = grid_maxmin(phi, lo1, hi1, lo2, hi2, grid.input_points,
                                grid.refine_rounds, b1, b2);
  out.value = mm;
  out.u1 = a1;
  out.u2 = a2;
  out.isaacs_gap = std::fabs(mm - Mm);
  return out;
}

HjbiReport check_hjbi(const Scenario& sc, const ValueCertificate& V,
                      const GridSpec& grid, double tol) {
  if (sc.grid_lo.empty() || sc.grid_lo.size() != sc.grid_hi.size())
    throw NoInputBox("scenario provides no state sampling box");
  HjbiReport rep;
  const Vec zero_ud(static_cast<std::size_t>(sc.sys.dims.mD()), 0.0);
  for_each_grid(sc.grid_lo, sc.grid_hi, grid.state_points, [&](const Vec& x) {
    const bool in_c =
        sc.sys.C.margin ? sc.sys.C.margin(x) >= -kSetTol
                        : sc.sys.C.member(x, Vec(sc.sys.dims.mC(), 0.0));
    if (in_c) {
      const MinMaxResult mm = hamiltonian_minmax(
          sc.sys, sc.costs, V, x, sc.u_flow_lo, sc.u_flow_hi, grid);
      ++rep.flow_points;
      rep.isaacs_worst = std::max(rep.isaacs_worst, mm.isaacs_gap);
      if (std::fabs(mm.value) > rep.flow_worst) {
        rep.flow_worst = std::fabs(mm.value);
        rep.flow_argworst = x;
      }
    }
    if (sc.sys.D.member(x, zero_ud)) {
      const MinMaxResult mm = jump_minmax(sc.sys, sc.costs, V, x,
                                          sc.u_jump_lo, sc.u_jump_hi, grid);
      ++rep.jump_points;
      rep.isaacs_worst = std::max(rep.isaacs_worst, mm.isaacs_gap);
      const double r = std::fabs(mm.value - V.value(x));
      if (r > rep.jump_worst) {
        rep.jump_worst = r;
        rep.jump_argworst = x;
      }
    }
  });
  rep.passed = rep.flow_worst <= tol && rep.jump_worst <= tol;
  return rep;
}

FeedbackLaw synthesize_feedback(const Scenario& sc, const ValueCertificate& V) {
  const GameSystem& sys = sc.sys;
  FeedbackLaw law;
  law.dims = sys.dims;

  if (sys.dims.mC() > 0) {
    if (!sys.lin_f || !sc.costs.flow_quad)
      throw Error(
          "flow-channel synthesis needs affine flow data and quadratic flow "
          "cost");
    const AffineMap lf = *sys.lin_f;
    const QuadFlowCost qc = *sc.costs.flow_quad;
    const auto grad = V.grad;  // copy: the law outlives this call
    if (sys.dims.mC1 > 0) {
      const Mat R1inv = inverse(qc.RC1);
      law.kC1 = [R1inv, lf, grad](const Vec& x) {
        return vscale(-0.5, mat_vec(R1inv, mat_tvec(lf.B1, grad(x))));
      };
    }
    if (sys.dims.mC2 > 0) {
      const Mat R2inv = inverse(qc.RC2);
      law.kC2 = [R2inv, lf, grad](const Vec& x) {
        return vscale(-0.5, mat_vec(R2inv, mat_tvec(lf.B2, grad(x))));
      };
    }
  }

  if (sys.dims.mD() > 0) {
    if (!sys.lin_g || !sc.costs.jump_quad || !V.has_quad())
      throw Error(
          "jump-channel synthesis needs affine jump data, quadratic jump "
          "cost, and quadratic value data");
    const AffineMap lg = *sys.lin_g;
    const QuadJumpCost qd = *sc.costs.jump_quad;
    const int m1 = sys.dims.mD1, m2 = sys.dims.mD2;
    const auto gmap = sys.g;       // copies: the law outlives this call
    const auto quad = V.quad_at;
    auto stationary = [lg, qd, m1, m2, gmap, quad](const Vec& x) {
      const Vec g0 = gmap(x, Vec(static_cast<std::size_t>(m1 + m2), 0.0));
      const QuadForm qf = quad(g0);
      const Mat& P = qf.P;
      Vec w = mat_vec(P, g0);
      w = vaxpy(w, 0.5, qf.c);
      const Vec bb1 = mat_tvec(lg.B1, w);
      const Vec bb2 = mat_tvec(lg.B2, w);
      if (m1 == 0)
        return vscale(-1.0, lu_solve(lu_factor(sym_part(
                                         qd.RD2 + lg.B2.transpose() * P *
                                                      lg.B2)),
                                     bb2));
      if (m2 == 0)
        return vscale(-1.0, lu_solve(lu_factor(sym_part(
                                         qd.RD1 + lg.B1.transpose() * P *
                                                      lg.B1)),
                                     bb1));
      const Mat M1 = sym_part(qd.RD1 + lg.B1.transpose() * P * lg.B1);
      const Mat M2 = sym_part(qd.RD2 + lg.B2.transpose() * P * lg.B2);
      const Mat M12 = lg.B1.transpose() * P * lg.B2;
      const Mat Rv = block2x2(M1, M12, M12.transpose(), M2);
      try {
        return lu_solve(lu_factor(Rv), vscale(-1.0, vcat(bb1, bb2)));
      } catch (const SingularMatrix&) {
        throw SingularRv("jump coupling matrix is singular at this state");
      }
    };
    if (m1 > 0)
      law.kD1 = [stationary, m1](const Vec& x) {
        const Vec u = stationary(x);
        return Vec(u.begin(), u.begin() + m1);
      };
    if (m2 > 0)
      law.kD2 = [stationary, m1](const Vec& x) {
        const Vec u = stationary(x);
        return Vec(u.begin() + m1, u.end());
      };
  }
  return law;
}

ConditionReport check_equivalent_conditions(const Scenario& sc,
                                            const ValueCertificate& V,
                                            const FeedbackLaw& law,
                                            const GridSpec& grid,
                                            int deviations, double tol,
                                            unsigned seed) {
  if (sc.grid_lo.empty() || sc.grid_lo.size() != sc.grid_hi.size())
    throw NoInputBox("scenario provides no state sampling box");
  const GameSystem& sys = sc.sys;
  const int mc1 = sys.dims.mC1, mc2 = sys.dims.mC2;
  const int md1 = sys.dims.mD1, md2 = sys.dims.mD2;
  if ((mc1 + mc2 > 0) &&
      static_cast<int>(sc.u_flow_lo.size()) != mc1 + mc2)
    throw NoInputBox("scenario provides no flow-input sampling box");
  if ((md1 + md2 > 0) &&
      static_cast<int>(sc.u_jump_lo.size()) != md1 + md2)
    throw NoInputBox("scenario provides no jump-input sampling box");

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](const Vec& lo, const Vec& hi, int off, int m) {
    Vec u(m);
    for (int i = 0; i < m; ++i)
      u[i] = lo[off + i] + (hi[off + i] - lo[off + i]) * unit(rng);
    return u;
  };

  ConditionReport rep;
  const Vec zero_ud(static_cast<std::size_t>(md1 + md2), 0.0);
  for_each_grid(sc.grid_lo, sc.grid_hi, grid.state_points, [&](const Vec& x) {
    const bool in_c = sys.C.margin
                          ? sys.C.margin(x) >= -kSetTol
                          : sys.C.member(x, Vec(sys.dims.mC(), 0.0));
    if (in_c) {
      ++rep.flow_points;
      const Vec p = V.grad(x);
      const Vec k1 = law.dims.mC1 ? law.kC1(x) : Vec{};
      const Vec k2 = law.dims.mC2 ? law.kC2(x) : Vec{};
      auto flow_val = [&](const Vec& u1, const Vec& u2) {
        const Vec u = vcat(u1, u2);
        return sc.costs.LC(x, u) + dot(p, sys.f(x, u));
      };
      rep.eq_flow = std::max(rep.eq_flow, std::fabs(flow_val(k1, k2)));
      for (int d = 0; d < deviations && mc1 > 0; ++d)
        rep.dev_flow_min = std::min(
            rep.dev_flow_min,
            flow_val(draw(sc.u_flow_lo, sc.u_flow_hi, 0, mc1), k2));
      for (int d = 0; d < deviations && mc2 > 0; ++d)
        rep.dev_flow_max = std::max(
            rep.dev_flow_max,
            flow_val(k1, draw(sc.u_flow_lo, sc.u_flow_hi, mc1, mc2)));
    }
    if (sys.D.member(x, zero_ud)) {
      ++rep.jump_points;
      const double vx = V.value(x);
      const Vec k1 = law.dims.mD1 ? law.kD1(x) : Vec{};
      const Vec k2 = law.dims.mD2 ? law.kD2(x) : Vec{};
      auto jump_val = [&](const Vec& u1, const Vec& u2) {
        const Vec u = vcat(u1, u2);
        return sc.costs.LD(x, u) + V.value(sys.g(x, u)) - vx;
      };
      rep.eq_jump = std::max(rep.eq_jump, std::fabs(jump_val(k1, k2)));
      for (int d = 0; d < deviations && md1 > 0; ++d)
        rep.dev_jump_min = std::min(
            rep.dev_jump_min,
            jump_val(draw(sc.u_jump_lo, sc.u_jump_hi, 0, md1), k2));
      for (int d = 0; d < deviations && md2 > 0; ++d)
        rep.dev_jump_max = std::max(
            rep.dev_jump_max,
            jump_val(k1, draw(sc.u_jump_lo, sc.u_jump_hi, md1, md2)));
    }
  });
  rep.passed = rep.eq_flow <= tol && rep.dev_flow_min >= -tol &&
               rep.dev_flow_max <= tol && rep.eq_jump <= tol &&
               rep.dev_jump_min >= -tol && rep.dev_jump_max <= tol;
  return rep;
}

SweepResult saddle_sweep(const Scenario& sc, const FeedbackLaw& law,
                         const std::vector<double>& eps_u,
                         const std::vector<double>& eps_w,
                         const SimConfig& cfg, double rel_slack) {
  SweepResult out;
  out.eps_u = eps_u;
  out.eps_w = eps_w;
  out.J = Mat(eps_u.size(), eps_w.size());
  for (std::size_t i = 0; i < eps_u.size(); ++i) {
    for (std::size_t k = 0; k < eps_w.size(); ++k) {
      const FeedbackLaw scaled = scale_law(law, eps_u[i], eps_w[k]);
      const ClosedLoopSystem cl = close_loop(sc.sys, scaled);
      const SolutionPair sp = simulate(cl, sc.default_x0, cfg);
      out.J(i, k) = evaluate_cost(sp, sc.costs).total;
    }
  }
  // Reference play and the two one-sided rows are run at exactly 1 so the
  // comparison holds even when the sweep grid skips the nominal gains.
  auto play_scaled = [&](double su, double sw) {
    const FeedbackLaw scaled = scale_law(law, su, sw);
    const ClosedLoopSystem cl = close_loop(sc.sys, scaled);
    return evaluate_cost(simulate(cl, sc.default_x0, cfg), sc.costs).total;
  };
  out.j_star = play_scaled(1.0, 1.0);
  for (double ew : eps_w)
    out.worst_low = std::max(out.worst_low, play_scaled(1.0, ew) - out.j_star);
  for (double eu : eps_u)
    out.worst_high = std::max(out.worst_high, out.j_star - play_scaled(eu, 1.0));
  const double slack = rel_slack * (1.0 + std::fabs(out.j_star));
  out.saddle_ordering = out.worst_low <= slack && out.worst_high <= slack;
  return out;
}

}  // namespace hygame
