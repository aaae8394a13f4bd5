#include "hygame/cost.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hygame/errors.hpp"

namespace hygame {

double certificate_gradient_check(const ValueCertificate& v, const Vec& lo,
                                  const Vec& hi, int points, double step_scale,
                                  unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const std::size_t n = lo.size();
  double worst = 0.0;
  for (int p = 0; p < points; ++p) {
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i)
      x[i] = lo[i] + (hi[i] - lo[i]) * uni(rng);
    const Vec g = v.grad(x);
    Vec fd(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double h = step_scale * std::max(1.0, hi[i] - lo[i]);
      Vec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      fd[i] = (v.value(xp) - v.value(xm)) / (2.0 * h);
    }
    const double denom = std::max(norm2(g), 1e-8);
    worst = std::max(worst, norm2(vsub(fd, g)) / denom);
  }
  return worst;
}

namespace {

// Composite quadrature over one interval's samples: Simpson on consecutive
// sample pairs (3-point Newton-Cotes adapted to uneven spacing), trapezoid
// on a leftover final subinterval.
double integrate_samples(const std::vector<double>& t,
                         const std::vector<double>& y) {
  const std::size_t m = t.size();
  if (m < 2) return 0.0;
  double acc = 0.0;
  std::size_t k = 0;
  while (k + 2 < m) {
    const double h0 = t[k + 1] - t[k], h1 = t[k + 2] - t[k + 1];
    if (h0 <= 0.0 || h1 <= 0.0) { ++k; continue; }
    const double H = h0 + h1;
    // Exact for quadratics through the three samples.
    acc += H / 6.0 * ((2.0 - h1 / h0) * y[k] + H * H / (h0 * h1) * y[k + 1] +
                      (2.0 - h0 / h1) * y[k + 2]);
    k += 2;
  }
  if (k + 1 < m) acc += 0.5 * (t[k + 1] - t[k]) * (y[k] + y[k + 1]);
  return acc;
}

}  // namespace

CostReport evaluate_cost(const SolutionPair& sp, const StageCosts& costs) {
  const auto& ivs = sp.arc.intervals;
  if (ivs.empty() || ivs.front().t.empty())
    throw EmptyDomain("evaluate_cost: empty solution pair");

  CostReport rep;
  const std::size_t J = ivs.size();
  for (std::size_t j = 0; j < J; ++j) {
    const auto& iv = ivs[j];
    IntervalCost ic;
    ic.j = static_cast<int>(j);
    std::vector<double> lc(iv.t.size());
    for (std::size_t k = 0; k < iv.t.size(); ++k) {
      Vec u;
      if (sp.input.dims.mC() > 0) u = sp.input.flow[j].v[k];
      lc[k] = costs.LC(iv.v[k], u);
    }
    ic.flow = integrate_samples(iv.t, lc);
    if (j + 1 < J) {
      const Vec& pre = iv.v.back();
      ic.jump = costs.LD(pre, sp.input.jumps[j]);
    }
    rep.flow_cost += ic.flow;
    rep.jump_cost += ic.jump;
    rep.per_interval.push_back(ic);
  }
  rep.terminal_cost = costs.q(ivs.back().v.back());

  // Settledness of the terminal limit: variation of q over the trailing
  // tenth of all samples.
  std::vector<double> qs;
  for (const auto& iv : ivs)
    for (const auto& x : iv.v) qs.push_back(costs.q(x));
  const std::size_t tail = std::max<std::size_t>(2, qs.size() / 10);
  double qmin = qs.back(), qmax = qs.back();
  for (std::size_t k = qs.size() - std::min(tail, qs.size()); k < qs.size(); ++k) {
    qmin = std::min(qmin, qs[k]);
    qmax = std::max(qmax, qs[k]);
  }
  rep.tail_variation = qmax - qmin;
  rep.terminal_converged = rep.tail_variation < 1e-6;

  // Geometric tail bound for Zeno-truncated pairs: if the last few jump
  // costs decay with a stable ratio < 1, bound the dropped remainder by the
  // geometric series.
  if (sp.status.reason == StopReason::ZenoTruncated) {
    std::vector<double> jc;
    for (const auto& ic : rep.per_interval)
      if (ic.jump > 0.0) jc.push_back(ic.jump);
    if (jc.size() >= 3) {
      const double r1 = jc[jc.size() - 1] / jc[jc.size() - 2];
      const double r2 = jc[jc.size() - 2] / jc[jc.size() - 3];
      if (r1 > 0.0 && r1 < 1.0 && std::fabs(r1 - r2) < 0.05) {
        rep.tail_bound = jc.back() * r1 / (1.0 - r1);
      }
    }
  }

  rep.total = rep.flow_cost + rep.jump_cost + rep.terminal_cost;
  return rep;
}

namespace {

CertCheck run_check(const std::vector<std::pair<HybridTime, double>>& residuals,
                    CertSense sense, double tol) {
  CertCheck out;
  out.samples = static_cast<int>(residuals.size());
  double worst_mag = -1.0;
  for (const auto& [at, r] : residuals) {
    bool ok = true;
    double viol = 0.0;
    switch (sense) {
      case CertSense::UpperBound: ok = r <= tol; viol = r; break;
      case CertSense::LowerBound: ok = r >= -tol; viol = -r; break;
      case CertSense::Exact: ok = std::fabs(r) <= tol; viol = std::fabs(r); break;
    }
    if (!ok) out.passed = false;
    if (viol > worst_mag) {
      worst_mag = viol;
      out.worst = r;
      out.where = at;
    }
  }
  return out;
}

}  // namespace

CertCheck check_flow_certificate(const SolutionPair& sp, const GameSystem& sys,
                                 const StageCosts& costs,
                                 const ValueCertificate& v, CertSense sense,
                                 double tol) {
  std::vector<std::pair<HybridTime, double>> rs;
  for (std::size_t j = 0; j < sp.arc.intervals.size(); ++j) {
    const auto& iv = sp.arc.intervals[j];
    for (std::size_t k = 0; k < iv.t.size(); ++k) {
      Vec u;
      if (sp.input.dims.mC() > 0) u = sp.input.flow[j].v[k];
      const Vec& x = iv.v[k];
      const double r = costs.LC(x, u) + dot(v.grad(x), sys.f(x, u));
      rs.push_back({{iv.t[k], static_cast<int>(j)}, r});
    }
  }
  return run_check(rs, sense, tol);
}

CertCheck check_jump_certificate(const SolutionPair& sp, const GameSystem& sys,
                                 const StageCosts& costs,
                                 const ValueCertificate& v, CertSense sense,
                                 double tol) {
  (void)sys;  // post-jump states are stored in the arc, no need to re-apply g
  std::vector<std::pair<HybridTime, double>> rs;
  const auto& ivs = sp.arc.intervals;
  for (std::size_t j = 0; j + 1 < ivs.size(); ++j) {
    const Vec& pre = ivs[j].v.back();
    const Vec& post = ivs[j + 1].v.front();
    const Vec& ud = sp.input.jumps[j];
    const double r = costs.LD(pre, ud) + v.value(post) - v.value(pre);
    rs.push_back({{ivs[j].t1(), static_cast<int>(j)}, r});
  }
  return run_check(rs, sense, tol);
}

TelescopeResult telescoped_bound(const SolutionPair& sp, const GameSystem& sys,
                                 const StageCosts& costs,
                                 const ValueCertificate& v, CertSense sense,
                                 double tol) {
  const CertCheck cf = check_flow_certificate(sp, sys, costs, v, sense, tol);
  if (!cf.passed)
    throw CertificateViolated(
        "telescoped_bound: flow certificate fails, residual " +
        std::to_string(cf.worst) + " at t=" + std::to_string(cf.where.t) +
        " j=" + std::to_string(cf.where.j));
  const CertCheck cj = check_jump_certificate(sp, sys, costs, v, sense, tol);
  if (!cj.passed)
    throw CertificateViolated(
        "telescoped_bound: jump certificate fails, residual " +
        std::to_string(cj.worst) + " at t=" + std::to_string(cj.where.t) +
        " j=" + std::to_string(cj.where.j));

  const CostReport rep = evaluate_cost(sp, costs);
  TelescopeResult out;
  out.v_start = v.value(sp.arc.intervals.front().v.front());
  out.partial_plus_final =
      rep.flow_cost + rep.jump_cost + v.value(sp.arc.intervals.back().v.back());
  out.gap = out.partial_plus_final - out.v_start;
  switch (sense) {
    case CertSense::UpperBound: out.passed = out.gap <= tol; break;
    case CertSense::LowerBound: out.passed = out.gap >= -tol; break;
    case CertSense::Exact: out.passed = std::fabs(out.gap) <= tol; break;
  }
  return out;
}

}  // namespace hygame
