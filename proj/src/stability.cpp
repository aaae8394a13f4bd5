#include "hygame/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hygame/errors.hpp"

namespace hygame {

namespace {

double dist_to_point(const Vec& x, const Vec& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double d = x[i] - c[i];
    s += d * d;
  }
  return std::sqrt(s);
}

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

double median(std::vector<double> v) {
  if (v.empty()) return 1.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return (v.size() % 2) ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

TargetSet point_target(Vec center) {
  return {[c = std::move(center)](const Vec& x) { return dist_to_point(x, c); }};
}

TargetSet ball_target(Vec center, double radius) {
  return {[c = std::move(center), radius](const Vec& x) {
    return std::max(0.0, dist_to_point(x, c) - radius);
  }};
}

TargetSet coord_target(Vec center, std::vector<std::size_t> coords) {
  return {[c = std::move(center), ix = std::move(coords)](const Vec& x) {
    double s = 0.0;
    for (std::size_t k = 0; k < ix.size(); ++k) {
      const double d = x[ix[k]] - c[k];
      s += d * d;
    }
    return std::sqrt(s);
  }};
}

TargetSet default_target(const Scenario& sc) {
  const int n = sc.sys.n;
  if (sc.sys.timer_index) {
    std::vector<std::size_t> coords;
    for (int i = 0; i < n; ++i)
      if (i != *sc.sys.timer_index) coords.push_back(i);
    Vec center(coords.size(), 0.0);
    return coord_target(std::move(center), std::move(coords));
  }
  return point_target(Vec(static_cast<std::size_t>(n), 0.0));
}

PdReport check_pd(const std::function<double(const Vec&)>& value,
                  const TargetSet& target, const Vec& box_lo,
                  const Vec& box_hi, int samples, int shells, unsigned seed,
                  double tol) {
  if (box_lo.empty() || box_lo.size() != box_hi.size())
    throw NoInputBox("positive-definiteness probe needs a sampling box");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> d(samples), v(samples);
  double dmax = 0.0;
  Vec x(box_lo.size());
  for (int s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = box_lo[i] + (box_hi[i] - box_lo[i]) * unit(rng);
    d[s] = target.distance(x);
    v[s] = value(x);
    dmax = std::max(dmax, d[s]);
  }

  PdReport rep;
  rep.samples = samples;
  rep.floor = *std::min_element(v.begin(), v.end());
  if (dmax <= 0.0) {
    // Box entirely inside the target: only the near-zero condition applies.
    for (int s = 0; s < samples; ++s)
      rep.near_worst = std::max(rep.near_worst, std::fabs(v[s]));
    rep.passed = rep.near_worst <= tol;
    return rep;
  }

  std::vector<double> bin_min(shells, nan), bin_max(shells, nan);
  rep.shell_radius.resize(shells);
  for (int k = 0; k < shells; ++k)
    rep.shell_radius[k] = dmax * (k + 1) / shells;
  for (int s = 0; s < samples; ++s) {
    int k = std::min(shells - 1, static_cast<int>(d[s] / dmax * shells));
    if (std::isnan(bin_min[k]) || v[s] < bin_min[k]) bin_min[k] = v[s];
    if (std::isnan(bin_max[k]) || v[s] > bin_max[k]) bin_max[k] = v[s];
    if (k == 0) rep.near_worst = std::max(rep.near_worst, std::fabs(v[s]));
  }

  rep.lower.assign(shells, nan);
  rep.upper.assign(shells, nan);
  double run = nan;
  for (int k = shells - 1; k >= 0; --k) {
    if (!std::isnan(bin_min[k]))
      run = std::isnan(run) ? bin_min[k] : std::min(run, bin_min[k]);
    rep.lower[k] = run;
  }
  run = nan;
  for (int k = 0; k < shells; ++k) {
    if (!std::isnan(bin_max[k]))
      run = std::isnan(run) ? bin_max[k] : std::max(run, bin_max[k]);
    rep.upper[k] = run;
  }

  bool positive_off_target = true;
  for (int k = 1; k < shells; ++k)
    if (!std::isnan(rep.lower[k]) && rep.lower[k] <= 0.0)
      positive_off_target = false;
  rep.passed = positive_off_target && rep.floor >= -tol;
  return rep;
}

DecreaseReport check_lyapunov_decrease(const Scenario& sc,
                                       const ValueCertificate& V,
                                       const FeedbackLaw& law,
                                       int state_points, double tol) {
  if (sc.grid_lo.empty() || sc.grid_lo.size() != sc.grid_hi.size())
    throw NoInputBox("scenario provides no state sampling box");
  const GameSystem& sys = sc.sys;
  DecreaseReport rep;
  const Vec zero_ud(static_cast<std::size_t>(sys.dims.mD()), 0.0);
  for_each_grid(sc.grid_lo, sc.grid_hi, state_points, [&](const Vec& x) {
    const bool in_c = sys.C.margin
                          ? sys.C.margin(x) >= -kSetTol
                          : sys.C.member(x, Vec(sys.dims.mC(), 0.0));
    if (in_c) {
      ++rep.flow_points;
      const Vec uc = law.uC(x);
      const double a =
          sc.costs.LC(x, uc) + dot(V.grad(x), sys.f(x, uc));
      if (rep.flow_points == 1 || a > rep.worst_flow) {
        rep.worst_flow = a;
        rep.arg_flow = x;
      }
    }
    if (sys.D.member(x, zero_ud)) {
      ++rep.jump_points;
      const Vec ud = law.uD(x);
      const double a =
          sc.costs.LD(x, ud) + V.value(sys.g(x, ud)) - V.value(x);
      if (rep.jump_points == 1 || a > rep.worst_jump) {
        rep.worst_jump = a;
        rep.arg_jump = x;
      }
    }
  });
  rep.passed = rep.worst_flow <= tol && rep.worst_jump <= tol;
  return rep;
}

ConvergenceReport check_trajectory_convergence(const SolutionPair& sp,
                                               const TargetSet& target,
                                               double ratio_tol,
                                               double dist_tol) {
  ConvergenceReport rep;
  const auto& intervals = sp.arc.intervals;
  if (intervals.empty()) return rep;

  for (std::size_t j = 0; j + 1 < intervals.size(); ++j)
    rep.pre_jump_distance.push_back(target.distance(intervals[j].v.back()));
  rep.final_distance = target.distance(intervals.back().v.back());

  std::vector<double> ratios;
  for (std::size_t k = 0; k + 1 < rep.pre_jump_distance.size(); ++k)
    if (rep.pre_jump_distance[k] > 1e-12)
      ratios.push_back(rep.pre_jump_distance[k + 1] /
                       rep.pre_jump_distance[k]);
  rep.geometric_ratio = ratios.empty() ? 1.0 : median(ratios);

  // Least-squares slope of log distance against t + j over the whole arc,
  // thinned to a few hundred points.
  std::size_t total = 0;
  for (const auto& iv : intervals) total += iv.t.size();
  const std::size_t stride = std::max<std::size_t>(1, total / 256);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t j = 0; j < intervals.size(); ++j) {
    const auto& iv = intervals[j];
    for (std::size_t i = 0; i < iv.t.size(); i += stride) {
      const double dist = target.distance(iv.v[i]);
      if (dist <= 1e-300) continue;
      const double a = iv.t[i] + static_cast<double>(j);
      const double b = std::log(dist);
      sx += a;
      sy += b;
      sxx += a * a;
      sxy += a * b;
      ++m;
    }
  }
  if (m >= 2 && sxx * m - sx * sx > 1e-12)
    rep.decay_rate = (sxy * m - sx * sy) / (sxx * m - sx * sx);

  rep.converged = rep.final_distance <= dist_tol ||
                  (rep.geometric_ratio <= ratio_tol && rep.decay_rate < 0.0);
  return rep;
}

DwellReport dwell_certificate(const HybridTimeDomain& dom, double lambda_c,
                              double lambda_d, double gamma) {
  DwellReport rep;
  rep.lambda_c = lambda_c;
  rep.lambda_d = lambda_d;
  rep.gamma = gamma;
  double m = 0.0;
  for (std::size_t k = 0; k < dom.boundaries.size(); ++k) {
    const double t = dom.boundaries[k];
    // Boundary k closes interval k-1 and opens interval k.
    for (int j : {static_cast<int>(k) - 1, static_cast<int>(k)}) {
      if (j < 0 || j > dom.num_jumps()) continue;
      m = std::max(m, lambda_c * t + lambda_d * j + gamma * (t + j));
    }
  }
  rep.M = m;
  return rep;
}

BasinReport estimate_basin(const Scenario& sc, const FeedbackLaw& law,
                           const TargetSet& target, int per_dim,
                           const SimConfig& cfg, double dist_tol) {
  if (sc.grid_lo.empty() || sc.grid_lo.size() != sc.grid_hi.size())
    throw NoInputBox("scenario provides no state sampling box");
  const ClosedLoopSystem cl = close_loop(sc.sys, law);
  BasinReport rep;
  for_each_grid(sc.grid_lo, sc.grid_hi, per_dim, [&](const Vec& x0) {
    SolutionPair sp;
    try {
      sp = simulate(cl, x0, cfg);
    } catch (const InvalidInitialState&) {
      return;  // start outside the closed-loop domain: not counted
    }
    ++rep.tried;
    bool ok = sp.status.reason == StopReason::ReachedTerminalSet;
    if (!ok) {
      const ConvergenceReport conv =
          check_trajectory_convergence(sp, target, 0.999, dist_tol);
      ok = conv.converged;
    }
    if (ok)
      ++rep.converged;
    else if (rep.failures.size() < 32)
      rep.failures.push_back(x0);
  });
  rep.fraction = rep.tried ? static_cast<double>(rep.converged) / rep.tried
                           : 0.0;
  return rep;
}

}  // namespace hygame
