#include "hygame/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "hygame/errors.hpp"

namespace hygame {

const char* to_string(JumpPolicy p) {
  switch (p) {
    case JumpPolicy::JumpPriority: return "jump";
    case JumpPolicy::FlowPriority: return "flow";
    case JumpPolicy::EnumerateBoth: return "both";
  }
  return "?";
}

JumpPolicy parse_jump_policy(const std::string& s) {
  if (s == "jump") return JumpPolicy::JumpPriority;
  if (s == "flow") return JumpPolicy::FlowPriority;
  if (s == "both") return JumpPolicy::EnumerateBoth;
  throw ParseError("unknown jump policy '" + s + "' (jump|flow|both)");
}

Vec rk4_step(const std::function<Vec(double, const Vec&)>& rhs, double t,
             const Vec& x, double h) {
  const Vec k1 = rhs(t, x);
  const Vec k2 = rhs(t + 0.5 * h, vaxpy(x, 0.5 * h, k1));
  const Vec k3 = rhs(t + 0.5 * h, vaxpy(x, 0.5 * h, k2));
  const Vec k4 = rhs(t + h, vaxpy(x, h, k3));
  Vec out = x;
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

namespace {

constexpr int kZenoConsecutive = 3;  // short flights before truncation

struct Watched {
  const std::function<double(const Vec&)>* margin;
  enum Kind { FlowExit, JumpEntry, Terminal } kind;
};

// Closed-loop run driven by a decision script.  When the script runs out at
// a decision point under EnumerateBoth, needs_decision is set and the
// partial trajectory is meaningless to the caller.
struct ScriptedRun {
  SolutionPair sp;
  bool needs_decision = false;
};

ScriptedRun run_closed_loop(const ClosedLoopSystem& cl, const Vec& x0,
                            const SimConfig& cfg, const std::string& script) {
  const GameSystem& aut = cl.sys;
  const Vec no_u;
  if (static_cast<int>(x0.size()) != aut.n)
    throw InvalidInitialState("initial state has dimension " +
                              std::to_string(x0.size()) + ", system has " +
                              std::to_string(aut.n));
  if (!aut.C.member(x0, no_u) && !aut.D.member(x0, no_u))
    throw InvalidInitialState(
        "initial state is outside both the flow and jump sets");

  auto rhs = [&aut, &no_u](double, const Vec& x) { return aut.f(x, no_u); };

  ScriptedRun out;
  SolutionPair& sp = out.sp;
  sp.arc.n = aut.n;

  double t = 0.0;
  int j = 0;
  Vec x = x0;
  bool armed = true;
  int short_flights = 0;
  std::size_t decisions_used = 0;

  auto begin_interval = [&]() {
    IntervalSamples xs, us;
    xs.t.push_back(t);
    xs.v.push_back(x);
    us.t.push_back(t);
    us.v.push_back(cl.law.uC(x));
    sp.arc.intervals.push_back(std::move(xs));
    sp.input.flow.push_back(std::move(us));
  };
  auto push_sample = [&]() {
    sp.arc.intervals.back().t.push_back(t);
    sp.arc.intervals.back().v.push_back(x);
    sp.input.flow.back().t.push_back(t);
    sp.input.flow.back().v.push_back(cl.law.uC(x));
  };

  sp.input.dims = cl.base.dims;
  begin_interval();

  // Margins watched while flowing.  The flow-set margin going nonpositive
  // marks where flowing stops being possible, jump-set margins mark arrivals
  // in the jump set, the terminal margin marks the end of play.
  std::vector<Watched> watch;
  if (aut.C.margin) watch.push_back({&aut.C.margin, Watched::FlowExit});
  for (const auto& m : aut.D.margins)
    watch.push_back({&m, Watched::JumpEntry});
  if (aut.X.present && aut.X.margin)
    watch.push_back({&aut.X.margin, Watched::Terminal});

  auto viable = [&](double h_probe) {
    if (!aut.C.member(x, no_u)) return false;
    const Vec xt = rk4_step(rhs, t, x, h_probe);
    return aut.C.member(xt, no_u);
  };

  while (true) {
    if (aut.in_X(x)) {
      sp.status.reason = StopReason::ReachedTerminalSet;
      sp.status.hit = HybridTime{t, j};
      break;
    }
    const double remaining = cfg.t_budget - t;
    const bool time_up = remaining <= 1e-12 * (1.0 + std::fabs(cfg.t_budget));
    const bool in_d = aut.D.member(x, no_u);

    bool do_jump = false;
    if (time_up) {
      if (!(armed && in_d)) {
        sp.status.reason = StopReason::BudgetExhausted;
        break;
      }
      // Out of flow time but a jump is still on the table; only the policy
      // can keep play going.
      do_jump = true;
      if (cfg.policy == JumpPolicy::FlowPriority) {
        sp.status.reason = StopReason::BudgetExhausted;
        break;
      }
      if (cfg.policy == JumpPolicy::EnumerateBoth) {
        if (decisions_used < script.size()) {
          const bool flow_branch = script[decisions_used++] == '1';
          if (flow_branch) {
            sp.status.reason = StopReason::BudgetExhausted;
            break;
          }
        } else {
          out.needs_decision = true;
          return out;
        }
      }
    } else {
      const double h_probe = std::min(cfg.dt_max, remaining);
      if (!aut.C.member(x, no_u)) {
        if (!in_d) {
          sp.status.reason = StopReason::FlowStalled;
          break;
        }
        do_jump = true;  // flowing is impossible here, jumping is not
      } else if (!viable(h_probe)) {
        // A full step cannot stay in the flow set, so the boundary is less
        // than one step away.  If the jump set has already been reached the
        // jump is forced -- no policy decision is recorded.  Otherwise fall
        // through: the shortened step below walks the state up to the
        // boundary, where the jump set either catches it or the run stalls.
        if (in_d) do_jump = true;
      } else if (armed && in_d) {
        switch (cfg.policy) {
          case JumpPolicy::JumpPriority:
            do_jump = true;
            break;
          case JumpPolicy::FlowPriority:
            armed = false;
            break;
          case JumpPolicy::EnumerateBoth:
            if (decisions_used < script.size()) {
              if (script[decisions_used++] == '0')
                do_jump = true;
              else
                armed = false;
            } else {
              out.needs_decision = true;
              return out;
            }
            break;
        }
      }
    }

    if (do_jump) {
      if (j >= cfg.j_budget) {
        sp.status.reason = StopReason::BudgetExhausted;
        break;
      }
      const double flight =
          sp.arc.intervals.back().t1() - sp.arc.intervals.back().t0();
      if (flight < cfg.min_flow_interval)
        ++short_flights;
      else
        short_flights = 0;
      const Vec ud = cl.law.uD(x);
      sp.input.jumps.push_back(ud);
      x = cl.base.g(x, ud);
      ++j;
      begin_interval();
      armed = true;
      if (short_flights >= kZenoConsecutive) {
        sp.status.reason = StopReason::ZenoTruncated;
        break;
      }
      continue;
    }

    // Flow one step, shortened to the earliest watched-margin crossing or to
    // the last point the flow set still admits.
    double h = std::min(cfg.dt_max, remaining);
    std::vector<const Watched*> active;
    for (const auto& w : watch)
      if ((*w.margin)(x) > 0.0) active.push_back(&w);
    auto blocked = [&](const Vec& y) {
      if (!aut.C.member(y, no_u)) return true;
      for (const auto* w : active)
        if ((*w->margin)(y) <= 0.0) return true;
      return false;
    };
    Vec x_new = rk4_step(rhs, t, x, h);
    if (blocked(x_new)) {
      double lo = 0.0, hi = h;
      for (int it = 0; it < 80 && (hi - lo) > cfg.event_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (blocked(rk4_step(rhs, t, x, mid)))
          hi = mid;
        else
          lo = mid;
      }
      Vec at_hi = rk4_step(rhs, t, x, hi);
      if (aut.C.member(at_hi, no_u)) {
        // a watched margin fired inside the flow set: commit just past it
        h = hi;
        x_new = std::move(at_hi);
      } else if (lo > 0.0) {
        // The flow set itself runs out.  A watched surface may still have
        // been crossed strictly inside the step -- a short hop that rises
        // off a boundary and falls back does this without any margin being
        // positive at the step start.  Landing just past that crossing keeps
        // the committed state accurate to the event tolerance instead of the
        // set tolerance, which matters when hop energies shrink geometrically.
        double cross = -1.0;
        for (const auto& w : watch) {
          if ((*w.margin)(at_hi) > 0.0) continue;
          double p = hi;
          bool bracketed = false;
          for (int k = 0; k < 60 && p > 0.0; ++k) {
            p *= 0.5;
            if ((*w.margin)(rk4_step(rhs, t, x, p)) > 0.0) {
              bracketed = true;
              break;
            }
          }
          if (!bracketed) continue;
          double a = p, b = hi;
          for (int it = 0; it < 80 && (b - a) > cfg.event_tol; ++it) {
            const double mid = 0.5 * (a + b);
            if ((*w.margin)(rk4_step(rhs, t, x, mid)) <= 0.0)
              b = mid;
            else
              a = mid;
          }
          if (cross < 0.0 || b < cross) cross = b;
        }
        Vec landing;
        if (cross > 0.0 &&
            aut.C.member(landing = rk4_step(rhs, t, x, cross), no_u)) {
          h = cross;
          x_new = std::move(landing);
        } else {
          // no surface inside: commit the last admissible point
          h = lo;
          x_new = rk4_step(rhs, t, x, lo);
        }
      } else {
        // pinned against the flow-set boundary with nowhere to go
        sp.status.reason = StopReason::FlowStalled;
        break;
      }
      for (const auto& w : watch)
        if (w.kind == Watched::JumpEntry && (*w.margin)(x_new) <= 0.0)
          armed = true;
    }
    t += h;
    x = std::move(x_new);
    push_sample();
  }

  return out;
}

}  // namespace

std::vector<SolutionPair> simulate_branches(const ClosedLoopSystem& cl,
                                            const Vec& x0,
                                            const SimConfig& cfg) {
  if (cfg.policy != JumpPolicy::EnumerateBoth)
    return {simulate(cl, x0, cfg)};

  std::vector<SolutionPair> leaves;
  std::deque<std::string> frontier{""};
  while (!frontier.empty()) {
    std::string script = std::move(frontier.front());
    frontier.pop_front();
    ScriptedRun r = run_closed_loop(cl, x0, cfg, script);
    if (r.needs_decision) {
      if (leaves.size() + frontier.size() + 2 >
          static_cast<std::size_t>(cfg.max_branches))
        throw BranchLimitExceeded(
            "more than " + std::to_string(cfg.max_branches) +
            " flow/jump continuations from this state");
      frontier.push_back(script + "0");
      frontier.push_back(script + "1");
    } else {
      r.sp.branch_id = std::move(script);
      leaves.push_back(std::move(r.sp));
    }
  }
  std::sort(leaves.begin(), leaves.end(),
            [](const SolutionPair& a, const SolutionPair& b) {
              return a.branch_id < b.branch_id;
            });
  return leaves;
}

SolutionPair simulate(const ClosedLoopSystem& cl, const Vec& x0,
                      const SimConfig& cfg) {
  if (cfg.policy == JumpPolicy::EnumerateBoth)
    return simulate_branches(cl, x0, cfg).front();
  return run_closed_loop(cl, x0, cfg, "").sp;
}

SolutionPair simulate_open_loop(const GameSystem& sys, const Vec& x0,
                                const HybridInputSignal& input,
                                const SimConfig& cfg) {
  if (static_cast<int>(x0.size()) != sys.n)
    throw InvalidInitialState("initial state has dimension " +
                              std::to_string(x0.size()) + ", system has " +
                              std::to_string(sys.n));
  if (input.flow.empty())
    throw InfeasibleInput("input signal has no flow intervals");

  SolutionPair sp;
  sp.arc.n = sys.n;
  sp.input.dims = input.dims;

  const int mc = input.dims.mC();
  Vec x = x0;
  int j = 0;
  double t = input.flow.front().t0();
  bool done = false;

  auto uc_at = [&](double tt, int jj) {
    if (mc == 0) return Vec{};
    if (jj >= static_cast<int>(input.flow.size()))
      return Vec(static_cast<std::size_t>(mc), 0.0);  // past the signal's end
    const double t0 = input.flow[jj].t0(), t1 = input.flow[jj].t1();
    return eval_signal(input, HybridTime{std::clamp(tt, t0, t1), jj});
  };
  auto rhs = [&](double tt, const Vec& y) { return sys.f(y, uc_at(tt, j)); };

  auto begin_interval = [&]() {
    IntervalSamples xs, us;
    xs.t.push_back(t);
    xs.v.push_back(x);
    us.t.push_back(t);
    us.v.push_back(uc_at(t, j));
    sp.arc.intervals.push_back(std::move(xs));
    sp.input.flow.push_back(std::move(us));
  };
  auto push_sample = [&]() {
    sp.arc.intervals.back().t.push_back(t);
    sp.arc.intervals.back().v.push_back(x);
    sp.input.flow.back().t.push_back(t);
    sp.input.flow.back().v.push_back(uc_at(t, j));
  };
  begin_interval();

  const double t_start = t;
  for (; j < static_cast<int>(input.flow.size()) && !done; /* advance below */) {
    const IntervalSamples& seg = input.flow[j];
    const double t_end = seg.t1();
    std::size_t next_knot = 0;  // first input sample time strictly ahead of t

    while (true) {
      if (sys.in_X(x)) {
        sp.status.reason = StopReason::ReachedTerminalSet;
        sp.status.hit = HybridTime{t, j};
        done = true;
        break;
      }
      if (t - t_start >= cfg.t_budget - 1e-12 * (1.0 + cfg.t_budget)) {
        sp.status.reason = StopReason::BudgetExhausted;
        done = true;
        break;
      }
      if (!sys.C.member(x, uc_at(t, j)) && !(t >= t_end))
        throw InfeasibleInput("state left the flow set at t=" +
                              std::to_string(t) + ", j=" + std::to_string(j));
      if (t >= t_end) break;  // interval exhausted; jump or finish below

      while (next_knot < seg.t.size() && seg.t[next_knot] <= t) ++next_knot;
      double h = std::min(cfg.dt_max, t_end - t);
      if (next_knot < seg.t.size()) h = std::min(h, seg.t[next_knot] - t);
      h = std::min(h, t_start + cfg.t_budget - t);

      Vec x_new = rk4_step(rhs, t, x, h);
      if (sys.X.present && sys.X.margin && sys.X.margin(x) > 0.0 &&
          sys.X.margin(x_new) <= 0.0) {
        double lo = 0.0, hi = h;
        for (int it = 0; it < 80 && (hi - lo) > cfg.event_tol; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (sys.X.margin(rk4_step(rhs, t, x, mid)) <= 0.0)
            hi = mid;
          else
            lo = mid;
        }
        h = hi;
        x_new = rk4_step(rhs, t, x, h);
      }
      t += h;
      x = std::move(x_new);
      push_sample();
    }
    if (done) break;

    if (j < static_cast<int>(input.jumps.size())) {
      if (j >= cfg.j_budget) {
        sp.status.reason = StopReason::BudgetExhausted;
        done = true;
        break;
      }
      const Vec& ud = input.jumps[j];
      if (!sys.D.member(x, ud))
        throw InfeasibleInput("commanded jump " + std::to_string(j) +
                              " at a state outside the jump set");
      sp.input.jumps.push_back(ud);
      x = sys.g(x, ud);
      ++j;
      begin_interval();
    } else {
      sp.status.reason = StopReason::BudgetExhausted;  // signal exhausted
      break;
    }
  }
  return sp;
}

}  // namespace hygame
