#include "hygame/domain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "hygame/errors.hpp"

namespace hygame {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::ReachedTerminalSet: return "ReachedTerminalSet";
    case StopReason::BudgetExhausted: return "BudgetExhausted";
    case StopReason::ZenoTruncated: return "ZenoTruncated";
    case StopReason::FlowStalled: return "FlowStalled";
  }
  return "?";
}

HybridTimeDomain HybridArc::domain() const {
  HybridTimeDomain d;
  if (intervals.empty()) return d;
  d.boundaries.push_back(intervals.front().t0());
  for (const auto& iv : intervals) d.boundaries.push_back(iv.t1());
  return d;
}

namespace {

double time_slack(double t) { return 1e-12 * (1.0 + std::fabs(t)); }

Vec interp_interval(const IntervalSamples& iv, double t) {
  if (t <= iv.t.front()) return iv.v.front();
  if (t >= iv.t.back()) return iv.v.back();
  const auto it = std::upper_bound(iv.t.begin(), iv.t.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - iv.t.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - iv.t[lo]) / (iv.t[hi] - iv.t[lo]);
  Vec r(iv.v[lo].size());
  for (std::size_t k = 0; k < r.size(); ++k)
    r[k] = (1.0 - w) * iv.v[lo][k] + w * iv.v[hi][k];
  return r;
}

const IntervalSamples& locate(const std::vector<IntervalSamples>& ivs,
                              const HybridTime& at, const char* what) {
  if (at.j < 0 || at.j >= static_cast<int>(ivs.size()))
    throw OutOfDomain(std::string(what) + ": no interval with index j=" +
                      std::to_string(at.j));
  const auto& iv = ivs[static_cast<std::size_t>(at.j)];
  if (at.t < iv.t0() - time_slack(at.t) || at.t > iv.t1() + time_slack(at.t))
    throw OutOfDomain(std::string(what) + ": t=" + std::to_string(at.t) +
                      " outside interval " + std::to_string(at.j));
  return iv;
}

}  // namespace

Vec eval_arc(const HybridArc& arc, const HybridTime& at) {
  return interp_interval(locate(arc.intervals, at, "eval_arc"), at.t);
}

Vec eval_signal(const HybridInputSignal& sig, const HybridTime& at) {
  if (sig.dims.mC() == 0) return {};
  return interp_interval(locate(sig.flow, at, "eval_signal"), at.t);
}

SolutionPair truncate(const SolutionPair& sp, const HybridTime& upto) {
  const auto& ivs = sp.arc.intervals;
  locate(ivs, upto, "truncate");  // validates (t, j)

  SolutionPair out;
  out.arc.n = sp.arc.n;
  out.branch_id = sp.branch_id;
  const std::size_t J = static_cast<std::size_t>(upto.j);
  for (std::size_t j = 0; j < J; ++j) {
    out.arc.intervals.push_back(ivs[j]);
    if (sp.input.dims.mC() > 0) out.input.flow.push_back(sp.input.flow[j]);
  }

  auto clip = [&](const IntervalSamples& iv) {
    IntervalSamples c;
    for (std::size_t k = 0; k < iv.t.size() && iv.t[k] <= upto.t; ++k) {
      c.t.push_back(iv.t[k]);
      c.v.push_back(iv.v[k]);
    }
    if (c.t.empty() || c.t.back() < upto.t - time_slack(upto.t)) {
      c.t.push_back(upto.t);
      c.v.push_back(interp_interval(iv, upto.t));
    }
    return c;
  };
  out.arc.intervals.push_back(clip(ivs[J]));
  out.input.dims = sp.input.dims;
  if (sp.input.dims.mC() > 0) out.input.flow.push_back(clip(sp.input.flow[J]));
  // Jump j fires at the end of interval j, which lies strictly beyond the cut.
  out.input.jumps.assign(sp.input.jumps.begin(),
                         sp.input.jumps.begin() + static_cast<long>(J));

  if (upto == sp.arc.end())
    out.status = sp.status;
  else
    out.status = TerminalStatus{StopReason::BudgetExhausted, std::nullopt};
  return out;
}

// -- CSV ---------------------------------------------------------------------

namespace {

void put_num(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, ",%.17g", v);
  line += buf;
}

double num_cell(const std::string& cell) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0')
    throw ParseError("trajectory csv: bad number '" + cell + "'");
  return v;
}

int int_cell(const std::string& cell) {
  char* end = nullptr;
  const long v = std::strtol(cell.c_str(), &end, 10);
  if (end == cell.c_str() || *end != '\0')
    throw ParseError("trajectory csv: bad integer '" + cell + "'");
  return static_cast<int>(v);
}

void write_row(std::ostream& os, double t, int j, const char* phase,
               const Vec& x, const Vec& uc, int mc, const Vec& ud, int md) {
  char head[48];
  std::snprintf(head, sizeof head, "%.17g,%d,%s", t, j, phase);
  std::string line = head;
  for (double v : x) put_num(line, v);
  for (int k = 0; k < mc; ++k) put_num(line, k < (int)uc.size() ? uc[k] : 0.0);
  for (int k = 0; k < md; ++k) put_num(line, k < (int)ud.size() ? ud[k] : 0.0);
  os << line << '\n';
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const SolutionPair& sp,
                          const std::string& manifest_hash) {
  const int n = sp.arc.n;
  const int mc = sp.input.dims.mC(), md = sp.input.dims.mD();
  if (!manifest_hash.empty()) os << "# manifest " << manifest_hash << '\n';
  os << "# status " << to_string(sp.status.reason);
  if (sp.status.hit) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " %.17g %d", sp.status.hit->t,
                  sp.status.hit->j);
    os << buf;
  }
  os << '\n';
  if (!sp.branch_id.empty()) os << "# branch " << sp.branch_id << '\n';

  os << "t,j,phase";
  for (int k = 0; k < n; ++k) os << ",x" << k;
  for (int k = 0; k < mc; ++k) os << ",uC" << k;
  for (int k = 0; k < md; ++k) os << ",uD" << k;
  os << '\n';

  const Vec none;
  for (std::size_t j = 0; j < sp.arc.intervals.size(); ++j) {
    const auto& iv = sp.arc.intervals[j];
    const bool post_jump = j > 0;
    for (std::size_t k = 0; k < iv.t.size(); ++k) {
      Vec uc;
      if (mc > 0)
        uc = interp_interval(sp.input.flow[j], iv.t[k]);
      if (post_jump && k == 0) {
        // The jump row doubles as the first sample of the new interval: it
        // carries the post-jump state, the jump input, and the flow input in
        // effect at that instant.
        write_row(os, iv.t[k], static_cast<int>(j), "jump", iv.v[k], uc, mc,
                  sp.input.jumps[j - 1], md);
      } else {
        write_row(os, iv.t[k], static_cast<int>(j), "flow", iv.v[k], uc, mc,
                  none, md);
      }
    }
  }
}

SolutionPair read_trajectory_csv(std::istream& is, int n, InputDims dims) {
  const int mc = dims.mC(), md = dims.mD();
  SolutionPair sp;
  sp.arc.n = n;
  sp.input.dims = dims;

  std::string line;
  bool header_seen = false;
  int cur = -1;  // current interval index
  std::optional<TerminalStatus> status;

  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream cs(line.substr(1));
      std::string key;
      cs >> key;
      if (key == "status") {
        std::string reason;
        cs >> reason;
        TerminalStatus st;
        if (reason == "ReachedTerminalSet") st.reason = StopReason::ReachedTerminalSet;
        else if (reason == "BudgetExhausted") st.reason = StopReason::BudgetExhausted;
        else if (reason == "ZenoTruncated") st.reason = StopReason::ZenoTruncated;
        else if (reason == "FlowStalled") st.reason = StopReason::FlowStalled;
        else throw ParseError("trajectory csv: unknown status " + reason);
        double ht; int hj;
        if (cs >> ht >> hj) st.hit = HybridTime{ht, hj};
        status = st;
      } else if (key == "branch") {
        cs >> sp.branch_id;
      }
      continue;
    }
    if (!header_seen) {
      const int want = 3 + n + mc + md;
      const long commas = std::count(line.begin(), line.end(), ',');
      if (commas + 1 != want)
        throw ParseError("trajectory csv: header has " +
                         std::to_string(commas + 1) + " columns, expected " +
                         std::to_string(want));
      header_seen = true;
      continue;
    }

    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      const std::size_t next = line.find(',', pos);
      cells.push_back(line.substr(pos, next - pos));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (static_cast<int>(cells.size()) != 3 + n + mc + md)
      throw ParseError("trajectory csv: bad row width");

    const double t = num_cell(cells[0]);
    const int j = int_cell(cells[1]);
    const std::string& phase = cells[2];
    Vec x(n), uc(mc), ud(md);
    for (int k = 0; k < n; ++k) x[k] = num_cell(cells[3 + k]);
    for (int k = 0; k < mc; ++k) uc[k] = num_cell(cells[3 + n + k]);
    for (int k = 0; k < md; ++k) ud[k] = num_cell(cells[3 + n + mc + k]);

    if (phase == "jump") {
      if (j != cur + 1)
        throw ParseError("trajectory csv: jump row with j=" + std::to_string(j) +
                         " after interval " + std::to_string(cur));
      cur = j;
      sp.arc.intervals.emplace_back();
      if (mc > 0) sp.input.flow.emplace_back();
      sp.input.jumps.push_back(ud);
    } else if (phase == "flow") {
      if (cur < 0) {
        if (j != 0) throw ParseError("trajectory csv: first row must have j=0");
        cur = 0;
        sp.arc.intervals.emplace_back();
        if (mc > 0) sp.input.flow.emplace_back();
      } else if (j != cur) {
        throw ParseError("trajectory csv: flow row with j=" + std::to_string(j) +
                         " inside interval " + std::to_string(cur));
      }
    } else {
      throw ParseError("trajectory csv: unknown phase '" + phase + "'");
    }
    auto& iv = sp.arc.intervals.back();
    if (!iv.t.empty() && t < iv.t.back())
      throw ParseError("trajectory csv: time not increasing within interval");
    if (!iv.t.empty() && t == iv.t.back() && phase == "flow")
      throw ParseError("trajectory csv: duplicate flow sample time");
    iv.t.push_back(t);
    iv.v.push_back(x);
    if (mc > 0) {
      sp.input.flow.back().t.push_back(t);
      sp.input.flow.back().v.push_back(uc);
    }
  }
  if (sp.arc.intervals.empty())
    throw ParseError("trajectory csv: no data rows");
  if (status) sp.status = *status;
  return sp;
}

}  // namespace hygame
