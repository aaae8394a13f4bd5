#include "hygame/scenarios.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "hygame/errors.hpp"

namespace hygame {

Robust1dConstants robust_1d_constants() {
  Robust1dConstants c;
  c.a = -1.0;
  c.b1 = 1.0;
  c.b2 = 1.0;
  c.qc = 1.0;
  c.rc1 = 1.304;
  c.rc2 = -4.0;
  c.delta = 2.0;
  c.mu = 1.0;
  c.sigma = 0.5;
  // Positive root of k p^2 - 2 a p - qc = 0 with k = b1^2/rc1 + b2^2/rc2.
  const double k = c.b1 * c.b1 / c.rc1 + c.b2 * c.b2 / c.rc2;
  c.p = (c.a + std::sqrt(c.a * c.a + k * c.qc)) / k;
  c.g1 = -c.b1 * c.p / c.rc1;
  c.g2 = -c.b2 * c.p / c.rc2;
  c.rate = c.a + c.b1 * c.g1 + c.b2 * c.g2;
  return c;
}

BouncingBallConstants bouncing_ball_constants() {
  BouncingBallConstants c;
  c.lambda = 0.8;
  c.rd1 = 10.0;
  c.rd2 = -20.0;
  const double den = c.rd1 + c.rd2 + 2.0 * c.rd1 * c.rd2;
  c.qd = (-2.0 * c.rd1 * c.rd2 * c.lambda * c.lambda + c.rd1 + c.rd2 +
          2.0 * c.rd1 * c.rd2) /
         (2.0 * den);
  c.k1 = c.rd2 * c.lambda / den;
  c.k2 = c.rd1 * c.lambda / den;
  c.retention = std::fabs(-c.lambda + c.k1 + c.k2);
  return c;
}

namespace {

Scenario make_robust_1d() {
  const Robust1dConstants c = robust_1d_constants();
  Scenario s;
  s.name = "robust_1d_nonunique";

  GameSystem sys;
  sys.n = 1;
  sys.dims = InputDims{1, 1, 0, 0};
  sys.f = [c](const Vec& x, const Vec& u) {
    return Vec{c.a * x[0] + c.b1 * u[0] + c.b2 * u[1]};
  };
  sys.g = [c](const Vec&, const Vec&) { return Vec{c.sigma}; };
  AffineMap lf;
  lf.A = Mat::of({{c.a}});
  lf.B1 = Mat::of({{c.b1}});
  lf.B2 = Mat::of({{c.b2}});
  lf.c = Vec{0.0};
  sys.lin_f = lf;
  AffineMap lg;
  lg.A = Mat(1, 1);
  lg.B1 = Mat(1, 0);
  lg.B2 = Mat(1, 0);
  lg.c = Vec{c.sigma};
  sys.lin_g = lg;
  sys.C.member = [c](const Vec& x, const Vec&) {
    return x[0] >= -kSetTol && x[0] <= c.delta + kSetTol;
  };
  sys.C.margin = [c](const Vec& x) {
    return std::min(x[0], c.delta - x[0]);
  };
  sys.D.member = [c](const Vec& x, const Vec&) {
    return std::fabs(x[0] - c.mu) <= kSetTol;
  };
  sys.D.margins.push_back([c](const Vec& x) { return x[0] - c.mu; });
  s.sys = std::move(sys);

  StageCosts costs;
  costs.LC = [c](const Vec& x, const Vec& u) {
    return c.qc * x[0] * x[0] + c.rc1 * u[0] * u[0] + c.rc2 * u[1] * u[1];
  };
  costs.LD = [c](const Vec& x, const Vec&) {
    return c.p * (x[0] * x[0] - c.sigma * c.sigma);
  };
  costs.q = [c](const Vec& x) { return c.p * x[0] * x[0]; };
  costs.flow_quad = QuadFlowCost{Mat::of({{c.qc}}), Mat::of({{c.rc1}}),
                                 Mat::of({{c.rc2}})};
  s.costs = std::move(costs);

  QuadraticGameSpec q;
  q.np = 1;
  q.has_flow = true;
  q.AC = Mat::of({{c.a}});
  q.BC1 = Mat::of({{c.b1}});
  q.BC2 = Mat::of({{c.b2}});
  q.QC = Mat::of({{c.qc}});
  q.RC1 = Mat::of({{c.rc1}});
  q.RC2 = Mat::of({{c.rc2}});
  s.quad = std::move(q);

  ValueCertificate v;
  v.value = [c](const Vec& x) { return c.p * x[0] * x[0]; };
  v.grad = [c](const Vec& x) { return Vec{2.0 * c.p * x[0]}; };
  v.quad_at = [c](const Vec&) {
    return QuadForm{Mat::of({{c.p}}), Vec{0.0}, 0.0};
  };
  s.V = std::move(v);

  FeedbackLaw law;
  law.dims = s.sys.dims;
  law.kC1 = [c](const Vec& x) { return Vec{c.g1 * x[0]}; };
  law.kC2 = [c](const Vec& x) { return Vec{c.g2 * x[0]}; };
  law.KC1 = Mat::of({{c.g1}});
  law.KC2 = Mat::of({{c.g2}});
  s.law = std::move(law);

  s.default_x0 = {c.delta};
  s.grid_lo = {0.0};
  s.grid_hi = {c.delta};
  s.u_flow_lo = {-2.0, -2.0};
  s.u_flow_hi = {2.0, 2.0};
  return s;
}

Scenario make_bouncing_ball() {
  const BouncingBallConstants c = bouncing_ball_constants();
  Scenario s;
  s.name = "bouncing_ball";

  GameSystem sys;
  sys.n = 2;
  sys.dims = InputDims{0, 0, 1, 1};
  sys.f = [](const Vec& x, const Vec&) { return Vec{x[1], -1.0}; };
  sys.g = [c](const Vec& x, const Vec& u) {
    return Vec{0.0, -c.lambda * x[1] + u[0] + u[1]};
  };
  AffineMap lf;
  lf.A = Mat::of({{0.0, 1.0}, {0.0, 0.0}});
  lf.B1 = Mat(2, 0);
  lf.B2 = Mat(2, 0);
  lf.c = Vec{0.0, -1.0};
  sys.lin_f = lf;
  AffineMap lg;
  lg.A = Mat::of({{0.0, 0.0}, {0.0, -c.lambda}});
  lg.B1 = Mat::of({{0.0}, {1.0}});
  lg.B2 = Mat::of({{0.0}, {1.0}});
  lg.c = Vec{0.0, 0.0};
  sys.lin_g = lg;
  sys.C.member = [](const Vec& x, const Vec&) { return x[0] >= -kSetTol; };
  sys.C.margin = [](const Vec& x) { return x[0]; };
  sys.D.member = [](const Vec& x, const Vec&) {
    return std::fabs(x[0]) <= kSetTol && x[1] <= kSetTol;
  };
  // Height crossing zero is the candidate event; membership rules out the
  // launch side (x2 > 0).
  sys.D.margins.push_back([](const Vec& x) { return x[0]; });
  sys.X.present = true;
  sys.X.box = {{Vec{0.0, -0.37}, Vec{0.3, 0.37}}};
  sys.X.member = [](const Vec& x) {
    return x[0] >= -kSetTol && x[0] <= 0.3 + kSetTol &&
           std::fabs(x[1]) <= 0.37 + kSetTol;
  };
  sys.X.margin = [](const Vec& x) {
    double m = x[0] - 0.3;
    m = std::max(m, -x[0]);
    m = std::max(m, std::fabs(x[1]) - 0.37);
    return m;
  };
  s.sys = std::move(sys);

  StageCosts costs;
  costs.LC = [](const Vec&, const Vec&) { return 0.0; };
  costs.LD = [c](const Vec& x, const Vec& u) {
    return c.qd * x[1] * x[1] + c.rd1 * u[0] * u[0] + c.rd2 * u[1] * u[1];
  };
  costs.q = [](const Vec& x) { return x[0] + 0.5 * x[1] * x[1]; };
  costs.flow_quad = QuadFlowCost{Mat(2, 2), Mat(0, 0), Mat(0, 0)};
  costs.jump_quad = QuadJumpCost{Mat::of({{0.0, 0.0}, {0.0, c.qd}}),
                                 Mat::of({{c.rd1}}), Mat::of({{c.rd2}})};
  s.costs = std::move(costs);

  QuadraticGameSpec q;
  q.np = 2;
  q.has_jump = true;
  q.AD = Mat::of({{0.0, 0.0}, {0.0, -c.lambda}});
  q.BD1 = Mat::of({{0.0}, {1.0}});
  q.BD2 = Mat::of({{0.0}, {1.0}});
  q.QD = Mat::of({{0.0, 0.0}, {0.0, c.qd}});
  q.RD1 = Mat::of({{c.rd1}});
  q.RD2 = Mat::of({{c.rd2}});
  s.quad = std::move(q);

  ValueCertificate v;
  v.value = [](const Vec& x) { return x[0] + 0.5 * x[1] * x[1]; };
  v.grad = [](const Vec& x) { return Vec{1.0, x[1]}; };
  v.quad_at = [](const Vec&) {
    return QuadForm{Mat::of({{0.0, 0.0}, {0.0, 0.5}}), Vec{1.0, 0.0}, 0.0};
  };
  s.V = std::move(v);

  FeedbackLaw law;
  law.dims = s.sys.dims;
  law.kD1 = [c](const Vec& x) { return Vec{c.k1 * x[1]}; };
  law.kD2 = [c](const Vec& x) { return Vec{c.k2 * x[1]}; };
  law.KD1 = Mat::of({{0.0, c.k1}});
  law.KD2 = Mat::of({{0.0, c.k2}});
  s.law = std::move(law);

  s.default_x0 = {1.0, 1.0};
  s.grid_lo = {0.0, -3.0};
  s.grid_hi = {2.0, 2.0};
  s.u_jump_lo = {-1.0, -1.0};
  s.u_jump_hi = {1.0, 1.0};
  return s;
}

Scenario make_lq_periodic_1d() {
  Scenario s;
  s.name = "lq_periodic_1d";

  QuadraticGameSpec q;
  q.np = 1;
  q.has_flow = true;
  q.AC = Mat::of({{1.8}});
  q.BC1 = Mat::of({{1.0}});
  q.BC2 = Mat::of({{1.0}});
  q.QC = Mat::of({{0.1}});
  q.RC1 = Mat::of({{1.304}});
  q.RC2 = Mat::of({{-4.0}});
  q.has_jump = true;
  q.AD = Mat::of({{2.0}});
  q.BD1 = Mat::of({{1.0}});
  q.BD2 = Mat::of({{1.0}});
  q.QD = Mat::of({{1.0}});
  q.RD1 = Mat::of({{1.304}});
  q.RD2 = Mat::of({{-8.0}});
  q.T1 = 1.0;
  q.T2 = 1.0;

  s.sys = build_timer_lq_system(q);

  StageCosts costs;
  costs.LC = [](const Vec& x, const Vec& u) {
    return 0.1 * x[0] * x[0] + 1.304 * u[0] * u[0] - 4.0 * u[1] * u[1];
  };
  costs.LD = [](const Vec& x, const Vec& u) {
    return 1.0 * x[0] * x[0] + 1.304 * u[0] * u[0] - 8.0 * u[1] * u[1];
  };
  costs.q = [](const Vec& x) { return x[0] * x[0]; };
  costs.flow_quad = QuadFlowCost{Mat::of({{0.1, 0.0}, {0.0, 0.0}}),
                                 Mat::of({{1.304}}), Mat::of({{-4.0}})};
  costs.jump_quad = QuadJumpCost{Mat::of({{1.0, 0.0}, {0.0, 0.0}}),
                                 Mat::of({{1.304}}), Mat::of({{-8.0}})};
  s.costs = std::move(costs);
  s.quad = std::move(q);

  s.default_x0 = {1.0, 0.0};
  s.grid_lo = {-2.0, 0.0};
  s.grid_hi = {2.0, 1.0};
  s.u_flow_lo = {-12.0, -12.0};
  s.u_flow_hi = {12.0, 12.0};
  s.u_jump_lo = {-12.0, -12.0};
  s.u_jump_hi = {12.0, 12.0};
  return s;
}

Scenario make_security_jump() {
  Scenario s;
  s.name = "security_jump";

  const double ad = 0.5, rd1 = 1.0, rd2 = -10.0;
  const double qd = 33.0 / 38.0;
  const double k1 = -5.0 / 19.0, k2 = 1.0 / 38.0;

  GameSystem sys;
  sys.n = 2;
  sys.dims = InputDims{0, 0, 2, 2};
  sys.f = [](const Vec& x, const Vec&) { return Vec{x[1], -x[0]}; };
  sys.g = [ad](const Vec& x, const Vec& u) {
    return Vec{ad * x[0] + u[0] + u[2], ad * x[1] + u[1] + u[3]};
  };
  AffineMap lf;
  lf.A = Mat::of({{0.0, 1.0}, {-1.0, 0.0}});
  lf.B1 = Mat(2, 0);
  lf.B2 = Mat(2, 0);
  lf.c = Vec{0.0, 0.0};
  sys.lin_f = lf;
  AffineMap lg;
  lg.A = Mat::of({{ad, 0.0}, {0.0, ad}});
  lg.B1 = Mat::identity(2);
  lg.B2 = Mat::identity(2);
  lg.c = Vec{0.0, 0.0};
  sys.lin_g = lg;
  sys.C.member = [](const Vec&, const Vec&) { return true; };
  sys.C.margin = [](const Vec&) { return 1.0; };
  sys.D.member = [](const Vec& x, const Vec&) {
    return x[0] * x[0] + x[1] * x[1] >= 0.01 - kSetTol;
  };
  sys.D.margins.push_back(
      [](const Vec& x) { return 0.01 - (x[0] * x[0] + x[1] * x[1]); });
  s.sys = std::move(sys);

  StageCosts costs;
  costs.LC = [](const Vec&, const Vec&) { return 0.0; };
  costs.LD = [qd, rd1, rd2](const Vec& x, const Vec& u) {
    const double xn = x[0] * x[0] + x[1] * x[1];
    const double u1n = u[0] * u[0] + u[1] * u[1];
    const double u2n = u[2] * u[2] + u[3] * u[3];
    return qd * xn + rd1 * u1n + rd2 * u2n;
  };
  costs.q = [](const Vec& x) { return x[0] * x[0] + x[1] * x[1]; };
  costs.flow_quad = QuadFlowCost{Mat(2, 2), Mat(0, 0), Mat(0, 0)};
  costs.jump_quad =
      QuadJumpCost{qd * Mat::identity(2), rd1 * Mat::identity(2),
                   rd2 * Mat::identity(2)};
  s.costs = std::move(costs);

  QuadraticGameSpec q;
  q.np = 2;
  q.has_jump = true;
  q.AD = ad * Mat::identity(2);
  q.BD1 = Mat::identity(2);
  q.BD2 = Mat::identity(2);
  q.QD = qd * Mat::identity(2);
  q.RD1 = rd1 * Mat::identity(2);
  q.RD2 = rd2 * Mat::identity(2);
  s.quad = std::move(q);

  ValueCertificate v;
  v.value = [](const Vec& x) { return x[0] * x[0] + x[1] * x[1]; };
  v.grad = [](const Vec& x) { return Vec{2.0 * x[0], 2.0 * x[1]}; };
  v.quad_at = [](const Vec&) {
    return QuadForm{Mat::identity(2), Vec{0.0, 0.0}, 0.0};
  };
  s.V = std::move(v);

  FeedbackLaw law;
  law.dims = s.sys.dims;
  law.kD1 = [k1](const Vec& x) { return Vec{k1 * x[0], k1 * x[1]}; };
  law.kD2 = [k2](const Vec& x) { return Vec{k2 * x[0], k2 * x[1]}; };
  law.KD1 = k1 * Mat::identity(2);
  law.KD2 = k2 * Mat::identity(2);
  s.law = std::move(law);

  s.default_x0 = {1.0, 1.0};
  s.grid_lo = {-1.5, -1.5};
  s.grid_hi = {1.5, 1.5};
  s.u_jump_lo = {-1.0, -1.0, -1.0, -1.0};
  s.u_jump_hi = {1.0, 1.0, 1.0, 1.0};
  return s;
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  return {"lq_periodic_1d", "robust_1d_nonunique", "bouncing_ball",
          "security_jump"};
}

Scenario builtin_scenario(const std::string& name) {
  if (name == "robust_1d_nonunique") return make_robust_1d();
  if (name == "bouncing_ball") return make_bouncing_ball();
  if (name == "lq_periodic_1d") return make_lq_periodic_1d();
  if (name == "security_jump") return make_security_jump();
  throw UnknownScenario("no builtin scenario named '" + name + "'");
}

// -- JSON scenario files -----------------------------------------------------

namespace {

using nlohmann::json;

Mat mat_from_json(const json& v) {
  if (!v.is_array()) throw ParseError("scenario json: expected matrix");
  const std::size_t r = v.size();
  std::size_t c = 0;
  if (r > 0) c = v[0].size();
  Mat m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (v[i].size() != c) throw ParseError("scenario json: ragged matrix");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = v[i][j].get<double>();
  }
  return m;
}

Vec vec_from_json(const json& v) {
  Vec r;
  for (const auto& e : v) r.push_back(e.get<double>());
  return r;
}

}  // namespace

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UnknownScenario("cannot open scenario file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw ParseError("scenario json: " + std::string(e.what()));
  }

  const int n = doc.at("n").get<int>();
  QuadraticGameSpec q;
  q.np = n;

  InputDims dims;
  if (doc.contains("dims")) {
    const auto& d = doc["dims"];
    dims.mC1 = d.value("mC1", 0);
    dims.mC2 = d.value("mC2", 0);
    dims.mD1 = d.value("mD1", 0);
    dims.mD2 = d.value("mD2", 0);
  }

  auto read_side = [&](const char* key, Mat& A, Mat& B1, Mat& B2, int m1,
                       int m2) {
    const auto& side = doc.at(key);
    const std::string kind = side.value("kind", "linear");
    if (kind != "linear")
      throw ParseError(
          "scenario json: only linear maps are supported in files; custom "
          "maps exist only as builtins");
    A = mat_from_json(side.at("A"));
    B1 = side.contains("B1") ? mat_from_json(side["B1"]) : Mat(n, m1);
    B2 = side.contains("B2") ? mat_from_json(side["B2"]) : Mat(n, m2);
  };

  const auto& costs_j = doc.at("costs");
  if (doc.contains("flow")) {
    q.has_flow = true;
    read_side("flow", q.AC, q.BC1, q.BC2, dims.mC1, dims.mC2);
    q.QC = mat_from_json(costs_j.at("QC"));
    q.RC1 = dims.mC1 ? mat_from_json(costs_j.at("RC1")) : Mat(0, 0);
    q.RC2 = dims.mC2 ? mat_from_json(costs_j.at("RC2")) : Mat(0, 0);
  }
  if (doc.contains("jump")) {
    q.has_jump = true;
    read_side("jump", q.AD, q.BD1, q.BD2, dims.mD1, dims.mD2);
    q.QD = mat_from_json(costs_j.at("QD"));
    q.RD1 = dims.mD1 ? mat_from_json(costs_j.at("RD1")) : Mat(0, 0);
    q.RD2 = dims.mD2 ? mat_from_json(costs_j.at("RD2")) : Mat(0, 0);
  }

  Scenario s;
  s.name = doc.value("name", std::string("file"));

  const bool timer = doc.contains("timer");
  if (timer) {
    q.T1 = doc["timer"].value("T1", 0.0);
    q.T2 = doc["timer"].value("T2", 0.0);
    if (!q.has_flow || !q.has_jump)
      throw ParseError("scenario json: timer needs both flow and jump");
    s.sys = build_timer_lq_system(q);
  } else {
    // Plain linear system on R^n.  The flow set is everything; the jump set
    // defaults to everything when a jump map is present (an optional
    // jump_set descriptor narrows it).
    GameSystem sys;
    sys.n = n;
    sys.dims = dims;
    if (q.has_flow) {
      AffineMap lf{q.AC, q.BC1, q.BC2, Vec(n, 0.0)};
      sys.lin_f = lf;
      sys.f = [lf](const Vec& x, const Vec& u) {
        Vec r = vadd(mat_vec(lf.A, x), lf.c);
        const int m1 = static_cast<int>(lf.B1.cols());
        for (std::size_t i = 0; i < r.size(); ++i) {
          for (int jj = 0; jj < m1; ++jj) r[i] += lf.B1(i, jj) * u[jj];
          for (std::size_t jj = 0; jj < lf.B2.cols(); ++jj)
            r[i] += lf.B2(i, jj) * u[m1 + jj];
        }
        return r;
      };
    } else {
      sys.f = [n](const Vec&, const Vec&) { return Vec(n, 0.0); };
    }
    if (q.has_jump) {
      AffineMap lg{q.AD, q.BD1, q.BD2, Vec(n, 0.0)};
      sys.lin_g = lg;
      sys.g = [lg](const Vec& x, const Vec& u) {
        Vec r = vadd(mat_vec(lg.A, x), lg.c);
        const int m1 = static_cast<int>(lg.B1.cols());
        for (std::size_t i = 0; i < r.size(); ++i) {
          for (int jj = 0; jj < m1; ++jj) r[i] += lg.B1(i, jj) * u[jj];
          for (std::size_t jj = 0; jj < lg.B2.cols(); ++jj)
            r[i] += lg.B2(i, jj) * u[m1 + jj];
        }
        return r;
      };
    } else {
      sys.g = [](const Vec& x, const Vec&) { return x; };
    }
    sys.C.member = [](const Vec&, const Vec&) { return true; };
    sys.C.margin = [](const Vec&) { return 1.0; };
    if (q.has_jump) {
      if (doc.contains("jump_set")) {
        const auto& js = doc["jump_set"];
        const std::string kind = js.value("kind", "all");
        if (kind == "norm_outside") {
          const double r0 = js.at("r").get<double>();
          sys.D.member = [r0](const Vec& x, const Vec&) {
            return dot(x, x) >= r0 * r0 - kSetTol;
          };
          sys.D.margins.push_back(
              [r0](const Vec& x) { return r0 * r0 - dot(x, x); });
        } else if (kind == "all") {
          sys.D.member = [](const Vec&, const Vec&) { return true; };
        } else {
          throw ParseError("scenario json: unknown jump_set kind " + kind);
        }
      } else {
        sys.D.member = [](const Vec&, const Vec&) { return true; };
      }
    } else {
      sys.D.member = [](const Vec&, const Vec&) { return false; };
    }
    s.sys = std::move(sys);
  }

  if (doc.contains("terminal_set")) {
    const auto& ts = doc["terminal_set"];
    if (ts.value("kind", "box") != "box")
      throw ParseError("scenario json: terminal_set kind must be box");
    const Vec lo = vec_from_json(ts.at("lo"));
    const Vec hi = vec_from_json(ts.at("hi"));
    s.sys.X.present = true;
    s.sys.X.box = {{lo, hi}};
    s.sys.X.member = [lo, hi](const Vec& x) {
      for (std::size_t i = 0; i < lo.size(); ++i)
        if (x[i] < lo[i] - kSetTol || x[i] > hi[i] + kSetTol) return false;
      return true;
    };
    s.sys.X.margin = [lo, hi](const Vec& x) {
      double m = -1e300;
      for (std::size_t i = 0; i < lo.size(); ++i) {
        m = std::max(m, lo[i] - x[i]);
        m = std::max(m, x[i] - hi[i]);
      }
      return m;
    };
  }

  // Stage costs from the quadratic data; q defaults to |x_plant|^2.
  const int np = n;
  const Mat QC = q.has_flow ? q.QC : Mat(np, np);
  const Mat RC1 = q.has_flow ? q.RC1 : Mat(0, 0);
  const Mat RC2 = q.has_flow ? q.RC2 : Mat(0, 0);
  const Mat QD = q.has_jump ? q.QD : Mat(np, np);
  const Mat RD1 = q.has_jump ? q.RD1 : Mat(0, 0);
  const Mat RD2 = q.has_jump ? q.RD2 : Mat(0, 0);
  const int mc1 = dims.mC1;
  StageCosts costs;
  costs.LC = [QC, RC1, RC2, np, mc1](const Vec& x, const Vec& u) {
    Vec xp(x.begin(), x.begin() + np);
    double v = quad_form(QC, xp);
    Vec u1(u.begin(), u.begin() + mc1);
    Vec u2(u.begin() + mc1, u.end());
    if (RC1.rows()) v += quad_form(RC1, u1);
    if (RC2.rows()) v += quad_form(RC2, u2);
    return v;
  };
  const int md1 = dims.mD1;
  costs.LD = [QD, RD1, RD2, np, md1](const Vec& x, const Vec& u) {
    Vec xp(x.begin(), x.begin() + np);
    double v = quad_form(QD, xp);
    Vec u1(u.begin(), u.begin() + md1);
    Vec u2(u.begin() + md1, u.end());
    if (RD1.rows()) v += quad_form(RD1, u1);
    if (RD2.rows()) v += quad_form(RD2, u2);
    return v;
  };
  Mat Pq(np, np);
  if (costs_j.contains("q")) {
    Pq = mat_from_json(costs_j["q"].at("P"));
  } else {
    Pq = Mat::identity(np);
  }
  costs.q = [Pq, np](const Vec& x) {
    Vec xp(x.begin(), x.begin() + np);
    return quad_form(Pq, xp);
  };
  // Full-state embeddings for the closed-form play (zero rows/cols for the
  // timer coordinate when present).
  const int nfull = s.sys.n;
  auto embed = [nfull, np](const Mat& m) {
    Mat e(nfull, nfull);
    for (int i = 0; i < np; ++i)
      for (int jj = 0; jj < np; ++jj) e(i, jj) = m(i, jj);
    return e;
  };
  costs.flow_quad = QuadFlowCost{embed(QC), RC1, RC2};
  if (q.has_jump) costs.jump_quad = QuadJumpCost{embed(QD), RD1, RD2};
  s.costs = std::move(costs);
  const double timer_hi = q.T2.value_or(1.0);
  s.quad = std::move(q);

  s.default_x0 = Vec(static_cast<std::size_t>(s.sys.n), 1.0);
  if (s.sys.timer_index) s.default_x0[*s.sys.timer_index] = 0.0;
  s.grid_lo = Vec(static_cast<std::size_t>(s.sys.n), -1.0);
  s.grid_hi = Vec(static_cast<std::size_t>(s.sys.n), 1.0);
  if (s.sys.timer_index) {
    s.grid_lo[*s.sys.timer_index] = 0.0;
    s.grid_hi[*s.sys.timer_index] = timer_hi;
  }
  s.u_flow_lo = Vec(static_cast<std::size_t>(dims.mC()), -5.0);
  s.u_flow_hi = Vec(static_cast<std::size_t>(dims.mC()), 5.0);
  s.u_jump_lo = Vec(static_cast<std::size_t>(dims.mD()), -5.0);
  s.u_jump_hi = Vec(static_cast<std::size_t>(dims.mD()), 5.0);
  return s;
}

Scenario resolve_scenario(const std::string& ref) {
  for (const auto& n : builtin_scenario_names())
    if (n == ref) return builtin_scenario(ref);
  std::ifstream probe(ref);
  if (probe.good()) return load_scenario_file(ref);
  throw UnknownScenario("'" + ref +
                        "' is neither a builtin scenario nor a readable file");
}

}  // namespace hygame
