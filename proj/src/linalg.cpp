#include "hygame/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "hygame/errors.hpp"

namespace hygame {

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::diag(const Vec& d) {
  Mat m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Mat Mat::of(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  Mat m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw Error("ragged matrix literal");
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Mat Mat::col(const Vec& v) {
  Mat m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

Mat Mat::row(const Vec& v) {
  Mat m(1, v.size());
  for (std::size_t j = 0; j < v.size(); ++j) m(0, j) = v[j];
  return m;
}

Mat Mat::transpose() const {
  Mat m(c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

Mat Mat::operator-() const {
  Mat m = *this;
  for (double& v : m.a_) v = -v;
  return m;
}

Mat& Mat::operator+=(const Mat& b) {
  if (r_ != b.r_ || c_ != b.c_) throw Error("matrix shape mismatch in +=");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += b.a_[k];
  return *this;
}

Mat& Mat::operator-=(const Mat& b) {
  if (r_ != b.r_ || c_ != b.c_) throw Error("matrix shape mismatch in -=");
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= b.a_[k];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& v : a_) v *= s;
  return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw Error("matrix shape mismatch in *");
  Mat m(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += aik * b(k, j);
    }
  return m;
}

Mat operator*(double s, Mat a) { return a *= s; }

Vec mat_vec(const Mat& a, const Vec& x) {
  if (a.cols() != x.size()) throw Error("matrix/vector shape mismatch");
  Vec y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Vec mat_tvec(const Mat& a, const Vec& x) {
  if (a.rows() != x.size()) throw Error("matrix/vector shape mismatch");
  Vec y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * x[i];
  return y;
}

Vec vadd(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec vsub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec vscale(double s, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

Vec vaxpy(const Vec& a, double s, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
  return r;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

Vec vcat(const Vec& a, const Vec& b) {
  Vec r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

double quad_form(const Mat& p, const Vec& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) s += x[i] * p(i, j) * x[j];
  return s;
}

Mat sym_part(const Mat& a) {
  Mat m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m(i, j) = 0.5 * (a(i, j) + a(j, i));
  return m;
}

double fro_norm(const Mat& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

double fro_dist(const Mat& a, const Mat& b) { return fro_norm(a - b); }

double max_abs(const Mat& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::fabs(v));
  return m;
}

LuFactors lu_factor(Mat a) {
  if (a.rows() != a.cols()) throw Error("lu_factor: matrix not square");
  const std::size_t n = a.rows();
  LuFactors f;
  f.piv.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.piv[i] = static_cast<int>(i);

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::fabs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::fabs(a(i, k));
      if (v > best) { best = v; p = i; }
    }
    if (best < 1e-300) throw SingularMatrix("lu_factor: pivot underflow");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(f.piv[k], f.piv[p]);
      f.sign = -f.sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      a(i, k) /= a(k, k);
      const double lik = a(i, k);
      if (lik == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
    }
  }
  f.lu = std::move(a);
  return f;
}

Vec lu_solve(const LuFactors& f, Vec b) {
  const std::size_t n = f.lu.rows();
  if (b.size() != n) throw Error("lu_solve: size mismatch");
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = b[static_cast<std::size_t>(f.piv[i])];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) y[i] -= f.lu(i, j) * y[j];
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t j = ii + 1; j < n; ++j) y[ii] -= f.lu(ii, j) * y[j];
    y[ii] /= f.lu(ii, ii);
  }
  return y;
}

Mat lu_solve(const LuFactors& f, const Mat& b) {
  Mat x(b.rows(), b.cols());
  Vec col(b.rows());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
    Vec sol = lu_solve(f, col);
    for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = sol[i];
  }
  return x;
}

Mat inverse(const Mat& a) {
  return lu_solve(lu_factor(a), Mat::identity(a.rows()));
}

double determinant(const Mat& a) {
  LuFactors f;
  try {
    f = lu_factor(a);
  } catch (const SingularMatrix&) {
    return 0.0;
  }
  double d = f.sign;
  for (std::size_t i = 0; i < a.rows(); ++i) d *= f.lu(i, i);
  return d;
}

double cond_estimate(const Mat& a) {
  return fro_norm(a) * fro_norm(inverse(a));
}

Vec sym_eigenvalues(Mat a) {
  a = sym_part(a);
  const std::size_t n = a.rows();
  if (n == 0) return {};
  // Cyclic Jacobi: rotate away the largest remaining off-diagonal entries
  // until the off-diagonal mass is negligible relative to the matrix scale.
  const double scale = std::max(1e-300, max_abs(a));
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) < 1e-14 * scale) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  Vec ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double sym_eig_min(const Mat& a) {
  if (a.rows() == 0) return 0.0;
  return sym_eigenvalues(a).front();
}

double sym_eig_max(const Mat& a) {
  if (a.rows() == 0) return 0.0;
  return sym_eigenvalues(a).back();
}

Vec vech(const Mat& a) {
  const std::size_t n = a.rows();
  Vec v;
  v.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) v.push_back(a(i, j));
  return v;
}

Mat unvech(const Vec& v, std::size_t n) {
  Mat a(n, n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      a(i, j) = v[k];
      a(j, i) = v[k];
      ++k;
    }
  return a;
}

Mat block2x2(const Mat& a, const Mat& b, const Mat& bt, const Mat& c) {
  const std::size_t m1 = a.rows(), m2 = c.rows();
  Mat r(m1 + m2, m1 + m2);
  for (std::size_t i = 0; i < m1; ++i)
    for (std::size_t j = 0; j < m1; ++j) r(i, j) = a(i, j);
  for (std::size_t i = 0; i < m1; ++i)
    for (std::size_t j = 0; j < m2; ++j) r(i, m1 + j) = b(i, j);
  for (std::size_t i = 0; i < m2; ++i)
    for (std::size_t j = 0; j < m1; ++j) r(m1 + i, j) = bt(i, j);
  for (std::size_t i = 0; i < m2; ++i)
    for (std::size_t j = 0; j < m2; ++j) r(m1 + i, m1 + j) = c(i, j);
  return r;
}

}  // namespace hygame
