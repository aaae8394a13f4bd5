#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace hygame {

using Vec = std::vector<double>;

// Dense row-major matrix.  Everything in this project is tiny (state
// dimension <= 8, input blocks <= 4), so the priority is predictable,
// allocation-light arithmetic rather than clever storage.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : r_(rows), c_(cols), a_(rows * cols, fill) {}

  static Mat identity(std::size_t n);
  static Mat diag(const Vec& d);
  // Row-wise literal, e.g. Mat::of({{1.0, 2.0}, {3.0, 4.0}}).
  static Mat of(std::initializer_list<std::initializer_list<double>> rows);
  static Mat col(const Vec& v);  // n x 1
  static Mat row(const Vec& v);  // 1 x n

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool empty() const { return r_ == 0 || c_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

  Mat transpose() const;
  Mat operator-() const;
  Mat& operator+=(const Mat& b);
  Mat& operator-=(const Mat& b);
  Mat& operator*=(double s);

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<double> a_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);
Mat operator*(double s, Mat a);
Vec mat_vec(const Mat& a, const Vec& x);
// A^T x without forming the transpose.
Vec mat_tvec(const Mat& a, const Vec& x);

// -- small vector helpers (Vec is a plain std::vector, so no operators) ------
Vec vadd(const Vec& a, const Vec& b);
Vec vsub(const Vec& a, const Vec& b);
Vec vscale(double s, const Vec& a);
// a + s*b
Vec vaxpy(const Vec& a, double s, const Vec& b);
double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm_inf(const Vec& a);
Vec vcat(const Vec& a, const Vec& b);

// x' P x  (P square, dim = |x|)
double quad_form(const Mat& p, const Vec& x);
Mat sym_part(const Mat& a);
double fro_norm(const Mat& a);
double fro_dist(const Mat& a, const Mat& b);
double max_abs(const Mat& a);

// -- LU with partial pivoting ------------------------------------------------
struct LuFactors {
  Mat lu;                // combined L (unit diagonal) and U
  std::vector<int> piv;  // row permutation
  int sign = 1;
};

// Throws SingularMatrix when a pivot underflows.
LuFactors lu_factor(Mat a);
Vec lu_solve(const LuFactors& f, Vec b);
Mat lu_solve(const LuFactors& f, const Mat& b);
Mat inverse(const Mat& a);
double determinant(const Mat& a);
// Frobenius-norm condition estimate ||A||_F * ||A^-1||_F.
double cond_estimate(const Mat& a);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
// The input is symmetrized first; fine for the definiteness checks this
// project needs, not a general-purpose eigensolver.
Vec sym_eigenvalues(Mat a);
double sym_eig_min(const Mat& a);
double sym_eig_max(const Mat& a);

// Upper-triangle (row-major) packing of a symmetric matrix and back.
Vec vech(const Mat& a);
Mat unvech(const Vec& v, std::size_t n);

// Assemble [[A, B], [B^T, C]] from blocks (used for the jump input Hessian).
Mat block2x2(const Mat& a, const Mat& b, const Mat& bt, const Mat& c);

}  // namespace hygame
