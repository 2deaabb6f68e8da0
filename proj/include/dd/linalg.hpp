#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace dd {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Dimensions stay small enough (a few
// hundred) that plain O(n^3) kernels are adequate.
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

  static Mat identity(int n);
  static Mat zero(int n) { return Mat(n, n); }
  // P e_j = e_{perm[j]}  (perm maps source index to target index).
  static Mat permutation(const std::vector<int>& perm);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cplx& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  const cplx& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator*(const Mat& o) const;
  Mat operator*(cplx s) const;
  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);

  Mat adjoint() const;
  Mat transpose() const;

  double frobenius() const;
  double max_abs() const;

  // Largest singular value via power iteration on A*A, relative tol 1e-12.
  double op_norm() const;

  Mat inverse() const;  // partial-pivot LU; throws on (near-)singular

  std::vector<cplx>& data() { return a_; }
  const std::vector<cplx>& data() const { return a_; }

 private:
  int rows_, cols_;
  std::vector<cplx> a_;
};

Mat kron(const Mat& a, const Mat& b);

// Operator norm of sum_r kron(A_r, B_r) without materializing the Kronecker
// product; power iteration with matvecs reshaped through the factors.
double kron_sum_op_norm(const std::vector<Mat>& as, const std::vector<Mat>& bs);

// Hermitian part (A + A*)/2.
Mat hermitian_part(const Mat& a);

// Polar factor (nearest unitary) by Newton iteration X <- (X + X^-*)/2.
Mat polar_unitary(const Mat& a);

// One-sided Jacobi SVD; returns singular values descending. Test-oracle
// quality, not performance tuned.
struct Svd {
  Mat u;
  std::vector<double> sigma;
  Mat v;  // A = U diag(sigma) V*
};
Svd jacobi_svd(const Mat& a);

// Deterministic pseudo-random matrices for property tests.
Mat random_matrix(int n, std::mt19937_64& rng, double scale = 1.0);
Mat random_hermitian(int n, std::mt19937_64& rng, double scale = 1.0);
Mat random_unitary(int n, std::mt19937_64& rng);

}  // namespace dd
