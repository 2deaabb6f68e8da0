#include "dd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dd {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::permutation(const std::vector<int>& perm) {
  int n = int(perm.size());
  Mat m(n, n);
  for (int j = 0; j < n; ++j) m(perm[j], j) = 1.0;
  return m;
}

Mat Mat::operator+(const Mat& o) const {
  Mat r = *this;
  r += o;
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  Mat r = *this;
  r -= o;
  return r;
}

Mat& Mat::operator+=(const Mat& o) {
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Mat Mat::operator*(const Mat& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("Mat::operator*: shape mismatch");
  Mat r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      cplx aik = (*this)(i, k);
      if (aik == cplx(0.0)) continue;
      const cplx* brow = &o.a_[size_t(k) * o.cols_];
      cplx* rrow = &r.a_[size_t(i) * o.cols_];
      for (int j = 0; j < o.cols_; ++j) rrow[j] += aik * brow[j];
    }
  }
  return r;
}

Mat Mat::operator*(cplx s) const {
  Mat r = *this;
  for (auto& v : r.a_) v *= s;
  return r;
}

Mat Mat::adjoint() const {
  Mat r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

Mat Mat::transpose() const {
  Mat r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

double Mat::frobenius() const {
  double s = 0;
  for (const auto& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double Mat::max_abs() const {
  double s = 0;
  for (const auto& v : a_) s = std::max(s, std::abs(v));
  return s;
}

double Mat::op_norm() const {
  if (rows_ == 0 || cols_ == 0) return 0.0;
  if (rows_ == 1 && cols_ == 1) return std::abs(a_[0]);
  // power iteration on A*A with deterministic start
  int n = cols_;
  std::vector<cplx> v(n);
  for (int i = 0; i < n; ++i) v[i] = cplx(1.0 + 0.3 * ((i * 37) % 11), 0.17 * ((i * 53) % 7));
  auto normalize = [&](std::vector<cplx>& x) {
    double s = 0;
    for (auto& c : x) s += std::norm(c);
    s = std::sqrt(s);
    if (s == 0) return 0.0;
    for (auto& c : x) c /= s;
    return s;
  };
  normalize(v);
  double lam = 0, prev = -1;
  std::vector<cplx> av(rows_), aav(n);
  for (int it = 0; it < 500; ++it) {
    for (int i = 0; i < rows_; ++i) {
      cplx s = 0;
      const cplx* row = &a_[size_t(i) * cols_];
      for (int j = 0; j < n; ++j) s += row[j] * v[j];
      av[i] = s;
    }
    for (int j = 0; j < n; ++j) {
      cplx s = 0;
      for (int i = 0; i < rows_; ++i) s += std::conj(a_[size_t(i) * cols_ + j]) * av[i];
      aav[j] = s;
    }
    v = aav;
    lam = normalize(v);
    if (it > 4 && std::abs(lam - prev) <= 1e-12 * std::max(1.0, lam)) break;
    prev = lam;
  }
  return std::sqrt(std::max(0.0, lam));
}

Mat Mat::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("Mat::inverse: not square");
  int n = rows_;
  Mat a = *this;
  Mat inv = Mat::identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      double m = std::abs(a(r, col));
      if (m > best) {
        best = m;
        piv = r;
      }
    }
    if (best < 1e-14) throw std::runtime_error("Mat::inverse: singular matrix");
    if (piv != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    cplx d = a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) /= d;
      inv(col, j) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      cplx f = a(r, col);
      if (f == cplx(0.0)) continue;
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      cplx s = a(i, j);
      if (s == cplx(0.0)) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = s * b(k, l);
    }
  return r;
}

double kron_sum_op_norm(const std::vector<Mat>& as, const std::vector<Mat>& bs) {
  if (as.empty()) return 0.0;
  int p = as[0].rows(), q = bs[0].rows();
  // vector in C^{p*q} viewed as p x q matrix V; (A (x) B)vec(V) = A V B^T
  Mat v(p, q);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j)
      v(i, j) = cplx(1.0 + ((i * 31 + j * 17) % 13) * 0.21, ((i * 7 + j * 29) % 5) * 0.13);
  auto apply = [&](const Mat& x, bool adj) {
    Mat acc(p, q);
    for (size_t r = 0; r < as.size(); ++r) {
      const Mat a = adj ? as[r].adjoint() : as[r];
      const Mat b = adj ? bs[r].adjoint() : bs[r];
      acc += a * x * b.transpose();
    }
    return acc;
  };
  auto normalize = [&](Mat& x) {
    double s = x.frobenius();
    if (s > 0)
      for (auto& c : x.data()) c /= s;
    return s;
  };
  normalize(v);
  double lam = 0, prev = -1;
  for (int it = 0; it < 300; ++it) {
    Mat w = apply(v, false);
    v = apply(w, true);
    lam = normalize(v);
    if (it > 4 && std::abs(lam - prev) <= 1e-12 * std::max(1.0, lam)) break;
    prev = lam;
  }
  return std::sqrt(std::max(0.0, lam));
}

Mat hermitian_part(const Mat& a) {
  Mat r = a + a.adjoint();
  for (auto& v : r.data()) v *= 0.5;
  return r;
}

Mat polar_unitary(const Mat& a) {
  Mat x = a;
  for (int it = 0; it < 100; ++it) {
    Mat next = x + x.inverse().adjoint();
    for (auto& v : next.data()) v *= 0.5;
    double delta = (next - x).op_norm();
    x = next;
    if (delta < 1e-15) break;
  }
  return x;
}

Svd jacobi_svd(const Mat& a) {
  int m = a.rows(), n = a.cols();
  Mat u = a;
  Mat v = Mat::identity(n);
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        cplx apq = 0;
        double app = 0, aqq = 0;
        for (int i = 0; i < m; ++i) {
          apq += std::conj(u(i, p)) * u(i, q);
          app += std::norm(u(i, p));
          aqq += std::norm(u(i, q));
        }
        off = std::max(off, std::abs(apq));
        if (std::abs(apq) < 1e-15 * std::sqrt(app * aqq) + 1e-300) continue;
        // rotate columns p,q to zero the off-diagonal of the 2x2 Gram block
        double mag = std::abs(apq);
        cplx phase = apq / mag;
        double tau = (aqq - app) / (2 * mag);
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
        double c = 1.0 / std::sqrt(1 + t * t);
        double s = c * t;
        for (int i = 0; i < m; ++i) {
          cplx up = u(i, p), uq = u(i, q);
          u(i, p) = c * up - s * std::conj(phase) * uq;
          u(i, q) = s * phase * up + c * uq;
        }
        for (int i = 0; i < n; ++i) {
          cplx vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * std::conj(phase) * vq;
          v(i, q) = s * phase * vp + c * vq;
        }
      }
    }
    if (off < 1e-14) break;
  }
  Svd out;
  out.sigma.resize(n);
  out.u = Mat(m, n);
  for (int j = 0; j < n; ++j) {
    double s = 0;
    for (int i = 0; i < m; ++i) s += std::norm(u(i, j));
    s = std::sqrt(s);
    out.sigma[j] = s;
    for (int i = 0; i < m; ++i) out.u(i, j) = s > 1e-300 ? u(i, j) / s : cplx(i == j ? 1.0 : 0.0);
  }
  out.v = v;
  // sort descending
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int x, int y) { return out.sigma[x] > out.sigma[y]; });
  Svd sorted;
  sorted.sigma.resize(n);
  sorted.u = Mat(m, n);
  sorted.v = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    sorted.sigma[j] = out.sigma[idx[j]];
    for (int i = 0; i < m; ++i) sorted.u(i, j) = out.u(i, idx[j]);
    for (int i = 0; i < n; ++i) sorted.v(i, j) = out.v(i, idx[j]);
  }
  return sorted;
}

Mat random_matrix(int n, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  Mat m(n, n);
  for (auto& v : m.data()) v = cplx(g(rng), g(rng));
  return m;
}

Mat random_hermitian(int n, std::mt19937_64& rng, double scale) {
  return hermitian_part(random_matrix(n, rng, scale));
}

Mat random_unitary(int n, std::mt19937_64& rng) {
  return polar_unitary(random_matrix(n, rng) + Mat::identity(n) * cplx(3.0, 0.0));
}

}  // namespace dd
