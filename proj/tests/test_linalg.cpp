#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dd/linalg.hpp"

using namespace dd;

TEST_CASE("op_norm on known matrices") {
  CHECK(Mat::identity(7).op_norm() == doctest::Approx(1.0).epsilon(1e-10));
  Mat d(3, 3);
  d(0, 0) = 2.5;
  d(1, 1) = cplx(0, -4.0);
  d(2, 2) = 1.0;
  CHECK(d.op_norm() == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("op_norm agrees with Jacobi SVD oracle on random matrices") {
  std::mt19937_64 rng(2024);
  for (int n : {2, 5, 12, 30}) {
    for (int t = 0; t < 5; ++t) {
      Mat a = random_matrix(n, rng);
      auto svd = jacobi_svd(a);
      CHECK(a.op_norm() == doctest::Approx(svd.sigma[0]).epsilon(1e-8));
    }
  }
}

TEST_CASE("inverse") {
  std::mt19937_64 rng(55);
  Mat a = random_matrix(8, rng) + Mat::identity(8) * cplx(4.0, 0);
  Mat prod = a * a.inverse();
  CHECK((prod - Mat::identity(8)).max_abs() < 1e-10);
}

TEST_CASE("polar_unitary produces the nearest unitary (vs SVD oracle)") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 10; ++t) {
    Mat u0 = random_unitary(6, rng);
    Mat noise = random_matrix(6, rng, 0.01);
    Mat b = u0 + noise;
    Mat u = polar_unitary(b);
    CHECK((u.adjoint() * u - Mat::identity(6)).op_norm() < 1e-12);
    // oracle: polar factor from SVD
    auto svd = jacobi_svd(b);
    Mat oracle = svd.u * svd.v.adjoint();
    CHECK((u - oracle).op_norm() < 1e-8);
  }
}

TEST_CASE("kron_sum_op_norm against dense kron") {
  std::mt19937_64 rng(7);
  std::vector<Mat> as, bs;
  Mat dense(4 * 3, 4 * 3);
  for (int r = 0; r < 3; ++r) {
    as.push_back(random_matrix(4, rng));
    bs.push_back(random_matrix(3, rng));
    dense += kron(as.back(), bs.back());
  }
  CHECK(kron_sum_op_norm(as, bs) == doctest::Approx(dense.op_norm()).epsilon(1e-8));
}

TEST_CASE("permutation matrices") {
  Mat p = Mat::permutation({2, 0, 1});
  CHECK(p(2, 0) == cplx(1.0));
  CHECK(p(0, 1) == cplx(1.0));
  CHECK(p(1, 2) == cplx(1.0));
  CHECK((p * p.adjoint() - Mat::identity(3)).max_abs() == 0.0);
}
