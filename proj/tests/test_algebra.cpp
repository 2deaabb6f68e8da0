#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dd/algebra.hpp"

using namespace dd;

TEST_CASE("sup_norm brackets") {
  DDAlgebra alg{PrimePair(2, 3)};
  auto u = dd_unit(alg);
  auto [lo, hi] = sup_norm(u.body());
  CHECK(lo == 1.0);
  CHECK(hi == 1.0);

  // f(x) = x*1 on an 11-node grid (10 intervals), L = 1 -> (1, 1.05)
  MatrixFunction t(Int(6), [](const Rat& x) { return Mat::identity(6) * cplx(to_double(x), 0.0); },
                   Rat(1), Rat(1));
  auto [tl, th] = sup_norm(t, 10);
  CHECK(tl == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(th == doctest::Approx(1.05).epsilon(1e-12));
}

TEST_CASE("sup_norm lower agrees with dense evaluation for random Hermitian PL data") {
  // random Hermitian-valued piecewise-linear function: interpolate two fixed
  // Hermitian matrices; true sup is at a node, dense 10^4 grid must agree
  std::mt19937_64 rng(8);
  Mat h0 = random_hermitian(5, rng), h1 = random_hermitian(5, rng);
  MatrixFunction f(Int(5),
                   [h0, h1](const Rat& x) {
                     double t = to_double(x);
                     return h0 * cplx(1 - t, 0.0) + h1 * cplx(t, 0.0);
                   },
                   Rat(20), Rat(10));
  auto [lo, hi] = sup_norm(f, 64);
  double dense = 0;
  for (int i = 0; i <= 10000; ++i) {
    Rat x(i, 10000);
    dense = std::max(dense, f.eval(x).op_norm());
  }
  CHECK(lo <= dense + 1e-12);
  CHECK(dense <= hi + 1e-12);
}

TEST_CASE("membership") {
  DDAlgebra alg{PrimePair(2, 3)};
  auto [ok_u, res_u] = check_membership(dd_unit(alg).body(), alg);
  CHECK(ok_u);
  CHECK(res_u == 0.0);

  // constant diag(1..6) is not in Z_{2,3}; oracle: explicit least-squares
  // projection onto span{E^p_{ik} (x) 1_3}
  MatrixFunction g(Int(6),
                   [](const Rat&) {
                     Mat m(6, 6);
                     for (int i = 0; i < 6; ++i) m(i, i) = double(i + 1);
                     return m;
                   },
                   Rat(0), Rat(6));
  auto [ok_g, res_g] = check_membership(g, alg);
  CHECK_FALSE(ok_g);
  // oracle by explicit least squares: projection onto {a (x) 1_3} leaves
  // distance 2 at x=0; onto {1_2 (x) b} leaves sqrt(13.5) at x=1; residual is
  // the max of the two
  double d0 = 2.0;
  double d1 = std::sqrt(13.5);
  CHECK(res_g == doctest::Approx(std::max(d0, d1)).epsilon(1e-12));

  // bump vanishes at both endpoints
  auto corpus = generator_corpus(alg);
  auto [ok_b, res_b] = check_membership(corpus[2].body(), alg);
  CHECK(ok_b);
  CHECK(res_b == 0.0);
}

TEST_CASE("generator corpus: size, membership, norms") {
  DDAlgebra alg{PrimePair(2, 3)};
  auto corpus = generator_corpus(alg);
  CHECK(corpus.size() == 7);
  for (const auto& f : corpus) {
    auto [ok, res] = check_membership(f.body(), alg);
    CHECK(ok);
    CHECK(res == 0.0);
    // exact endpoint factorization against stored blocks
    CHECK((f.eval(Rat(0)) - kron(f.left_block(), Mat::identity(3))).max_abs() == 0.0);
    CHECK((f.eval(Rat(1)) - kron(Mat::identity(2), f.right_block())).max_abs() == 0.0);
  }
  CHECK(sup_norm(corpus[0].body()).first == 1.0);                            // unit
  CHECK(sup_norm(corpus[1].body()).first == 1.0);                            // t
  CHECK(sup_norm(corpus[2].body()).first == doctest::Approx(0.25));          // bump at x=1/2
}

TEST_CASE("algebra operations: unit law, involution, submultiplicativity, C*-identity") {
  DDAlgebra alg{PrimePair(2, 3)};
  auto corpus = generator_corpus(alg);
  auto u = corpus[0];
  for (const auto& e : corpus) {
    CHECK(sampled_sup((e * u).body() - e.body()) == 0.0);
    CHECK(sampled_sup(e.adjoint().adjoint().body() - e.body()) == 0.0);
    // closure under ops
    CHECK(check_membership((e * e).body(), alg).second <= 1e-10);
    CHECK(check_membership((e + e.adjoint()).body(), alg).second <= 1e-10);
    // C*-identity within bracket width
    auto [l1, h1] = sup_norm((e.adjoint() * e).body());
    auto [l2, h2] = sup_norm(e.body());
    CHECK(l1 <= h2 * h2 + 1e-9);
    CHECK(l2 * l2 <= h1 + 1e-9);
  }
  for (const auto& a : corpus)
    for (const auto& b : corpus) {
      // certified upper of the product is submultiplicative, and the measured
      // lower bracket respects it
      auto ab = sup_norm((a * b).body());
      double cert = to_double((a * b).norm_upper());
      CHECK(cert <= to_double(a.norm_upper()) * to_double(b.norm_upper()) + 1e-12);
      CHECK(ab.first <= cert + 1e-9);
    }
}
