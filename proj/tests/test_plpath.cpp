#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dd/plpath.hpp"

using namespace dd;

namespace {

PLPath random_path(std::mt19937_64& rng, int knots) {
  std::uniform_int_distribution<long> num(0, 64);
  std::vector<Rat> xs{Rat(0)}, ys;
  for (int i = 1; i < knots; ++i) xs.push_back(Rat(i, knots));
  xs.push_back(Rat(1));
  for (size_t i = 0; i < xs.size(); ++i) ys.push_back(Rat(num(rng), 64));
  return PLPath(xs, ys);
}

}  // namespace

TEST_CASE("compose: identity and affine cases") {
  PLPath id = PLPath::identity();
  PLPath xi({Rat(0), Rat(1, 2), Rat(1)}, {Rat(0), Rat(1, 3), Rat(1)});
  CHECK(compose_paths(id, xi) == xi);
  CHECK(compose_paths(xi, id) == xi);

  PLPath half = PLPath::affine(Rat(0), Rat(1, 2));
  PLPath quarter = compose_paths(half, half);
  CHECK(quarter.eval(Rat(1)) == Rat(1, 4));
  CHECK(quarter.eval(Rat(1, 2)) == Rat(1, 8));
  CHECK(quarter.is_affine());
}

TEST_CASE("compose agrees with dense evaluation oracle") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 20; ++trial) {
    PLPath a = random_path(rng, 5), b = random_path(rng, 5);
    PLPath c = compose_paths(a, b);
    for (int i = 0; i <= 1000; ++i) {
      Rat x(i, 1000);
      double direct = to_double(a.eval(b.eval(x)));
      double composed = to_double(c.eval(x));
      CHECK(std::abs(direct - composed) < 1e-12);
    }
  }
}

TEST_CASE("compose is associative up to canonical form") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 25; ++trial) {
    PLPath a = random_path(rng, 4), b = random_path(rng, 4), c = random_path(rng, 4);
    PLPath left = compose_paths(compose_paths(a, b), c);
    PLPath right = compose_paths(a, compose_paths(b, c));
    CHECK(left.sup_distance(right) == 0);
    CHECK(left == right);  // canonical normalization merges collinear nodes
  }
}

TEST_CASE("image_diameter") {
  CHECK(PLPath::identity().image_diameter() == 1);
  CHECK(PLPath::constant(Rat(1, 2)).image_diameter() == 0);
  PLPath xi({Rat(0), Rat(1, 2), Rat(1)}, {Rat(1, 4), Rat(3, 8), Rat(1, 3)});
  CHECK(xi.image_diameter() == Rat(1, 8));
}

TEST_CASE("image diameter never grows under composition") {
  std::mt19937_64 rng(999);
  for (int trial = 0; trial < 50; ++trial) {
    PLPath xi = random_path(rng, 6), zeta = random_path(rng, 6);
    CHECK(compose_paths(xi, zeta).image_diameter() <= xi.image_diameter());
  }
}

TEST_CASE("pointwise_ordered") {
  PLPath lo = PLPath::affine(Rat(0), Rat(1, 2));
  PLPath hi = PLPath::affine(Rat(1, 2), Rat(1));
  CHECK(pointwise_ordered({lo, hi}));
  CHECK_FALSE(pointwise_ordered({PLPath::identity(), PLPath::affine(Rat(1), Rat(0))}));

  // monotone staircase families are ordered by construction
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<long> num(0, 16);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<PLPath> fam;
    Rat lo_v(0), hi_v(0);
    int k = 4 + int(trial % 4);
    for (int i = 0; i < k; ++i) {
      Rat nlo = lo_v + Rat(num(rng), 16 * k);
      Rat nhi = std::max(nlo, hi_v + Rat(num(rng), 16 * k));
      if (nhi > 1) nhi = 1;
      if (nlo > nhi) nlo = nhi;
      fam.push_back(PLPath::affine(nlo, nhi));
      lo_v = nlo;
      hi_v = nhi;
    }
    CHECK(pointwise_ordered(fam));
  }
}

TEST_CASE("lipschitz and sup_distance are exact") {
  PLPath xi({Rat(0), Rat(1, 4), Rat(1)}, {Rat(0), Rat(1, 2), Rat(1, 2)});
  CHECK(xi.lipschitz() == 2);
  PLPath zeta = PLPath::constant(Rat(1, 2));
  CHECK(xi.sup_distance(zeta) == Rat(1, 2));
}
