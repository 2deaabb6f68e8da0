#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dd/numtheory.hpp"

using namespace dd;

namespace {

// Independent oracle: exhaustive scan over all (k0,k1) <= bound.
std::pair<Int, Int> brute_force_factors(const PrimePair& pr, long divisor, long bound) {
  Int best0 = -1, best1 = -1;
  for (long k0 = 1; k0 <= bound; ++k0) {
    for (long k1 = 1; k1 <= bound; ++k1) {
      if (k0 <= 2 * pr.q || k1 <= 2 * pr.p) continue;
      if ((Int(k0) * k1) % divisor != 0) continue;
      if (gcd_int(Int(k0) * pr.p, Int(k1) * pr.q) != 1) continue;
      if (best0 < 0 || Int(k0) + k1 < best0 + best1 ||
          (Int(k0) + k1 == best0 + best1 && Int(k0) < best0)) {
        best0 = k0;
        best1 = k1;
      }
    }
  }
  if (best0 < 0) throw SearchExhausted("oracle: none");
  return {best0, best1};
}

}  // namespace

TEST_CASE("is_prime_pair basics") {
  CHECK(is_prime_pair(2, 3));
  CHECK_FALSE(is_prime_pair(4, 6));
  CHECK(is_prime_pair(16, 15));
  CHECK(is_prime_pair(1, 1));
  CHECK_THROWS(is_prime_pair(0, 3));
}

TEST_CASE("select_expansion_factors matches brute-force oracle on spec examples") {
  PrimePair pr(2, 3);
  auto [k0, k1] = select_expansion_factors(pr, 2, 40);
  CHECK(k0 == 8);
  CHECK(k1 == 5);
  auto oracle = brute_force_factors(pr, 2, 40);
  CHECK(k0 == oracle.first);
  CHECK(k1 == oracle.second);

  auto [j0, j1] = select_expansion_factors(pr, 1, 40);
  CHECK(j0 == 7);
  CHECK(j1 == 5);
  CHECK(gcd_int(j0 * 2, j1 * 3) == 1);

  CHECK_THROWS_AS(select_expansion_factors(pr, 2, 4), SearchExhausted);
}

TEST_CASE("select_expansion_factors agrees with oracle across small inputs") {
  for (long p = 1; p <= 4; ++p) {
    for (long q = 1; q <= 5; ++q) {
      if (gcd_int(p, q) != 1) continue;
      PrimePair pr(p, q);
      for (long d : {1L, 2L, 3L, 5L}) {
        long bound = long(to_double(Rat(default_expansion_bound(pr, d))));
        auto got = select_expansion_factors(pr, d, bound);
        auto want = brute_force_factors(pr, d, bound);
        CHECK(got.first == want.first);
        CHECK(got.second == want.second);
        // stage pair stays prime
        CHECK(is_prime_pair(got.first * pr.p, got.second * pr.q));
      }
    }
  }
}

TEST_CASE("determinism") {
  PrimePair pr(16, 15);
  auto a = select_expansion_factors(pr, 3, 200);
  auto b = select_expansion_factors(pr, 3, 200);
  CHECK(a == b);
  CHECK(a.first == 31);  // k0 > 30, (31,33): gcd(496,495)=1, 3 | 1023
  CHECK(a.second == 33);
}
