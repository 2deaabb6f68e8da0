#include "dd/numtheory.hpp"

namespace dd {

PrimePair::PrimePair(Int p_, Int q_) : p(std::move(p_)), q(std::move(q_)) {
  if (p < 1 || q < 1) throw std::invalid_argument("PrimePair: entries must be >= 1");
  if (gcd_int(p, q) != 1) throw std::invalid_argument("PrimePair: gcd(p,q) must be 1");
}

bool is_prime_pair(const Int& p, const Int& q) {
  if (p < 1 || q < 1) throw std::invalid_argument("is_prime_pair: entries must be >= 1");
  return gcd_int(p, q) == 1;
}

std::pair<Int, Int> select_expansion_factors(const PrimePair& pair, const Int& divisor,
                                             const Int& bound) {
  if (divisor < 1) throw std::invalid_argument("select_expansion_factors: divisor must be >= 1");
  const Int k0_min = 2 * pair.q + 1, k1_min = 2 * pair.p + 1;
  if (k0_min > bound || k1_min > bound)
    throw SearchExhausted("select_expansion_factors: bound below minimal factors");
  for (Int s = k0_min + k1_min; s <= 2 * bound; ++s) {
    Int k0_lo = k0_min, k0_hi = s - k1_min;
    if (k0_hi > bound) k0_hi = bound;
    if (s - k0_lo > bound) k0_lo = s - bound;
    for (Int k0 = k0_lo; k0 <= k0_hi; ++k0) {
      Int k1 = s - k0;
      if ((k0 * k1) % divisor != 0) continue;
      if (gcd_int(k0 * pair.p, k1 * pair.q) != 1) continue;
      return {k0, k1};
    }
  }
  throw SearchExhausted("select_expansion_factors: no solution within bound " + bound.str());
}

}  // namespace dd
