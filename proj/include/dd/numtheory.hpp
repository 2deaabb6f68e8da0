#pragma once

#include <stdexcept>
#include <utility>

#include "dd/rational.hpp"

namespace dd {

struct SearchExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coprime pair (p, q), p,q >= 1.
struct PrimePair {
  Int p, q;
  PrimePair(Int p_, Int q_);
  Int dim() const { return p * q; }  // matrix size pq
  bool operator==(const PrimePair& o) const { return p == o.p && q == o.q; }
};

bool is_prime_pair(const Int& p, const Int& q);

// Smallest (k0+k1, k0) lexicographically with k0 > 2q, k1 > 2p,
// gcd(k0 p, k1 q) = 1 and divisor | k0 k1, both factors <= bound.
std::pair<Int, Int> select_expansion_factors(const PrimePair& pair, const Int& divisor,
                                             const Int& bound);

inline Int default_expansion_bound(const PrimePair& pair, const Int& divisor) {
  return 8 * (pair.p + pair.q + divisor);
}

}  // namespace dd
