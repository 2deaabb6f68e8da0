#pragma once

#include <memory>
#include <vector>

#include "dd/family.hpp"
#include "dd/linalg.hpp"
#include "dd/rational.hpp"

namespace dd {

// Continuous unitary path [0,1] -> U(n), built from exact permutation data
// joined by geodesics, closed under product / adjoint / block lifting along
// path families. Evaluation materializes dense matrices and is only
// permitted for small dimensions; the structure itself is symbolic.
class UnitaryPath {
 public:
  UnitaryPath() = default;

  static UnitaryPath identity(Int dim);
  // symbolic conjugator for stages beyond dense reach: structure only,
  // evaluation refuses, rate bounded by pi
  static UnitaryPath abstract(Int dim);
  // constant permutation: matrix P with P e_j = e_{perm[j]}
  static UnitaryPath constant_perm(std::vector<long> perm);
  // geodesic from perm0 (at x=0) to perm1 (at x=1)
  static UnitaryPath perm_geodesic(std::vector<long> perm0, std::vector<long> perm1);
  static UnitaryPath product(std::vector<UnitaryPath> factors);  // left-to-right matrix product
  UnitaryPath adjoint() const;
  // blockdiag_j inner(zeta_j(x)) over the expanded family (j-major)
  static UnitaryPath block_lift(UnitaryPath inner, PathFamily family);
  // symbolic sort-blend: the continuous unitary implementing the pointwise
  // re-ordering of a crossing product family; carries a certified
  // presentation defect kappa (path-gap units) and a rate bound
  static UnitaryPath sort_blend(Int dim, Rat kappa, Rat rate);

  const Int& dim() const { return dim_; }
  bool valid() const { return node_ != nullptr; }

  Mat eval(const Rat& x) const;  // throws above the dense cap

  // Certified upper bound on the operator-norm derivative (rate) of the path.
  Rat rate_upper() const;

  // Accumulated sort-blend presentation defect (path-gap units; 0 if exact).
  Rat kappa_upper() const;

  struct Node;

 private:
  Int dim_ = 0;
  std::shared_ptr<const Node> node_;
};

// Builds the canonical endpoint-regrouping permutation for an ordered family
// presenting (p,q) -> (p',q'). At x=0 it maps the expanded block-diagonal
// pattern into (.) (x) 1_{q'} form, at x=1 into 1_{p'} (x) (.) form.
// Requires the divisibility conditions; sizes must fit in long.
std::vector<long> regroup_permutation(const BoundaryPattern& pat, const PrimePair& src,
                                      const PrimePair& tgt, bool at_one);

// Full boundary conjugator: regrouping permutations at both endpoints joined
// by a geodesic.
UnitaryPath boundary_unitary(const PathFamily& fam, const PrimePair& src, const PrimePair& tgt);

}  // namespace dd
