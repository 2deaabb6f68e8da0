#pragma once

#include "dd/algebra.hpp"
#include "dd/family.hpp"
#include "dd/unitary.hpp"

namespace dd {

struct BoundaryViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ChainMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Diagonalizable unital *-embedding Z_{p,q} -> Z_{p',q'}:
// f |-> Ad_u diag(f∘xi_1, ..., f∘xi_l).
class DiagMorphism {
 public:
  DiagMorphism() = default;
  DiagMorphism(DDAlgebra source, DDAlgebra target, PathFamily paths, UnitaryPath conj);

  const DDAlgebra& source() const { return source_; }
  const DDAlgebra& target() const { return target_; }
  const PathFamily& paths() const { return paths_; }
  const UnitaryPath& conjugator() const { return conj_; }
  const BoundaryPattern& pattern0() const { return pat0_; }
  const BoundaryPattern& pattern1() const { return pat1_; }
  Int path_count() const { return paths_.count(); }
  Rat mesh() const { return paths_.max_diameter(); }
  // Certified bound (path-gap units) on the distance between this stored
  // presentation and the literal composition it denotes; 0 for exact
  // presentations. The morphism-level defect on f is lipschitz(f) * kappa.
  Rat presentation_kappa() const { return conj_.kappa_upper(); }

  // Block-diagonal part diag(f∘xi_i) without the conjugation.
  MatrixFunction delta(const DDElement& f) const;

  // Ad_u ∘ delta as a DDElement of the target, endpoint blocks extracted
  // from the regrouped form. Dense evaluation must be affordable.
  DDElement apply(const DDElement& f) const;

  // Symbolic metadata transport for large stages: the image's certified
  // Lipschitz and norm bounds without any evaluation.
  Rat image_lipschitz(const DDElement& f) const;

  bool is_identity() const;

 private:
  DDAlgebra source_{PrimePair(1, 1)};
  DDAlgebra target_{PrimePair(1, 1)};
  PathFamily paths_;
  UnitaryPath conj_;
  BoundaryPattern pat0_, pat1_;
};

DiagMorphism identity_morphism(const DDAlgebra& alg);

// second ∘ first, with the composite family sorted into pointwise order and
// the conjugator adjusted by the corresponding constant permutation.
DiagMorphism compose(const DiagMorphism& second, const DiagMorphism& first);

// Canonical mesh-controlled embedding (sequence steps).
DiagMorphism build_embedding(const DDAlgebra& src, const DDAlgebra& tgt, const Rat& mesh);

// Trace-exact embedding: induced measure from tgt_measure equals src_measure
// exactly. Used for challenges and amalgamation responses.
DiagMorphism build_transport_embedding(const DDAlgebra& src, const DDAlgebra& tgt,
                                       const DiffuseMeasure& src_measure,
                                       const DiffuseMeasure& tgt_measure);

// Exact induced measure (1/l) sum (xi_i)_* tau_target.
PLMeasure induced_measure(const DiagMorphism& m, const PLMeasure& tau_target);

struct MorphismAudit {
  bool ordered = false;
  bool unital = false;        // apply(unit) == unit exactly (dense stages only)
  double membership = 0.0;    // worst corpus membership residual
  double multiplicativity = 0.0;
  double linearity = 0.0;
  double adjoint = 0.0;
  bool pass(double tol_alg = 1e-9, double tol_mem = 1e-10) const {
    return ordered && unital && membership <= tol_mem && multiplicativity <= tol_alg &&
           linearity <= tol_alg && adjoint <= tol_alg;
  }
};

// Residuals are sampled sups over the default grid; the differences vanish
// identically as functions.
MorphismAudit audit_morphism(const DiagMorphism& m, int resolution = 64);

}  // namespace dd
