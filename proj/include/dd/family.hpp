#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dd/measure.hpp"
#include "dd/numtheory.hpp"
#include "dd/plpath.hpp"
#include "dd/rational.hpp"

namespace dd {

struct InfeasibleMesh : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordered family of eigenvalue paths, run-length compressed: runs[i] is a
// path repeated mult[i] times. Total count can exceed machine integers at
// deep stages, so counts are Int.
class PathFamily {
 public:
  struct Run {
    PLPath path;
    Int mult;
  };

  PathFamily() = default;
  explicit PathFamily(std::vector<Run> runs);

  static PathFamily single(PLPath p) { return PathFamily({{std::move(p), Int(1)}}); }

  const std::vector<Run>& runs() const { return runs_; }
  const Int& count() const { return count_; }
  size_t distinct() const { return runs_.size(); }

  bool ordered() const;               // runs[i].path <= runs[i+1].path pointwise
  bool monotone() const;              // every path monotone nondecreasing
  Rat max_diameter() const;           // mesh of the family
  Rat max_lipschitz() const;
  Rat min_value() const;              // over all paths
  Rat max_value() const;
  bool covers_unit_interval() const;  // union of images = [0,1]

  // Exact max_r sup |xi_r - zeta_r| over aligned expanded indices. Requires
  // equal counts; exploits run structure.
  Rat sup_matching(const PathFamily& o) const;

  // Expanded path at index i (0-based Int), for small probing.
  const PLPath& at(const Int& index) const;

  bool operator==(const PathFamily& o) const;

 private:
  std::vector<Run> runs_;
  Int count_ = 0;
};

// Endpoint value-group structure of an ordered family at x = 0 or x = 1.
struct BoundaryPattern {
  enum class Class { Zero, One, Interior };
  struct Cell {
    Int start;  // expanded index of first member
    Int size;
    Class cls;
    Rat value;  // endpoint value (informational for Interior)
  };
  std::vector<Cell> cells;

  // Structural equality: positions, sizes and classes (values ignored for
  // Interior cells; the regrouping permutation depends only on these).
  bool same_structure(const BoundaryPattern& o) const;
};

BoundaryPattern boundary_pattern(const PathFamily& fam, bool at_one);

// Divisibility audit for a family presenting a morphism (p,q) -> (p',q'):
// at 0 each Interior cell size divisible by q', Zero cell: q' | q*size,
// One cell: q' | p*size; at 1 with p'. Returns failure description or empty.
std::string pattern_divisibility_error(const BoundaryPattern& pat, const PrimePair& src,
                                       const PrimePair& tgt, bool at_one);

// Canonical mesh-controlled staircase family for (p,q) -> (p',q'):
// pure affine paths with slope <= mesh, minimal boundary groups.
PathFamily canonical_path_family(const PrimePair& src, const PrimePair& tgt, const Rat& mesh);

// Trace-exact family: induced measure of the family from tgt_measure equals
// src_measure exactly (rational identity), boundary groups minimal. Built by
// the block-transport solver; mesh is whatever the group spans dictate.
PathFamily transport_family(const PrimePair& src, const PrimePair& tgt,
                            const DiffuseMeasure& src_measure, const DiffuseMeasure& tgt_measure);

// (1/l) sum of pushforwards of tgt_measure along the family.
PLMeasure induced_measure_of_family(const PathFamily& fam, const PLMeasure& tgt_measure);

// Composite of second∘first at the value level: paths xi_i ∘ xi'_j (outer =
// first's paths) with multiplicities multiplied and equal paths merged.
// The result is NOT ordered in general.
struct WeightedPaths {
  std::vector<PLPath> paths;
  std::vector<Int> mults;
  Int count() const;
};
WeightedPaths compose_raw(const PathFamily& outer_first, const PathFamily& inner_second);

// Exact r-th-order-statistic family of a weighted set of monotone paths:
// always pointwise ordered, same value multiset at every x (hence the same
// induced measures and diameter bounds). `chain` reports whether the input
// was already pointwise sortable (statistics coincide with a re-indexing);
// `crossings` lists crossing abscissas with the maximal path gap near them,
// for the sort-blend presentation defect.
struct SortedStatistics {
  PathFamily family;
  bool chain = true;
  struct Crossing {
    Rat x;
    Rat half_width;  // blend window is [x - h, x + h]
    Rat gap_bound;   // sup over the blend window of the swapped pair distance
  };
  std::vector<Crossing> crossings;
  Rat kappa() const {
    Rat k(0);
    for (const auto& c : crossings) k = std::max(k, c.gap_bound);
    return k;
  }
};
SortedStatistics order_statistics(const WeightedPaths& wp);

}  // namespace dd
