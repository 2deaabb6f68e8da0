#pragma once

#include <optional>
#include <vector>

#include "dd/rational.hpp"

namespace dd {

// Piecewise-linear map [0,1] -> [0,1] with rational breakpoints, linear
// interpolation between them. Canonical form: first breakpoint 0, last 1,
// collinear interior nodes merged.
class PLPath {
 public:
  PLPath() = default;
  PLPath(std::vector<Rat> xs, std::vector<Rat> ys);

  static PLPath identity();
  static PLPath constant(const Rat& c);
  static PLPath affine(const Rat& v0, const Rat& v1);  // x -> v0 + (v1-v0)x

  const std::vector<Rat>& xs() const { return xs_; }
  const std::vector<Rat>& ys() const { return ys_; }
  size_t segments() const { return xs_.size() - 1; }

  Rat eval(const Rat& x) const;
  Rat value_at_0() const { return ys_.front(); }
  Rat value_at_1() const { return ys_.back(); }

  Rat min_value() const;
  Rat max_value() const;
  Rat image_diameter() const { return max_value() - min_value(); }

  bool is_monotone_nondecreasing() const;
  bool is_strictly_increasing() const;
  bool is_affine() const;
  // Max |slope| over segments (Lipschitz constant, exact).
  Rat lipschitz() const;

  // Exact sup_x |this(x) - o(x)| (max over union breakpoints).
  Rat sup_distance(const PLPath& o) const;

  // Pointwise this <= o everywhere (checked at union breakpoints).
  bool le(const PLPath& o) const;

  bool operator==(const PLPath& o) const { return xs_ == o.xs_ && ys_ == o.ys_; }

  // Functional inverse of a strictly increasing path, as a map from
  // [value_at_0, value_at_1] rescaled... returned as raw breakpoint data
  // (xs = old ys, ys = old xs); caller handles domain conventions.
  PLPath inverse_strict() const;

 private:
  void normalize();
  std::vector<Rat> xs_, ys_;
};

// outer(inner(x)), exact. Breakpoints: inner's plus inner-preimages of
// outer's breakpoints.
PLPath compose_paths(const PLPath& outer, const PLPath& inner);

bool pointwise_ordered(const std::vector<PLPath>& family);

// Union of all breakpoints of a set of paths (sorted, deduplicated).
std::vector<Rat> union_breakpoints(const std::vector<const PLPath*>& paths);

}  // namespace dd
