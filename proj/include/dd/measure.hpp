#pragma once

#include <vector>

#include "dd/plpath.hpp"
#include "dd/rational.hpp"

namespace dd {

// Probability measure on [0,1] represented by its piecewise-linear CDF
// (continuous, so atomless). May have flat stretches (gaps in support).
class PLMeasure {
 public:
  PLMeasure() : cdf_(PLPath::identity()) {}
  explicit PLMeasure(PLPath cdf);

  static PLMeasure lebesgue() { return PLMeasure(PLPath::identity()); }

  const PLPath& cdf() const { return cdf_; }
  Rat mass(const Rat& a, const Rat& b) const { return cdf_.eval(b) - cdf_.eval(a); }
  bool is_faithful() const { return cdf_.is_strictly_increasing(); }

  bool operator==(const PLMeasure& o) const { return cdf_ == o.cdf_; }

  // Scaled convex combination: (1/n) * sum of measures.
  static PLMeasure average(const std::vector<PLMeasure>& ms);

 private:
  PLPath cdf_;
};

// Faithful diffuse measure: strictly increasing PL CDF.
class DiffuseMeasure : public PLMeasure {
 public:
  DiffuseMeasure() = default;
  explicit DiffuseMeasure(PLPath cdf);
  static DiffuseMeasure lebesgue() { return DiffuseMeasure(PLPath::identity()); }
  // Quantile function (inverse CDF), strictly increasing PL.
  PLPath quantile() const { return cdf().inverse_strict(); }
};

// Exact pushforward of tau along a monotone nondecreasing path with no flat
// segments (flats would create atoms, unrepresentable as a PL CDF).
PLMeasure pushforward(const PLPath& xi, const PLMeasure& tau);

}  // namespace dd
