#include "dd/measure.hpp"

#include <set>
#include <stdexcept>

namespace dd {

PLMeasure::PLMeasure(PLPath cdf) : cdf_(std::move(cdf)) {
  if (cdf_.value_at_0() != 0 || cdf_.value_at_1() != 1)
    throw std::invalid_argument("PLMeasure: CDF must run from 0 to 1");
  if (!cdf_.is_monotone_nondecreasing())
    throw std::invalid_argument("PLMeasure: CDF must be nondecreasing");
}

DiffuseMeasure::DiffuseMeasure(PLPath cdf) : PLMeasure(std::move(cdf)) {
  if (!this->cdf().is_strictly_increasing())
    throw std::invalid_argument("DiffuseMeasure: CDF must be strictly increasing (faithful)");
}

PLMeasure PLMeasure::average(const std::vector<PLMeasure>& ms) {
  if (ms.empty()) throw std::invalid_argument("PLMeasure::average: empty list");
  std::vector<const PLPath*> ptrs;
  ptrs.reserve(ms.size());
  for (const auto& m : ms) ptrs.push_back(&m.cdf());
  auto grid = union_breakpoints(ptrs);
  std::vector<Rat> ys;
  ys.reserve(grid.size());
  Rat n(long(ms.size()));
  for (const auto& x : grid) {
    Rat s(0);
    for (const auto& m : ms) s += m.cdf().eval(x);
    ys.push_back(s / n);
  }
  return PLMeasure(PLPath(std::move(grid), std::move(ys)));
}

PLMeasure pushforward(const PLPath& xi, const PLMeasure& tau) {
  if (!xi.is_monotone_nondecreasing())
    throw std::invalid_argument("pushforward: path is not monotone nondecreasing (NonMonotonePath)");
  if (!xi.is_strictly_increasing())
    throw std::invalid_argument(
        "pushforward: path has flat segments; the image measure would carry atoms");
  const Rat v0 = xi.value_at_0(), v1 = xi.value_at_1();
  // s-grid: endpoints 0,1, the path's value nodes, and images of the CDF's
  // breakpoints (so W(xi^{-1}(s)) stays PL between nodes)
  std::set<Rat> sgrid{Rat(0), Rat(1)};
  for (const auto& y : xi.ys()) sgrid.insert(y);
  for (const auto& x : tau.cdf().xs()) sgrid.insert(xi.eval(x));
  // inverse evaluation on [v0, v1]
  auto inv = [&](const Rat& s) -> Rat {
    const auto& xs = xi.xs();
    const auto& ys = xi.ys();
    for (size_t i = 1; i < ys.size(); ++i) {
      if (s <= ys[i]) {
        return xs[i - 1] + (s - ys[i - 1]) * (xs[i] - xs[i - 1]) / (ys[i] - ys[i - 1]);
      }
    }
    return Rat(1);
  };
  std::vector<Rat> xs, ys;
  xs.reserve(sgrid.size());
  ys.reserve(sgrid.size());
  for (const auto& s : sgrid) {
    xs.push_back(s);
    if (s <= v0)
      ys.push_back(Rat(0));
    else if (s >= v1)
      ys.push_back(Rat(1));
    else
      ys.push_back(tau.cdf().eval(inv(s)));
  }
  return PLMeasure(PLPath(std::move(xs), std::move(ys)));
}

}  // namespace dd
