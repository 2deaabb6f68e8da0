#include "dd/plpath.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace dd {

PLPath::PLPath(std::vector<Rat> xs, std::vector<Rat> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size() || xs_.size() < 2)
    throw std::invalid_argument("PLPath: need matching breakpoint/value lists, size >= 2");
  if (xs_.front() != 0 || xs_.back() != 1)
    throw std::invalid_argument("PLPath: domain must be exactly [0,1]");
  for (size_t i = 1; i < xs_.size(); ++i)
    if (!(xs_[i - 1] < xs_[i])) throw std::invalid_argument("PLPath: breakpoints must increase");
  for (const auto& y : ys_)
    if (y < 0 || y > 1) throw std::invalid_argument("PLPath: values must lie in [0,1]");
  normalize();
}

void PLPath::normalize() {
  std::vector<Rat> xs{xs_[0]}, ys{ys_[0]};
  for (size_t i = 1; i + 1 < xs_.size(); ++i) {
    // drop node i if collinear with neighbors
    const Rat &x0 = xs.back(), &y0 = ys.back();
    const Rat &x1 = xs_[i], &y1 = ys_[i];
    const Rat &x2 = xs_[i + 1], &y2 = ys_[i + 1];
    if ((y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0)) continue;
    xs.push_back(x1);
    ys.push_back(y1);
  }
  xs.push_back(xs_.back());
  ys.push_back(ys_.back());
  xs_ = std::move(xs);
  ys_ = std::move(ys);
}

PLPath PLPath::identity() { return PLPath({Rat(0), Rat(1)}, {Rat(0), Rat(1)}); }

PLPath PLPath::constant(const Rat& c) { return PLPath({Rat(0), Rat(1)}, {c, c}); }

PLPath PLPath::affine(const Rat& v0, const Rat& v1) { return PLPath({Rat(0), Rat(1)}, {v0, v1}); }

Rat PLPath::eval(const Rat& x) const {
  if (x < 0 || x > 1) throw std::invalid_argument("PLPath::eval: argument outside [0,1]");
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  size_t hi = size_t(it - xs_.begin());
  if (hi == xs_.size()) return ys_.back();
  if (hi == 0) return ys_.front();
  size_t lo = hi - 1;
  const Rat& x0 = xs_[lo];
  const Rat& x1 = xs_[hi];
  return ys_[lo] + (ys_[hi] - ys_[lo]) * (x - x0) / (x1 - x0);
}

Rat PLPath::min_value() const { return *std::min_element(ys_.begin(), ys_.end()); }
Rat PLPath::max_value() const { return *std::max_element(ys_.begin(), ys_.end()); }

bool PLPath::is_monotone_nondecreasing() const {
  for (size_t i = 1; i < ys_.size(); ++i)
    if (ys_[i] < ys_[i - 1]) return false;
  return true;
}

bool PLPath::is_strictly_increasing() const {
  for (size_t i = 1; i < ys_.size(); ++i)
    if (!(ys_[i] > ys_[i - 1])) return false;
  return true;
}

bool PLPath::is_affine() const { return xs_.size() == 2; }

Rat PLPath::lipschitz() const {
  Rat best(0);
  for (size_t i = 1; i < xs_.size(); ++i) {
    Rat s = (ys_[i] - ys_[i - 1]) / (xs_[i] - xs_[i - 1]);
    if (s < 0) s = -s;
    best = std::max(best, s);
  }
  return best;
}

std::vector<Rat> union_breakpoints(const std::vector<const PLPath*>& paths) {
  std::set<Rat> pts;
  for (const auto* p : paths)
    for (const auto& x : p->xs()) pts.insert(x);
  return std::vector<Rat>(pts.begin(), pts.end());
}

Rat PLPath::sup_distance(const PLPath& o) const {
  Rat best(0);
  for (const auto& x : union_breakpoints({this, &o})) {
    Rat d = eval(x) - o.eval(x);
    if (d < 0) d = -d;
    best = std::max(best, d);
  }
  return best;
}

bool PLPath::le(const PLPath& o) const {
  for (const auto& x : union_breakpoints({this, &o}))
    if (eval(x) > o.eval(x)) return false;
  return true;
}

PLPath PLPath::inverse_strict() const {
  if (!is_strictly_increasing()) throw std::invalid_argument("inverse_strict: path not strictly increasing");
  return PLPath(ys_, xs_);  // only valid when ys span [0,1]; callers rescale otherwise
}

PLPath compose_paths(const PLPath& outer, const PLPath& inner) {
  // breakpoints: inner's, plus inner-preimages of outer's breakpoints
  std::set<Rat> pts(inner.xs().begin(), inner.xs().end());
  const auto& ixs = inner.xs();
  const auto& iys = inner.ys();
  for (const auto& b : outer.xs()) {
    for (size_t s = 0; s + 1 < ixs.size(); ++s) {
      const Rat &y0 = iys[s], &y1 = iys[s + 1];
      Rat lo = std::min(y0, y1), hi = std::max(y0, y1);
      if (b < lo || b > hi) continue;
      if (y0 == y1) continue;  // flat segment: value constant, no interior preimage breakpoint needed
      Rat x = ixs[s] + (b - y0) * (ixs[s + 1] - ixs[s]) / (y1 - y0);
      pts.insert(x);
    }
  }
  std::vector<Rat> xs(pts.begin(), pts.end());
  std::vector<Rat> ys;
  ys.reserve(xs.size());
  for (const auto& x : xs) ys.push_back(outer.eval(inner.eval(x)));
  return PLPath(std::move(xs), std::move(ys));
}

bool pointwise_ordered(const std::vector<PLPath>& family) {
  if (family.empty()) throw std::invalid_argument("pointwise_ordered: empty family");
  for (size_t i = 0; i + 1 < family.size(); ++i)
    if (!family[i].le(family[i + 1])) return false;
  return true;
}

}  // namespace dd
