#include "dd/unitary.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dd {

namespace {
constexpr long kUnitaryDenseCap = 4096;
// rational upper bound of pi, for certified rate arithmetic
const Rat kPiUpper(355, 113);
}  // namespace

struct UnitaryPath::Node {
  enum class Kind { Perm, Geodesic, Product, Adjoint, BlockLift, Abstract, SortBlend };
  Kind kind;
  std::vector<long> perm0, perm1;
  std::vector<UnitaryPath> factors;
  UnitaryPath inner;
  PathFamily family;
  Rat kappa, rate;
};

UnitaryPath UnitaryPath::identity(Int dim) {
  if (dim <= kUnitaryDenseCap) {
    std::vector<long> id(dim.convert_to<long>());
    for (size_t i = 0; i < id.size(); ++i) id[i] = long(i);
    return constant_perm(std::move(id));
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Perm;  // empty perm marks an abstract identity
  UnitaryPath u;
  u.dim_ = std::move(dim);
  u.node_ = n;
  return u;
}

UnitaryPath UnitaryPath::sort_blend(Int dim, Rat kappa, Rat rate) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::SortBlend;
  n->kappa = std::move(kappa);
  n->rate = std::move(rate);
  UnitaryPath u;
  u.dim_ = std::move(dim);
  u.node_ = n;
  return u;
}

UnitaryPath UnitaryPath::abstract(Int dim) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Abstract;
  UnitaryPath u;
  u.dim_ = std::move(dim);
  u.node_ = n;
  return u;
}

UnitaryPath UnitaryPath::constant_perm(std::vector<long> perm) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Perm;
  n->perm0 = std::move(perm);
  UnitaryPath u;
  u.dim_ = Int(n->perm0.size());
  u.node_ = n;
  return u;
}

UnitaryPath UnitaryPath::perm_geodesic(std::vector<long> perm0, std::vector<long> perm1) {
  if (perm0.size() != perm1.size()) throw std::invalid_argument("perm_geodesic: size mismatch");
  if (perm0 == perm1) return constant_perm(std::move(perm0));
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Geodesic;
  n->perm0 = std::move(perm0);
  n->perm1 = std::move(perm1);
  UnitaryPath u;
  u.dim_ = Int(n->perm0.size());
  u.node_ = n;
  return u;
}

UnitaryPath UnitaryPath::product(std::vector<UnitaryPath> factors) {
  if (factors.empty()) throw std::invalid_argument("UnitaryPath::product: empty");
  for (const auto& f : factors)
    if (f.dim() != factors[0].dim()) throw std::invalid_argument("UnitaryPath::product: dim mismatch");
  if (factors.size() == 1) return factors[0];
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Product;
  n->factors = std::move(factors);
  UnitaryPath u;
  u.dim_ = n->factors[0].dim();
  u.node_ = n;
  return u;
}

UnitaryPath UnitaryPath::adjoint() const {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Adjoint;
  n->inner = *this;
  UnitaryPath u;
  u.dim_ = dim_;
  u.node_ = n;
  return u;
}

UnitaryPath UnitaryPath::block_lift(UnitaryPath inner, PathFamily family) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::BlockLift;
  n->inner = std::move(inner);
  n->family = std::move(family);
  UnitaryPath u;
  u.dim_ = n->inner.dim() * n->family.count();
  u.node_ = n;
  return u;
}

namespace {

Mat perm_matrix(const std::vector<long>& perm, long dim) {
  if (perm.empty()) return Mat::identity(int(dim));  // abstract identity
  Mat m(int(perm.size()), int(perm.size()));
  for (size_t j = 0; j < perm.size(); ++j) m(int(perm[j]), int(j)) = 1.0;
  return m;
}

Mat geodesic_eval(const std::vector<long>& p0, const std::vector<long>& p1, const Rat& x) {
  const long n = long(p0.size());
  if (x == 0) return perm_matrix(p0, n);
  if (x == 1) return perm_matrix(p1, n);
  // relative permutation r with p0[r[j]] = p1[j]
  std::vector<long> inv0(n);
  for (long j = 0; j < n; ++j) inv0[p0[j]] = j;
  std::vector<long> rel(n);
  for (long j = 0; j < n; ++j) rel[j] = inv0[p1[j]];
  // R(x) = exp(x log(rel)) via per-cycle Fourier diagonalization
  Mat r{int(n), int(n)};
  std::vector<char> seen(size_t(n), 0);
  double t = to_double(x);
  for (long s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<long> cyc;
    long c = s;
    while (!seen[c]) {
      seen[c] = 1;
      cyc.push_back(c);
      c = rel[c];
    }
    long L = long(cyc.size());
    for (long j = 0; j < L; ++j) {
      for (long k = 0; k < L; ++k) {
        cplx sum = 0;
        for (long m = 0; m < L; ++m) {
          double phase = -2.0 * std::numbers::pi * double(m) / double(L);
          if (phase <= -std::numbers::pi) phase += 2.0 * std::numbers::pi;
          double ang = t * phase + 2.0 * std::numbers::pi * double(m) * double(j - k) / double(L);
          sum += cplx(std::cos(ang), std::sin(ang));
        }
        // rel maps cyc[k] -> cyc[k+1]; matrix entry rows = image coords
        r(int(cyc[j]), int(cyc[k])) = sum / double(L);
      }
    }
  }
  return perm_matrix(p0, n) * r;
}

}  // namespace

Mat UnitaryPath::eval(const Rat& x) const {
  if (!node_) throw std::runtime_error("UnitaryPath: empty");
  if (dim_ > kUnitaryDenseCap)
    throw std::runtime_error("UnitaryPath::eval: dimension too large for dense evaluation");
  long n = dim_.convert_to<long>();
  switch (node_->kind) {
    case Node::Kind::Abstract:
    case Node::Kind::SortBlend:
      throw std::runtime_error("UnitaryPath::eval: abstract conjugator (symbolic stage)");
    case Node::Kind::Perm:
      return perm_matrix(node_->perm0, n);
    case Node::Kind::Geodesic:
      return geodesic_eval(node_->perm0, node_->perm1, x);
    case Node::Kind::Product: {
      Mat m = node_->factors[0].eval(x);
      for (size_t i = 1; i < node_->factors.size(); ++i) m = m * node_->factors[i].eval(x);
      return m;
    }
    case Node::Kind::Adjoint:
      return node_->inner.eval(x).adjoint();
    case Node::Kind::BlockLift: {
      Mat m{int(n), int(n)};
      long bs = node_->inner.dim().convert_to<long>();
      long off = 0;
      for (const auto& run : node_->family.runs()) {
        long mult = run.mult.convert_to<long>();
        for (long c = 0; c < mult; ++c) {
          Mat blk = node_->inner.eval(run.path.eval(x));
          for (long i = 0; i < bs; ++i)
            for (long j = 0; j < bs; ++j) m(int(off + i), int(off + j)) = blk(int(i), int(j));
          off += bs;
        }
      }
      return m;
    }
  }
  throw std::logic_error("UnitaryPath::eval: bad node");
}

Rat UnitaryPath::rate_upper() const {
  if (!node_) return Rat(0);
  switch (node_->kind) {
    case Node::Kind::Abstract:
      return kPiUpper;
    case Node::Kind::SortBlend:
      return node_->rate;
    case Node::Kind::Perm:
      return Rat(0);
    case Node::Kind::Geodesic:
      return kPiUpper;
    case Node::Kind::Product: {
      Rat s(0);
      for (const auto& f : node_->factors) s += f.rate_upper();
      return s;
    }
    case Node::Kind::Adjoint:
      return node_->inner.rate_upper();
    case Node::Kind::BlockLift:
      return node_->inner.rate_upper() * node_->family.max_lipschitz();
  }
  return Rat(0);
}

Rat UnitaryPath::kappa_upper() const {
  if (!node_) return Rat(0);
  switch (node_->kind) {
    case Node::Kind::SortBlend:
      return node_->kappa;
    case Node::Kind::Product: {
      Rat s(0);
      for (const auto& f : node_->factors) s += f.kappa_upper();
      return s;
    }
    case Node::Kind::Adjoint:
      return node_->inner.kappa_upper();
    case Node::Kind::BlockLift:
      return node_->inner.kappa_upper();
    default:
      return Rat(0);
  }
}

std::vector<long> regroup_permutation(const BoundaryPattern& pat, const PrimePair& src,
                                      const PrimePair& tgt, bool at_one) {
  long p = src.p.convert_to<long>(), q = src.q.convert_to<long>();
  long pq = p * q;
  long pp = tgt.p.convert_to<long>(), qp = tgt.q.convert_to<long>();
  long n = pp * qp;
  // unit: multiplicity that each independent variable must divide into
  long unit = at_one ? pp : qp;
  std::vector<long> perm(size_t(n), -1);
  long offset = 0;  // running offset inside the regrouped factor
  for (const auto& cell : pat.cells) {
    long s0 = cell.start.convert_to<long>();
    long mc = cell.size.convert_to<long>();
    if (cell.cls == BoundaryPattern::Class::Interior) {
      long k = mc / unit;
      for (long e = 0; e < k; ++e)
        for (long d = 0; d < unit; ++d) {
          long r = s0 + e * unit + d;
          for (long w = 0; w < pq; ++w) {
            long along = offset + w * k + e;  // index inside the regrouped factor
            long other = d;
            long tgt_idx = at_one ? other * qp + along : along * qp + other;
            perm[size_t(r * pq + w)] = tgt_idx;
          }
        }
      offset += pq * k;
    } else if (cell.cls == BoundaryPattern::Class::Zero) {
      // block value a (x) 1_q: variable a in M_p with multiplicity q*mc
      long width = q * mc / unit;
      for (long s = 0; s < mc; ++s) {
        long r = s0 + s;
        for (long i = 0; i < p; ++i)
          for (long j = 0; j < q; ++j) {
            long c = s * q + j;
            long gamma = c / unit, beta = c % unit;
            long along = offset + i * width + gamma;
            long tgt_idx = at_one ? beta * qp + along : along * qp + beta;
            perm[size_t(r * pq + i * q + j)] = tgt_idx;
          }
      }
      offset += p * width;
    } else {
      // block value 1_p (x) b: variable b in M_q with multiplicity p*mc
      long width = p * mc / unit;
      for (long s = 0; s < mc; ++s) {
        long r = s0 + s;
        for (long i = 0; i < p; ++i)
          for (long j = 0; j < q; ++j) {
            long c = s * p + i;
            long gamma = c / unit, beta = c % unit;
            long along = offset + j * width + gamma;
            long tgt_idx = at_one ? beta * qp + along : along * qp + beta;
            perm[size_t(r * pq + i * q + j)] = tgt_idx;
          }
      }
      offset += q * width;
    }
  }
  long factor_dim = at_one ? qp : pp;
  if (offset != factor_dim)
    throw std::logic_error("regroup_permutation: factor dimension mismatch (offset " +
                           std::to_string(offset) + " vs " + std::to_string(factor_dim) + ")");
  for (long g = 0; g < n; ++g)
    if (perm[size_t(g)] < 0) throw std::logic_error("regroup_permutation: incomplete map");
  return perm;
}

UnitaryPath boundary_unitary(const PathFamily& fam, const PrimePair& src, const PrimePair& tgt) {
  for (bool at_one : {false, true}) {
    auto err = pattern_divisibility_error(boundary_pattern(fam, at_one), src, tgt, at_one);
    if (!err.empty())
      throw std::invalid_argument("boundary_unitary: IncompatibleEndpoints: " + err);
  }
  if (tgt.dim() > Int(20000000)) return UnitaryPath::abstract(tgt.dim());
  auto p0 = regroup_permutation(boundary_pattern(fam, false), src, tgt, false);
  auto p1 = regroup_permutation(boundary_pattern(fam, true), src, tgt, true);
  return UnitaryPath::perm_geodesic(std::move(p0), std::move(p1));
}

}  // namespace dd
