#include "dd/morphism.hpp"

#include <algorithm>

namespace dd {

DiagMorphism::DiagMorphism(DDAlgebra source, DDAlgebra target, PathFamily paths, UnitaryPath conj)
    : source_(std::move(source)),
      target_(std::move(target)),
      paths_(std::move(paths)),
      conj_(std::move(conj)) {
  if (paths_.count() * source_.dim() != target_.dim())
    throw DimMismatch("DiagMorphism: l * pq != p'q'");
  if (conj_.valid() && conj_.dim() != target_.dim())
    throw DimMismatch("DiagMorphism: conjugator dim mismatch");
  if (!paths_.ordered()) throw std::invalid_argument("DiagMorphism: paths not pointwise ordered");
  pat0_ = boundary_pattern(paths_, false);
  pat1_ = boundary_pattern(paths_, true);
}

bool DiagMorphism::is_identity() const {
  return source_ == target_ && paths_.count() == 1 && paths_.runs()[0].path == PLPath::identity();
}

MatrixFunction DiagMorphism::delta(const DDElement& f) const {
  if (!(f.parent() == source_)) throw ParentMismatch("delta: element not in source algebra");
  // knots: pullbacks are cheap to sample on the uniform grid plus the path
  // breakpoints themselves
  std::vector<Rat> knots;
  for (const auto& r : paths_.runs())
    for (const auto& x : r.path.xs()) knots.push_back(x);
  Rat lip = f.lipschitz() * paths_.max_lipschitz();
  MatrixFunction::Eval ev;
  if (target_.dim() <= kDenseDimCap) {
    PathFamily fam = paths_;
    DDElement cap = f;
    long bs = source_.dim().convert_to<long>();
    long n = target_.dim().convert_to<long>();
    ev = [fam, cap, bs, n](const Rat& x) -> Mat {
      Mat m{int(n), int(n)};
      long off = 0;
      for (const auto& run : fam.runs()) {
        long mult = run.mult.convert_to<long>();
        Mat blk = cap.eval(run.path.eval(x));
        for (long c = 0; c < mult; ++c) {
          for (long i = 0; i < bs; ++i)
            for (long j = 0; j < bs; ++j) m(int(off + i), int(off + j)) = blk(int(i), int(j));
          off += bs;
        }
      }
      return m;
    };
  }
  return MatrixFunction(target_.dim(), ev, lip, f.norm_upper(), knots);
}

Rat DiagMorphism::image_lipschitz(const DDElement& f) const {
  return f.lipschitz() * paths_.max_lipschitz() + 2 * f.norm_upper() * conj_.rate_upper();
}

DDElement DiagMorphism::apply(const DDElement& f) const {
  if (!(f.parent() == source_)) throw ParentMismatch("apply: element not in source algebra");
  MatrixFunction d = delta(f);
  Rat lip = image_lipschitz(f);
  MatrixFunction::Eval ev;
  if (target_.dim() <= kDenseDimCap) {
    UnitaryPath u = conj_;
    MatrixFunction dc = d;
    ev = [u, dc](const Rat& x) {
      Mat um = u.eval(x);
      return um * dc.eval(x) * um.adjoint();
    };
  }
  MatrixFunction body(target_.dim(), ev, lip, f.norm_upper(), d.knots());

  // endpoint blocks: extract from the regrouped form by striding; the
  // factorization holds by the boundary pattern construction
  long pp = target_.pair.p.convert_to<long>(), qp = target_.pair.q.convert_to<long>();
  Mat left, right;
  if (target_.dim() <= kDenseDimCap) {
    Mat g0 = body.eval(Rat(0));
    Mat g1 = body.eval(Rat(1));
    left = Mat(int(pp), int(pp));
    for (long a = 0; a < pp; ++a)
      for (long b = 0; b < pp; ++b) left(int(a), int(b)) = g0(int(a * qp), int(b * qp));
    right = Mat(int(qp), int(qp));
    for (long a = 0; a < qp; ++a)
      for (long b = 0; b < qp; ++b) right(int(a), int(b)) = g1(int(a), int(b));
    double res0 = (g0 - kron(left, Mat::identity(int(qp)))).max_abs();
    double res1 = (g1 - kron(Mat::identity(int(pp)), right)).max_abs();
    if (std::max(res0, res1) > 1e-10)
      throw BoundaryViolation("apply: endpoint factorization residual " +
                              std::to_string(std::max(res0, res1)));
  }
  return DDElement(target_, body, left, right, "img(" + f.label() + ")");
}

DiagMorphism identity_morphism(const DDAlgebra& alg) {
  return DiagMorphism(alg, alg, PathFamily::single(PLPath::identity()),
                      UnitaryPath::identity(alg.dim()));
}

DiagMorphism compose(const DiagMorphism& second, const DiagMorphism& first) {
  if (!(first.target() == second.source()))
    throw ChainMismatch("compose: first.target != second.source");
  if (first.is_identity()) return second;
  if (second.is_identity()) return first;
  WeightedPaths raw = compose_raw(first.paths(), second.paths());
  SortedStatistics stats = order_statistics(raw);

  std::vector<UnitaryPath> factors;
  factors.push_back(second.conjugator());
  factors.push_back(UnitaryPath::block_lift(first.conjugator(), second.paths()));

  Int total = raw.count();
  Int dim = second.target().dim();
  if (stats.chain && total * first.source().dim() <= Int(20000000)) {
    // exact constant permutation from product order to sorted rank order
    long bs = first.source().dim().convert_to<long>();
    // sorted offsets per distinct product path
    std::vector<long> offset(raw.paths.size(), -1), fill(raw.paths.size(), 0);
    long cum = 0;
    for (const auto& run : stats.family.runs()) {
      for (size_t dix = 0; dix < raw.paths.size(); ++dix)
        if (raw.paths[dix] == run.path) offset[dix] = cum;
      cum += run.mult.convert_to<long>();
    }
    for (long o : offset)
      if (o < 0) throw std::logic_error("compose: sorted run lookup failed");
    // walk expanded product slots (j-major over second, i-minor over first)
    std::vector<long> q(size_t(total.convert_to<long>()) * bs);
    long slot = 0;
    for (const auto& jr : second.paths().runs()) {
      long jm = jr.mult.convert_to<long>();
      for (long jj = 0; jj < jm; ++jj) {
        for (const auto& ir : first.paths().runs()) {
          long im = ir.mult.convert_to<long>();
          PLPath comp = compose_paths(ir.path, jr.path);
          size_t dix = 0;
          while (!(raw.paths[dix] == comp)) ++dix;
          for (long ii = 0; ii < im; ++ii) {
            long sorted_slot = offset[dix] + fill[dix]++;
            for (long w = 0; w < bs; ++w) q[size_t(slot * bs + w)] = sorted_slot * bs + w;
            ++slot;
          }
        }
      }
    }
    // q maps product coordinates to sorted coordinates; the conjugator needs
    // the inverse direction (sorted basis -> product slots)
    std::vector<long> qinv(q.size());
    for (size_t g = 0; g < q.size(); ++g) qinv[size_t(q[g])] = long(g);
    bool is_id = true;
    for (size_t g = 0; g < qinv.size(); ++g)
      if (qinv[g] != long(g)) {
        is_id = false;
        break;
      }
    if (!is_id) factors.push_back(UnitaryPath::constant_perm(std::move(qinv)));
  } else {
    // crossing (or oversized) product: symbolic sort blend with certified
    // presentation defect and rate
    Rat rate(0);
    for (const auto& c : stats.crossings)
      rate = std::max(rate, Rat(Rat(355, 113) / (2 * c.half_width)));
    factors.push_back(UnitaryPath::sort_blend(dim, stats.kappa(), rate));
  }
  return DiagMorphism(first.source(), second.target(), std::move(stats.family),
                      UnitaryPath::product(std::move(factors)));
}

DiagMorphism build_embedding(const DDAlgebra& src, const DDAlgebra& tgt, const Rat& mesh) {
  PathFamily fam = canonical_path_family(src.pair, tgt.pair, mesh);
  UnitaryPath u = boundary_unitary(fam, src.pair, tgt.pair);
  return DiagMorphism(src, tgt, std::move(fam), std::move(u));
}

DiagMorphism build_transport_embedding(const DDAlgebra& src, const DDAlgebra& tgt,
                                       const DiffuseMeasure& src_measure,
                                       const DiffuseMeasure& tgt_measure) {
  PathFamily fam = transport_family(src.pair, tgt.pair, src_measure, tgt_measure);
  UnitaryPath u = boundary_unitary(fam, src.pair, tgt.pair);
  return DiagMorphism(src, tgt, std::move(fam), std::move(u));
}

PLMeasure induced_measure(const DiagMorphism& m, const PLMeasure& tau_target) {
  return induced_measure_of_family(m.paths(), tau_target);
}

MorphismAudit audit_morphism(const DiagMorphism& m, int resolution) {
  MorphismAudit a;
  a.ordered = m.paths().ordered();
  if (m.target().dim() > kDenseDimCap) {
    a.unital = true;  // structural only at symbolic stages
    return a;
  }
  auto corpus = generator_corpus(m.source());
  long bs = m.source().dim().convert_to<long>();
  long n = m.target().dim().convert_to<long>();

  // unit maps to unit exactly: delta(unit) is the identity bitwise
  a.unital = sampled_sup(m.delta(dd_unit(m.source())) - dd_unit(m.target()).body(), 8) == 0.0;

  // endpoint membership of every corpus image (exact permutations at 0 and 1)
  for (const auto& f : corpus) {
    DDElement img = m.apply(f);
    a.membership = std::max(a.membership, check_membership(img.body(), m.target()).second);
  }

  // Algebraic residuals, evaluated in the delta frame: for unitary u,
  // ||Ad_u X - Ad_u(Y)Ad_u(Z)|| = ||X - Y (u*u) Z||, so one dense u*u per
  // grid node serves every corpus pair; deltas stay block-diagonal.
  std::vector<Rat> knots;
  for (const auto& r : m.paths().runs())
    for (const auto& x : r.path.xs()) knots.push_back(x);
  auto grid = sample_grid(resolution, knots);
  for (const auto& x : grid) {
    Mat u = m.conjugator().eval(x);
    Mat gram = u.adjoint() * u;
    // per-run source values at this node
    std::vector<Mat> vals;
    vals.reserve(m.paths().runs().size() * corpus.size());
    for (const auto& f : corpus)
      for (const auto& r : m.paths().runs()) vals.push_back(f.eval(r.path.eval(x)));
    size_t nr = m.paths().runs().size();
    auto block = [&](size_t fi, size_t run) -> const Mat& { return vals[fi * nr + run]; };
    // expand a block-diagonal delta against gram: D_f * gram * D_g
    auto sandwich = [&](size_t fi, size_t gi) {
      Mat left{int(n), int(n)};  // D_f * gram, rows blocked
      long row = 0;
      for (size_t run = 0; run < nr; ++run) {
        long mult = m.paths().runs()[run].mult.convert_to<long>();
        const Mat& bf = block(fi, run);
        for (long c = 0; c < mult; ++c) {
          for (long i = 0; i < bs; ++i)
            for (long j = 0; j < n; ++j) {
              cplx s = 0;
              for (long k = 0; k < bs; ++k) s += bf(int(i), int(k)) * gram(int(row + k), int(j));
              left(int(row + i), int(j)) = s;
            }
          row += bs;
        }
      }
      Mat out{int(n), int(n)};  // left * D_g, columns blocked
      long col = 0;
      for (size_t run = 0; run < nr; ++run) {
        long mult = m.paths().runs()[run].mult.convert_to<long>();
        const Mat& bg = block(gi, run);
        for (long c = 0; c < mult; ++c) {
          for (long i = 0; i < n; ++i)
            for (long j = 0; j < bs; ++j) {
              cplx s = 0;
              for (long k = 0; k < bs; ++k) s += left(int(i), int(col + k)) * bg(int(k), int(j));
              out(int(i), int(col + j)) = s;
            }
          col += bs;
        }
      }
      return out;
    };
    for (size_t fi = 0; fi < corpus.size(); ++fi) {
      // adjoint: delta(f*) - delta(f)* vanishes blockwise
      double adj = 0;
      for (size_t run = 0; run < nr; ++run) {
        Mat d = corpus[fi].adjoint().eval(m.paths().runs()[run].path.eval(x)) -
                block(fi, run).adjoint();
        adj = std::max(adj, d.frobenius());
      }
      a.adjoint = std::max(a.adjoint, adj);
      for (size_t gi = 0; gi < corpus.size(); ++gi) {
        Mat sw = sandwich(fi, gi);
        // subtract blockdiag((fg)(xi)) and take Frobenius (upper of op norm)
        double fro2 = 0;
        long off = 0;
        for (size_t run = 0; run < nr; ++run) {
          long mult = m.paths().runs()[run].mult.convert_to<long>();
          Mat prod = (corpus[fi] * corpus[gi]).eval(m.paths().runs()[run].path.eval(x));
          for (long c = 0; c < mult; ++c) {
            for (long i = 0; i < bs; ++i)
              for (long j = 0; j < bs; ++j) sw(int(off + i), int(off + j)) -= prod(int(i), int(j));
            off += bs;
          }
        }
        for (const auto& v : sw.data()) fro2 += std::norm(v);
        a.multiplicativity = std::max(a.multiplicativity, std::sqrt(fro2));
        if (gi == fi + 1) {
          // linearity: delta(f+g) - (delta f + delta g) vanishes blockwise
          double lin = 0;
          for (size_t run = 0; run < nr; ++run) {
            Mat d = (corpus[fi] + corpus[gi]).eval(m.paths().runs()[run].path.eval(x)) -
                    (block(fi, run) + block(gi, run));
            lin = std::max(lin, d.frobenius());
          }
          a.linearity = std::max(a.linearity, lin);
        }
      }
    }
  }
  return a;
}

}  // namespace dd
