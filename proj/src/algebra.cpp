#include "dd/algebra.hpp"

#include <algorithm>
#include <set>

namespace dd {

namespace {

long small_dim(const Int& d, const char* who) {
  if (d > kDenseDimCap)
    throw std::runtime_error(std::string(who) + ": dimension too large for dense evaluation");
  return d.convert_to<long>();
}

}  // namespace

MatrixFunction::MatrixFunction(Int dim, Eval eval, Rat lipschitz, Rat norm_upper,
                               std::vector<Rat> knots)
    : dim_(std::move(dim)),
      eval_(std::move(eval)),
      lip_(std::move(lipschitz)),
      norm_upper_(std::move(norm_upper)),
      knots_(std::move(knots)) {}

Mat MatrixFunction::eval(const Rat& x) const {
  if (!eval_) throw std::runtime_error("MatrixFunction: no evaluator (symbolic-only element)");
  small_dim(dim_, "MatrixFunction::eval");
  return eval_(x);
}

MatrixFunction MatrixFunction::operator+(const MatrixFunction& o) const {
  if (dim_ != o.dim_) throw DimMismatch("MatrixFunction: dim mismatch in +");
  Eval ev;
  if (eval_ && o.eval_) {
    auto a = eval_, b = o.eval_;
    ev = [a, b](const Rat& x) { return a(x) + b(x); };
  }
  std::vector<Rat> ks = knots_;
  ks.insert(ks.end(), o.knots_.begin(), o.knots_.end());
  return MatrixFunction(dim_, ev, lip_ + o.lip_, norm_upper_ + o.norm_upper_, ks);
}

MatrixFunction MatrixFunction::operator-(const MatrixFunction& o) const {
  return *this + o.scale(cplx(-1.0, 0.0));
}

MatrixFunction MatrixFunction::operator*(const MatrixFunction& o) const {
  if (dim_ != o.dim_) throw DimMismatch("MatrixFunction: dim mismatch in *");
  Eval ev;
  if (eval_ && o.eval_) {
    auto a = eval_, b = o.eval_;
    ev = [a, b](const Rat& x) { return a(x) * b(x); };
  }
  std::vector<Rat> ks = knots_;
  ks.insert(ks.end(), o.knots_.begin(), o.knots_.end());
  // L(fg) <= L_f ||g|| + L_g ||f||
  return MatrixFunction(dim_, ev, lip_ * o.norm_upper_ + o.lip_ * norm_upper_,
                        norm_upper_ * o.norm_upper_, ks);
}

MatrixFunction MatrixFunction::adjoint() const {
  Eval ev;
  if (eval_) {
    auto a = eval_;
    ev = [a](const Rat& x) { return a(x).adjoint(); };
  }
  return MatrixFunction(dim_, ev, lip_, norm_upper_, knots_);
}

MatrixFunction MatrixFunction::scale(cplx c) const {
  Eval ev;
  if (eval_) {
    auto a = eval_;
    ev = [a, c](const Rat& x) { return a(x) * c; };
  }
  double m = std::abs(c);
  Rat mr = Rat(Int((long long)std::ceil(m * 1e9)), Int(1000000000));
  return MatrixFunction(dim_, ev, lip_ * mr, norm_upper_ * mr, knots_);
}

std::vector<Rat> sample_grid(int resolution, const std::vector<Rat>& knots) {
  std::set<Rat> pts;
  for (int i = 0; i <= resolution; ++i) pts.insert(Rat(i, resolution));
  for (const auto& k : knots)
    if (k >= 0 && k <= 1) pts.insert(k);
  return std::vector<Rat>(pts.begin(), pts.end());
}

std::pair<double, double> sup_norm(const MatrixFunction& f, int resolution) {
  auto grid = sample_grid(resolution, f.knots());
  double lower = 0;
  Rat maxgap(0);
  for (size_t i = 0; i < grid.size(); ++i) {
    lower = std::max(lower, f.eval(grid[i]).op_norm());
    if (i > 0) maxgap = std::max(maxgap, Rat(grid[i] - grid[i - 1]));
  }
  double upper = lower + to_double(f.lipschitz() * maxgap / 2);
  return {lower, upper};
}

double sampled_sup(const MatrixFunction& f, int resolution) {
  auto grid = sample_grid(resolution, f.knots());
  double s = 0;
  for (const auto& x : grid) s = std::max(s, f.eval(x).op_norm());
  return s;
}

DDElement::DDElement(DDAlgebra parent, MatrixFunction body, Mat left_block, Mat right_block,
                     std::string label)
    : parent_(std::make_shared<const DDAlgebra>(std::move(parent))),
      body_(std::move(body)),
      left_(std::move(left_block)),
      right_(std::move(right_block)),
      label_(std::move(label)) {
  if (body_.dim() != parent_->dim()) throw DimMismatch("DDElement: body dim != pq");
}

DDElement DDElement::operator+(const DDElement& o) const {
  if (!(parent() == o.parent())) throw ParentMismatch("DDElement: parent mismatch in +");
  return DDElement(parent(), body_ + o.body_, left_ + o.left_, right_ + o.right_,
                   "(" + label_ + "+" + o.label_ + ")");
}

DDElement DDElement::operator*(const DDElement& o) const {
  if (!(parent() == o.parent())) throw ParentMismatch("DDElement: parent mismatch in *");
  return DDElement(parent(), body_ * o.body_, left_ * o.left_, right_ * o.right_,
                   "(" + label_ + "*" + o.label_ + ")");
}

DDElement DDElement::adjoint() const {
  return DDElement(parent(), body_.adjoint(), left_.adjoint(), right_.adjoint(),
                   "(" + label_ + "*)");
}

DDElement DDElement::scale(cplx c) const {
  return DDElement(parent(), body_.scale(c), left_ * c, right_ * c, "(c*" + label_ + ")");
}

Mat project_left_form(const Mat& m, long p, long q) {
  Mat a{int(p), int(p)};
  for (long i = 0; i < p; ++i)
    for (long k = 0; k < p; ++k) {
      cplx s = 0;
      for (long j = 0; j < q; ++j) s += m(int(i * q + j), int(k * q + j));
      a(int(i), int(k)) = s / double(q);
    }
  return a;
}

Mat project_right_form(const Mat& m, long p, long q) {
  Mat b{int(q), int(q)};
  for (long j = 0; j < q; ++j)
    for (long l = 0; l < q; ++l) {
      cplx s = 0;
      for (long i = 0; i < p; ++i) s += m(int(i * q + j), int(i * q + l));
      b(int(j), int(l)) = s / double(p);
    }
  return b;
}

std::pair<bool, double> check_membership(const MatrixFunction& g, const DDAlgebra& alg) {
  if (g.dim() != alg.dim()) throw DimMismatch("check_membership: dim mismatch");
  long p = alg.pair.p.convert_to<long>(), q = alg.pair.q.convert_to<long>();
  Mat g0 = g.eval(Rat(0));
  Mat g1 = g.eval(Rat(1));
  Mat i_p = Mat::identity(int(p)), i_q = Mat::identity(int(q));
  double r0 = (g0 - kron(project_left_form(g0, p, q), i_q)).frobenius();
  double r1 = (g1 - kron(i_p, project_right_form(g1, p, q))).frobenius();
  double res = std::max(r0, r1);
  return {res <= 1e-10, res};
}

DDElement dd_unit(const DDAlgebra& alg) {
  long n = alg.dim().convert_to<long>();
  long p = alg.pair.p.convert_to<long>(), q = alg.pair.q.convert_to<long>();
  MatrixFunction body(alg.dim(), [n](const Rat&) { return Mat::identity(int(n)); }, Rat(0), Rat(1));
  return DDElement(alg, body, Mat::identity(int(p)), Mat::identity(int(q)), "unit");
}

std::vector<DDElement> generator_corpus(const DDAlgebra& alg) {
  long n = alg.dim().convert_to<long>();
  long p = alg.pair.p.convert_to<long>(), q = alg.pair.q.convert_to<long>();
  std::vector<DDElement> out;
  out.push_back(dd_unit(alg));

  // t(x) = x * 1
  MatrixFunction tb(alg.dim(),
                    [n](const Rat& x) { return Mat::identity(int(n)) * cplx(to_double(x), 0.0); },
                    Rat(1), Rat(1));
  out.push_back(DDElement(alg, tb, Mat{int(p), int(p)}, Mat::identity(int(q)), "t"));

  // bumps x(1-x) E_ij over the leading 2x2 index set (1x1 when n = 1)
  long b = std::min<long>(2, n);
  for (long i = 0; i < b; ++i)
    for (long j = 0; j < b; ++j) {
      MatrixFunction bump(alg.dim(),
                          [n, i, j](const Rat& x) {
                            Mat m{int(n), int(n)};
                            double t = to_double(x);
                            m(int(i), int(j)) = t * (1 - t);
                            return m;
                          },
                          Rat(1), Rat(1, 4));
      out.push_back(DDElement(alg, bump, Mat{int(p), int(p)}, Mat{int(q), int(q)},
                              "bump" + std::to_string(i) + std::to_string(j)));
    }

  // (1-x)(a (x) 1_q) + x(1_p (x) b), a = diag(1/(i+1)), b = diag(1/(j+1))
  Mat a{int(p), int(p)}, bb{int(q), int(q)};
  for (long i = 0; i < p; ++i) a(int(i), int(i)) = 1.0 / double(i + 1);
  for (long j = 0; j < q; ++j) bb(int(j), int(j)) = 1.0 / double(j + 1);
  Rat lip(0);
  for (long i = 0; i < p; ++i)
    for (long j = 0; j < q; ++j) {
      Rat d = Rat(1, i + 1) - Rat(1, j + 1);
      if (d < 0) d = -d;
      lip = std::max(lip, Rat(d));
    }
  Mat a1 = kron(a, Mat::identity(int(q)));
  Mat b1 = kron(Mat::identity(int(p)), bb);
  MatrixFunction ep(alg.dim(),
                    [a1, b1](const Rat& x) {
                      double t = to_double(x);
                      return a1 * cplx(1 - t, 0.0) + b1 * cplx(t, 0.0);
                    },
                    lip, Rat(1));
  out.push_back(DDElement(alg, ep, a, bb, "endpoints"));
  return out;
}

}  // namespace dd
