#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dd/linalg.hpp"
#include "dd/numtheory.hpp"
#include "dd/plpath.hpp"
#include "dd/rational.hpp"

namespace dd {

struct DimMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParentMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Above this dimension, elements stay symbolic: metadata (Lipschitz and norm
// bounds, endpoint blocks) is tracked but dense evaluation refuses.
inline constexpr long kDenseDimCap = 4096;

// Matrix-valued function on [0,1]: evaluation closure plus certified bounds.
// Sampling grids are formed on demand from uniform nodes plus knots.
class MatrixFunction {
 public:
  using Eval = std::function<Mat(const Rat&)>;

  MatrixFunction() = default;
  MatrixFunction(Int dim, Eval eval, Rat lipschitz, Rat norm_upper,
                 std::vector<Rat> knots = {});

  const Int& dim() const { return dim_; }
  bool dense_ok() const { return dim_ <= kDenseDimCap && bool(eval_); }
  Mat eval(const Rat& x) const;
  const Rat& lipschitz() const { return lip_; }
  const Rat& norm_upper() const { return norm_upper_; }
  const std::vector<Rat>& knots() const { return knots_; }

  MatrixFunction operator+(const MatrixFunction& o) const;
  MatrixFunction operator-(const MatrixFunction& o) const;
  MatrixFunction operator*(const MatrixFunction& o) const;
  MatrixFunction adjoint() const;
  MatrixFunction scale(cplx c) const;

 private:
  Int dim_ = 0;
  Eval eval_;
  Rat lip_ = Rat(0);
  Rat norm_upper_ = Rat(0);
  std::vector<Rat> knots_;
};

// Grid: `resolution` uniform intervals plus endpoints plus knots.
std::vector<Rat> sample_grid(int resolution, const std::vector<Rat>& knots);

// lower = max spectral norm over grid nodes; upper = lower + L * maxgap / 2.
std::pair<double, double> sup_norm(const MatrixFunction& f, int resolution = 64);

// Max over grid nodes of the spectral norm (no Lipschitz inflation). Used for
// residuals of algebraic identities that vanish as functions.
double sampled_sup(const MatrixFunction& f, int resolution = 64);

struct DDAlgebra {
  PrimePair pair;
  explicit DDAlgebra(PrimePair pr) : pair(std::move(pr)) {}
  Int dim() const { return pair.dim(); }
  bool operator==(const DDAlgebra& o) const { return pair == o.pair; }
};

// Element of Z_{p,q}: body plus exact endpoint block data
// (body(0) = left (x) 1_q, body(1) = 1_p (x) right).
class DDElement {
 public:
  DDElement() = default;
  DDElement(DDAlgebra parent, MatrixFunction body, Mat left_block, Mat right_block,
            std::string label = "");

  const DDAlgebra& parent() const { return *parent_; }
  const MatrixFunction& body() const { return body_; }
  const Mat& left_block() const { return left_; }
  const Mat& right_block() const { return right_; }
  const std::string& label() const { return label_; }
  const Rat& lipschitz() const { return body_.lipschitz(); }
  const Rat& norm_upper() const { return body_.norm_upper(); }

  Mat eval(const Rat& x) const { return body_.eval(x); }

  DDElement operator+(const DDElement& o) const;
  DDElement operator*(const DDElement& o) const;
  DDElement adjoint() const;
  DDElement scale(cplx c) const;

 private:
  std::shared_ptr<const DDAlgebra> parent_;
  MatrixFunction body_;
  Mat left_, right_;
  std::string label_;
};

// residual = max Frobenius distance of g(0) from M_p (x) 1_q and of g(1)
// from 1_p (x) M_q; membership iff residual <= 1e-10.
std::pair<bool, double> check_membership(const MatrixFunction& g, const DDAlgebra& alg);

// Frobenius-orthogonal projections onto the endpoint subspaces.
Mat project_left_form(const Mat& m, long p, long q);   // nearest a with m ~ a (x) 1_q
Mat project_right_form(const Mat& m, long p, long q);  // nearest b with m ~ 1_p (x) b

DDElement dd_unit(const DDAlgebra& alg);

// Deterministic generator corpus: unit, t(x) = x*1, four bump matrix units
// x(1-x)E_ij, one element with nontrivial endpoint blocks.
std::vector<DDElement> generator_corpus(const DDAlgebra& alg);

}  // namespace dd
