#include "dd/trace.hpp"

#include <set>

namespace dd {

namespace {

double normalized_trace(const Mat& m) {
  cplx t = 0;
  for (int i = 0; i < m.rows(); ++i) t += m(i, i);
  return t.real() / m.rows();
}

std::pair<double, double> integrate_against(const PLMeasure& tau,
                                            const std::function<double(const Rat&)>& g,
                                            const Rat& lip, const std::vector<Rat>& knots,
                                            int resolution, int refine) {
  std::set<Rat> nodes;
  for (int i = 0; i <= resolution; ++i) nodes.insert(Rat(i, resolution));
  for (const auto& x : tau.cdf().xs()) nodes.insert(x);
  for (const auto& k : knots)
    if (k >= 0 && k <= 1) nodes.insert(k);
  std::vector<Rat> base(nodes.begin(), nodes.end());
  double value = 0, err = 0;
  for (size_t i = 0; i + 1 < base.size(); ++i) {
    for (int s = 0; s < refine; ++s) {
      Rat x0 = base[i] + (base[i + 1] - base[i]) * s / refine;
      Rat x1 = base[i] + (base[i + 1] - base[i]) * (s + 1) / refine;
      double mass = to_double(tau.cdf().eval(x1) - tau.cdf().eval(x0));
      value += mass * (g(x0) + g(x1)) / 2;
      // |g - chord| <= L * h / 2 on the subinterval
      err += mass * to_double(lip * (x1 - x0)) / 2;
    }
  }
  return {value - err, value + err};
}

}  // namespace

std::pair<double, double> trace_bracket(const PLMeasure& tau, const MatrixFunction& f,
                                        int resolution, int refine) {
  // |tr_norm(A) - tr_norm(B)| <= ||A - B||, so tr∘f inherits f's Lipschitz bound
  auto g = [&f](const Rat& x) { return normalized_trace(f.eval(x)); };
  return integrate_against(tau, g, f.lipschitz(), f.knots(), resolution, refine);
}

std::pair<double, double> trace_of_image(const DiagMorphism& m, const PLMeasure& tau_target,
                                         const DDElement& f, int resolution, int refine) {
  // tr(Ad_u diag(f∘xi_r)) = (1/l) sum_r mult_r tr_pq(f(xi_r(x))): the
  // conjugation drops out, so only source-dimension blocks are evaluated
  double l = to_double(Rat(m.path_count()));
  std::vector<Rat> knots;
  for (const auto& r : m.paths().runs())
    for (const auto& x : r.path.xs()) knots.push_back(x);
  auto g = [&](const Rat& x) {
    double s = 0;
    for (const auto& r : m.paths().runs())
      s += to_double(Rat(r.mult)) * normalized_trace(f.eval(r.path.eval(x)));
    return s / l;
  };
  Rat lip = f.lipschitz() * m.paths().max_lipschitz();
  return integrate_against(tau_target, g, lip, knots, resolution, refine);
}

std::vector<PLMeasure> coherent_trace_family(const std::vector<DiagMorphism>& steps,
                                             const DiffuseMeasure& top) {
  size_t n_stages = steps.size() + 1;
  std::vector<PLMeasure> out(n_stages);
  out[n_stages - 1] = top;
  for (size_t n = n_stages - 1; n-- > 0;) out[n] = induced_measure(steps[n], out[n + 1]);
  return out;
}

}  // namespace dd
