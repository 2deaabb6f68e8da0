#pragma once

#include "dd/algebra.hpp"
#include "dd/measure.hpp"
#include "dd/morphism.hpp"

namespace dd {

// Bracket of tau(f) = integral of the normalized matrix trace of f against
// the measure. Quadrature is trapezoidal on the union of the CDF breakpoints,
// the sample grid and f's knots, each interval subdivided `refine` times;
// the error bar is Lipschitz-based and certified.
std::pair<double, double> trace_bracket(const PLMeasure& tau, const MatrixFunction& f,
                                        int resolution = 64, int refine = 16);

inline std::pair<double, double> trace_bracket(const PLMeasure& tau, const DDElement& f,
                                               int resolution = 64, int refine = 16) {
  return trace_bracket(tau, f.body(), resolution, refine);
}

// Bracket of tau'(m(f)) computed block-wise through the path family (the
// conjugation drops out of the trace), so no target-dimension matrices arise.
std::pair<double, double> trace_of_image(const DiagMorphism& m, const PLMeasure& tau_target,
                                         const DDElement& f, int resolution = 64, int refine = 16);

// tau_n := induced(composite(n, N), top) for each stage n of a chain of
// morphisms; exact PL measures.
std::vector<PLMeasure> coherent_trace_family(const std::vector<DiagMorphism>& steps,
                                             const DiffuseMeasure& top);

}  // namespace dd
