#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dd/trace.hpp"

using namespace dd;

TEST_CASE("trace of the unit is exactly 1") {
  DDAlgebra alg{PrimePair(2, 3)};
  auto [lo, hi] = trace_bracket(PLMeasure::lebesgue(), dd_unit(alg));
  CHECK(lo <= 1.0);
  CHECK(hi >= 1.0);
  CHECK(hi - lo < 1e-12);  // constant integrand: no error bar
}

TEST_CASE("Lebesgue trace of t brackets 1/2 with width <= 1e-3") {
  DDAlgebra alg{PrimePair(2, 3)};
  auto t = generator_corpus(alg)[1];
  auto [lo, hi] = trace_bracket(PLMeasure::lebesgue(), t);
  CHECK(lo <= 0.5);
  CHECK(hi >= 0.5);
  CHECK(hi - lo <= 1e-3);
}

TEST_CASE("bump trace: x(1-x)E_11 under Lebesgue is 1/36 for Z_{2,3}") {
  DDAlgebra alg{PrimePair(2, 3)};
  auto bump = generator_corpus(alg)[2];  // bump00
  auto [lo, hi] = trace_bracket(PLMeasure::lebesgue(), bump);
  CHECK(lo <= 1.0 / 36 + 1e-12);
  CHECK(hi >= 1.0 / 36 - 1e-12);
  CHECK(hi - lo <= 1e-3);
}

TEST_CASE("trace property on corpus: |tau(fg) - tau(gf)| within brackets") {
  DDAlgebra alg{PrimePair(2, 3)};
  auto corpus = generator_corpus(alg);
  PLMeasure leb = PLMeasure::lebesgue();
  for (size_t i = 0; i < corpus.size(); ++i)
    for (size_t j = i + 1; j < corpus.size(); ++j) {
      auto [l1, h1] = trace_bracket(leb, corpus[i] * corpus[j]);
      auto [l2, h2] = trace_bracket(leb, corpus[j] * corpus[i]);
      CHECK(l1 <= h2 + 1e-12);
      CHECK(l2 <= h1 + 1e-12);
    }
}

TEST_CASE("faithfulness diagnostic: positive elements have positive trace") {
  DDAlgebra alg{PrimePair(2, 3)};
  for (const auto& f : generator_corpus(alg)) {
    auto pos = f.adjoint() * f;
    if (to_double(pos.norm_upper()) == 0) continue;
    auto [lo, hi] = trace_bracket(PLMeasure::lebesgue(), pos);
    (void)hi;
    if (f.label() == "unit" || f.label() == "t" || f.label() == "endpoints")
      CHECK(lo > 0);
  }
}

TEST_CASE("induced measure duality on the corpus") {
  DDAlgebra a{PrimePair(2, 3)}, b{PrimePair(16, 15)};
  DiagMorphism m = build_embedding(a, b, Rat(1, 2));
  DiffuseMeasure tgt(PLPath({Rat(0), Rat(1, 4), Rat(1)}, {Rat(0), Rat(2, 5), Rat(1)}));
  PLMeasure induced = induced_measure(m, tgt);
  for (const auto& f : generator_corpus(a)) {
    auto [l1, h1] = trace_bracket(induced, f);
    auto [l2, h2] = trace_of_image(m, tgt, f);
    // |trace(induced,f) - trace(tau', apply(f))| <= combined bracket width
    CHECK(l1 <= h2 + 1e-12);
    CHECK(l2 <= h1 + 1e-12);
  }
}

TEST_CASE("identity morphism induces the target measure; staircase telescopes") {
  DDAlgebra a{PrimePair(2, 3)};
  DiffuseMeasure tau(PLPath({Rat(0), Rat(1, 2), Rat(1)}, {Rat(0), Rat(1, 3), Rat(1)}));
  CHECK(induced_measure(identity_morphism(a), tau) == PLMeasure(tau.cdf()));
  // full staircase over Lebesgue -> Lebesgue (transport construction)
  DDAlgebra b{PrimePair(16, 15)};
  DiagMorphism t =
      build_transport_embedding(a, b, DiffuseMeasure::lebesgue(), DiffuseMeasure::lebesgue());
  CHECK(induced_measure(t, PLMeasure::lebesgue()) == PLMeasure::lebesgue());
}

TEST_CASE("coherent trace family: exact compatibility and Cauchy diagnostic") {
  std::vector<DiagMorphism> steps;
  DDAlgebra a{PrimePair(2, 3)}, b{PrimePair(16, 15)};
  steps.push_back(build_embedding(a, b, Rat(1, 2)));
  auto fam = coherent_trace_family(steps, DiffuseMeasure::lebesgue());
  REQUIRE(fam.size() == 2);
  CHECK(fam[1] == PLMeasure::lebesgue());
  CHECK(induced_measure(steps[0], fam[1]) == fam[0]);
  // N = 1 degenerate case
  auto solo = coherent_trace_family({}, DiffuseMeasure::lebesgue());
  CHECK(solo.size() == 1);
  CHECK(solo[0] == PLMeasure::lebesgue());
}
