#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dd/morphism.hpp"

using namespace dd;

TEST_CASE("canonical_path_family: trivial and spec cases") {
  auto fam = canonical_path_family(PrimePair(1, 1), PrimePair(1, 1), Rat(1));
  CHECK(fam.count() == 1);
  CHECK(fam.runs()[0].path == PLPath::identity());

  // (2,3) -> (16,15), mesh 1/2: l = 40, groups 10 + 15 + 15 / 16 + 16 + 8
  auto f40 = canonical_path_family(PrimePair(2, 3), PrimePair(16, 15), Rat(1, 2));
  CHECK(f40.count() == 40);
  CHECK(f40.ordered());
  CHECK(f40.max_diameter() <= Rat(1, 2));
  CHECK(f40.max_lipschitz() <= Rat(1, 2));
  CHECK(f40.covers_unit_interval());
  auto p0 = boundary_pattern(f40, false);
  CHECK(p0.cells.front().cls == BoundaryPattern::Class::Zero);
  CHECK(p0.cells.front().size == 10);
  CHECK(pattern_divisibility_error(p0, PrimePair(2, 3), PrimePair(16, 15), false).empty());
  auto p1 = boundary_pattern(f40, true);
  CHECK(p1.cells.back().cls == BoundaryPattern::Class::One);
  CHECK(p1.cells.back().size == 8);
  CHECK(pattern_divisibility_error(p1, PrimePair(2, 3), PrimePair(16, 15), true).empty());
}

TEST_CASE("canonical_path_family: infeasible targets raise") {
  CHECK_THROWS_AS(canonical_path_family(PrimePair(2, 3), PrimePair(3, 4), Rat(1, 2)),
                  InfeasibleMesh);
  // fine mesh beyond what |target| supports
  CHECK_THROWS_AS(canonical_path_family(PrimePair(2, 3), PrimePair(16, 15), Rat(1, 100)),
                  InfeasibleMesh);
}

TEST_CASE("regroup permutation turns the boundary pattern into tensor form") {
  PrimePair src(2, 3), tgt(16, 15);
  auto fam = canonical_path_family(src, tgt, Rat(1, 2));
  DDAlgebra a{src}, b{tgt};
  auto corpus = generator_corpus(a);
  DiagMorphism m = build_embedding(a, b, Rat(1, 2));
  for (const auto& f : corpus) {
    auto img = m.apply(f);  // would throw BoundaryViolation if the perm were wrong
    auto [ok, res] = check_membership(img.body(), b);
    CHECK(ok);
    CHECK(res <= 1e-10);
  }
}

TEST_CASE("build_embedding (2,3)->(16,15): full morphism audit") {
  DDAlgebra a{PrimePair(2, 3)}, b{PrimePair(16, 15)};
  DiagMorphism m = build_embedding(a, b, Rat(1, 2));
  CHECK(m.path_count() == 40);
  auto audit = audit_morphism(m, 16);
  CHECK(audit.ordered);
  CHECK(audit.unital);
  CHECK(audit.membership <= 1e-10);
  CHECK(audit.multiplicativity <= 1e-9);
  CHECK(audit.linearity <= 1e-9);
  CHECK(audit.adjoint <= 1e-9);
}

TEST_CASE("delta: unit, single identity path, block norm") {
  DDAlgebra a{PrimePair(2, 3)};
  auto id = identity_morphism(a);
  auto corpus = generator_corpus(a);
  for (const auto& f : corpus) {
    CHECK(sampled_sup(id.delta(f) - f.body()) == 0.0);
  }
  DDAlgebra b{PrimePair(16, 15)};
  DiagMorphism m = build_embedding(a, b, Rat(1, 2));
  CHECK(sampled_sup(m.delta(dd_unit(a)) - dd_unit(b).body()) == 0.0);
  // block-diagonal norm = max over blocks; compare against dense evaluation
  for (const auto& f : corpus) {
    double lhs = sampled_sup(m.delta(f), 16);
    double rhs = 0;
    for (const auto& run : m.paths().runs())
      for (const auto& x : sample_grid(16, {}))
        rhs = std::max(rhs, f.eval(run.path.eval(x)).op_norm());
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("apply: unital, isometric on corpus") {
  DDAlgebra a{PrimePair(2, 3)}, b{PrimePair(16, 15)};
  DiagMorphism m = build_embedding(a, b, Rat(1, 2));
  CHECK(sampled_sup(m.delta(dd_unit(a)) - dd_unit(b).body(), 8) == 0.0);
  for (const auto& f : generator_corpus(a)) {
    auto [lo_s, hi_s] = sup_norm(f.body(), 32);
    // image norms via unitary invariance: ||Ad_u D|| = ||D|| = max block norm
    double lo_t = 0;
    for (const auto& run : m.paths().runs())
      for (const auto& x : sample_grid(32, {}))
        lo_t = std::max(lo_t, f.eval(run.path.eval(x)).op_norm());
    double hi_t = lo_t + to_double(f.lipschitz() * m.paths().max_lipschitz()) / 64.0;
    CHECK(lo_t <= hi_s + 1e-9);
    CHECK(lo_s <= hi_t + 1e-9);
    // dense spot check at three nodes
    for (const auto& x : {Rat(0), Rat(1, 2), Rat(1)}) {
      double dn = m.apply(f).eval(x).op_norm();
      double bn = 0;
      for (const auto& run : m.paths().runs())
        bn = std::max(bn, f.eval(run.path.eval(x)).op_norm());
      CHECK(dn == doctest::Approx(bn).epsilon(1e-9));
    }
  }
}

TEST_CASE("compose: canonical form, path count, mesh propagation") {
  DDAlgebra a{PrimePair(2, 3)}, b{PrimePair(16, 15)};
  DiagMorphism m = build_embedding(a, b, Rat(1, 2));
  auto c1 = compose(identity_morphism(b), m);
  CHECK(c1.paths() == m.paths());
  auto c2 = compose(m, identity_morphism(a));
  CHECK(c2.paths() == m.paths());

  DDAlgebra c{PrimePair(496, 495)};
  DiagMorphism m2 = build_embedding(b, c, Rat(1, 2));
  DiagMorphism comp = compose(m2, m);
  CHECK(comp.path_count() == m.path_count() * m2.path_count());  // |Λ| multiplies
  CHECK(comp.paths().ordered());
  // mesh: composite diameters bounded by the first leg's diameters
  CHECK(comp.paths().max_diameter() <= m.paths().max_diameter());
  CHECK(comp.paths().max_diameter() <= Rat(1, 4));  // slope product
}

TEST_CASE("compose agrees with apply∘apply (small target)") {
  // warp ∘ canonical and canonical ∘ warp keep the middle dense and chainable
  DDAlgebra a{PrimePair(2, 3)}, b{PrimePair(16, 15)};
  DiffuseMeasure leb = DiffuseMeasure::lebesgue();
  DiffuseMeasure warped(PLPath({Rat(0), Rat(1, 3), Rat(1)}, {Rat(0), Rat(3, 5), Rat(1)}));
  DiagMorphism warp_a = build_transport_embedding(a, a, warped, leb);
  DiagMorphism step = build_embedding(a, b, Rat(1, 2));
  DiagMorphism warp_b = build_transport_embedding(b, b, warped, leb);
  auto corpus = generator_corpus(a);
  for (auto [secondp, firstp] : {std::pair<const DiagMorphism*, const DiagMorphism*>{&step, &warp_a},
                                 {&warp_b, &step}}) {
    DiagMorphism comp = compose(*secondp, *firstp);
    CHECK(comp.paths().ordered());
    for (size_t i = 0; i < corpus.size(); i += 3) {
      auto direct = comp.apply(corpus[i]);
      auto chained = secondp->apply(firstp->apply(corpus[i]));
      for (const auto& x : sample_grid(6, {}))
        CHECK((direct.eval(x) - chained.eval(x)).frobenius() <= 1e-9);
    }
  }
}

TEST_CASE("transport embedding is exactly trace-preserving") {
  DDAlgebra a{PrimePair(2, 3)}, b{PrimePair(16, 15)};
  DiffuseMeasure leb = DiffuseMeasure::lebesgue();
  DiffuseMeasure warped(PLPath({Rat(0), Rat(1, 3), Rat(1)}, {Rat(0), Rat(3, 5), Rat(1)}));
  DiagMorphism m = build_transport_embedding(a, b, warped, leb);
  CHECK(induced_measure(m, leb) == PLMeasure(warped.cdf()));
  // and with a warped target measure
  DiagMorphism m2 = build_transport_embedding(a, b, leb, warped);
  CHECK(induced_measure(m2, warped) == PLMeasure::lebesgue());
  // it is a genuine morphism
  auto audit = audit_morphism(m, 24);
  CHECK(audit.pass());
}

TEST_CASE("identity transport between equal algebras cancels its inverse") {
  DDAlgebra a{PrimePair(16, 15)};
  DiffuseMeasure leb = DiffuseMeasure::lebesgue();
  DiffuseMeasure warped(PLPath({Rat(0), Rat(1, 4), Rat(1)}, {Rat(0), Rat(2, 3), Rat(1)}));
  DiagMorphism fwd = build_transport_embedding(a, a, warped, leb);
  DiagMorphism bwd = build_transport_embedding(a, a, leb, warped);
  DiagMorphism round = compose(bwd, fwd);
  REQUIRE(round.path_count() == 1);
  CHECK(round.paths().runs()[0].path == PLPath::identity());
}
