#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dd/measure.hpp"

using namespace dd;

TEST_CASE("pushforward along identity is identity") {
  DiffuseMeasure tau(PLPath({Rat(0), Rat(1, 3), Rat(1)}, {Rat(0), Rat(1, 2), Rat(1)}));
  CHECK(pushforward(PLPath::identity(), tau) == PLMeasure(tau.cdf()));
}

TEST_CASE("pushforward of Lebesgue along x/2 has CDF min(2s,1)") {
  PLMeasure out = pushforward(PLPath::affine(Rat(0), Rat(1, 2)), PLMeasure::lebesgue());
  CHECK(out.cdf().eval(Rat(1, 4)) == Rat(1, 2));
  CHECK(out.cdf().eval(Rat(1, 2)) == 1);
  CHECK(out.cdf().eval(Rat(3, 4)) == 1);
  CHECK(out.cdf().value_at_1() == 1);  // mass conservation
}

TEST_CASE("pushforward matches Monte-Carlo-free dense CDF oracle") {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<long> num(1, 8);
  for (int trial = 0; trial < 20; ++trial) {
    // random strictly increasing path and measure
    std::vector<Rat> ys{Rat(0)};
    for (int i = 1; i <= 4; ++i) ys.push_back(ys.back() + Rat(num(rng), 64));
    Rat top = ys.back();
    for (auto& y : ys) y = y / top;  // spans [0,1]
    PLPath xi({Rat(0), Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1)}, ys);

    std::vector<Rat> ws{Rat(0)};
    for (int i = 1; i <= 4; ++i) ws.push_back(ws.back() + Rat(num(rng), 64));
    Rat wtop = ws.back();
    for (auto& w : ws) w = w / wtop;
    DiffuseMeasure tau(PLPath({Rat(0), Rat(1, 4), Rat(1, 2), Rat(3, 4), Rat(1)}, ws));

    PLMeasure out = pushforward(xi, tau);
    // oracle: G(s) = W(sup{x : xi(x) <= s}) evaluated by bisection
    for (int i = 0; i <= 200; ++i) {
      Rat s(i, 200);
      double lo = 0, hi = 1;
      if (to_double(xi.eval(Rat(0))) > to_double(s) + 1e-15) {
        hi = 0;
      } else if (to_double(xi.eval(Rat(1))) <= to_double(s)) {
        lo = 1;
      } else {
        for (int it = 0; it < 60; ++it) {
          double mid = (lo + hi) / 2;
          Rat midr(long(std::llround(mid * (1LL << 40))), (1LL << 40));
          if (to_double(xi.eval(midr)) <= to_double(s))
            lo = mid;
          else
            hi = mid;
        }
      }
      Rat lor(long(std::llround(lo * (1LL << 40))), (1LL << 40));
      double want = to_double(tau.cdf().eval(lor));
      double got = to_double(out.cdf().eval(s));
      CHECK(std::abs(want - got) < 1e-9);
    }
  }
}

TEST_CASE("average of staircase pushforwards telescopes to the identity CDF") {
  // full staircase over Lebesgue: xi_i = (x + i - 1)/l pushed forward
  for (int l : {2, 5, 8}) {
    std::vector<PLMeasure> parts;
    for (int i = 1; i <= l; ++i)
      parts.push_back(pushforward(PLPath::affine(Rat(i - 1, l), Rat(i, l)), PLMeasure::lebesgue()));
    CHECK(PLMeasure::average(parts) == PLMeasure::lebesgue());
  }
}

TEST_CASE("flat paths are rejected, non-monotone rejected") {
  CHECK_THROWS(pushforward(PLPath::constant(Rat(1, 2)), PLMeasure::lebesgue()));
  CHECK_THROWS(pushforward(PLPath::affine(Rat(1), Rat(0)), PLMeasure::lebesgue()));
}

TEST_CASE("faithfulness detection") {
  CHECK(PLMeasure::lebesgue().is_faithful());
  PLMeasure flat(PLPath({Rat(0), Rat(1, 2), Rat(3, 4), Rat(1)},
                        {Rat(0), Rat(1, 2), Rat(1, 2), Rat(1)}));
  CHECK_FALSE(flat.is_faithful());
  CHECK_THROWS(DiffuseMeasure(flat.cdf()));
}
