#include "invlap/specfun.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"

using namespace invlap;

TEST_CASE("log_gamma matches the standard library across a wide range") {
  for (double x = 0.5; x <= 200.0; x += 0.37) {
    const double ref = std::lgamma(x);
    CHECK(std::abs(log_gamma(x) - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
  }
  // Reflection branch.
  for (double x : {0.01, 0.1, 0.25, 0.49}) {
    const double ref = std::lgamma(x);
    CHECK(std::abs(log_gamma(x) - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("log_gamma exact anchors") {
  CHECK(std::abs(log_gamma(1.0)) <= 5e-15);
  CHECK(std::abs(log_gamma(2.0)) <= 5e-15);
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
  CHECK(log_gamma(0.5) ==
        doctest::Approx(0.57236494292470008707).epsilon(1e-14));
}

TEST_CASE("log_gamma rejects the nonpositive axis") {
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-1.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-0.5), std::domain_error);
  CHECK_THROWS_AS(log_gamma(std::nan("")), std::domain_error);
}

TEST_CASE("pochhammer basics") {
  CHECK(pochhammer(3.7, 0) == 1.0);
  CHECK(pochhammer(1.0, 4) == 24.0);
  CHECK(pochhammer(0.5, 3) == doctest::Approx(1.875).epsilon(1e-15));
  CHECK(pochhammer(-1.0, 2) == 0.0);
}

TEST_CASE("pochhammer addition rule on random draws") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> da(-3.0, 3.0);
  std::uniform_int_distribution<unsigned> dk(0, 6);
  for (int i = 0; i < 200; ++i) {
    const double a = da(rng);
    const unsigned j = dk(rng), k = dk(rng);
    const double lhs = pochhammer(a, j + k);
    const double rhs = pochhammer(a, j) * pochhammer(a + j, k);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("hyp2f1 at lambda = 0 is one, one term") {
  const SeriesResult r = hyp2f1({0.7, -2.3, 1.1, 0.0});
  CHECK(r.value == 1.0);
  CHECK(r.terms_used == 1);
}

TEST_CASE("terminating series are summed exactly") {
  // 2F1(-1, -1/2; 3/2; x) = 1 + x/3.
  for (double lam : {0.0, 0.3, 0.9, 0.999}) {
    const SeriesResult r = hyp2f1({-1.0, -0.5, 1.5, lam});
    CHECK(r.value == doctest::Approx(1.0 + lam / 3.0).epsilon(1e-15));
    CHECK(r.terms_used <= 2);
  }
  // Degree 3 polynomial: value checked against the explicit pochhammer sum.
  const HypParams p{-3.0, 2.5, 1.5, 0.5};
  double ref = 0.0;
  for (unsigned k = 0; k <= 3; ++k) {
    ref += pochhammer(p.a, k) * pochhammer(p.b, k) /
           (pochhammer(p.c, k) * pochhammer(1.0, k)) * std::pow(p.lambda, k);
  }
  const SeriesResult r = hyp2f1(p);
  CHECK(r.value == doctest::Approx(ref).epsilon(1e-14));
  CHECK(r.terms_used == 4);
  // And it sums to -1/8 with these parameters swapped into the b slot.
  const SeriesResult r2 = hyp2f1({-3.0, 2.5, 1.5, 0.5});
  CHECK(r2.value == doctest::Approx(-0.125).epsilon(1e-13));
}

TEST_CASE("termination wins over the transform even at large lambda") {
  const SeriesResult r = hyp2f1({-1.0, -0.5, 1.5, 0.9});
  CHECK(r.terms_used == 2);
  CHECK(r.value == doctest::Approx(1.3).epsilon(1e-15));
}

TEST_CASE("closed-form anchors") {
  // 2F1(1, 1/2; 3/2; z^2) = artanh(z)/z at z = 1/2, i.e. ln 3.
  CHECK(hyp2f1({1.0, 0.5, 1.5, 0.25}).value ==
        doctest::Approx(1.0986122886681096914).epsilon(1e-14));
  // 2F1(a, b; b; x) = (1-x)^(-a).
  CHECK(hyp2f1({0.5, 2.0, 2.0, 0.3}).value ==
        doctest::Approx(1.1952286093343936400).epsilon(1e-14));
  // Deep in the transformed regime; ~3e3 terms, so rounding accumulates.
  CHECK(hyp2f1({0.3, 0.4, 2.0, 0.99}).value ==
        doctest::Approx(1.1022144011278262237).epsilon(5e-12));
}

TEST_CASE("euler transform and direct summation agree") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> dab(-2.0, 2.0);
  std::uniform_real_distribution<double> ds(0.2, 3.2);
  std::uniform_real_distribution<double> dlam(0.0, 0.95);
  SeriesOptions direct_only;
  direct_only.euler_threshold = 2.0;  // never transform
  SeriesOptions transform_always;
  transform_always.euler_threshold = 0.0;  // transform whenever c-a-b > 0
  int exercised = 0;
  for (int i = 0; i < 100; ++i) {
    HypParams p;
    p.a = dab(rng);
    p.b = dab(rng);
    p.c = p.a + p.b + ds(rng);
    p.lambda = dlam(rng);
    if (p.c <= 0.05 || std::abs(p.c - std::round(p.c)) < 1e-3) continue;
    if (p.a == std::floor(p.a) || p.b == std::floor(p.b)) continue;
    const double direct = hyp2f1(p, direct_only).value;
    const double transformed = hyp2f1(p, transform_always).value;
    CHECK(std::abs(direct - transformed) <=
          1e-12 * std::max(1.0, std::abs(direct)));
    ++exercised;
  }
  CHECK(exercised >= 80);
}

TEST_CASE("tail_bound is a usable error estimate") {
  SeriesOptions loose;
  loose.tol = 1e-8;
  const HypParams p{0.6, 1.3, 2.7, 0.62};
  const SeriesResult coarse = hyp2f1(p, loose);
  const SeriesResult fine = hyp2f1(p);
  CHECK(coarse.tail_bound > 0.0);
  CHECK(std::abs(coarse.value - fine.value) <= 10.0 * coarse.tail_bound);
  CHECK(fine.tail_bound >=
        std::numeric_limits<double>::epsilon() * std::abs(fine.value));
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(hyp2f1({0.5, 0.5, 1.5, 1.0}), std::domain_error);
  CHECK_THROWS_AS(hyp2f1({0.5, 0.5, 1.5, -0.1}), std::domain_error);
  CHECK_THROWS_AS(hyp2f1({0.5, 0.5, 1.5, std::nan("")}), std::domain_error);
  CHECK_THROWS_AS(hyp2f1({0.5, 0.5, 0.0, 0.5}), std::domain_error);
  CHECK_THROWS_AS(hyp2f1({0.5, 0.5, -2.0, 0.5}), std::domain_error);
}

TEST_CASE("a stalled series reports failure instead of a wrong value") {
  SeriesOptions opt;
  opt.max_terms = 2000;
  // c - a - b < 0 here, so no transform applies and the terms decay too
  // slowly to meet tol within the budget.
  CHECK_THROWS_AS(hyp2f1({0.5, 0.5, 0.3, 0.999999}, opt), std::runtime_error);
}

TEST_CASE("hyp2f1_derivative: exact polynomial and frozen anchor") {
  for (double lam : {0.2, 0.8}) {
    CHECK(hyp2f1_derivative({-1.0, -0.5, 1.5, lam}).value ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  CHECK(hyp2f1_derivative({1.0, 0.5, 1.5, 0.25}).value ==
        doctest::Approx(0.46944208933044728388).epsilon(1e-13));
}

TEST_CASE("hyp2f1_derivative against central differences") {
  const HypParams p{0.3, 0.7, 1.9, 0.4};
  const double h = 1e-6;
  const double fd = (hyp2f1({p.a, p.b, p.c, p.lambda + h}).value -
                     hyp2f1({p.a, p.b, p.c, p.lambda - h}).value) /
                    (2.0 * h);
  CHECK(hyp2f1_derivative(p).value == doctest::Approx(fd).epsilon(1e-8));
}
