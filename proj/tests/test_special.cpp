#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <doctest.h>

#include "fracmax/errors.hpp"
#include "fracmax/special.hpp"
#include "oracles.hpp"

using namespace fracmax;

namespace {

// E_{1/2}(-x) = exp(x²) erfc(x), in 50 digits so large x neither overflows nor underflows.
double ml_half_oracle(double x) {
  using big = boost::multiprecision::cpp_bin_float_50;
  const big bx = x;
  return static_cast<double>(exp(bx * bx) * boost::math::erfc(bx));
}

}  // namespace

TEST_CASE("reciprocal gamma matches the library gamma and vanishes at poles") {
  for (double x : {-3.7, -0.5, 0.1, 0.3, 0.5, 0.7, 1.0, 2.5, 7.25}) {
    CHECK(reciprocal_gamma(x) == doctest::Approx(1.0 / boost::math::tgamma(x)).epsilon(1e-13));
  }
  for (double x : {0.0, -1.0, -2.0, -7.0}) CHECK(reciprocal_gamma(x) == 0.0);
}

TEST_CASE("mittag-leffler reference values") {
  CHECK(mittag_leffler(1.0, 1.0) == doctest::Approx(std::numbers::e).epsilon(1e-15));
  for (double a : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) CHECK(mittag_leffler(a, 0.0) == 1.0);
  CHECK(mittag_leffler(0.5, -1.0) == doctest::Approx(std::exp(1.0) * std::erfc(1.0)).epsilon(1e-13));
  CHECK(mittag_leffler(0.5, -1.0) == doctest::Approx(0.4275836).epsilon(1e-7));
  // E_{1/2}(x) = e^{x²} erfc(-x) for positive arguments too.
  CHECK(mittag_leffler(0.5, 1.0) == doctest::Approx(std::exp(1.0) * std::erfc(-1.0)).epsilon(1e-13));
}

TEST_CASE("mittag-leffler tracks the erfc identity across every regime") {
  for (double x : {0.01, 0.3, 1.0, 2.0, 3.0, 5.0, 9.0, 9.99, 10.01, 15.0, 30.0, 50.0}) {
    CAPTURE(x);
    const double oracle = ml_half_oracle(x);
    CHECK(mittag_leffler(0.5, -x) == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(mittag_leffler_neg(0.5, x) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("mittag-leffler agrees with an independent series for small arguments") {
  // |z| kept small enough that the long-double sums themselves do not cancel.
  for (double a : {0.2, 0.3, 0.7, 0.9}) {
    for (double z : {-1.0, -0.25, 0.5, 1.5}) {
      CAPTURE(a);
      CAPTURE(z);
      CHECK(mittag_leffler(a, z) == doctest::Approx(oracle::mittag_leffler_series(a, z)).epsilon(1e-10));
      if (z < 0) CHECK(mittag_leffler_neg(a, -z) == doctest::Approx(oracle::mittag_leffler_series(a, z)).epsilon(1e-10));
    }
  }
}

TEST_CASE("mittag-leffler is completely monotone in -x") {
  for (double a : {0.3, 0.6, 0.9}) {
    double prev = 1.0;
    for (double x = 0.5; x <= 50.0; x *= 1.5) {
      const double v = mittag_leffler(a, -x);
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("mittag-leffler rejects bad input") {
  CHECK_THROWS_AS(mittag_leffler(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler(1.5, 1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler(0.5, NAN), DomainError);
  CHECK_THROWS_AS(mittag_leffler(0.1, 60.0), NumericError);
  CHECK_THROWS_AS(mittag_leffler_neg(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler_neg(0.5, -1.0), DomainError);
}
