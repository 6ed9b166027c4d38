#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sparsefit/specfun.hpp"
#include "testutil.hpp"

using namespace sparsefit;

namespace {
constexpr double kEulerMascheroni = 0.57721566490153286061;
}

TEST_CASE("log_gamma matches known values") {
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(log_gamma(2.0) == doctest::Approx(0.0).epsilon(1e-14));
  // Gamma(1/2) = sqrt(pi)
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-13));
}

TEST_CASE("log_gamma agrees with the independent libm implementation") {
  for (double x = 1e-6; x < 1e8; x *= 3.7) {
    CHECK(testutil::rel_err(log_gamma(x), std::lgamma(x)) < 1e-12);
  }
  // Integers: Gamma(k+1) = k!
  double factorial = 1.0;
  for (int k = 1; k <= 20; ++k) {
    factorial *= k;
    CHECK(log_gamma(k + 1.0) == doctest::Approx(std::log(factorial)).epsilon(1e-13));
  }
}

TEST_CASE("digamma special values") {
  CHECK(digamma(1.0) == doctest::Approx(-kEulerMascheroni).epsilon(1e-13));
  CHECK(digamma(2.0) == doctest::Approx(1.0 - kEulerMascheroni).epsilon(1e-13));
  // Psi(1/2) = -gamma - 2 ln 2
  CHECK(digamma(0.5) ==
        doctest::Approx(-kEulerMascheroni - 2.0 * std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("trigamma special values") {
  // Sum 1/k^2 partial sum plus midpoint tail correction.
  double series = 0.0;
  const int terms = 1000000;
  for (int k = terms; k >= 1; --k) series += 1.0 / (static_cast<double>(k) * k);
  series += 1.0 / (terms + 0.5);
  CHECK(trigamma(1.0) == doctest::Approx(series).epsilon(1e-12));
  CHECK(trigamma(2.0) == doctest::Approx(series - 1.0).epsilon(1e-12));
}

TEST_CASE("digamma and trigamma recurrences hold on a wide grid") {
  for (double x = 1e-3; x < 1e6; x *= 2.3) {
    CHECK(std::fabs(digamma(x + 1.0) - digamma(x) - 1.0 / x) <= 1e-10);
    CHECK(std::fabs(trigamma(x + 1.0) - trigamma(x) + 1.0 / (x * x)) <= 1e-10);
  }
}

TEST_CASE("digamma differentiates log_gamma, trigamma differentiates digamma") {
  for (double x : {0.3, 1.0, 2.5, 10.0, 123.0, 4096.0}) {
    const double h = 1e-5 * std::max(1.0, x);
    const double dg = testutil::central_diff([](double t) { return log_gamma(t); }, x, h);
    CHECK(testutil::rel_err(digamma(x), dg, 1e-8) < 1e-6);
    const double tg = testutil::central_diff([](double t) { return digamma(t); }, x, h);
    CHECK(testutil::rel_err(trigamma(x), tg, 1e-8) < 1e-6);
  }
  // Spec'd point check at x = 10 with h = 1e-5.
  const double fd = (digamma(10.0 + 1e-5) - digamma(10.0 - 1e-5)) / 2e-5;
  CHECK(std::fabs(trigamma(10.0) - fd) < 1e-6);
}

TEST_CASE("trigamma positive, digamma increasing") {
  double prev = digamma(1e-3);
  for (double x = 2e-3; x < 1e6; x *= 1.9) {
    CHECK(trigamma(x) > 0.0);
    const double cur = digamma(x);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("log_beta identities") {
  CHECK(log_beta(1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(log_beta(2.0, 1.0) == doctest::Approx(std::log(0.5)).epsilon(1e-13));
  // Cross-check against an independent high-precision composition.
  CHECK(log_beta(3.5, 2.25) ==
        doctest::Approx(std::lgamma(3.5) + std::lgamma(2.25) - std::lgamma(5.75))
            .epsilon(1e-13));
  CHECK(log_beta(3.5, 2.25) ==
        doctest::Approx(log_gamma(3.5) + log_gamma(2.25) - log_gamma(5.75)).epsilon(1e-14));
}

TEST_CASE("domain errors on invalid input") {
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
  CHECK_THROWS_AS(digamma(0.0), std::domain_error);
  CHECK_THROWS_AS(trigamma(-2.0), std::domain_error);
  CHECK_THROWS_AS(log_beta(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  CHECK_THROWS_AS(log_gamma(std::numeric_limits<double>::infinity()), std::domain_error);
}
