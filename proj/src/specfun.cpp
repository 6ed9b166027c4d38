#include "sparsefit/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sparsefit {

namespace {

void check_positive(double x, const char* fn) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error(std::string(fn) + ": argument must be positive and finite, got " +
                            std::to_string(x));
  }
}

constexpr double kHalfLogTwoPi = 0.91893853320467274178;  // ln(2*pi)/2

// Bernoulli-number coefficients B_{2k} / (2k (2k-1)) for the Stirling series.
constexpr double kStirling[] = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
};

}  // namespace

double log_gamma(double x) {
  check_positive(x, "log_gamma");
  // Shift the argument above 10, where the asymptotic series converges fast,
  // collecting the product of the skipped factors.
  double shift = 0.0;
  double z = x;
  while (z < 10.0) {
    shift -= std::log(z);
    z += 1.0;
  }
  const double inv = 1.0 / z;
  const double inv2 = inv * inv;
  double series = 0.0;
  double power = inv;
  for (double coeff : kStirling) {
    series += coeff * power;
    power *= inv2;
  }
  return shift + (z - 0.5) * std::log(z) - z + kHalfLogTwoPi + series;
}

double digamma(double x) {
  check_positive(x, "digamma");
  // Psi(x) = Psi(x+1) - 1/x; shift to >= 8, then the asymptotic expansion
  // Psi(z) ~ ln z - 1/(2z) - sum B_{2k} / (2k z^{2k}).
  double acc = 0.0;
  double z = x;
  while (z < 8.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  const double inv = 1.0 / z;
  const double inv2 = inv * inv;
  // Coefficients B_{2k} / (2k).
  const double series =
      inv2 * (1.0 / 12.0 +
              inv2 * (-1.0 / 120.0 +
                      inv2 * (1.0 / 252.0 +
                              inv2 * (-1.0 / 240.0 +
                                      inv2 * (1.0 / 132.0 +
                                              inv2 * (-691.0 / 32760.0 + inv2 * (1.0 / 12.0)))))));
  return acc + std::log(z) - 0.5 * inv - series;
}

double trigamma(double x) {
  check_positive(x, "trigamma");
  // Psi_1(x) = Psi_1(x+1) + 1/x^2; shift to >= 8, then
  // Psi_1(z) ~ 1/z + 1/(2z^2) + sum B_{2k} / z^{2k+1}.
  double acc = 0.0;
  double z = x;
  while (z < 8.0) {
    acc += 1.0 / (z * z);
    z += 1.0;
  }
  const double inv = 1.0 / z;
  const double inv2 = inv * inv;
  const double series =
      1.0 +
      inv2 * (1.0 / 6.0 +
              inv2 * (-1.0 / 30.0 +
                      inv2 * (1.0 / 42.0 +
                              inv2 * (-1.0 / 30.0 +
                                      inv2 * (5.0 / 66.0 +
                                              inv2 * (-691.0 / 2730.0 + inv2 * (7.0 / 6.0)))))));
  return acc + 0.5 * inv2 + inv * series;
}

double log_beta(double a, double b) {
  check_positive(a, "log_beta");
  check_positive(b, "log_beta");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

}  // namespace sparsefit
