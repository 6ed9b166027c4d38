#include "sparsefit/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "sparsefit/specfun.hpp"

namespace sparsefit {

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x > limit);
  return x % bound;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_normal_;
  }
  const double u1 = uniform_pos();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 6.28318530717958647692 * u2;
  spare_normal_ = radius * std::sin(angle);
  have_spare_ = true;
  return radius * std::cos(angle);
}

double Rng::gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw std::invalid_argument("gamma: shape and scale must be positive");
  }
  // Marsaglia-Tsang squeeze; shapes below 1 are boosted by one and corrected
  // with a power of a uniform draw.
  double boost = 1.0;
  double a = shape;
  if (a < 1.0) {
    boost = std::pow(uniform_pos(), 1.0 / a);
    a += 1.0;
  }
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return boost * d * v * scale;
  }
}

double Rng::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

namespace {

// Transformed-rejection Poisson sampler for large means (Hormann's PTRS).
template <typename Uniform>
std::int64_t poisson_ptrs(double lambda, Uniform&& u01) {
  const double log_lambda = std::log(lambda);
  const double b = 0.931 + 2.53 * std::sqrt(lambda);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = u01() - 0.5;
    const double v = u01();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * log_lambda - lambda - log_gamma(kf + 1.0)) {
      return static_cast<std::int64_t>(kf);
    }
  }
}

}  // namespace

std::int64_t Rng::poisson(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("poisson: mean must be finite and nonnegative");
  }
  if (lambda == 0.0) return 0;
  if (lambda <= 30.0) {
    // Inversion by cdf recurrence.
    const double u = uniform();
    double pmf = std::exp(-lambda);
    double cdf = pmf;
    std::int64_t k = 0;
    while (u > cdf) {
      ++k;
      pmf *= lambda / static_cast<double>(k);
      cdf += pmf;
      if (pmf < 1e-320) break;  // u in the far tail that rounding cannot reach
    }
    return k;
  }
  return poisson_ptrs(lambda, [this] { return uniform_pos(); });
}

std::int64_t Rng::binomial(std::int64_t n, double p) {
  if (n < 0 || !(p >= 0.0) || !(p <= 1.0)) {
    throw std::invalid_argument("binomial: need n >= 0 and p in [0,1]");
  }
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (p > 0.5) return n - binomial(n, 1.0 - p);

  // Inversion enumerated from the mode outward, so the expected number of
  // steps is O(standard deviation) for any n.
  const double nd = static_cast<double>(n);
  const std::int64_t mode = static_cast<std::int64_t>(std::floor((nd + 1.0) * p));
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double md = static_cast<double>(mode);
  const double log_pmf_mode = log_gamma(nd + 1.0) - log_gamma(md + 1.0) -
                              log_gamma(nd - md + 1.0) + md * log_p + (nd - md) * log_q;
  const double pmf_mode = std::exp(log_pmf_mode);
  const double ratio = p / (1.0 - p);

  const double u = uniform();
  double acc = pmf_mode;
  if (u <= acc) return mode;
  double pmf_up = pmf_mode;
  double pmf_down = pmf_mode;
  std::int64_t up = mode;
  std::int64_t down = mode;
  for (;;) {
    bool moved = false;
    if (up < n) {
      pmf_up *= ratio * static_cast<double>(n - up) / static_cast<double>(up + 1);
      ++up;
      acc += pmf_up;
      if (u <= acc) return up;
      moved = true;
    }
    if (down > 0) {
      pmf_down *= static_cast<double>(down) / (ratio * static_cast<double>(n - down + 1));
      --down;
      acc += pmf_down;
      if (u <= acc) return down;
      moved = true;
    }
    if (!moved) return mode;  // u landed in accumulated rounding slack
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over a Weyl-offset index.
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace sparsefit
