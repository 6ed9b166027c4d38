#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "sparsefit/baselines.hpp"
#include "sparsefit/errors.hpp"
#include "sparsefit/rng.hpp"
#include "testutil.hpp"

using namespace sparsefit;

namespace {

// Parameter grid used by the pmf/gradient property checks.
std::vector<BaselineParams> grid() {
  return {
      PoissonParams{0.5},        PoissonParams{3.0},        PoissonParams{20.0},
      NegBinParams{0.5, 0.3},    NegBinParams{2.0, 0.5},    NegBinParams{5.0, 0.9},
      BetaBinParams{5, 2, 3},    BetaBinParams{10, 1, 1},   BetaBinParams{30, 0.8, 4.0},
      BetaNegBinParams{1, 2, 1}, BetaNegBinParams{3, 4, 2}, BetaNegBinParams{0.7, 5, 3},
  };
}

double fd_grad(const BaselineParams& params, std::int64_t y, std::size_t j, double h) {
  auto at = [&](double delta) {
    std::vector<double> theta = params.values();
    theta[j] += delta;
    return log_pmf(make_baseline(params.family(), theta), y);
  };
  return (at(h) - at(-h)) / (2.0 * h);
}

double fd_grad_p0(const BaselineParams& params, std::size_t j, double h) {
  auto at = [&](double delta) {
    std::vector<double> theta = params.values();
    theta[j] += delta;
    return log_p0(make_baseline(params.family(), theta));
  };
  return (at(h) - at(-h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("log_pmf reference values") {
  CHECK(log_pmf(BaselineParams(PoissonParams{1.0}), 0) == doctest::Approx(-1.0).epsilon(1e-13));
  // Uniform beta-binomial: alpha = beta = 1 puts mass 1/(n+1) on each atom.
  CHECK(log_pmf(BaselineParams(BetaBinParams{2, 1, 1}), 0) ==
        doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-13));
  // Direct formula: Gamma(5)/(Gamma(4)Gamma(2)) * 0.5^3 * 0.5^2 = 0.125.
  CHECK(log_pmf(BaselineParams(NegBinParams{2.0, 0.5}), 3) ==
        doctest::Approx(std::log(0.125)).epsilon(1e-13));
}

TEST_CASE("outside support yields log zero, not an error") {
  const BaselineParams bb(BetaBinParams{5, 2, 3});
  CHECK(log_pmf(bb, 6) == -std::numeric_limits<double>::infinity());
  CHECK(log_pmf(bb, -1) == -std::numeric_limits<double>::infinity());
  CHECK(log_pmf(BaselineParams(PoissonParams{2.0}), -3) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("p0 reference values and identity with log_pmf(0)") {
  CHECK(p0(BaselineParams(PoissonParams{std::log(2.0)})) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(p0(BaselineParams(NegBinParams{2.0, 0.5})) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(p0(BaselineParams(BetaBinParams{2, 1, 1})) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  for (const auto& params : grid()) {
    CHECK(std::fabs(p0(params) - std::exp(log_pmf(params, 0))) <= 1e-12);
  }
}

TEST_CASE("pmf sums to one over the support") {
  for (const auto& params : grid()) {
    const std::int64_t top = support_upper_bound(params, 1e-10);
    double sum = 0.0;
    for (std::int64_t y = 0; y <= top; ++y) sum += std::exp(log_pmf(params, y));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("truncated pmf sums to one over y >= 1") {
  for (const auto& params : grid()) {
    const std::int64_t top = support_upper_bound(params, 1e-10);
    double sum = 0.0;
    for (std::int64_t y = 1; y <= top; ++y) sum += std::exp(truncated_log_pmf(params, y));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("truncated log pmf reference values") {
  const double lambda = 1.7;
  CHECK(truncated_log_pmf(BaselineParams(PoissonParams{lambda}), 1) ==
        doctest::Approx(std::log(std::exp(-lambda) * lambda / (1.0 - std::exp(-lambda))))
            .epsilon(1e-12));
  // Uniform BB truncated to {1, 2}.
  CHECK(truncated_log_pmf(BaselineParams(BetaBinParams{2, 1, 1}), 1) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-12));
  // NB(2, 0.5): f(1) = 0.25, 1 - p0 = 0.75.
  CHECK(truncated_log_pmf(BaselineParams(NegBinParams{2.0, 0.5}), 1) ==
        doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(truncated_log_pmf(BaselineParams(PoissonParams{1.0}), 0),
                  std::invalid_argument);
  // Degenerate at zero: p0 = exp(-1e-13) > 1 - 1e-12.
  CHECK_THROWS_AS(truncated_log_pmf(BaselineParams(PoissonParams{1e-13}), 1), numeric_error);
}

TEST_CASE("analytic gradients match finite differences") {
  // Includes the BB partials in n, alpha, beta.
  for (const auto& params : grid()) {
    const std::int64_t probe[] = {1, 2, 4};
    for (std::int64_t y : probe) {
      if (std::exp(log_pmf(params, y)) < 1e-12) continue;
      const auto grad = grad_log_pmf(params, y);
      for (std::size_t j = 0; j < grad.size(); ++j) {
        const double h = 1e-6 * std::max(1.0, std::fabs(params.values()[j]));
        CHECK(testutil::rel_err(grad[j], fd_grad(params, y, j, h), 1e-6) < 1e-5);
      }
    }
  }
}

TEST_CASE("grad_log_p0 matches finite differences and closed forms") {
  CHECK(grad_log_p0(BaselineParams(PoissonParams{4.2}))[0] == doctest::Approx(-1.0));
  const auto nb = grad_log_p0(BaselineParams(NegBinParams{2.0, 0.5}));
  CHECK(nb[0] == doctest::Approx(std::log(0.5)).epsilon(1e-13));
  CHECK(nb[1] == doctest::Approx(-4.0).epsilon(1e-13));
  for (const auto& params : grid()) {
    const auto grad = grad_log_p0(params);
    for (std::size_t j = 0; j < grad.size(); ++j) {
      const double h = 1e-6 * std::max(1.0, std::fabs(params.values()[j]));
      CHECK(testutil::rel_err(grad[j], fd_grad_p0(params, j, h), 1e-6) < 1e-5);
    }
  }
}

TEST_CASE("gradient examples from the closed forms") {
  // NB r=2, p=0.5, y=1: d/dp = 1/0.5 - 2/0.5 = -2.
  CHECK(grad_log_pmf(BaselineParams(NegBinParams{2.0, 0.5}), 1)[1] ==
        doctest::Approx(-2.0).epsilon(1e-12));
  // Poisson: d/dlambda = y/lambda - 1 = 0 at y = lambda = 2.
  CHECK(grad_log_pmf(BaselineParams(PoissonParams{2.0}), 2)[0] ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(grad_log_pmf(BaselineParams(PoissonParams{2.0}), -1),
                  std::invalid_argument);
}

TEST_CASE("cdf by partial summation") {
  CHECK(cdf(BaselineParams(PoissonParams{1.0}), 0.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(cdf(BaselineParams(PoissonParams{1.0}), -0.5) == 0.0);
  CHECK(cdf(BaselineParams(NegBinParams{2.0, 0.5}), 1.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // Monotone and right-continuous on a grid.
  const BaselineParams params(BetaNegBinParams{2, 3, 2});
  double prev = 0.0;
  for (double y = 0.0; y < 60.0; y += 1.0) {
    const double cur = cdf(params, y);
    CHECK(cur >= prev);
    CHECK(cdf(params, y + 0.5) == doctest::Approx(cur));
    prev = cur;
  }
}

TEST_CASE("sampling is deterministic per seed") {
  const BaselineParams params(NegBinParams{2.0, 0.5});
  const auto a = sample(params, 100, 42u);
  const auto b = sample(params, 100, 42u);
  const auto c = sample(params, 100, 43u);
  CHECK(a.values() == b.values());
  CHECK(a.values() != c.values());
}

TEST_CASE("Poisson sample mean within CLT bounds") {
  const auto draws = sample(BaselineParams(PoissonParams{3.0}), 100000, 7u);
  CHECK(draws.mean() == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("uniform beta-binomial empirical frequencies") {
  const auto draws = sample(BaselineParams(BetaBinParams{10, 1, 1}), 100000, 11u);
  std::map<std::int64_t, int> freq;
  for (auto v : draws.values()) ++freq[v];
  for (std::int64_t k = 0; k <= 10; ++k) {
    CHECK(std::fabs(freq[k] / 1e5 - 1.0 / 11.0) < 0.01);
  }
}

TEST_CASE("sampler distributions pass a chi-square check at 1e5 draws") {
  for (const auto& params :
       {BaselineParams(PoissonParams{40.0}), BaselineParams(NegBinParams{2.0, 0.5}),
        BaselineParams(BetaBinParams{12, 2, 3}), BaselineParams(BetaNegBinParams{3, 4, 2})}) {
    const std::size_t n = 100000;
    const auto draws = sample(params, n, 1234u);
    std::map<std::int64_t, int> freq;
    for (auto v : draws.values()) ++freq[v];

    // Group the tail so every expected bin count is at least 5.
    const std::int64_t top = support_upper_bound(params, 1e-10);
    double chi2 = 0.0;
    int bins = 0;
    double acc_expected = 0.0;
    int acc_observed = 0;
    for (std::int64_t k = 0; k <= top; ++k) {
      acc_expected += static_cast<double>(n) * std::exp(log_pmf(params, k));
      acc_observed += freq.count(k) ? freq[k] : 0;
      if (acc_expected >= 5.0) {
        chi2 += (acc_observed - acc_expected) * (acc_observed - acc_expected) / acc_expected;
        ++bins;
        acc_expected = 0.0;
        acc_observed = 0;
      }
    }
    if (acc_expected > 0.0) {
      chi2 += (acc_observed - acc_expected) * (acc_observed - acc_expected) /
              std::max(acc_expected, 1e-9);
      ++bins;
    }
    REQUIRE(bins > 2);
    CHECK(testutil::chi_square_pvalue(chi2, bins - 1) > 0.001);
  }
}

TEST_CASE("NB digamma identity: E Psi(Y+r) = Psi(r) - log(1-p)") {
  using sparsefit::digamma;
  for (const auto& [r, p] : std::vector<std::pair<double, double>>{{2.0, 0.5}, {5.0, 0.9}}) {
    const BaselineParams params(NegBinParams{r, p});
    Rng rng(99u);
    const std::size_t n = 1000000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = digamma(static_cast<double>(sample_one(params, rng)) + r);
      sum += v;
      sum2 += v * v;
    }
    const double mc_mean = sum / n;
    const double mc_se = std::sqrt((sum2 / n - mc_mean * mc_mean) / n);
    const double expected = digamma(r) - std::log1p(-p);
    CHECK(std::fabs(mc_mean - expected) <= 3.0 * mc_se);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(BaselineParams(PoissonParams{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(BaselineParams(NegBinParams{1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(BaselineParams(NegBinParams{-1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(BaselineParams(BetaBinParams{0.5, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(BaselineParams(BetaNegBinParams{1, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(make_baseline(Family::poisson, std::vector<double>{1.0, 2.0}),
                  std::invalid_argument);
}
