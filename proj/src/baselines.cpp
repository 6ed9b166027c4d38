#include "sparsefit/baselines.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sparsefit/errors.hpp"
#include "sparsefit/specfun.hpp"

namespace sparsefit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::int64_t kSummationCap = 10'000'000;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

std::int64_t bb_trials(const BetaBinParams& p) { return std::llround(p.n); }

}  // namespace

BaselineParams::BaselineParams(PoissonParams p) : value_(p) {
  require(positive_finite(p.lambda), "Poisson: lambda must be positive and finite");
}

BaselineParams::BaselineParams(NegBinParams p) : value_(p) {
  require(positive_finite(p.r), "NB: r must be positive and finite");
  require(p.p > 0.0 && p.p < 1.0, "NB: p must lie in (0,1)");
}

BaselineParams::BaselineParams(BetaBinParams p) : value_(p) {
  require(std::isfinite(p.n) && p.n >= 1.0, "BB: n must be >= 1");
  require(positive_finite(p.alpha) && positive_finite(p.beta),
          "BB: alpha and beta must be positive and finite");
}

BaselineParams::BaselineParams(BetaNegBinParams p) : value_(p) {
  require(positive_finite(p.r) && positive_finite(p.alpha) && positive_finite(p.beta),
          "BNB: r, alpha, beta must be positive and finite");
}

Family BaselineParams::family() const noexcept {
  return static_cast<Family>(value_.index());
}

std::size_t BaselineParams::dim() const noexcept { return param_count(family()); }

std::vector<double> BaselineParams::values() const {
  return visit([](const auto& p) -> std::vector<double> {
    using T = std::decay_t<decltype(p)>;
    if constexpr (std::is_same_v<T, PoissonParams>) return {p.lambda};
    if constexpr (std::is_same_v<T, NegBinParams>) return {p.r, p.p};
    if constexpr (std::is_same_v<T, BetaBinParams>) return {p.n, p.alpha, p.beta};
    if constexpr (std::is_same_v<T, BetaNegBinParams>) return {p.r, p.alpha, p.beta};
  });
}

std::size_t param_count(Family family) {
  switch (family) {
    case Family::poisson:
      return 1;
    case Family::neg_bin:
      return 2;
    case Family::beta_bin:
    case Family::beta_neg_bin:
      return 3;
  }
  throw std::invalid_argument("param_count: unknown family");
}

const char* family_name(Family family) {
  switch (family) {
    case Family::poisson:
      return "poisson";
    case Family::neg_bin:
      return "nb";
    case Family::beta_bin:
      return "bb";
    case Family::beta_neg_bin:
      return "bnb";
  }
  throw std::invalid_argument("family_name: unknown family");
}

std::vector<std::string> param_names(Family family) {
  switch (family) {
    case Family::poisson:
      return {"lambda"};
    case Family::neg_bin:
      return {"r", "p"};
    case Family::beta_bin:
      return {"n", "alpha", "beta"};
    case Family::beta_neg_bin:
      return {"r", "alpha", "beta"};
  }
  throw std::invalid_argument("param_names: unknown family");
}

BaselineParams make_baseline(Family family, std::span<const double> values) {
  if (values.size() != param_count(family)) {
    throw std::invalid_argument("make_baseline: wrong number of parameters");
  }
  switch (family) {
    case Family::poisson:
      return PoissonParams{values[0]};
    case Family::neg_bin:
      return NegBinParams{values[0], values[1]};
    case Family::beta_bin:
      return BetaBinParams{values[0], values[1], values[2]};
    case Family::beta_neg_bin:
      return BetaNegBinParams{values[0], values[1], values[2]};
  }
  throw std::invalid_argument("make_baseline: unknown family");
}

double log_pmf(const BaselineParams& params, std::int64_t y) {
  if (y < 0) return kNegInf;
  const double yd = static_cast<double>(y);
  return params.visit([&](const auto& p) -> double {
    using T = std::decay_t<decltype(p)>;
    if constexpr (std::is_same_v<T, PoissonParams>) {
      return -p.lambda + yd * std::log(p.lambda) - log_gamma(yd + 1.0);
    } else if constexpr (std::is_same_v<T, NegBinParams>) {
      return log_gamma(yd + p.r) - log_gamma(yd + 1.0) - log_gamma(p.r) +
             yd * std::log(p.p) + p.r * std::log1p(-p.p);
    } else if constexpr (std::is_same_v<T, BetaBinParams>) {
      if (y > bb_trials(p)) return kNegInf;
      return log_gamma(p.n + 1.0) - log_gamma(yd + 1.0) - log_gamma(p.n - yd + 1.0) +
             log_beta(yd + p.alpha, p.n - yd + p.beta) - log_beta(p.alpha, p.beta);
    } else {
      return log_gamma(p.r + yd) - log_gamma(p.r) - log_gamma(yd + 1.0) +
             log_beta(p.alpha + p.r, p.beta + yd) - log_beta(p.alpha, p.beta);
    }
  });
}

double log_p0(const BaselineParams& params) {
  return params.visit([](const auto& p) -> double {
    using T = std::decay_t<decltype(p)>;
    if constexpr (std::is_same_v<T, PoissonParams>) {
      return -p.lambda;
    } else if constexpr (std::is_same_v<T, NegBinParams>) {
      return p.r * std::log1p(-p.p);
    } else if constexpr (std::is_same_v<T, BetaBinParams>) {
      return log_gamma(p.n + p.beta) + log_gamma(p.alpha + p.beta) -
             log_gamma(p.n + p.alpha + p.beta) - log_gamma(p.beta);
    } else {
      return log_gamma(p.alpha + p.r) - log_gamma(p.alpha + p.r + p.beta) -
             log_gamma(p.alpha) + log_gamma(p.alpha + p.beta);
    }
  });
}

double p0(const BaselineParams& params) { return std::exp(log_p0(params)); }

double log1m_p0(const BaselineParams& params) {
  const double lp0 = log_p0(params);
  if (lp0 > -1e-12) {
    throw numeric_error("baseline distribution is degenerate at zero (p0 ~ 1)");
  }
  // 1 - p0 = -expm1(log p0)
  return std::log(-std::expm1(lp0));
}

std::vector<double> grad_log_pmf(const BaselineParams& params, std::int64_t y) {
  std::vector<double> g(params.dim(), 0.0);
  accumulate_grad_log_pmf(params, y, 1.0, g);
  return g;
}

void accumulate_grad_log_pmf(const BaselineParams& params, std::int64_t y, double weight,
                             std::span<double> acc) {
  if (y < 0) throw std::invalid_argument("grad_log_pmf: y outside support");
  const double yd = static_cast<double>(y);
  params.visit([&](const auto& p) {
    using T = std::decay_t<decltype(p)>;
    if constexpr (std::is_same_v<T, PoissonParams>) {
      acc[0] += weight * (yd / p.lambda - 1.0);
    } else if constexpr (std::is_same_v<T, NegBinParams>) {
      acc[0] += weight * (digamma(yd + p.r) - digamma(p.r) + std::log1p(-p.p));
      acc[1] += weight * (yd / p.p - p.r / (1.0 - p.p));
    } else if constexpr (std::is_same_v<T, BetaBinParams>) {
      if (y > bb_trials(p)) throw std::invalid_argument("grad_log_pmf: y outside BB support");
      const double psi_nab = digamma(p.n + p.alpha + p.beta);
      const double psi_ab = digamma(p.alpha + p.beta);
      acc[0] += weight * (digamma(p.n + 1.0) - digamma(p.n - yd + 1.0) +
                          digamma(p.n - yd + p.beta) - psi_nab);
      acc[1] += weight * (digamma(yd + p.alpha) - psi_nab + psi_ab - digamma(p.alpha));
      acc[2] += weight * (digamma(p.n - yd + p.beta) - psi_nab + psi_ab - digamma(p.beta));
    } else {
      const double psi_arby = digamma(p.alpha + p.r + p.beta + yd);
      const double psi_ab = digamma(p.alpha + p.beta);
      const double psi_ar = digamma(p.alpha + p.r);
      acc[0] += weight * (digamma(p.r + yd) - digamma(p.r) + psi_ar - psi_arby);
      acc[1] += weight * (psi_ar - psi_arby - digamma(p.alpha) + psi_ab);
      acc[2] += weight * (digamma(p.beta + yd) - psi_arby - digamma(p.beta) + psi_ab);
    }
  });
}

std::vector<double> grad_log_p0(const BaselineParams& params) {
  return params.visit([](const auto& p) -> std::vector<double> {
    using T = std::decay_t<decltype(p)>;
    if constexpr (std::is_same_v<T, PoissonParams>) {
      return {-1.0};
    } else if constexpr (std::is_same_v<T, NegBinParams>) {
      return {std::log1p(-p.p), -p.r / (1.0 - p.p)};
    } else if constexpr (std::is_same_v<T, BetaBinParams>) {
      const double psi_nab = digamma(p.n + p.alpha + p.beta);
      const double psi_ab = digamma(p.alpha + p.beta);
      const double psi_nb = digamma(p.n + p.beta);
      return {psi_nb - psi_nab, psi_ab - psi_nab, psi_nb + psi_ab - psi_nab - digamma(p.beta)};
    } else {
      const double psi_arb = digamma(p.alpha + p.r + p.beta);
      const double psi_ar = digamma(p.alpha + p.r);
      const double psi_ab = digamma(p.alpha + p.beta);
      return {psi_ar - psi_arb, psi_ar - psi_arb - digamma(p.alpha) + psi_ab, psi_ab - psi_arb};
    }
  });
}

double truncated_log_pmf(const BaselineParams& params, std::int64_t y) {
  if (y < 1) throw std::invalid_argument("truncated_log_pmf: y must be >= 1");
  return log_pmf(params, y) - log1m_p0(params);
}

double cdf(const BaselineParams& params, double y) {
  if (y < 0.0) return 0.0;
  std::int64_t top = kSummationCap;
  if (y < static_cast<double>(kSummationCap)) top = static_cast<std::int64_t>(std::floor(y));
  if (params.family() == Family::beta_bin) {
    top = std::min(top, bb_trials(params.beta_bin()));
  }
  double acc = 0.0;
  for (std::int64_t k = 0; k <= top; ++k) {
    acc += std::exp(log_pmf(params, k));
    if (acc >= 1.0) return 1.0;
    if (1.0 - acc < 1e-15 && k > 0) break;
  }
  return acc;
}

std::int64_t support_upper_bound(const BaselineParams& params, double tail) {
  std::int64_t top = kSummationCap;
  if (params.family() == Family::beta_bin) {
    top = std::min(top, bb_trials(params.beta_bin()));
  }
  double acc = 0.0;
  for (std::int64_t k = 0; k <= top; ++k) {
    acc += std::exp(log_pmf(params, k));
    if (acc >= 1.0 - tail) return k;
  }
  return top;
}

std::int64_t sample_one(const BaselineParams& params, Rng& rng) {
  return params.visit([&](const auto& p) -> std::int64_t {
    using T = std::decay_t<decltype(p)>;
    if constexpr (std::is_same_v<T, PoissonParams>) {
      return rng.poisson(p.lambda);
    } else if constexpr (std::is_same_v<T, NegBinParams>) {
      return rng.poisson(rng.gamma(p.r, p.p / (1.0 - p.p)));
    } else if constexpr (std::is_same_v<T, BetaBinParams>) {
      return rng.binomial(bb_trials(p), rng.beta(p.alpha, p.beta));
    } else {
      // Beta-NB compound: success probability of the conditional NB is the
      // beta draw, so the count-side parameter is its complement.
      const double s = rng.beta(p.alpha, p.beta);
      return rng.poisson(rng.gamma(p.r, (1.0 - s) / s));
    }
  });
}

CountVector sample(const BaselineParams& params, std::size_t count, Rng& rng) {
  if (count == 0) throw std::invalid_argument("sample: count must be >= 1");
  std::vector<std::int64_t> out(count);
  for (auto& v : out) v = sample_one(params, rng);
  return CountVector(std::move(out));
}

CountVector sample(const BaselineParams& params, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  return sample(params, count, rng);
}

}  // namespace sparsefit
