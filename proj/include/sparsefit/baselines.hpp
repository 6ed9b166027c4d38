#ifndef SPARSEFIT_BASELINES_HPP
#define SPARSEFIT_BASELINES_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sparsefit/count_data.hpp"
#include "sparsefit/rng.hpp"

namespace sparsefit {

enum class Family { poisson, neg_bin, beta_bin, beta_neg_bin };

constexpr std::array<Family, 4> kAllFamilies = {Family::poisson, Family::neg_bin,
                                                Family::beta_bin, Family::beta_neg_bin};

struct PoissonParams {
  double lambda;  // mean, > 0
};

// pmf Gamma(y+r)/(Gamma(y+1) Gamma(r)) p^y (1-p)^r; mean p r / (1-p).
struct NegBinParams {
  double r;  // size, > 0
  double p;  // in (0, 1)
};

// Trial count n is kept continuous so likelihoods stay differentiable in it;
// sampling and the support check round it to the nearest integer.
struct BetaBinParams {
  double n;      // >= 1
  double alpha;  // > 0
  double beta;   // > 0
};

struct BetaNegBinParams {
  double r;      // > 0
  double alpha;  // > 0
  double beta;   // > 0
};

class BaselineParams {
public:
  BaselineParams(PoissonParams p);
  BaselineParams(NegBinParams p);
  BaselineParams(BetaBinParams p);
  BaselineParams(BetaNegBinParams p);

  Family family() const noexcept;
  std::size_t dim() const noexcept;

  const PoissonParams& poisson() const { return std::get<PoissonParams>(value_); }
  const NegBinParams& neg_bin() const { return std::get<NegBinParams>(value_); }
  const BetaBinParams& beta_bin() const { return std::get<BetaBinParams>(value_); }
  const BetaNegBinParams& beta_neg_bin() const { return std::get<BetaNegBinParams>(value_); }

  template <typename Visitor>
  decltype(auto) visit(Visitor&& v) const {
    return std::visit(std::forward<Visitor>(v), value_);
  }

  // Flat parameter vector in the family's canonical order.
  std::vector<double> values() const;

private:
  std::variant<PoissonParams, NegBinParams, BetaBinParams, BetaNegBinParams> value_;
};

std::size_t param_count(Family family);
const char* family_name(Family family);
std::vector<std::string> param_names(Family family);
BaselineParams make_baseline(Family family, std::span<const double> values);

// ln f_theta(y). Outside the support this is -inf, not an error.
double log_pmf(const BaselineParams& params, std::int64_t y);

// ln p0 and p0 = f_theta(0).
double log_p0(const BaselineParams& params);
double p0(const BaselineParams& params);

// ln(1 - p0), evaluated without cancellation.
double log1m_p0(const BaselineParams& params);

// d log f_theta(y) / d theta. y must lie in the support.
std::vector<double> grad_log_pmf(const BaselineParams& params, std::int64_t y);

// Weighted in-place accumulation used by likelihood loops.
void accumulate_grad_log_pmf(const BaselineParams& params, std::int64_t y, double weight,
                             std::span<double> acc);

std::vector<double> grad_log_p0(const BaselineParams& params);

// ln f_tr(y) = ln f(y) - ln(1 - p0), y >= 1. Throws numeric_error when the
// distribution is degenerate at zero (p0 >= 1 - 1e-12).
double truncated_log_pmf(const BaselineParams& params, std::int64_t y);

// P(Y <= y) by partial summation of the pmf.
double cdf(const BaselineParams& params, double y);

// Smallest integer y* with cdf(y*) >= 1 - tail; capped at 1e7.
std::int64_t support_upper_bound(const BaselineParams& params, double tail = 1e-10);

CountVector sample(const BaselineParams& params, std::size_t count, Rng& rng);
CountVector sample(const BaselineParams& params, std::size_t count, std::uint64_t seed);
std::int64_t sample_one(const BaselineParams& params, Rng& rng);

}  // namespace sparsefit

#endif
