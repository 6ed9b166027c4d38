#include "sparsefit/zero_models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sparsefit/errors.hpp"

namespace sparsefit {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

const char* kind_name(ZeroKind kind) {
  switch (kind) {
    case ZeroKind::none:
      return "none";
    case ZeroKind::zero_inflated:
      return "zi";
    case ZeroKind::hurdle:
      return "hurdle";
  }
  throw std::invalid_argument("kind_name: unknown kind");
}

ZeroModifiedModel::ZeroModifiedModel(BaselineParams base, ZeroKind k, double weight)
    : baseline(std::move(base)), kind(k), phi(weight) {
  if (kind == ZeroKind::none) {
    phi = 0.0;
  } else if (!(phi >= 0.0 && phi <= 1.0)) {
    throw std::invalid_argument("ZeroModifiedModel: phi must lie in [0,1]");
  }
}

double ZeroModifiedModel::zero_probability() const {
  switch (kind) {
    case ZeroKind::none:
      return p0(baseline);
    case ZeroKind::hurdle:
      return phi;
    case ZeroKind::zero_inflated:
      return phi + (1.0 - phi) * p0(baseline);
  }
  throw std::invalid_argument("zero_probability: unknown kind");
}

double log_pmf(const ZeroModifiedModel& model, std::int64_t y) {
  switch (model.kind) {
    case ZeroKind::none:
      return log_pmf(model.baseline, y);
    case ZeroKind::hurdle:
      if (y == 0) return std::log(model.phi);
      if (model.phi >= 1.0) return kNegInf;
      return std::log1p(-model.phi) + truncated_log_pmf(model.baseline, y);
    case ZeroKind::zero_inflated:
      if (y == 0) return std::log(model.phi + (1.0 - model.phi) * p0(model.baseline));
      if (model.phi >= 1.0) return kNegInf;
      return std::log1p(-model.phi) + log_pmf(model.baseline, y);
  }
  throw std::invalid_argument("log_pmf: unknown kind");
}

double cdf(const ZeroModifiedModel& model, double y) {
  if (y < 0.0) return 0.0;
  switch (model.kind) {
    case ZeroKind::none:
      return cdf(model.baseline, y);
    case ZeroKind::hurdle: {
      if (model.phi >= 1.0) return 1.0;
      // F_tr(y) = (F(y) - p0) / (1 - p0) for y >= 0
      const double base = cdf(model.baseline, y);
      const double zero_mass = p0(model.baseline);
      const double trunc = (base - zero_mass) / -std::expm1(log_p0(model.baseline));
      const double v = model.phi + (1.0 - model.phi) * std::max(0.0, trunc);
      return std::min(v, 1.0);
    }
    case ZeroKind::zero_inflated: {
      const double v = model.phi + (1.0 - model.phi) * cdf(model.baseline, y);
      return std::min(v, 1.0);
    }
  }
  throw std::invalid_argument("cdf: unknown kind");
}

std::int64_t support_upper_bound(const ZeroModifiedModel& model, double tail) {
  if (model.kind == ZeroKind::none) return support_upper_bound(model.baseline, tail);
  if (model.phi >= 1.0) return 0;
  // All the missing tail mass lives in the baseline part.
  return support_upper_bound(model.baseline, tail / std::max(1.0 - model.phi, 1e-300));
}

std::int64_t sample_truncated(const BaselineParams& params, Rng& rng) {
  const double zero_mass = p0(params);
  if (zero_mass <= 0.9) {
    for (;;) {
      const std::int64_t draw = sample_one(params, rng);
      if (draw != 0) return draw;
    }
  }
  // Zero dominates; invert the truncated cdf directly.
  const double log_norm = log1m_p0(params);
  const double u = rng.uniform_pos();
  double acc = 0.0;
  std::int64_t k = 0;
  for (;;) {
    ++k;
    acc += std::exp(log_pmf(params, k) - log_norm);
    if (u <= acc) return k;
    if (k >= 10'000'000) return k;  // tail mass below representable resolution
  }
}

std::int64_t sample_one(const ZeroModifiedModel& model, Rng& rng) {
  switch (model.kind) {
    case ZeroKind::none:
      return sample_one(model.baseline, rng);
    case ZeroKind::hurdle:
      if (rng.uniform() < model.phi) return 0;
      return sample_truncated(model.baseline, rng);
    case ZeroKind::zero_inflated:
      if (rng.uniform() < model.phi) return 0;
      return sample_one(model.baseline, rng);
  }
  throw std::invalid_argument("sample_one: unknown kind");
}

CountVector sample(const ZeroModifiedModel& model, std::size_t count, Rng& rng) {
  if (count == 0) throw std::invalid_argument("sample: count must be >= 1");
  std::vector<std::int64_t> out(count);
  for (auto& v : out) v = sample_one(model, rng);
  return CountVector(std::move(out));
}

CountVector sample(const ZeroModifiedModel& model, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  return sample(model, count, rng);
}

}  // namespace sparsefit
