#ifndef SPARSEFIT_ZERO_MODELS_HPP
#define SPARSEFIT_ZERO_MODELS_HPP

#include <array>
#include <cstdint>

#include "sparsefit/baselines.hpp"
#include "sparsefit/count_data.hpp"
#include "sparsefit/rng.hpp"

namespace sparsefit {

// none: the bare baseline. hurdle: P(Y=0) = phi and a zero-truncated baseline
// on the positives. zero_inflated: extra zero mass phi mixed with the
// baseline, P(Y=0) = phi + (1-phi) p0.
enum class ZeroKind { none, zero_inflated, hurdle };

constexpr std::array<ZeroKind, 3> kAllKinds = {ZeroKind::none, ZeroKind::zero_inflated,
                                               ZeroKind::hurdle};

const char* kind_name(ZeroKind kind);

struct ZeroModifiedModel {
  BaselineParams baseline;
  ZeroKind kind = ZeroKind::none;
  double phi = 0.0;  // in [0,1]; ignored for kind none

  ZeroModifiedModel(BaselineParams base, ZeroKind k, double weight);
  explicit ZeroModifiedModel(BaselineParams base)
      : ZeroModifiedModel(std::move(base), ZeroKind::none, 0.0) {}

  double zero_probability() const;
};

double log_pmf(const ZeroModifiedModel& model, std::int64_t y);
double cdf(const ZeroModifiedModel& model, double y);
std::int64_t support_upper_bound(const ZeroModifiedModel& model, double tail = 1e-10);

std::int64_t sample_one(const ZeroModifiedModel& model, Rng& rng);
CountVector sample(const ZeroModifiedModel& model, std::size_t count, Rng& rng);
CountVector sample(const ZeroModifiedModel& model, std::size_t count, std::uint64_t seed);

// One draw from the zero-truncated baseline: rejection against the baseline
// sampler while p0 <= 0.9, inversion over the truncated pmf otherwise.
std::int64_t sample_truncated(const BaselineParams& params, Rng& rng);

}  // namespace sparsefit

#endif
