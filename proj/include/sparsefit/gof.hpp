#ifndef SPARSEFIT_GOF_HPP
#define SPARSEFIT_GOF_HPP

#include <cstdint>
#include <vector>

#include "sparsefit/count_data.hpp"
#include "sparsefit/fit.hpp"
#include "sparsefit/zero_models.hpp"

namespace sparsefit {

// sup_x |empirical cdf - model cdf|. Both sides are integer-supported step
// functions, so the supremum is attained on [0, max(data)].
double ks_statistic(const CountVector& data, const ZeroModifiedModel& model);

struct GofOptions {
  int bootstrap = 1000;        // B
  std::uint64_t seed = 0;
  int jobs = 0;                // 0 = hardware concurrency
  bool resample = true;        // refit each replicate on a with-replacement resample
  FitOptions fit;
};

struct KSReport {
  double d_n;
  double p_value;
  int bootstrap;        // requested B
  int fit_failures;     // replicates dropped because their refit failed
  std::uint64_t seed;
  std::vector<double> replicate_stats;  // successful replicates, index order
  FitResult fit;        // MLE on the original data
};

// Parametric-bootstrap p-value:
//   1. fit the model on the data, D_n = ks(data, fit);
//   2. per replicate: resample the data with replacement, refit, simulate a
//      fresh sample of size n from the refit, and take its KS distance to the
//      refit's cdf;
//   3. p = (#{D^(b) > D_n} + 1) / (B' + 1) over the B' successful replicates.
// Deterministic for a fixed seed at any parallelism degree.
KSReport bootstrap_ks_pvalue(const CountVector& data, Family family, ZeroKind kind,
                             const GofOptions& opts = {});

}  // namespace sparsefit

#endif
