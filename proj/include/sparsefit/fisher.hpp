#ifndef SPARSEFIT_FISHER_HPP
#define SPARSEFIT_FISHER_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "sparsefit/baselines.hpp"
#include "sparsefit/fit.hpp"
#include "sparsefit/linalg.hpp"
#include "sparsefit/zero_models.hpp"

namespace sparsefit {

// Information matrix of a sample. When `includes_phi` the row/column order is
// (phi, theta_1, ..., theta_p); otherwise it is theta only.
struct FisherMatrix {
  Matrix entries;
  bool per_observation = false;
  bool includes_phi = true;
};

// Hurdle-sample information: block-diagonal with n/(phi(1-phi)) in the phi
// corner. Closed forms for Poisson and NB baselines, numeric expectation for
// the rest. Throws boundary_error when phi is 0 or 1.
FisherMatrix fisher_hurdle(const ZeroModifiedModel& model, std::size_t n);

// Zero-inflated-sample information including the phi-theta cross block.
// Closed form for the Poisson baseline. Throws boundary_error at phi = 1.
FisherMatrix fisher_zero_inflated(const ZeroModifiedModel& model, std::size_t n);

// Generic numeric-expectation routes (finite-difference Hessians summed over
// the support). Kept callable so the closed forms can be cross-checked
// against an independent implementation.
FisherMatrix fisher_hurdle_numeric(const ZeroModifiedModel& model, std::size_t n);
FisherMatrix fisher_zero_inflated_numeric(const ZeroModifiedModel& model, std::size_t n);

// Baseline-only information, -E[d^2 log f / dtheta dtheta^T], numeric.
FisherMatrix fisher_baseline(const BaselineParams& params, std::size_t n);

// E[d^2 log f_theta(Y') / dtheta dtheta^T] over the baseline distribution,
// summed to tail mass 1e-12.
Matrix expected_hessian_log_pmf(const BaselineParams& params);

// A(r, p) = Psi_1(r) - E Psi_1(Y' + r) >= 0 for the NB baseline.
double expected_trigamma_term(const NegBinParams& params);

struct ConfidenceInterval {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;
  bool at_boundary = false;  // Wald interval suppressed (phi-hat on {0,1})
};

// Wald intervals at the given level. Hurdle uses the block-diagonal inverse,
// zero-inflated the full joint inverse, baseline the theta-only inverse.
std::vector<ConfidenceInterval> confidence_intervals(const FitResult& fit, double level);

}  // namespace sparsefit

#endif
