#ifndef SPARSEFIT_FIT_HPP
#define SPARSEFIT_FIT_HPP

#include <cstddef>
#include <vector>

#include "sparsefit/baselines.hpp"
#include "sparsefit/count_data.hpp"
#include "sparsefit/zero_models.hpp"

namespace sparsefit {

struct FitOptions {
  int max_iterations = 500;    // per start
  double tol = 1e-7;           // projected-gradient norm at the solution
  double f_rel_tol = 1e-10;    // relative objective-change stop
  int starts = 5;              // deterministic multistart count
  int polish_iterations = 200; // simplex polish budget
};

// Which estimation route produced the result: the closed hurdle split,
// one of the two zero-inflated cases, or a plain baseline fit.
enum class FitCase { baseline_only, hurdle_closed, zi_case1, zi_case2 };

const char* fit_case_name(FitCase c);

struct FitResult {
  ZeroModifiedModel model;
  double loglik = 0.0;          // full-data log-likelihood at the estimate
  bool converged = false;
  int iterations = 0;
  double grad_norm = 0.0;       // projected gradient norm of the theta stage
  FitCase case_tag = FitCase::baseline_only;
  std::size_t n_observations = 0;
  std::size_t n_nonzero = 0;
};

// Negative zero-truncated log-likelihood over the nonzero part of `data`,
// with its analytic gradient:
//   dl/dtheta = sum_{y!=0} dlog f(y)/dtheta + m * p0/(1-p0) * dlog p0/dtheta.
double truncated_neg_loglik(const BaselineParams& params, const CountVector& data,
                            std::vector<double>* grad = nullptr);

// phi-hat = 1 - m/n exactly; theta-hat maximizes the truncated likelihood.
FitResult fit_hurdle(Family family, const CountVector& data, const FitOptions& opts = {});

// Two-case zero-inflated MLE. Case 1 reuses the truncated maximizer when
// m/n <= 1 - p0(theta*); case 2 maximizes the clipped-psi profile.
FitResult fit_zero_inflated(Family family, const CountVector& data, const FitOptions& opts = {});

// Plain MLE of the unmodified baseline.
FitResult fit_baseline(Family family, const CountVector& data, const FitOptions& opts = {});

FitResult fit_model(Family family, ZeroKind kind, const CountVector& data,
                    const FitOptions& opts = {});

// Full-sample log-likelihood of an arbitrary model, zeros included.
double log_likelihood(const ZeroModifiedModel& model, const CountVector& data);

}  // namespace sparsefit

#endif
