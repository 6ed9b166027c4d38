#ifndef SPARSEFIT_OPTIM_HPP
#define SPARSEFIT_OPTIM_HPP

#include <functional>
#include <vector>

namespace sparsefit {

// Objective to minimize. When `grad` is non-null it must be filled with the
// gradient at x. May return +inf outside the useful region; the line search
// backs off from such points.
using GradObjective =
    std::function<double(const std::vector<double>& x, std::vector<double>* grad)>;
using PlainObjective = std::function<double(const std::vector<double>& x)>;

struct OptimOptions {
  int max_iterations = 500;
  double grad_tol = 1e-7;    // projected-gradient norm
  double f_rel_tol = 1e-10;  // relative objective change
};

struct OptimResult {
  std::vector<double> x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Quasi-Newton (inverse-BFGS) minimization with simple box clamping. Bounds
// may be empty for an unconstrained problem.
OptimResult minimize_bfgs(const GradObjective& objective, std::vector<double> x0,
                          const std::vector<double>& lower, const std::vector<double>& upper,
                          const OptimOptions& options = {});

struct NelderMeadOptions {
  int max_iterations = 200;
  double f_tol = 1e-9;
  double initial_step = 0.05;
};

// Derivative-free simplex polish for objectives with kinks.
OptimResult minimize_nelder_mead(const PlainObjective& objective, std::vector<double> x0,
                                 const std::vector<double>& lower,
                                 const std::vector<double>& upper,
                                 const NelderMeadOptions& options = {});

}  // namespace sparsefit

#endif
