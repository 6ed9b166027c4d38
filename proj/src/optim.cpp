#include "sparsefit/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sparsefit {

namespace {

void clamp_to_bounds(std::vector<double>& x, const std::vector<double>& lower,
                     const std::vector<double>& upper) {
  if (lower.empty()) return;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::clamp(x[i], lower[i], upper[i]);
  }
}

// Gradient components pointing out of an active bound do not count toward
// convergence: the constrained optimum sits on the face.
double projected_grad_norm(const std::vector<double>& x, const std::vector<double>& g,
                           const std::vector<double>& lower, const std::vector<double>& upper) {
  double norm2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double gi = g[i];
    if (!lower.empty()) {
      if (x[i] <= lower[i] && gi > 0.0) gi = 0.0;
      if (x[i] >= upper[i] && gi < 0.0) gi = 0.0;
    }
    norm2 += gi * gi;
  }
  return std::sqrt(norm2);
}

}  // namespace

OptimResult minimize_bfgs(const GradObjective& objective, std::vector<double> x0,
                          const std::vector<double>& lower, const std::vector<double>& upper,
                          const OptimOptions& options) {
  const std::size_t dim = x0.size();
  if (dim == 0) throw std::invalid_argument("minimize_bfgs: empty start point");
  if (!lower.empty() && (lower.size() != dim || upper.size() != dim)) {
    throw std::invalid_argument("minimize_bfgs: bounds dimension mismatch");
  }

  clamp_to_bounds(x0, lower, upper);
  std::vector<double> x = x0;
  std::vector<double> grad(dim), grad_new(dim);
  double value = objective(x, &grad);

  OptimResult result;
  result.x = x;
  result.value = value;

  if (!std::isfinite(value)) {
    result.grad_norm = std::numeric_limits<double>::infinity();
    return result;
  }

  // Inverse Hessian approximation, row-major identity to start.
  std::vector<double> hess_inv(dim * dim, 0.0);
  auto reset_hessian = [&] {
    std::fill(hess_inv.begin(), hess_inv.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) hess_inv[i * dim + i] = 1.0;
  };
  reset_hessian();

  std::vector<double> direction(dim), x_new(dim), step(dim), grad_diff(dim), hy(dim);

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    result.grad_norm = projected_grad_norm(x, grad, lower, upper);
    if (result.grad_norm <= options.grad_tol) {
      result.converged = true;
      break;
    }

    for (std::size_t i = 0; i < dim; ++i) {
      double d = 0.0;
      for (std::size_t j = 0; j < dim; ++j) d -= hess_inv[i * dim + j] * grad[j];
      direction[i] = d;
    }
    double slope = std::inner_product(direction.begin(), direction.end(), grad.begin(), 0.0);
    if (!(slope < 0.0)) {
      reset_hessian();
      for (std::size_t i = 0; i < dim; ++i) direction[i] = -grad[i];
      slope = -std::inner_product(grad.begin(), grad.end(), grad.begin(), 0.0);
    }

    // Backtracking Armijo search.
    constexpr double kArmijo = 1e-4;
    double t = 1.0;
    double value_new = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int halving = 0; halving < 50; ++halving) {
      for (std::size_t i = 0; i < dim; ++i) x_new[i] = x[i] + t * direction[i];
      clamp_to_bounds(x_new, lower, upper);
      value_new = objective(x_new, nullptr);
      if (std::isfinite(value_new) && value_new <= value + kArmijo * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // no further descent representable

    objective(x_new, &grad_new);
    bool negligible_step = true;
    for (std::size_t i = 0; i < dim; ++i) {
      step[i] = x_new[i] - x[i];
      grad_diff[i] = grad_new[i] - grad[i];
      if (std::fabs(step[i]) > 1e-15 * (1.0 + std::fabs(x[i]))) negligible_step = false;
    }

    const double value_drop = value - value_new;
    x = x_new;
    std::swap(grad, grad_new);
    value = value_new;
    result.x = x;
    result.value = value;

    if (negligible_step || value_drop <= options.f_rel_tol * (std::fabs(value) + 1e-12)) {
      result.converged = true;
      ++iter;
      break;
    }

    // BFGS inverse update (skipped when curvature is not positive).
    const double sy = std::inner_product(step.begin(), step.end(), grad_diff.begin(), 0.0);
    if (sy > 1e-12) {
      const double rho = 1.0 / sy;
      for (std::size_t i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < dim; ++j) acc += hess_inv[i * dim + j] * grad_diff[j];
        hy[i] = acc;
      }
      const double yhy = std::inner_product(grad_diff.begin(), grad_diff.end(), hy.begin(), 0.0);
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
          hess_inv[i * dim + j] += (1.0 + rho * yhy) * rho * step[i] * step[j] -
                                   rho * (step[i] * hy[j] + hy[i] * step[j]);
        }
      }
    } else {
      reset_hessian();
    }
  }

  result.iterations = iter;
  result.grad_norm = projected_grad_norm(x, grad, lower, upper);
  if (result.grad_norm <= options.grad_tol) result.converged = true;
  return result;
}

OptimResult minimize_nelder_mead(const PlainObjective& objective, std::vector<double> x0,
                                 const std::vector<double>& lower,
                                 const std::vector<double>& upper,
                                 const NelderMeadOptions& options) {
  const std::size_t dim = x0.size();
  if (dim == 0) throw std::invalid_argument("minimize_nelder_mead: empty start point");
  clamp_to_bounds(x0, lower, upper);

  auto eval = [&](std::vector<double> pt) {
    clamp_to_bounds(pt, lower, upper);
    const double v = objective(pt);
    return std::pair<std::vector<double>, double>(std::move(pt), v);
  };

  std::vector<std::pair<std::vector<double>, double>> simplex;
  simplex.reserve(dim + 1);
  simplex.push_back(eval(x0));
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<double> pt = x0;
    const double h = options.initial_step * std::max(1.0, std::fabs(pt[i]));
    pt[i] += h;
    simplex.push_back(eval(pt));
  }

  auto order = [&] {
    std::sort(simplex.begin(), simplex.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
  };
  order();

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if (std::fabs(simplex.front().second - simplex.back().second) <=
        options.f_tol * (std::fabs(simplex.front().second) + 1e-12)) {
      break;
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[k].first[i];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    auto blend = [&](double scale) {
      std::vector<double> pt(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        pt[i] = centroid[i] + scale * (simplex.back().first[i] - centroid[i]);
      }
      return pt;
    };

    const auto reflected = eval(blend(-1.0));
    if (reflected.second < simplex.front().second) {
      const auto expanded = eval(blend(-2.0));
      simplex.back() = expanded.second < reflected.second ? expanded : reflected;
    } else if (reflected.second < simplex[dim - 1].second) {
      simplex.back() = reflected;
    } else {
      const auto contracted =
          eval(blend(reflected.second < simplex.back().second ? -0.5 : 0.5));
      if (contracted.second <
          std::min(reflected.second, simplex.back().second)) {
        simplex.back() = contracted;
      } else {
        // Shrink toward the best vertex.
        for (std::size_t k = 1; k <= dim; ++k) {
          std::vector<double> pt(dim);
          for (std::size_t i = 0; i < dim; ++i) {
            pt[i] = 0.5 * (simplex[0].first[i] + simplex[k].first[i]);
          }
          simplex[k] = eval(std::move(pt));
        }
      }
    }
    order();
  }

  OptimResult result;
  result.x = simplex.front().first;
  result.value = simplex.front().second;
  result.iterations = iter;
  result.converged = true;
  result.grad_norm = std::numeric_limits<double>::quiet_NaN();
  return result;
}

}  // namespace sparsefit
