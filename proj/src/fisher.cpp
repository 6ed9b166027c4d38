#include "sparsefit/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sparsefit/errors.hpp"
#include "sparsefit/specfun.hpp"

namespace sparsefit {

namespace {

constexpr double kTailMass = 1e-12;
constexpr std::int64_t kSummationCap = 10'000'000;

// Loops y over the baseline support until all but `kTailMass` of the mass is
// covered, invoking fn(y, pmf(y)).
template <typename Fn>
void for_each_support_point(const BaselineParams& params, Fn&& fn) {
  std::int64_t top = kSummationCap;
  if (params.family() == Family::beta_bin) {
    top = std::min<std::int64_t>(top, std::llround(params.beta_bin().n));
  }
  double cum = 0.0;
  for (std::int64_t y = 0; y <= top; ++y) {
    const double w = std::exp(log_pmf(params, y));
    fn(y, w);
    cum += w;
    if (1.0 - cum <= kTailMass) break;
  }
}

// Per-parameter step for central differences, kept inside the domain.
std::vector<double> fd_steps(const BaselineParams& params) {
  const std::vector<double> theta = params.values();
  std::vector<double> h(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    h[j] = 1e-5 * std::max(1.0, std::fabs(theta[j]));
  }
  if (params.family() == Family::neg_bin) {
    const double p = params.neg_bin().p;
    h[1] = std::min({h[1], 0.5 * p, 0.5 * (1.0 - p)});
  }
  return h;
}

BaselineParams perturbed(const BaselineParams& params, std::size_t j, double delta) {
  std::vector<double> theta = params.values();
  theta[j] += delta;
  return make_baseline(params.family(), theta);
}

Matrix outer_product(const std::vector<double>& v) {
  Matrix out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) out.at(i, j) = v[i] * v[j];
  }
  return out;
}

// Assembles the (1+p)-dim sample matrix from the phi scalar, cross vector and
// theta block, all given per observation.
FisherMatrix assemble(double phi_entry, const std::vector<double>& cross, const Matrix& block,
                      std::size_t n) {
  const std::size_t p = block.dim();
  Matrix full(1 + p);
  full.at(0, 0) = phi_entry;
  for (std::size_t j = 0; j < p; ++j) {
    full.at(0, j + 1) = cross.empty() ? 0.0 : cross[j];
    full.at(j + 1, 0) = full.at(0, j + 1);
    for (std::size_t k = 0; k < p; ++k) full.at(j + 1, k + 1) = block.at(j, k);
  }
  return {full.scaled(static_cast<double>(n)), false, true};
}

// Theta block of the hurdle information, per observation:
//   -c (E[H] + p0/(1-p0) g0 g0^T),  c = (1-phi)/(1-p0).
Matrix hurdle_theta_block(const ZeroModifiedModel& model) {
  const BaselineParams& base = model.baseline;
  const std::size_t p = base.dim();

  if (base.family() == Family::poisson) {
    const double lambda = base.poisson().lambda;
    const double one_m_p0 = -std::expm1(-lambda);
    Matrix block(1);
    block.at(0, 0) = (1.0 - model.phi) / one_m_p0 *
                     (1.0 / lambda - std::exp(-lambda) / one_m_p0);
    return block;
  }
  if (base.family() == Family::neg_bin) {
    const auto& nb = base.neg_bin();
    const double q = 1.0 - nb.p;
    const double log_q = std::log1p(-nb.p);
    const double zero_mass = std::exp(nb.r * log_q);
    const double one_m_p0 = -std::expm1(nb.r * log_q);
    const double a = expected_trigamma_term(nb);
    Matrix block(2);
    block.at(0, 0) = a - zero_mass / one_m_p0 * log_q * log_q;
    block.at(0, 1) = 1.0 / q + zero_mass / one_m_p0 * nb.r * log_q / q;
    block.at(1, 0) = block.at(0, 1);
    block.at(1, 1) = nb.r / (nb.p * q * q) - zero_mass / one_m_p0 * nb.r * nb.r / (q * q);
    return block.scaled((1.0 - model.phi) / one_m_p0);
  }

  // Generic route.
  const double zero_mass = p0(base);
  const double one_m_p0 = -std::expm1(log_p0(base));
  const Matrix expected_hessian = expected_hessian_log_pmf(base);
  const Matrix outer = outer_product(grad_log_p0(base));
  const double c = (1.0 - model.phi) / one_m_p0;
  const double c2 = zero_mass / one_m_p0;
  Matrix block(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      block.at(i, j) = -c * (expected_hessian.at(i, j) + c2 * outer.at(i, j));
    }
  }
  return block;
}

// Theta block and cross terms of the zero-inflated information.
struct ZiParts {
  double phi_entry;
  std::vector<double> cross;
  Matrix block;
};

ZiParts zi_parts(const ZeroModifiedModel& model, bool force_numeric) {
  const BaselineParams& base = model.baseline;
  const double phi = model.phi;
  const double zero_mass = p0(base);
  const double mix = phi + (1.0 - phi) * zero_mass;  // P(Y = 0)
  const double one_m_p0 = -std::expm1(log_p0(base));

  ZiParts parts{one_m_p0 / (mix * (1.0 - phi)), {}, Matrix(base.dim())};

  const auto g0 = grad_log_p0(base);
  parts.cross.resize(base.dim());
  for (std::size_t j = 0; j < base.dim(); ++j) {
    parts.cross[j] = zero_mass / mix * g0[j];
  }

  if (!force_numeric && base.family() == Family::poisson) {
    const double lambda = base.poisson().lambda;
    parts.block.at(0, 0) =
        (1.0 - phi) * (1.0 / lambda - phi * std::exp(-lambda) / mix);
    return parts;
  }

  const Matrix expected_hessian = expected_hessian_log_pmf(base);
  const Matrix outer = outer_product(g0);
  const double c2 = phi * zero_mass / mix;
  for (std::size_t i = 0; i < base.dim(); ++i) {
    for (std::size_t j = 0; j < base.dim(); ++j) {
      parts.block.at(i, j) = -(1.0 - phi) * (expected_hessian.at(i, j) + c2 * outer.at(i, j));
    }
  }
  return parts;
}

}  // namespace

Matrix expected_hessian_log_pmf(const BaselineParams& params) {
  const std::size_t p = params.dim();
  const std::vector<double> h = fd_steps(params);

  // Cache the per-parameter perturbed distributions once.
  std::vector<BaselineParams> plus, minus;
  plus.reserve(p);
  minus.reserve(p);
  for (std::size_t j = 0; j < p; ++j) {
    plus.push_back(perturbed(params, j, h[j]));
    minus.push_back(perturbed(params, j, -h[j]));
  }

  Matrix acc(p);
  std::vector<double> gp(p), gm(p);
  for_each_support_point(params, [&](std::int64_t y, double w) {
    if (w <= 0.0) return;
    for (std::size_t j = 0; j < p; ++j) {
      std::fill(gp.begin(), gp.end(), 0.0);
      std::fill(gm.begin(), gm.end(), 0.0);
      accumulate_grad_log_pmf(plus[j], y, 1.0, gp);
      accumulate_grad_log_pmf(minus[j], y, 1.0, gm);
      for (std::size_t k = 0; k < p; ++k) {
        acc.at(j, k) += w * (gp[k] - gm[k]) / (2.0 * h[j]);
      }
    }
  });

  // Symmetrize the finite-difference noise away.
  Matrix out(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      out.at(i, j) = 0.5 * (acc.at(i, j) + acc.at(j, i));
    }
  }
  return out;
}

double expected_trigamma_term(const NegBinParams& params) {
  BaselineParams base{params};
  double expectation = 0.0;
  for_each_support_point(base, [&](std::int64_t y, double w) {
    expectation += w * trigamma(static_cast<double>(y) + params.r);
  });
  return trigamma(params.r) - expectation;
}

FisherMatrix fisher_hurdle(const ZeroModifiedModel& model, std::size_t n) {
  if (model.kind != ZeroKind::hurdle) {
    throw std::invalid_argument("fisher_hurdle: model is not a hurdle model");
  }
  if (!(model.phi > 0.0 && model.phi < 1.0)) {
    throw boundary_error("hurdle information undefined at phi = " + std::to_string(model.phi));
  }
  const double phi_entry = 1.0 / (model.phi * (1.0 - model.phi));
  return assemble(phi_entry, {}, hurdle_theta_block(model), n);
}

FisherMatrix fisher_hurdle_numeric(const ZeroModifiedModel& model, std::size_t n) {
  if (model.kind != ZeroKind::hurdle) {
    throw std::invalid_argument("fisher_hurdle_numeric: model is not a hurdle model");
  }
  if (!(model.phi > 0.0 && model.phi < 1.0)) {
    throw boundary_error("hurdle information undefined at phi = " + std::to_string(model.phi));
  }
  const BaselineParams& base = model.baseline;
  const double zero_mass = p0(base);
  const double one_m_p0 = -std::expm1(log_p0(base));
  const Matrix expected_hessian = expected_hessian_log_pmf(base);
  const Matrix outer = outer_product(grad_log_p0(base));
  const double c = (1.0 - model.phi) / one_m_p0;
  const double c2 = zero_mass / one_m_p0;
  Matrix block(base.dim());
  for (std::size_t i = 0; i < base.dim(); ++i) {
    for (std::size_t j = 0; j < base.dim(); ++j) {
      block.at(i, j) = -c * (expected_hessian.at(i, j) + c2 * outer.at(i, j));
    }
  }
  return assemble(1.0 / (model.phi * (1.0 - model.phi)), {}, block, n);
}

FisherMatrix fisher_zero_inflated(const ZeroModifiedModel& model, std::size_t n) {
  if (model.kind != ZeroKind::zero_inflated) {
    throw std::invalid_argument("fisher_zero_inflated: model is not zero-inflated");
  }
  if (!(model.phi < 1.0)) {
    throw boundary_error("zero-inflated information undefined at phi = 1");
  }
  const ZiParts parts = zi_parts(model, false);
  return assemble(parts.phi_entry, parts.cross, parts.block, n);
}

FisherMatrix fisher_zero_inflated_numeric(const ZeroModifiedModel& model, std::size_t n) {
  if (model.kind != ZeroKind::zero_inflated) {
    throw std::invalid_argument("fisher_zero_inflated_numeric: model is not zero-inflated");
  }
  if (!(model.phi < 1.0)) {
    throw boundary_error("zero-inflated information undefined at phi = 1");
  }
  const ZiParts parts = zi_parts(model, true);
  return assemble(parts.phi_entry, parts.cross, parts.block, n);
}

FisherMatrix fisher_baseline(const BaselineParams& params, std::size_t n) {
  const Matrix expected_hessian = expected_hessian_log_pmf(params);
  Matrix block(params.dim());
  for (std::size_t i = 0; i < params.dim(); ++i) {
    for (std::size_t j = 0; j < params.dim(); ++j) {
      block.at(i, j) = -expected_hessian.at(i, j);
    }
  }
  return {block.scaled(static_cast<double>(n)), false, false};
}

std::vector<ConfidenceInterval> confidence_intervals(const FitResult& fit, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence_intervals: level must lie in (0,1)");
  }
  const double z = normal_quantile(0.5 * (1.0 + level));
  const ZeroModifiedModel& model = fit.model;
  const std::vector<double> theta = model.baseline.values();
  const std::vector<std::string> names = param_names(model.baseline.family());
  const double nd = static_cast<double>(fit.n_observations);

  std::vector<ConfidenceInterval> out;
  auto push = [&](const std::string& name, double estimate, double se, bool boundary) {
    ConfidenceInterval ci;
    ci.name = name;
    ci.estimate = estimate;
    ci.level = level;
    ci.at_boundary = boundary;
    if (boundary) {
      ci.std_error = std::numeric_limits<double>::quiet_NaN();
      ci.lower = std::numeric_limits<double>::quiet_NaN();
      ci.upper = std::numeric_limits<double>::quiet_NaN();
    } else {
      ci.std_error = se;
      ci.lower = estimate - z * se;
      ci.upper = estimate + z * se;
    }
    out.push_back(std::move(ci));
  };

  constexpr double kBoundaryEps = 1e-8;

  switch (model.kind) {
    case ZeroKind::none: {
      const FisherMatrix info = fisher_baseline(model.baseline, fit.n_observations);
      const Matrix cov = invert(info.entries);
      for (std::size_t j = 0; j < theta.size(); ++j) {
        push(names[j], theta[j], std::sqrt(cov.at(j, j)), false);
      }
      return out;
    }
    case ZeroKind::hurdle: {
      const bool phi_boundary =
          model.phi <= kBoundaryEps || model.phi >= 1.0 - kBoundaryEps;
      push("phi", model.phi, std::sqrt(model.phi * (1.0 - model.phi) / nd), phi_boundary);
      // Block-diagonal structure: theta covariance is the inverse of the
      // theta block alone.
      const Matrix block = hurdle_theta_block(model).scaled(nd);
      const Matrix cov = invert(block);
      for (std::size_t j = 0; j < theta.size(); ++j) {
        push(names[j], theta[j], std::sqrt(cov.at(j, j)), false);
      }
      return out;
    }
    case ZeroKind::zero_inflated: {
      const bool phi_boundary =
          model.phi <= kBoundaryEps || model.phi >= 1.0 - kBoundaryEps;
      if (!phi_boundary) {
        // phi-hat and theta-hat are correlated: take the full joint inverse.
        const FisherMatrix info = fisher_zero_inflated(model, fit.n_observations);
        const Matrix cov = invert(info.entries);
        push("phi", model.phi, std::sqrt(cov.at(0, 0)), false);
        for (std::size_t j = 0; j < theta.size(); ++j) {
          push(names[j], theta[j], std::sqrt(cov.at(j + 1, j + 1)), false);
        }
      } else {
        push("phi", model.phi, 0.0, true);
        const ZiParts parts = zi_parts(model, false);
        const Matrix cov = invert(parts.block.scaled(nd));
        for (std::size_t j = 0; j < theta.size(); ++j) {
          push(names[j], theta[j], std::sqrt(cov.at(j, j)), false);
        }
      }
      return out;
    }
  }
  throw std::invalid_argument("confidence_intervals: unknown kind");
}

}  // namespace sparsefit
