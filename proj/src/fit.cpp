#include "sparsefit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sparsefit/errors.hpp"
#include "sparsefit/optim.hpp"
#include "sparsefit/specfun.hpp"

namespace sparsefit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Parameter transforms. Every family parameter is optimized on an
// unconstrained scale (log or logit), with the spec'd box bounds expressed as
// clamps on the transformed coordinate.

struct Transform {
  enum class Kind { log, logit, shifted_log } kind;
  double lo_x;
  double hi_x;
  double shift = 0.0;  // shifted_log: theta = shift + exp(x)

  double to_param(double x) const {
    switch (kind) {
      case Kind::log:
        return std::exp(x);
      case Kind::logit:
        return 1.0 / (1.0 + std::exp(-x));
      case Kind::shifted_log:
        return shift + std::exp(x);
    }
    return 0.0;
  }

  double to_x(double theta) const {
    double x = 0.0;
    switch (kind) {
      case Kind::log:
        x = std::log(theta);
        break;
      case Kind::logit:
        x = std::log(theta / (1.0 - theta));
        break;
      case Kind::shifted_log:
        x = std::log(std::max(theta - shift, 1e-12));
        break;
    }
    return std::clamp(x, lo_x, hi_x);
  }

  // d theta / d x at the transformed coordinate.
  double dparam_dx(double x) const {
    switch (kind) {
      case Kind::log:
      case Kind::shifted_log:
        return std::exp(x);
      case Kind::logit: {
        const double s = 1.0 / (1.0 + std::exp(-x));
        return s * (1.0 - s);
      }
    }
    return 0.0;
  }
};

Transform log_transform(double lo, double hi) {
  return {Transform::Kind::log, std::log(lo), std::log(hi), 0.0};
}

Transform logit_transform(double lo, double hi) {
  auto logit = [](double p) { return std::log(p / (1.0 - p)); };
  return {Transform::Kind::logit, logit(lo), logit(hi), 0.0};
}

std::vector<Transform> transforms_for(Family family, const CountVector& data) {
  switch (family) {
    case Family::poisson:
      return {log_transform(1e-8, 1e8)};
    case Family::neg_bin:
      return {log_transform(1e-8, 1e6), logit_transform(1e-10, 1.0 - 1e-10)};
    case Family::beta_bin: {
      const double base = std::max<double>(static_cast<double>(data.max_value()), 1.0);
      Transform n_tr{Transform::Kind::shifted_log, std::log(1e-9), std::log(1e8), base};
      return {n_tr, log_transform(1e-8, 1e6), log_transform(1e-8, 1e6)};
    }
    case Family::beta_neg_bin:
      return {log_transform(1e-8, 1e6), log_transform(1e-8, 1e6), log_transform(1e-8, 1e6)};
  }
  throw std::invalid_argument("transforms_for: unknown family");
}

std::vector<double> to_params(const std::vector<Transform>& tr, const std::vector<double>& x) {
  std::vector<double> theta(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) theta[i] = tr[i].to_param(x[i]);
  return theta;
}

// Moment-style starting point on the natural scale.
std::vector<double> moment_start(Family family, const CountVector& data, bool nonzero_part) {
  const double mean = nonzero_part ? std::max(data.nonzero_mean(), 1e-3)
                                   : std::max(data.mean(), 1e-3);
  switch (family) {
    case Family::poisson:
      return {mean};
    case Family::neg_bin: {
      double sum = 0.0, sum2 = 0.0;
      std::size_t k = 0;
      for (std::int64_t v : data.values()) {
        if (nonzero_part && v == 0) continue;
        const double vd = static_cast<double>(v);
        sum += vd;
        sum2 += vd * vd;
        ++k;
      }
      if (k >= 2) {
        const double mu = sum / static_cast<double>(k);
        const double var = (sum2 - sum * mu) / static_cast<double>(k - 1);
        if (var > mu * 1.0001) {
          const double p = std::clamp(1.0 - mu / var, 1e-6, 1.0 - 1e-6);
          const double r = std::clamp(mu * (1.0 - p) / p, 1e-6, 1e5);
          return {r, p};
        }
      }
      return {1.0, std::clamp(mean / (1.0 + mean), 1e-6, 1.0 - 1e-6)};
    }
    case Family::beta_bin:
      return {std::max<double>(static_cast<double>(data.max_value()), 1.0), 1.0, 1.0};
    case Family::beta_neg_bin:
      return {1.0, 2.0, 1.0};
  }
  throw std::invalid_argument("moment_start: unknown family");
}

// Deterministic multistart offsets applied on the transformed scale.
std::vector<std::vector<double>> start_points(const std::vector<Transform>& tr,
                                              const std::vector<double>& theta0, int starts) {
  std::vector<double> x0(theta0.size());
  for (std::size_t i = 0; i < theta0.size(); ++i) x0[i] = tr[i].to_x(theta0[i]);

  static constexpr double kOffsets[][2] = {
      {0.0, 0.0}, {0.7, 0.7}, {-0.7, -0.7}, {1.5, -1.5}, {-1.5, 1.5}};
  std::vector<std::vector<double>> points;
  const int count = std::max(1, std::min<int>(starts, 5));
  for (int s = 0; s < count; ++s) {
    std::vector<double> x = x0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = std::clamp(x[i] + kOffsets[s][i % 2], tr[i].lo_x, tr[i].hi_x);
    }
    points.push_back(std::move(x));
  }
  return points;
}

// Sufficient statistics of the nonzero part.
struct NonzeroStats {
  std::vector<std::pair<std::int64_t, std::int64_t>> hist;
  std::size_t n = 0;
  std::size_t m = 0;
};

NonzeroStats nonzero_stats(const CountVector& data) {
  return {data.nonzero_histogram(), data.n(), data.m()};
}

double sum_log_pmf(const BaselineParams& params, const NonzeroStats& stats,
                   std::vector<double>* grad) {
  double acc = 0.0;
  if (grad) std::fill(grad->begin(), grad->end(), 0.0);
  for (const auto& [y, c] : stats.hist) {
    const double w = static_cast<double>(c);
    acc += w * log_pmf(params, y);
    if (grad) accumulate_grad_log_pmf(params, y, w, *grad);
  }
  return acc;
}

// Negative truncated log-likelihood with gradient; +inf in degenerate spots
// so the line search can step back.
double trunc_nll(const BaselineParams& params, const NonzeroStats& stats,
                 std::vector<double>* grad) {
  const double lp0 = log_p0(params);
  if (lp0 > -1e-12) return kInf;
  const double l1m = std::log(-std::expm1(lp0));
  const double md = static_cast<double>(stats.m);
  const double value = -(sum_log_pmf(params, stats, grad) - md * l1m);
  if (grad) {
    const double odds = std::exp(lp0 - l1m);  // p0 / (1 - p0)
    const auto gp0 = grad_log_p0(params);
    for (std::size_t j = 0; j < grad->size(); ++j) {
      (*grad)[j] = -((*grad)[j] + md * odds * gp0[j]);
    }
  }
  return value;
}

// Negative full-sample baseline log-likelihood (zeros enter through p0).
double baseline_nll(const BaselineParams& params, const NonzeroStats& stats,
                    std::vector<double>* grad) {
  const double zeros = static_cast<double>(stats.n - stats.m);
  const double value = -(sum_log_pmf(params, stats, grad) + zeros * log_p0(params));
  if (grad) {
    const auto gp0 = grad_log_p0(params);
    for (std::size_t j = 0; j < grad->size(); ++j) {
      (*grad)[j] = -((*grad)[j] + zeros * gp0[j]);
    }
  }
  return value;
}

// Wraps a theta-space objective into the transformed coordinates.
GradObjective transformed(const std::vector<Transform>& tr,
                          std::function<double(const BaselineParams&, std::vector<double>*)> fn,
                          Family family) {
  return [tr, fn = std::move(fn), family](const std::vector<double>& x,
                                          std::vector<double>* grad) -> double {
    std::vector<double> theta = to_params(tr, x);
    BaselineParams params = make_baseline(family, theta);
    if (!grad) return fn(params, nullptr);
    std::vector<double> g_theta(theta.size(), 0.0);
    const double v = fn(params, &g_theta);
    for (std::size_t i = 0; i < x.size(); ++i) {
      (*grad)[i] = g_theta[i] * tr[i].dparam_dx(x[i]);
    }
    return v;
  };
}

struct StageResult {
  BaselineParams params;
  double value = kInf;  // minimized objective
  bool converged = false;
  int iterations = 0;
  double grad_norm = kInf;
};

// Multistart BFGS over the transformed space; ties within 1e-10 keep the
// earliest start. A simplex polish runs when BFGS stalls short of tolerance.
StageResult optimize_stage(
    Family family, const CountVector& data,
    const std::function<double(const BaselineParams&, std::vector<double>*)>& fn,
    const std::vector<double>& theta0, const FitOptions& opts) {
  const auto tr = transforms_for(family, data);
  std::vector<double> lower(tr.size()), upper(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    lower[i] = tr[i].lo_x;
    upper[i] = tr[i].hi_x;
  }
  const GradObjective objective = transformed(tr, fn, family);

  OptimOptions oo;
  oo.max_iterations = opts.max_iterations;
  oo.grad_tol = opts.tol;
  oo.f_rel_tol = opts.f_rel_tol;

  OptimResult best;
  best.value = kInf;
  bool have_best = false;
  int total_iterations = 0;
  for (const auto& x0 : start_points(tr, theta0, opts.starts)) {
    OptimResult run = minimize_bfgs(objective, x0, lower, upper, oo);
    total_iterations += run.iterations;
    if (!std::isfinite(run.value)) continue;
    if (!have_best || run.value < best.value - 1e-10) {
      best = run;
      have_best = true;
    }
  }
  if (!have_best) {
    throw numeric_error("optimization failed from every start (objective not finite)");
  }

  if (!best.converged && opts.polish_iterations > 0) {
    NelderMeadOptions nm;
    nm.max_iterations = opts.polish_iterations;
    auto plain = [&](const std::vector<double>& x) { return objective(x, nullptr); };
    OptimResult polished = minimize_nelder_mead(plain, best.x, lower, upper, nm);
    if (polished.value < best.value) {
      total_iterations += polished.iterations;
      OptimResult rerun = minimize_bfgs(objective, polished.x, lower, upper, oo);
      total_iterations += rerun.iterations;
      if (rerun.value <= polished.value) {
        best = rerun;
      } else {
        best = polished;
        std::vector<double> g(best.x.size());
        objective(best.x, &g);
        best.grad_norm = 0.0;
        for (double gi : g) best.grad_norm += gi * gi;
        best.grad_norm = std::sqrt(best.grad_norm);
      }
    }
  }

  StageResult out{make_baseline(family, to_params(tr, best.x)), best.value, best.converged,
                  total_iterations, best.grad_norm};
  return out;
}

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

}  // namespace

const char* fit_case_name(FitCase c) {
  switch (c) {
    case FitCase::baseline_only:
      return "baseline";
    case FitCase::hurdle_closed:
      return "hurdle_closed";
    case FitCase::zi_case1:
      return "zi_case1";
    case FitCase::zi_case2:
      return "zi_case2";
  }
  throw std::invalid_argument("fit_case_name: unknown case");
}

double truncated_neg_loglik(const BaselineParams& params, const CountVector& data,
                            std::vector<double>* grad) {
  if (data.m() == 0) {
    throw degenerate_data_error("truncated likelihood needs at least one nonzero observation");
  }
  if (grad) grad->assign(params.dim(), 0.0);
  return trunc_nll(params, nonzero_stats(data), grad);
}

FitResult fit_hurdle(Family family, const CountVector& data, const FitOptions& opts) {
  const std::size_t n = data.n();
  const std::size_t m = data.m();
  if (m == 0) {
    throw degenerate_data_error(
        "every observation is zero: phi-hat = 1 and the baseline is unidentifiable");
  }
  if (m < param_count(family)) {
    throw degenerate_data_error("fewer nonzero observations than baseline parameters");
  }
  const auto stats = nonzero_stats(data);
  auto nll = [&stats](const BaselineParams& p, std::vector<double>* g) {
    return trunc_nll(p, stats, g);
  };
  StageResult stage = optimize_stage(family, data, nll, moment_start(family, data, true), opts);

  const double phi = 1.0 - static_cast<double>(m) / static_cast<double>(n);
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  FitResult result{ZeroModifiedModel(stage.params, ZeroKind::hurdle, phi),
                   xlogy(nd - md, phi) + xlogy(md, 1.0 - phi) - stage.value,
                   stage.converged,
                   stage.iterations,
                   stage.grad_norm,
                   FitCase::hurdle_closed,
                   n,
                   m};
  return result;
}

FitResult fit_zero_inflated(Family family, const CountVector& data, const FitOptions& opts) {
  const std::size_t n = data.n();
  const std::size_t m = data.m();
  if (m == 0) {
    throw degenerate_data_error(
        "every observation is zero: phi-hat = 1 and the baseline is unidentifiable");
  }
  if (m < param_count(family)) {
    throw degenerate_data_error("fewer nonzero observations than baseline parameters");
  }
  const auto stats = nonzero_stats(data);
  const double ratio = static_cast<double>(m) / static_cast<double>(n);

  auto nll = [&stats](const BaselineParams& p, std::vector<double>* g) {
    return trunc_nll(p, stats, g);
  };
  StageResult trunc_stage =
      optimize_stage(family, data, nll, moment_start(family, data, true), opts);

  const double one_m_p0_star = -std::expm1(log_p0(trunc_stage.params));

  FitCase tag;
  StageResult stage = trunc_stage;
  double phi = 0.0;
  if (ratio <= one_m_p0_star) {
    tag = FitCase::zi_case1;
    phi = std::clamp(1.0 - ratio / one_m_p0_star, 0.0, 1.0);
  } else {
    // Case 2: maximize over theta with psi clipped at m/n. Where the clip is
    // inactive the profile reduces to the plain baseline likelihood.
    tag = FitCase::zi_case2;
    const double md = static_cast<double>(m);
    const double zeros = static_cast<double>(n - m);
    const double branch_b_const = xlogy(zeros, 1.0 - ratio) + xlogy(md, ratio);
    auto profile_nll = [&](const BaselineParams& p, std::vector<double>* g) -> double {
      const double lp0 = log_p0(p);
      if (lp0 > -1e-12) {
        // psi -> 0; profile value tends to (n-m) log 1 + m log psi -> -inf
        return kInf;
      }
      const double one_m_p0 = -std::expm1(lp0);
      if (one_m_p0 <= ratio) {
        const double value = -(sum_log_pmf(p, stats, g) + zeros * lp0);
        if (g) {
          const auto gp0 = grad_log_p0(p);
          for (std::size_t j = 0; j < g->size(); ++j) {
            (*g)[j] = -((*g)[j] + zeros * gp0[j]);
          }
        }
        return value;
      }
      return trunc_nll(p, stats, g) - branch_b_const;
    };
    stage = optimize_stage(family, data, profile_nll, trunc_stage.params.values(), opts);
    const double lp0_hat = log_p0(stage.params);
    const double one_m_p0_hat = -std::expm1(lp0_hat);
    const double psi_hat = std::min(ratio, one_m_p0_hat);
    phi = std::clamp(1.0 - psi_hat / one_m_p0_hat, 0.0, 1.0);
  }

  ZeroModifiedModel model(stage.params, ZeroKind::zero_inflated, phi);
  const double zero_mass = phi + (1.0 - phi) * p0(stage.params);
  double loglik = xlogy(static_cast<double>(n - m), zero_mass) +
                  xlogy(static_cast<double>(m), 1.0 - phi);
  loglik += sum_log_pmf(stage.params, stats, nullptr);

  return FitResult{std::move(model), loglik,        stage.converged, stage.iterations,
                   stage.grad_norm,  tag,           n,               m};
}

FitResult fit_baseline(Family family, const CountVector& data, const FitOptions& opts) {
  const std::size_t n = data.n();
  const std::size_t m = data.m();
  const auto stats = nonzero_stats(data);

  if (family == Family::poisson) {
    // The Poisson MLE is the sample mean.
    const double lambda = std::clamp(data.mean(), 1e-8, 1e8);
    BaselineParams params = PoissonParams{lambda};
    std::vector<double> grad(1, 0.0);
    const double value = baseline_nll(params, stats, &grad);
    double gnorm = std::fabs(grad[0] * lambda);  // transformed-scale gradient
    if (lambda <= 1e-8 && grad[0] > 0.0) gnorm = 0.0;
    return FitResult{ZeroModifiedModel(params),
                     -value,
                     true,
                     0,
                     gnorm,
                     FitCase::baseline_only,
                     n,
                     m};
  }

  if (m < param_count(family)) {
    throw degenerate_data_error("fewer nonzero observations than baseline parameters");
  }
  auto nll = [&stats](const BaselineParams& p, std::vector<double>* g) {
    return baseline_nll(p, stats, g);
  };
  StageResult stage = optimize_stage(family, data, nll, moment_start(family, data, false), opts);
  return FitResult{ZeroModifiedModel(stage.params),
                   -stage.value,
                   stage.converged,
                   stage.iterations,
                   stage.grad_norm,
                   FitCase::baseline_only,
                   n,
                   m};
}

FitResult fit_model(Family family, ZeroKind kind, const CountVector& data,
                    const FitOptions& opts) {
  switch (kind) {
    case ZeroKind::none:
      return fit_baseline(family, data, opts);
    case ZeroKind::hurdle:
      return fit_hurdle(family, data, opts);
    case ZeroKind::zero_inflated:
      return fit_zero_inflated(family, data, opts);
  }
  throw std::invalid_argument("fit_model: unknown kind");
}

double log_likelihood(const ZeroModifiedModel& model, const CountVector& data) {
  const std::size_t zeros = data.n() - data.m();
  double acc = zeros > 0 ? static_cast<double>(zeros) * log_pmf(model, 0) : 0.0;
  for (const auto& [y, c] : data.nonzero_histogram()) {
    acc += static_cast<double>(c) * log_pmf(model, y);
  }
  return acc;
}

}  // namespace sparsefit
