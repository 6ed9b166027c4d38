#include "sparsefit/gof.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "sparsefit/errors.hpp"
#include "sparsefit/rng.hpp"

namespace sparsefit {

double ks_statistic(const CountVector& data, const ZeroModifiedModel& model) {
  const std::int64_t top = data.max_value();
  std::vector<double> empirical(static_cast<std::size_t>(top) + 1, 0.0);
  for (std::int64_t v : data.values()) empirical[static_cast<std::size_t>(v)] += 1.0;

  const double inv_n = 1.0 / static_cast<double>(data.n());
  double emp_cdf = 0.0;
  double model_cdf = 0.0;
  double d = 0.0;
  for (std::int64_t k = 0; k <= top; ++k) {
    emp_cdf += empirical[static_cast<std::size_t>(k)] * inv_n;
    model_cdf += std::exp(log_pmf(model, k));
    d = std::max(d, std::fabs(emp_cdf - std::min(model_cdf, 1.0)));
  }
  return std::min(d, 1.0);
}

namespace {

CountVector resample_with_replacement(const CountVector& data, Rng& rng) {
  const auto& src = data.values();
  std::vector<std::int64_t> out(src.size());
  for (auto& v : out) v = src[rng.uniform_below(src.size())];
  return CountVector(std::move(out));
}

struct ReplicateOutcome {
  double stat = 0.0;
  bool ok = false;
};

}  // namespace

KSReport bootstrap_ks_pvalue(const CountVector& data, Family family, ZeroKind kind,
                             const GofOptions& opts) {
  if (opts.bootstrap < 1) {
    throw std::invalid_argument("bootstrap_ks_pvalue: need at least one replicate");
  }

  FitResult fit = fit_model(family, kind, data, opts.fit);
  const double d_n = ks_statistic(data, fit.model);

  const std::size_t n = data.n();
  const int b_total = opts.bootstrap;
  std::vector<ReplicateOutcome> outcomes(static_cast<std::size_t>(b_total));

  auto run_replicate = [&](int b) {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(b)));
    ReplicateOutcome outcome;
    try {
      const CountVector resampled =
          opts.resample ? resample_with_replacement(data, rng) : data;
      const FitResult refit = fit_model(family, kind, resampled, opts.fit);
      const CountVector simulated = sample(refit.model, n, rng);
      outcome.stat = ks_statistic(simulated, refit.model);
      outcome.ok = true;
    } catch (const std::exception&) {
      outcome.ok = false;  // counted as a fit failure
    }
    outcomes[static_cast<std::size_t>(b)] = outcome;
  };

  int jobs = opts.jobs > 0 ? opts.jobs
                           : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min(jobs, b_total));
  if (jobs == 1) {
    for (int b = 0; b < b_total; ++b) run_replicate(b);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (int b = next.fetch_add(1); b < b_total; b = next.fetch_add(1)) {
          run_replicate(b);
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  int exceed = 0;
  int fit_failures = 0;
  std::vector<double> replicate_stats;
  replicate_stats.reserve(outcomes.size());
  for (const auto& outcome : outcomes) {
    if (!outcome.ok) {
      ++fit_failures;
      continue;
    }
    replicate_stats.push_back(outcome.stat);
    if (outcome.stat > d_n) ++exceed;
  }
  const int successful = static_cast<int>(replicate_stats.size());
  if (successful == 0) {
    throw numeric_error("bootstrap_ks_pvalue: every replicate fit failed");
  }
  const double p_value =
      static_cast<double>(exceed + 1) / static_cast<double>(successful + 1);
  return KSReport{d_n,       p_value, opts.bootstrap, fit_failures, opts.seed,
                  std::move(replicate_stats), std::move(fit)};
}

}  // namespace sparsefit
