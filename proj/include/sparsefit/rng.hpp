#ifndef SPARSEFIT_RNG_HPP
#define SPARSEFIT_RNG_HPP

#include <cstdint>
#include <random>

namespace sparsefit {

// Deterministic random source. All samplers are built on top of the engine's
// raw 64-bit output, so a fixed seed reproduces the same stream on every run.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1); safe as a log/logit argument.
  double uniform_pos() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Unbiased integer on [0, bound).
  std::uint64_t uniform_below(std::uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

  double normal();
  double exponential() { return -std::log(uniform_pos()); }

  // Gamma(shape, scale), shape > 0.
  double gamma(double shape, double scale = 1.0);
  double beta(double a, double b);

  std::int64_t poisson(double lambda);
  std::int64_t binomial(std::int64_t n, double p);

private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool have_spare_ = false;
};

// Child-stream seed for replicate/feature `index` under `master`. A fixed
// mixing function keeps parallel work reproducible regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace sparsefit

#endif
