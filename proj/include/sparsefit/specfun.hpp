#ifndef SPARSEFIT_SPECFUN_HPP
#define SPARSEFIT_SPECFUN_HPP

namespace sparsefit {

// ln Gamma(x), x > 0. Accurate to ~1e-14 relative over [1e-6, 1e8].
double log_gamma(double x);

// Psi(x) = d/dx ln Gamma(x), x > 0.
double digamma(double x);

// Psi_1(x) = d/dx Psi(x), x > 0. Strictly positive.
double trigamma(double x);

// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b), a, b > 0.
double log_beta(double a, double b);

}  // namespace sparsefit

#endif
