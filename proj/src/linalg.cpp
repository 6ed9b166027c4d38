#include "sparsefit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sparsefit/errors.hpp"

namespace sparsefit {

Matrix Matrix::scaled(double factor) const {
  Matrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out.at(i, j) = at(i, j) * factor;
  }
  return out;
}

Matrix invert(const Matrix& m) {
  const std::size_t dim = m.dim();
  if (dim == 0) throw std::invalid_argument("invert: empty matrix");

  // Augmented Gauss-Jordan with partial pivoting.
  std::vector<double> a(m.data());
  Matrix inv(dim);
  for (std::size_t i = 0; i < dim; ++i) inv.at(i, i) = 1.0;

  double max_pivot = 0.0;
  double min_pivot = std::numeric_limits<double>::infinity();
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < dim; ++row) {
      if (std::fabs(a[row * dim + col]) > std::fabs(a[pivot * dim + col])) pivot = row;
    }
    const double pv = a[pivot * dim + col];
    if (!(std::fabs(pv) > 0.0) || !std::isfinite(pv)) {
      throw numeric_error("singular matrix (zero pivot at column " + std::to_string(col) + ")");
    }
    max_pivot = std::max(max_pivot, std::fabs(pv));
    min_pivot = std::min(min_pivot, std::fabs(pv));
    if (pivot != col) {
      for (std::size_t j = 0; j < dim; ++j) {
        std::swap(a[pivot * dim + j], a[col * dim + j]);
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    }
    const double inv_pv = 1.0 / a[col * dim + col];
    for (std::size_t j = 0; j < dim; ++j) {
      a[col * dim + j] *= inv_pv;
      inv.at(col, j) *= inv_pv;
    }
    for (std::size_t row = 0; row < dim; ++row) {
      if (row == col) continue;
      const double factor = a[row * dim + col];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        a[row * dim + j] -= factor * a[col * dim + j];
        inv.at(row, j) -= factor * inv.at(col, j);
      }
    }
  }
  if (min_pivot <= 0.0 || max_pivot / min_pivot > 1e14) {
    throw numeric_error("matrix numerically singular (pivot condition estimate " +
                        std::to_string(max_pivot / min_pivot) + ")");
  }
  return inv;
}

std::vector<double> symmetric_eigenvalues(const Matrix& m) {
  const std::size_t dim = m.dim();
  std::vector<double> a(m.data());
  auto idx = [dim](std::size_t i, std::size_t j) { return i * dim + j; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i + 1; j < dim; ++j) off += a[idx(i, j)] * a[idx(i, j)];
    }
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < dim; ++p) {
      for (std::size_t q = p + 1; q < dim; ++q) {
        const double apq = a[idx(p, q)];
        if (std::fabs(apq) < 1e-300) continue;
        const double theta = (a[idx(q, q)] - a[idx(p, p)]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < dim; ++k) {
          const double akp = a[idx(k, p)];
          const double akq = a[idx(k, q)];
          a[idx(k, p)] = c * akp - s * akq;
          a[idx(k, q)] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < dim; ++k) {
          const double apk = a[idx(p, k)];
          const double aqk = a[idx(q, k)];
          a[idx(p, k)] = c * apk - s * aqk;
          a[idx(q, k)] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(dim);
  for (std::size_t i = 0; i < dim; ++i) eig[i] = a[idx(i, i)];
  std::sort(eig.begin(), eig.end());
  return eig;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_quantile: p must lie in (0,1)");
  }
  // Acklam's rational initializer refined with one Halley step against erfc.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};

  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley refinement.
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

}  // namespace sparsefit
