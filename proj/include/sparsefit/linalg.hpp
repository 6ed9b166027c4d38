#ifndef SPARSEFIT_LINALG_HPP
#define SPARSEFIT_LINALG_HPP

#include <cstddef>
#include <vector>

namespace sparsefit {

// Dense row-major square matrix, small (the information matrices here are at
// most 4x4).
class Matrix {
public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

  std::size_t dim() const noexcept { return dim_; }
  double& at(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  const std::vector<double>& data() const noexcept { return data_; }

  Matrix scaled(double factor) const;

private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// Gauss-Jordan inverse with partial pivoting; throws numeric_error with a
// condition estimate when the matrix is numerically singular.
Matrix invert(const Matrix& m);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(const Matrix& m);

// Standard normal quantile and cdf.
double normal_quantile(double p);
double normal_cdf(double x);

}  // namespace sparsefit

#endif
