#ifndef SPARSEFIT_COUNT_DATA_HPP
#define SPARSEFIT_COUNT_DATA_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace sparsefit {

// Observed sample of nonnegative counts with the zero/nonzero split cached.
class CountVector {
public:
  CountVector() = default;
  explicit CountVector(std::vector<std::int64_t> values);

  std::size_t n() const noexcept { return values_.size(); }
  std::size_t m() const noexcept { return nonzero_; }
  const std::vector<std::int64_t>& values() const noexcept { return values_; }

  std::int64_t max_value() const noexcept { return max_value_; }
  double mean() const noexcept;
  double nonzero_mean() const noexcept;

  // Distinct nonzero values with multiplicities, ascending. Likelihoods over
  // sparse count data collapse to a short weighted sum through this.
  std::vector<std::pair<std::int64_t, std::int64_t>> nonzero_histogram() const;

private:
  std::vector<std::int64_t> values_;
  std::size_t nonzero_ = 0;
  std::int64_t max_value_ = 0;
};

}  // namespace sparsefit

#endif
