#include "sparsefit/count_data.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace sparsefit {

CountVector::CountVector(std::vector<std::int64_t> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("CountVector: sample must be nonempty");
  }
  for (std::int64_t v : values_) {
    if (v < 0) throw std::invalid_argument("CountVector: counts must be nonnegative");
    if (v != 0) ++nonzero_;
    max_value_ = std::max(max_value_, v);
  }
}

double CountVector::mean() const noexcept {
  double sum = 0.0;
  for (std::int64_t v : values_) sum += static_cast<double>(v);
  return sum / static_cast<double>(values_.size());
}

double CountVector::nonzero_mean() const noexcept {
  if (nonzero_ == 0) return 0.0;
  double sum = 0.0;
  for (std::int64_t v : values_) sum += static_cast<double>(v);
  return sum / static_cast<double>(nonzero_);
}

std::vector<std::pair<std::int64_t, std::int64_t>> CountVector::nonzero_histogram() const {
  std::map<std::int64_t, std::int64_t> hist;
  for (std::int64_t v : values_) {
    if (v != 0) ++hist[v];
  }
  return {hist.begin(), hist.end()};
}

}  // namespace sparsefit
