#ifndef SPARSEFIT_TABLE_HPP
#define SPARSEFIT_TABLE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparsefit/count_data.hpp"
#include "sparsefit/zero_models.hpp"

namespace sparsefit {

// Rectangular feature-by-sample count matrix, the usual OTU-table layout:
// header row of sample ids, first column of feature ids, integer cells.
struct CountTable {
  std::vector<std::string> feature_ids;
  std::vector<std::string> sample_ids;
  std::vector<std::vector<std::int64_t>> counts;  // rows parallel feature_ids

  std::size_t features() const noexcept { return feature_ids.size(); }
  std::size_t samples() const noexcept { return sample_ids.size(); }

  CountVector row(std::size_t feature) const;
  // Index of the feature with this id; throws std::invalid_argument if absent.
  std::size_t find_feature(const std::string& id) const;
};

CountTable read_count_table(std::istream& in);
CountTable read_count_table_file(const std::string& path);
void write_count_table(const CountTable& table, std::ostream& out);
void write_count_table_file(const CountTable& table, const std::string& path);

// Independent rows drawn from one model; row f uses the child seed for f.
CountTable synthesize_table(const ZeroModifiedModel& model, std::size_t n_samples,
                            std::size_t n_features, std::uint64_t seed);

}  // namespace sparsefit

#endif
