#include "sparsefit/table.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sparsefit/errors.hpp"
#include "sparsefit/rng.hpp"

namespace sparsefit {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

std::int64_t parse_count(const std::string& cell, std::size_t line_no) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw parse_error("expected a nonnegative integer, got '" + cell + "'", line_no);
  }
  if (value < 0) {
    throw parse_error("counts must be nonnegative, got '" + cell + "'", line_no);
  }
  return value;
}

}  // namespace

CountVector CountTable::row(std::size_t feature) const {
  if (feature >= counts.size()) {
    throw std::invalid_argument("CountTable::row: feature index out of range");
  }
  return CountVector(counts[feature]);
}

std::size_t CountTable::find_feature(const std::string& id) const {
  for (std::size_t i = 0; i < feature_ids.size(); ++i) {
    if (feature_ids[i] == id) return i;
  }
  throw std::invalid_argument("unknown feature id '" + id + "'");
}

CountTable read_count_table(std::istream& in) {
  CountTable table;
  std::string line;
  std::size_t line_no = 0;

  // Header: first cell is a corner label, the rest are sample ids.
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (line_no == 0 || trim(line).empty()) {
    throw parse_error("empty count table: no header row", std::max<std::size_t>(line_no, 1));
  }
  const auto header = split_csv_line(line);
  if (header.size() < 2) {
    throw parse_error("header must list at least one sample column", line_no);
  }
  table.sample_ids.assign(header.begin() + 1, header.end());
  for (const auto& id : table.sample_ids) {
    if (id.empty()) throw parse_error("empty sample id in header", line_no);
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw parse_error("expected " + std::to_string(header.size()) + " columns, got " +
                            std::to_string(cells.size()),
                        line_no);
    }
    if (cells[0].empty()) throw parse_error("empty feature id", line_no);
    std::vector<std::int64_t> row(cells.size() - 1);
    for (std::size_t j = 1; j < cells.size(); ++j) {
      row[j - 1] = parse_count(cells[j], line_no);
    }
    table.feature_ids.push_back(cells[0]);
    table.counts.push_back(std::move(row));
  }
  if (table.feature_ids.empty()) {
    throw parse_error("count table has no feature rows", line_no);
  }
  return table;
}

CountTable read_count_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_count_table(in);
}

void write_count_table(const CountTable& table, std::ostream& out) {
  out << "feature_id";
  for (const auto& id : table.sample_ids) out << ',' << id;
  out << '\n';
  for (std::size_t i = 0; i < table.features(); ++i) {
    out << table.feature_ids[i];
    for (std::int64_t v : table.counts[i]) out << ',' << v;
    out << '\n';
  }
}

void write_count_table_file(const CountTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_count_table(table, out);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

CountTable synthesize_table(const ZeroModifiedModel& model, std::size_t n_samples,
                            std::size_t n_features, std::uint64_t seed) {
  if (n_samples == 0 || n_features == 0) {
    throw std::invalid_argument("synthesize_table: need at least one sample and feature");
  }
  CountTable table;
  table.sample_ids.reserve(n_samples);
  for (std::size_t j = 0; j < n_samples; ++j) {
    table.sample_ids.push_back("S" + std::to_string(j + 1));
  }
  std::size_t width = 1;
  for (std::size_t f = n_features; f >= 10; f /= 10) ++width;
  for (std::size_t i = 0; i < n_features; ++i) {
    std::string id = std::to_string(i + 1);
    table.feature_ids.push_back("feature_" + std::string(width - id.size(), '0') + id);
    Rng rng(derive_seed(seed, i));
    table.counts.push_back(sample(model, n_samples, rng).values());
  }
  return table;
}

}  // namespace sparsefit
