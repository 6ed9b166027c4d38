#ifndef SPARSEFIT_SCAN_HPP
#define SPARSEFIT_SCAN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sparsefit/fit.hpp"
#include "sparsefit/gof.hpp"
#include "sparsefit/table.hpp"

namespace sparsefit {

struct ModelSpec {
  Family family;
  ZeroKind kind;
};

// The twelve candidate models in report order: the four baselines, their
// zero-inflated versions, then their hurdle versions.
const std::vector<ModelSpec>& all_model_specs();

// Short id, e.g. "zibb"; long report label, e.g.
// "zero-inflated beta binomial (ZIBB)".
std::string model_short_name(const ModelSpec& spec);
std::string model_label(const ModelSpec& spec);
ModelSpec parse_model_name(const std::string& name);

struct ScanOptions {
  std::vector<ModelSpec> models;  // empty = all twelve
  double alpha = 0.05;
  int bootstrap = 1000;
  std::uint64_t seed = 0;
  int jobs = 0;  // 0 = hardware concurrency
  bool resample = true;
  FitOptions fit;
};

struct FeatureModelResult {
  std::string feature_id;
  std::string model;
  bool ok = false;
  std::string error;
  double phi = 0.0;
  std::vector<std::string> param_names;
  std::vector<double> params;
  double loglik = 0.0;
  bool converged = false;
  std::string case_tag;
  double d_n = 0.0;
  double p_value = 0.0;
};

struct ModelAggregate {
  std::string name;
  std::string label;
  int pass_count = 0;  // features with p-value > alpha
  int total = 0;
};

struct ScanReport {
  std::vector<std::string> feature_ids;
  std::vector<std::string> model_names;
  std::vector<FeatureModelResult> records;  // feature-major, model order within
  std::vector<ModelAggregate> aggregates;
  double alpha = 0.05;
  int bootstrap = 0;
  std::uint64_t seed = 0;
};

// Fits every requested model to every feature row and runs the bootstrap KS
// gate. Feature/model jobs run concurrently; the child seed of a job depends
// only on (seed, feature index, model index), so output is identical at any
// parallelism degree. Per-feature failures are recorded and the scan goes on.
ScanReport scan_table(const CountTable& table, const ScanOptions& opts = {});

void write_scan_csv(const ScanReport& report, const std::string& path);
void write_scan_json(const ScanReport& report, const std::string& path);

// Aggregate pass counts/percentages rendered as a fixed-width text table.
std::string format_aggregate_table(const ScanReport& report);

}  // namespace sparsefit

#endif
