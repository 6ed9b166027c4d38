#include "sparsefit.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "sparsefit/count_data.hpp"
#include "sparsefit/errors.hpp"
#include "sparsefit/fisher.hpp"
#include "sparsefit/fit.hpp"
#include "sparsefit/gof.hpp"
#include "sparsefit/scan.hpp"
#include "sparsefit/table.hpp"

using namespace sparsefit;

// Opaque handle definitions.
struct sf_dataset {
  CountVector data;
};
struct sf_fit_result {
  FitResult fit;
};
struct sf_ks_report {
  KSReport report;
  sf_fit_result fit_handle;
};
struct sf_table {
  CountTable table;
};
struct sf_scan_report {
  ScanReport report;
  std::string summary;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : ""; }

// Runs the body, translating exceptions into error codes.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SF_OK;
  } catch (const parse_error& e) {
    set_error(e.what());
    return SF_ERR_PARSE;
  } catch (const degenerate_data_error& e) {
    set_error(e.what());
    return SF_ERR_DEGENERATE;
  } catch (const boundary_error& e) {
    set_error(e.what());
    return SF_ERR_BOUNDARY;
  } catch (const numeric_error& e) {
    set_error(e.what());
    return SF_ERR_NUMERIC;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return SF_ERR_INVALID;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return SF_ERR_INVALID;
  } catch (const std::ios_base::failure& e) {
    set_error(e.what());
    return SF_ERR_IO;
  } catch (const std::bad_alloc& e) {
    set_error(e.what());
    return SF_ERR_NUMERIC;
  } catch (const std::exception& e) {
    // Filesystem wrappers throw runtime_error; classify by message.
    set_error(e.what());
    return std::strstr(e.what(), "cannot open") || std::strstr(e.what(), "failed writing")
               ? SF_ERR_IO
               : SF_ERR_NUMERIC;
  }
}

int check_out(const void* p) {
  if (p) return SF_OK;
  set_error("null output pointer");
  return SF_ERR_INVALID;
}

Family to_family(sf_family f) {
  switch (f) {
    case SF_FAMILY_POISSON:
      return Family::poisson;
    case SF_FAMILY_NB:
      return Family::neg_bin;
    case SF_FAMILY_BB:
      return Family::beta_bin;
    case SF_FAMILY_BNB:
      return Family::beta_neg_bin;
  }
  throw std::invalid_argument("unknown family code");
}

ZeroKind to_kind(sf_kind k) {
  switch (k) {
    case SF_KIND_NONE:
      return ZeroKind::none;
    case SF_KIND_ZERO_INFLATED:
      return ZeroKind::zero_inflated;
    case SF_KIND_HURDLE:
      return ZeroKind::hurdle;
  }
  throw std::invalid_argument("unknown zero-modification kind");
}

FitOptions to_fit_options(const sf_fit_options* opts) {
  FitOptions out;
  if (opts) {
    if (opts->max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (!(opts->tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (opts->starts < 1) throw std::invalid_argument("starts must be >= 1");
    out.max_iterations = opts->max_iterations;
    out.tol = opts->tol;
    out.starts = opts->starts;
  }
  return out;
}

ZeroModifiedModel build_model(sf_family family, sf_kind kind, double phi,
                              const double* params, size_t n_params) {
  const Family fam = to_family(family);
  if (!params || n_params != param_count(fam)) {
    throw std::invalid_argument("wrong parameter count for family");
  }
  return ZeroModifiedModel(make_baseline(fam, {params, n_params}), to_kind(kind), phi);
}

}  // namespace

extern "C" {

const char* sf_strerror(int code) {
  switch (code) {
    case SF_OK:
      return "success";
    case SF_ERR_INVALID:
      return "invalid argument";
    case SF_ERR_PARSE:
      return "parse error";
    case SF_ERR_NUMERIC:
      return "numeric failure";
    case SF_ERR_DEGENERATE:
      return "degenerate data";
    case SF_ERR_BOUNDARY:
      return "parameter boundary";
    case SF_ERR_IO:
      return "i/o failure";
    default:
      return "unknown error";
  }
}

const char* sf_last_error(void) { return g_last_error.c_str(); }

const char* sf_version(void) { return "0.1.0"; }

int sf_family_param_count(sf_family family) {
  switch (family) {
    case SF_FAMILY_POISSON:
      return 1;
    case SF_FAMILY_NB:
      return 2;
    case SF_FAMILY_BB:
    case SF_FAMILY_BNB:
      return 3;
    default:
      return -1;
  }
}

/* ---- datasets ----------------------------------------------------------- */

int sf_dataset_create(const int64_t* counts, size_t n, sf_dataset** out) {
  if (int rc = check_out(out)) return rc;
  *out = nullptr;
  return guarded([&] {
    if (!counts || n == 0) throw std::invalid_argument("dataset needs at least one count");
    *out = new sf_dataset{CountVector(std::vector<std::int64_t>(counts, counts + n))};
  });
}

void sf_dataset_free(sf_dataset* dataset) { delete dataset; }

size_t sf_dataset_size(const sf_dataset* dataset) { return dataset ? dataset->data.n() : 0; }

size_t sf_dataset_nonzero(const sf_dataset* dataset) {
  return dataset ? dataset->data.m() : 0;
}

/* ---- fitting ------------------------------------------------------------ */

void sf_fit_options_init(sf_fit_options* opts) {
  if (!opts) return;
  opts->max_iterations = 500;
  opts->tol = 1e-7;
  opts->starts = 5;
}

int sf_fit(const sf_dataset* dataset, sf_family family, sf_kind kind,
           const sf_fit_options* opts, sf_fit_result** out) {
  if (int rc = check_out(out)) return rc;
  *out = nullptr;
  return guarded([&] {
    if (!dataset) throw std::invalid_argument("null dataset");
    FitResult fit =
        fit_model(to_family(family), to_kind(kind), dataset->data, to_fit_options(opts));
    *out = new sf_fit_result{std::move(fit)};
  });
}

void sf_fit_result_free(sf_fit_result* fit) { delete fit; }

double sf_fit_phi(const sf_fit_result* fit) { return fit ? fit->fit.model.phi : 0.0; }

int sf_fit_param_count(const sf_fit_result* fit) {
  return fit ? static_cast<int>(fit->fit.model.baseline.dim()) : 0;
}

double sf_fit_param(const sf_fit_result* fit, int index) {
  if (!fit) return 0.0;
  const auto values = fit->fit.model.baseline.values();
  if (index < 0 || static_cast<size_t>(index) >= values.size()) return 0.0;
  return values[static_cast<size_t>(index)];
}

const char* sf_fit_param_name(const sf_fit_result* fit, int index) {
  if (!fit || index < 0) return "";
  static const char* kNames[4][3] = {{"lambda", "", ""},
                                     {"r", "p", ""},
                                     {"n", "alpha", "beta"},
                                     {"r", "alpha", "beta"}};
  const auto family = static_cast<size_t>(fit->fit.model.baseline.family());
  if (static_cast<size_t>(index) >= fit->fit.model.baseline.dim()) return "";
  return kNames[family][index];
}

double sf_fit_loglik(const sf_fit_result* fit) { return fit ? fit->fit.loglik : 0.0; }

int sf_fit_converged(const sf_fit_result* fit) {
  return fit && fit->fit.converged ? 1 : 0;
}

int sf_fit_iterations(const sf_fit_result* fit) { return fit ? fit->fit.iterations : 0; }

double sf_fit_grad_norm(const sf_fit_result* fit) { return fit ? fit->fit.grad_norm : 0.0; }

sf_case_tag sf_fit_case(const sf_fit_result* fit) {
  if (!fit) return SF_CASE_BASELINE;
  switch (fit->fit.case_tag) {
    case FitCase::baseline_only:
      return SF_CASE_BASELINE;
    case FitCase::hurdle_closed:
      return SF_CASE_HURDLE_CLOSED;
    case FitCase::zi_case1:
      return SF_CASE_ZI_CASE1;
    case FitCase::zi_case2:
      return SF_CASE_ZI_CASE2;
  }
  return SF_CASE_BASELINE;
}

int sf_fit_intervals(const sf_fit_result* fit, double level, sf_interval* out,
                     size_t capacity, size_t* count) {
  if (int rc = check_out(count)) return rc;
  *count = 0;
  return guarded([&] {
    if (!fit) throw std::invalid_argument("null fit result");
    const auto intervals = confidence_intervals(fit->fit, level);
    *count = intervals.size();
    if (!out) return;
    for (size_t i = 0; i < intervals.size() && i < capacity; ++i) {
      sf_interval& dst = out[i];
      std::snprintf(dst.name, sizeof(dst.name), "%s", intervals[i].name.c_str());
      dst.estimate = intervals[i].estimate;
      dst.std_error = intervals[i].std_error;
      dst.lower = intervals[i].lower;
      dst.upper = intervals[i].upper;
      dst.at_boundary = intervals[i].at_boundary ? 1 : 0;
    }
  });
}

/* ---- goodness of fit ---------------------------------------------------- */

void sf_gof_options_init(sf_gof_options* opts) {
  if (!opts) return;
  opts->bootstrap = 1000;
  opts->seed = 0;
  opts->jobs = 0;
  opts->resample = 1;
  sf_fit_options_init(&opts->fit);
}

int sf_ks_statistic(const sf_dataset* dataset, const sf_fit_result* fit, double* out) {
  if (int rc = check_out(out)) return rc;
  return guarded([&] {
    if (!dataset || !fit) throw std::invalid_argument("null dataset or fit");
    *out = ks_statistic(dataset->data, fit->fit.model);
  });
}

int sf_bootstrap_ks(const sf_dataset* dataset, sf_family family, sf_kind kind,
                    const sf_gof_options* opts, sf_ks_report** out) {
  if (int rc = check_out(out)) return rc;
  *out = nullptr;
  return guarded([&] {
    if (!dataset) throw std::invalid_argument("null dataset");
    GofOptions gof;
    if (opts) {
      gof.bootstrap = opts->bootstrap;
      gof.seed = opts->seed;
      gof.jobs = opts->jobs;
      gof.resample = opts->resample != 0;
      gof.fit = to_fit_options(&opts->fit);
    }
    KSReport report = bootstrap_ks_pvalue(dataset->data, to_family(family), to_kind(kind), gof);
    FitResult fit_copy = report.fit;
    *out = new sf_ks_report{std::move(report), sf_fit_result{std::move(fit_copy)}};
  });
}

void sf_ks_report_free(sf_ks_report* report) { delete report; }

double sf_ks_d(const sf_ks_report* report) { return report ? report->report.d_n : 0.0; }

double sf_ks_pvalue(const sf_ks_report* report) {
  return report ? report->report.p_value : 0.0;
}

int sf_ks_bootstrap(const sf_ks_report* report) {
  return report ? report->report.bootstrap : 0;
}

int sf_ks_fit_failures(const sf_ks_report* report) {
  return report ? report->report.fit_failures : 0;
}

uint64_t sf_ks_seed(const sf_ks_report* report) { return report ? report->report.seed : 0; }

size_t sf_ks_replicates(const sf_ks_report* report, double* out, size_t capacity) {
  if (!report) return 0;
  const auto& stats = report->report.replicate_stats;
  if (out) {
    for (size_t i = 0; i < stats.size() && i < capacity; ++i) out[i] = stats[i];
  }
  return stats.size();
}

const sf_fit_result* sf_ks_fit(const sf_ks_report* report) {
  return report ? &report->fit_handle : nullptr;
}

/* ---- sampling ----------------------------------------------------------- */

int sf_sample(sf_family family, sf_kind kind, double phi, const double* params,
              size_t n_params, size_t count, uint64_t seed, int64_t* out) {
  if (int rc = check_out(out)) return rc;
  return guarded([&] {
    if (count == 0) throw std::invalid_argument("count must be >= 1");
    const ZeroModifiedModel model = build_model(family, kind, phi, params, n_params);
    const CountVector draws = sample(model, count, seed);
    for (size_t i = 0; i < count; ++i) out[i] = draws.values()[i];
  });
}

/* ---- count tables ------------------------------------------------------- */

int sf_table_read(const char* path, sf_table** out) {
  if (int rc = check_out(out)) return rc;
  *out = nullptr;
  return guarded([&] {
    if (!path) throw std::invalid_argument("null path");
    *out = new sf_table{read_count_table_file(path)};
  });
}

int sf_table_write(const sf_table* table, const char* path) {
  return guarded([&] {
    if (!table || !path) throw std::invalid_argument("null table or path");
    write_count_table_file(table->table, path);
  });
}

void sf_table_free(sf_table* table) { delete table; }

size_t sf_table_features(const sf_table* table) {
  return table ? table->table.features() : 0;
}

size_t sf_table_samples(const sf_table* table) { return table ? table->table.samples() : 0; }

const char* sf_table_feature_id(const sf_table* table, size_t index) {
  if (!table || index >= table->table.features()) return "";
  return table->table.feature_ids[index].c_str();
}

int sf_table_find_feature(const sf_table* table, const char* id, size_t* index) {
  if (int rc = check_out(index)) return rc;
  return guarded([&] {
    if (!table || !id) throw std::invalid_argument("null table or id");
    *index = table->table.find_feature(id);
  });
}

int sf_table_row(const sf_table* table, size_t index, sf_dataset** out) {
  if (int rc = check_out(out)) return rc;
  *out = nullptr;
  return guarded([&] {
    if (!table) throw std::invalid_argument("null table");
    *out = new sf_dataset{table->table.row(index)};
  });
}

int sf_table_synthesize(sf_family family, sf_kind kind, double phi, const double* params,
                        size_t n_params, size_t n_samples, size_t n_features, uint64_t seed,
                        sf_table** out) {
  if (int rc = check_out(out)) return rc;
  *out = nullptr;
  return guarded([&] {
    const ZeroModifiedModel model = build_model(family, kind, phi, params, n_params);
    *out = new sf_table{synthesize_table(model, n_samples, n_features, seed)};
  });
}

/* ---- model scan --------------------------------------------------------- */

void sf_scan_options_init(sf_scan_options* opts) {
  if (!opts) return;
  opts->alpha = 0.05;
  opts->bootstrap = 1000;
  opts->seed = 0;
  opts->jobs = 0;
  opts->resample = 1;
  sf_fit_options_init(&opts->fit);
}

int sf_scan(const sf_table* table, const char* const* models, size_t n_models,
            const sf_scan_options* opts, sf_scan_report** out) {
  if (int rc = check_out(out)) return rc;
  *out = nullptr;
  return guarded([&] {
    if (!table) throw std::invalid_argument("null table");
    ScanOptions scan_opts;
    if (opts) {
      scan_opts.alpha = opts->alpha;
      scan_opts.bootstrap = opts->bootstrap;
      scan_opts.seed = opts->seed;
      scan_opts.jobs = opts->jobs;
      scan_opts.resample = opts->resample != 0;
      scan_opts.fit = to_fit_options(&opts->fit);
    }
    for (size_t i = 0; i < n_models; ++i) {
      if (!models || !models[i]) throw std::invalid_argument("null model name");
      scan_opts.models.push_back(parse_model_name(models[i]));
    }
    ScanReport report = scan_table(table->table, scan_opts);
    std::string summary = format_aggregate_table(report);
    *out = new sf_scan_report{std::move(report), std::move(summary)};
  });
}

void sf_scan_report_free(sf_scan_report* report) { delete report; }

int sf_scan_write_csv(const sf_scan_report* report, const char* path) {
  return guarded([&] {
    if (!report || !path) throw std::invalid_argument("null report or path");
    write_scan_csv(report->report, path);
  });
}

int sf_scan_write_json(const sf_scan_report* report, const char* path) {
  return guarded([&] {
    if (!report || !path) throw std::invalid_argument("null report or path");
    write_scan_json(report->report, path);
  });
}

size_t sf_scan_model_count(const sf_scan_report* report) {
  return report ? report->report.aggregates.size() : 0;
}

const char* sf_scan_model_name(const sf_scan_report* report, size_t index) {
  if (!report || index >= report->report.aggregates.size()) return "";
  return report->report.aggregates[index].name.c_str();
}

const char* sf_scan_model_label(const sf_scan_report* report, size_t index) {
  if (!report || index >= report->report.aggregates.size()) return "";
  return report->report.aggregates[index].label.c_str();
}

int sf_scan_pass_count(const sf_scan_report* report, size_t index) {
  if (!report || index >= report->report.aggregates.size()) return 0;
  return report->report.aggregates[index].pass_count;
}

size_t sf_scan_feature_count(const sf_scan_report* report) {
  return report ? report->report.feature_ids.size() : 0;
}

const char* sf_scan_summary(const sf_scan_report* report) {
  return report ? report->summary.c_str() : "";
}

}  // extern "C"
