/*
 * sparsefit C API
 *
 * Maximum-likelihood fitting of zero-inflated and hurdle count models,
 * Fisher-information confidence intervals, and parametric-bootstrap
 * Kolmogorov-Smirnov model checks.
 *
 * Conventions: every function returns SF_OK (0) or an error code; outputs go
 * through pointer arguments. Objects are opaque handles released with the
 * matching _free function. Handles are immutable after creation and may be
 * shared across threads. sf_last_error() returns a thread-local detail
 * message for the most recent failure on the calling thread.
 */

#ifndef SPARSEFIT_H
#define SPARSEFIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SF_API __attribute__((visibility("default")))

/* ---- error codes ------------------------------------------------------- */

enum {
  SF_OK = 0,
  SF_ERR_INVALID = 1,    /* bad argument or option value */
  SF_ERR_PARSE = 2,      /* malformed input file */
  SF_ERR_NUMERIC = 3,    /* optimization or matrix failure */
  SF_ERR_DEGENERATE = 4, /* data cannot identify the model (e.g. all zeros) */
  SF_ERR_BOUNDARY = 5,   /* asymptotics requested at a phi boundary */
  SF_ERR_IO = 6          /* file system failure */
};

SF_API const char* sf_strerror(int code);
SF_API const char* sf_last_error(void);
SF_API const char* sf_version(void);

/* ---- model identifiers -------------------------------------------------- */

typedef enum {
  SF_FAMILY_POISSON = 0,
  SF_FAMILY_NB = 1,
  SF_FAMILY_BB = 2,
  SF_FAMILY_BNB = 3
} sf_family;

typedef enum {
  SF_KIND_NONE = 0,
  SF_KIND_ZERO_INFLATED = 1,
  SF_KIND_HURDLE = 2
} sf_kind;

typedef enum {
  SF_CASE_BASELINE = 0,
  SF_CASE_HURDLE_CLOSED = 1,
  SF_CASE_ZI_CASE1 = 2,
  SF_CASE_ZI_CASE2 = 3
} sf_case_tag;

/* Number of baseline parameters of a family (1, 2, 3, 3). */
SF_API int sf_family_param_count(sf_family family);

/* ---- datasets ----------------------------------------------------------- */

typedef struct sf_dataset sf_dataset;

SF_API int sf_dataset_create(const int64_t* counts, size_t n, sf_dataset** out);
SF_API void sf_dataset_free(sf_dataset* dataset);
SF_API size_t sf_dataset_size(const sf_dataset* dataset);
SF_API size_t sf_dataset_nonzero(const sf_dataset* dataset);

/* ---- fitting ------------------------------------------------------------ */

typedef struct {
  int max_iterations; /* per start, default 500 */
  double tol;         /* projected-gradient tolerance, default 1e-7 */
  int starts;         /* deterministic multistarts, default 5 */
} sf_fit_options;

SF_API void sf_fit_options_init(sf_fit_options* opts);

typedef struct sf_fit_result sf_fit_result;

SF_API int sf_fit(const sf_dataset* dataset, sf_family family, sf_kind kind,
                  const sf_fit_options* opts, sf_fit_result** out);
SF_API void sf_fit_result_free(sf_fit_result* fit);

SF_API double sf_fit_phi(const sf_fit_result* fit);
SF_API int sf_fit_param_count(const sf_fit_result* fit);
SF_API double sf_fit_param(const sf_fit_result* fit, int index);
SF_API const char* sf_fit_param_name(const sf_fit_result* fit, int index);
SF_API double sf_fit_loglik(const sf_fit_result* fit);
SF_API int sf_fit_converged(const sf_fit_result* fit);
SF_API int sf_fit_iterations(const sf_fit_result* fit);
SF_API double sf_fit_grad_norm(const sf_fit_result* fit);
SF_API sf_case_tag sf_fit_case(const sf_fit_result* fit);

/* Wald confidence intervals. Row 0 is phi for zero-modified fits; baseline
 * fits list only the family parameters. `at_boundary` marks entries whose
 * interval is suppressed because phi-hat sits on {0, 1}. */
typedef struct {
  char name[16];
  double estimate;
  double std_error;
  double lower;
  double upper;
  int at_boundary;
} sf_interval;

SF_API int sf_fit_intervals(const sf_fit_result* fit, double level, sf_interval* out,
                            size_t capacity, size_t* count);

/* ---- goodness of fit ---------------------------------------------------- */

typedef struct {
  int bootstrap;      /* replicate count B, default 1000 */
  uint64_t seed;      /* master seed, default 0 */
  int jobs;           /* worker threads, 0 = hardware concurrency */
  int resample;       /* nonzero: refit each replicate on a resample (default) */
  sf_fit_options fit;
} sf_gof_options;

SF_API void sf_gof_options_init(sf_gof_options* opts);

typedef struct sf_ks_report sf_ks_report;

/* KS distance between the dataset and a fitted model. */
SF_API int sf_ks_statistic(const sf_dataset* dataset, const sf_fit_result* fit, double* out);

/* Parametric-bootstrap KS p-value; deterministic for a fixed seed at any
 * jobs setting. */
SF_API int sf_bootstrap_ks(const sf_dataset* dataset, sf_family family, sf_kind kind,
                           const sf_gof_options* opts, sf_ks_report** out);
SF_API void sf_ks_report_free(sf_ks_report* report);

SF_API double sf_ks_d(const sf_ks_report* report);
SF_API double sf_ks_pvalue(const sf_ks_report* report);
SF_API int sf_ks_bootstrap(const sf_ks_report* report);
SF_API int sf_ks_fit_failures(const sf_ks_report* report);
SF_API uint64_t sf_ks_seed(const sf_ks_report* report);
/* Copies up to `capacity` replicate statistics; returns the total count. */
SF_API size_t sf_ks_replicates(const sf_ks_report* report, double* out, size_t capacity);
/* Fitted model behind the report (owned by the report; do not free). */
SF_API const sf_fit_result* sf_ks_fit(const sf_ks_report* report);

/* ---- sampling ----------------------------------------------------------- */

/* Draws `count` observations from the model (phi ignored for SF_KIND_NONE).
 * `params` lists the baseline parameters in canonical order. */
SF_API int sf_sample(sf_family family, sf_kind kind, double phi, const double* params,
                     size_t n_params, size_t count, uint64_t seed, int64_t* out);

/* ---- count tables ------------------------------------------------------- */

typedef struct sf_table sf_table;

SF_API int sf_table_read(const char* path, sf_table** out);
SF_API int sf_table_write(const sf_table* table, const char* path);
SF_API void sf_table_free(sf_table* table);

SF_API size_t sf_table_features(const sf_table* table);
SF_API size_t sf_table_samples(const sf_table* table);
SF_API const char* sf_table_feature_id(const sf_table* table, size_t index);
SF_API int sf_table_find_feature(const sf_table* table, const char* id, size_t* index);
SF_API int sf_table_row(const sf_table* table, size_t index, sf_dataset** out);

/* Table of independent rows simulated from one model. */
SF_API int sf_table_synthesize(sf_family family, sf_kind kind, double phi,
                               const double* params, size_t n_params, size_t n_samples,
                               size_t n_features, uint64_t seed, sf_table** out);

/* ---- model scan --------------------------------------------------------- */

typedef struct {
  double alpha;   /* KS pass threshold, default 0.05 */
  int bootstrap;  /* default 1000 */
  uint64_t seed;
  int jobs;       /* 0 = hardware concurrency */
  int resample;
  sf_fit_options fit;
} sf_scan_options;

SF_API void sf_scan_options_init(sf_scan_options* opts);

typedef struct sf_scan_report sf_scan_report;

/* Fits each named model ("poisson", "zinb", "bbh", ...) to every feature row
 * and bootstraps its KS p-value. NULL/0 model list means all twelve. */
SF_API int sf_scan(const sf_table* table, const char* const* models, size_t n_models,
                   const sf_scan_options* opts, sf_scan_report** out);
SF_API void sf_scan_report_free(sf_scan_report* report);

SF_API int sf_scan_write_csv(const sf_scan_report* report, const char* path);
SF_API int sf_scan_write_json(const sf_scan_report* report, const char* path);

SF_API size_t sf_scan_model_count(const sf_scan_report* report);
SF_API const char* sf_scan_model_name(const sf_scan_report* report, size_t index);
SF_API const char* sf_scan_model_label(const sf_scan_report* report, size_t index);
SF_API int sf_scan_pass_count(const sf_scan_report* report, size_t index);
SF_API size_t sf_scan_feature_count(const sf_scan_report* report);
/* Aggregate counts rendered as a fixed-width text table (owned by report). */
SF_API const char* sf_scan_summary(const sf_scan_report* report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPARSEFIT_H */
