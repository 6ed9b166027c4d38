// sparsefit command-line tool: fit zero-inflated/hurdle count models, run the
// bootstrap KS gate, scan count tables over candidate models, and simulate
// synthetic tables. All statistics go through the sparsefit C API.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparsefit.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitNumeric = 4;

int exit_code_for(int rc) {
  switch (rc) {
    case SF_OK:
      return kExitOk;
    case SF_ERR_INVALID:
      return kExitUsage;
    case SF_ERR_PARSE:
    case SF_ERR_IO:
      return kExitParse;
    default:
      return kExitNumeric;
  }
}

[[nodiscard]] int fail(int rc, const std::string& context) {
  std::cerr << "error: " << context << ": " << sf_strerror(rc);
  const char* detail = sf_last_error();
  if (detail && *detail) std::cerr << " (" << detail << ")";
  std::cerr << "\n";
  return exit_code_for(rc);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

const std::map<std::string, sf_family> kFamilies = {{"poisson", SF_FAMILY_POISSON},
                                                    {"nb", SF_FAMILY_NB},
                                                    {"bb", SF_FAMILY_BB},
                                                    {"bnb", SF_FAMILY_BNB}};
const std::map<std::string, sf_kind> kKinds = {{"none", SF_KIND_NONE},
                                               {"zi", SF_KIND_ZERO_INFLATED},
                                               {"hurdle", SF_KIND_HURDLE}};

struct TableDeleter {
  void operator()(sf_table* t) const { sf_table_free(t); }
};
struct DatasetDeleter {
  void operator()(sf_dataset* d) const { sf_dataset_free(d); }
};
struct FitDeleter {
  void operator()(sf_fit_result* f) const { sf_fit_result_free(f); }
};
struct KsDeleter {
  void operator()(sf_ks_report* r) const { sf_ks_report_free(r); }
};
struct ScanDeleter {
  void operator()(sf_scan_report* r) const { sf_scan_report_free(r); }
};

using TablePtr = std::unique_ptr<sf_table, TableDeleter>;
using DatasetPtr = std::unique_ptr<sf_dataset, DatasetDeleter>;
using FitPtr = std::unique_ptr<sf_fit_result, FitDeleter>;
using KsPtr = std::unique_ptr<sf_ks_report, KsDeleter>;
using ScanPtr = std::unique_ptr<sf_scan_report, ScanDeleter>;

// Loads the table and pulls one feature row: the only row of a single-row
// file, or the row named by --feature.
int load_feature(const std::string& path, const std::string& feature, DatasetPtr& out,
                 std::string& feature_id) {
  sf_table* raw_table = nullptr;
  if (int rc = sf_table_read(path.c_str(), &raw_table); rc != SF_OK) {
    return fail(rc, "reading '" + path + "'");
  }
  TablePtr table(raw_table);

  size_t row = 0;
  if (!feature.empty()) {
    if (int rc = sf_table_find_feature(table.get(), feature.c_str(), &row); rc != SF_OK) {
      return fail(rc, "selecting feature");
    }
  } else if (sf_table_features(table.get()) != 1) {
    std::cerr << "error: '" << path << "' has " << sf_table_features(table.get())
              << " features; select one with --feature\n";
    return kExitUsage;
  }
  feature_id = sf_table_feature_id(table.get(), row);

  sf_dataset* raw = nullptr;
  if (int rc = sf_table_row(table.get(), row, &raw); rc != SF_OK) {
    return fail(rc, "extracting feature row");
  }
  out.reset(raw);
  return kExitOk;
}

std::vector<sf_interval> fetch_intervals(const sf_fit_result* fit, double level, int* rc) {
  size_t count = 0;
  *rc = sf_fit_intervals(fit, level, nullptr, 0, &count);
  if (*rc != SF_OK) return {};
  std::vector<sf_interval> intervals(count);
  *rc = sf_fit_intervals(fit, level, intervals.data(), count, &count);
  intervals.resize(count);
  return intervals;
}

nlohmann::ordered_json fit_to_json(const sf_fit_result* fit, const std::string& family,
                                   const std::string& kind, const std::string& feature_id,
                                   const std::vector<sf_interval>& intervals, double level) {
  nlohmann::ordered_json doc;
  doc["feature_id"] = feature_id;
  doc["family"] = family;
  doc["kind"] = kind;
  doc["phi"] = sf_fit_phi(fit);
  nlohmann::ordered_json params;
  for (int i = 0; i < sf_fit_param_count(fit); ++i) {
    params[sf_fit_param_name(fit, i)] = sf_fit_param(fit, i);
  }
  doc["params"] = std::move(params);
  doc["loglik"] = sf_fit_loglik(fit);
  doc["converged"] = sf_fit_converged(fit) != 0;
  doc["iterations"] = sf_fit_iterations(fit);
  doc["grad_norm"] = sf_fit_grad_norm(fit);
  static const char* kCaseNames[] = {"baseline", "hurdle_closed", "zi_case1", "zi_case2"};
  doc["case"] = kCaseNames[sf_fit_case(fit)];
  nlohmann::ordered_json ci_list = nlohmann::ordered_json::array();
  for (const auto& ci : intervals) {
    nlohmann::ordered_json entry;
    entry["name"] = ci.name;
    entry["estimate"] = ci.estimate;
    entry["level"] = level;
    if (ci.at_boundary) {
      entry["at_boundary"] = true;
    } else {
      entry["std_error"] = ci.std_error;
      entry["lower"] = ci.lower;
      entry["upper"] = ci.upper;
    }
    ci_list.push_back(std::move(entry));
  }
  doc["intervals"] = std::move(ci_list);
  return doc;
}

int write_json_file(const nlohmann::ordered_json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    return kExitParse;
  }
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int run_fit(const std::string& input, const std::string& feature, const std::string& family,
            const std::string& kind, const sf_fit_options& fit_opts, double level,
            const std::string& out_path) {
  DatasetPtr data;
  std::string feature_id;
  if (int rc = load_feature(input, feature, data, feature_id); rc != kExitOk) return rc;

  sf_fit_result* raw = nullptr;
  if (int rc = sf_fit(data.get(), kFamilies.at(family), kKinds.at(kind), &fit_opts, &raw);
      rc != SF_OK) {
    return fail(rc, "fitting " + kind + " " + family);
  }
  FitPtr fit(raw);

  int rc = SF_OK;
  const auto intervals = fetch_intervals(fit.get(), level, &rc);
  if (rc != SF_OK) return fail(rc, "computing confidence intervals");

  std::cout << "feature: " << feature_id << "\n"
            << "model: " << kind << " " << family << "\n"
            << "n: " << sf_dataset_size(data.get())
            << "  m: " << sf_dataset_nonzero(data.get()) << "\n"
            << "case: "
            << fit_to_json(fit.get(), family, kind, feature_id, {}, level)["case"]
                   .get<std::string>()
            << "\n"
            << "loglik: " << fmt(sf_fit_loglik(fit.get())) << "\n"
            << "converged: " << (sf_fit_converged(fit.get()) ? "yes" : "no")
            << " (iterations " << sf_fit_iterations(fit.get()) << ", grad norm "
            << fmt(sf_fit_grad_norm(fit.get())) << ")\n";
  for (const auto& ci : intervals) {
    std::cout << "  " << ci.name << " = " << fmt(ci.estimate);
    if (ci.at_boundary) {
      std::cout << "  (boundary estimate; Wald interval suppressed)";
    } else {
      std::cout << "  se " << fmt(ci.std_error) << "  " << fmt(100.0 * level) << "% CI ["
                << fmt(ci.lower) << ", " << fmt(ci.upper) << "]";
    }
    std::cout << "\n";
  }

  if (!out_path.empty()) {
    const auto doc = fit_to_json(fit.get(), family, kind, feature_id, intervals, level);
    if (int wrc = write_json_file(doc, out_path); wrc != kExitOk) return wrc;
  }
  return sf_fit_converged(fit.get()) ? kExitOk : kExitNumeric;
}

int run_gof(const std::string& input, const std::string& feature, const std::string& family,
            const std::string& kind, const sf_gof_options& gof_opts,
            const std::string& out_path) {
  DatasetPtr data;
  std::string feature_id;
  if (int rc = load_feature(input, feature, data, feature_id); rc != kExitOk) return rc;

  sf_ks_report* raw = nullptr;
  if (int rc = sf_bootstrap_ks(data.get(), kFamilies.at(family), kKinds.at(kind), &gof_opts,
                               &raw);
      rc != SF_OK) {
    return fail(rc, "bootstrap KS for " + kind + " " + family);
  }
  KsPtr report(raw);

  std::cout << "feature: " << feature_id << "\n"
            << "model: " << kind << " " << family << "\n"
            << "D_n: " << fmt(sf_ks_d(report.get())) << "\n"
            << "p_value: " << fmt(sf_ks_pvalue(report.get())) << "\n"
            << "bootstrap: " << sf_ks_bootstrap(report.get()) << "\n"
            << "fit_failures: " << sf_ks_fit_failures(report.get()) << "\n"
            << "seed: " << sf_ks_seed(report.get()) << "\n";

  if (!out_path.empty()) {
    nlohmann::ordered_json doc;
    doc["feature_id"] = feature_id;
    doc["family"] = family;
    doc["kind"] = kind;
    doc["d_n"] = sf_ks_d(report.get());
    doc["p_value"] = sf_ks_pvalue(report.get());
    doc["bootstrap"] = sf_ks_bootstrap(report.get());
    doc["fit_failures"] = sf_ks_fit_failures(report.get());
    doc["seed"] = sf_ks_seed(report.get());
    std::vector<double> stats(sf_ks_replicates(report.get(), nullptr, 0));
    sf_ks_replicates(report.get(), stats.data(), stats.size());
    doc["replicate_stats"] = stats;
    if (int wrc = write_json_file(doc, out_path); wrc != kExitOk) return wrc;
  }
  return kExitOk;
}

int run_scan(const std::string& input, const std::vector<std::string>& models,
             const sf_scan_options& scan_opts, const std::string& out_csv,
             const std::string& out_json) {
  sf_table* raw_table = nullptr;
  if (int rc = sf_table_read(input.c_str(), &raw_table); rc != SF_OK) {
    return fail(rc, "reading '" + input + "'");
  }
  TablePtr table(raw_table);

  std::vector<const char*> model_ptrs;
  model_ptrs.reserve(models.size());
  for (const auto& m : models) model_ptrs.push_back(m.c_str());

  sf_scan_report* raw = nullptr;
  if (int rc = sf_scan(table.get(), model_ptrs.empty() ? nullptr : model_ptrs.data(),
                       model_ptrs.size(), &scan_opts, &raw);
      rc != SF_OK) {
    return fail(rc, "scanning table");
  }
  ScanPtr report(raw);

  std::cout << "features: " << sf_scan_feature_count(report.get()) << "\n"
            << "alpha: " << fmt(scan_opts.alpha) << "  bootstrap: " << scan_opts.bootstrap
            << "  seed: " << scan_opts.seed << "\n\n"
            << sf_scan_summary(report.get());

  if (!out_csv.empty()) {
    if (int rc = sf_scan_write_csv(report.get(), out_csv.c_str()); rc != SF_OK) {
      return fail(rc, "writing '" + out_csv + "'");
    }
  }
  if (!out_json.empty()) {
    if (int rc = sf_scan_write_json(report.get(), out_json.c_str()); rc != SF_OK) {
      return fail(rc, "writing '" + out_json + "'");
    }
  }
  return kExitOk;
}

int run_simulate(const std::string& family, const std::string& kind, double phi,
                 const std::vector<double>& params, size_t n, size_t features,
                 uint64_t seed, const std::string& out_path) {
  const int expected = sf_family_param_count(kFamilies.at(family));
  if (static_cast<int>(params.size()) != expected) {
    std::cerr << "error: family '" << family << "' takes " << expected
              << " parameters, got " << params.size() << "\n";
    return kExitUsage;
  }
  sf_table* raw = nullptr;
  if (int rc = sf_table_synthesize(kFamilies.at(family), kKinds.at(kind), phi, params.data(),
                                   params.size(), n, features, seed, &raw);
      rc != SF_OK) {
    return fail(rc, "simulating table");
  }
  TablePtr table(raw);
  if (int rc = sf_table_write(table.get(), out_path.c_str()); rc != SF_OK) {
    return fail(rc, "writing '" + out_path + "'");
  }
  std::cout << "wrote " << features << " x " << n << " table to " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-inflated and hurdle count-model fitting, bootstrap KS model checks, "
               "and count-table model scans"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sf_version()));

  std::string input, feature, family = "poisson", kind = "none", out_path, out_json;
  std::vector<std::string> models;
  std::vector<double> params;
  double level = 0.95, alpha = 0.05, phi = 0.0;
  uint64_t seed = 0;
  size_t sim_n = 100, sim_features = 1;
  int bootstrap = 1000, jobs = 0, max_iter = 500;
  double tol = 1e-7;
  bool no_resample = false;

  auto add_family_kind = [&](CLI::App* cmd) {
    cmd->add_option("--family", family, "Baseline family: poisson|nb|bb|bnb")
        ->required()
        ->check(CLI::IsMember({"poisson", "nb", "bb", "bnb"}));
    cmd->add_option("--kind", kind, "Zero modification: none|zi|hurdle")
        ->required()
        ->check(CLI::IsMember({"none", "zi", "hurdle"}));
  };
  auto add_fit_opts = [&](CLI::App* cmd) {
    cmd->add_option("--max-iter", max_iter, "Optimizer iteration cap per start");
    cmd->add_option("--tol", tol, "Projected-gradient tolerance");
  };

  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit one model to one feature");
  fit_cmd->add_option("input", input, "Count table CSV")->required();
  add_family_kind(fit_cmd);
  fit_cmd->add_option("--feature", feature, "Feature id (required for multi-row tables)");
  fit_cmd->add_option("--level", level, "Confidence level for Wald intervals");
  add_fit_opts(fit_cmd);
  fit_cmd->add_option("--out", out_path, "Write the fit as JSON");

  CLI::App* gof_cmd = app.add_subcommand("gof", "Bootstrap KS goodness-of-fit test");
  gof_cmd->add_option("input", input, "Count table CSV")->required();
  add_family_kind(gof_cmd);
  gof_cmd->add_option("--feature", feature, "Feature id (required for multi-row tables)");
  gof_cmd->add_option("--bootstrap", bootstrap, "Bootstrap replicate count B");
  gof_cmd->add_option("--seed", seed, "Master RNG seed");
  gof_cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
  gof_cmd->add_flag("--no-resample", no_resample,
                    "Refit replicates on the original data instead of a resample");
  add_fit_opts(gof_cmd);
  gof_cmd->add_option("--out", out_path, "Write the report as JSON");

  CLI::App* scan_cmd = app.add_subcommand("scan", "Fit candidate models to every feature");
  scan_cmd->add_option("input", input, "Count table CSV")->required();
  scan_cmd
      ->add_option("--models", models,
                   "Comma-separated model list (default: all twelve candidates)")
      ->delimiter(',');
  scan_cmd->add_option("--alpha", alpha, "KS pass threshold");
  scan_cmd->add_option("--bootstrap", bootstrap, "Bootstrap replicate count B");
  scan_cmd->add_option("--seed", seed, "Master RNG seed");
  scan_cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
  scan_cmd->add_flag("--no-resample", no_resample,
                     "Refit replicates on the original data instead of a resample");
  add_fit_opts(scan_cmd);
  scan_cmd->add_option("--out", out_path, "Write per-feature results CSV");
  scan_cmd->add_option("--json", out_json, "Write the full report as JSON");

  CLI::App* sim_cmd = app.add_subcommand("simulate", "Write a synthetic count table");
  add_family_kind(sim_cmd);
  sim_cmd->add_option("--phi", phi, "Zero weight for zi/hurdle kinds");
  sim_cmd->add_option("--params", params, "Baseline parameters, comma separated")
      ->required()
      ->delimiter(',');
  sim_cmd->add_option("--n", sim_n, "Samples per feature");
  sim_cmd->add_option("--features", sim_features, "Feature rows");
  sim_cmd->add_option("--seed", seed, "Master RNG seed");
  sim_cmd->add_option("--out", out_path, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  sf_fit_options fit_opts;
  sf_fit_options_init(&fit_opts);
  fit_opts.max_iterations = max_iter;
  fit_opts.tol = tol;

  if (fit_cmd->parsed()) {
    return run_fit(input, feature, family, kind, fit_opts, level, out_path);
  }
  if (gof_cmd->parsed()) {
    sf_gof_options gof_opts;
    sf_gof_options_init(&gof_opts);
    gof_opts.bootstrap = bootstrap;
    gof_opts.seed = seed;
    gof_opts.jobs = jobs;
    gof_opts.resample = no_resample ? 0 : 1;
    gof_opts.fit = fit_opts;
    return run_gof(input, feature, family, kind, gof_opts, out_path);
  }
  if (scan_cmd->parsed()) {
    sf_scan_options scan_opts;
    sf_scan_options_init(&scan_opts);
    scan_opts.alpha = alpha;
    scan_opts.bootstrap = bootstrap;
    scan_opts.seed = seed;
    scan_opts.jobs = jobs;
    scan_opts.resample = no_resample ? 0 : 1;
    scan_opts.fit = fit_opts;
    return run_scan(input, models, scan_opts, out_path, out_json);
  }
  if (sim_cmd->parsed()) {
    return run_simulate(family, kind, phi, params, sim_n, sim_features, seed, out_path);
  }
  return kExitUsage;
}
