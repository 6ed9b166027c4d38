#include "sparsefit/scan.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sparsefit/errors.hpp"
#include "sparsefit/rng.hpp"

namespace sparsefit {

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

const std::vector<ModelSpec>& all_model_specs() {
  static const std::vector<ModelSpec> specs = [] {
    std::vector<ModelSpec> out;
    for (ZeroKind kind : {ZeroKind::none, ZeroKind::zero_inflated, ZeroKind::hurdle}) {
      for (Family family : kAllFamilies) out.push_back({family, kind});
    }
    return out;
  }();
  return specs;
}

std::string model_short_name(const ModelSpec& spec) {
  const std::string base = family_name(spec.family);
  switch (spec.kind) {
    case ZeroKind::none:
      return base;
    case ZeroKind::zero_inflated:
      return "zi" + (base == "poisson" ? std::string("p") : base);
    case ZeroKind::hurdle:
      return (base == "poisson" ? std::string("p") : base) + "h";
  }
  throw std::invalid_argument("model_short_name: unknown kind");
}

std::string model_label(const ModelSpec& spec) {
  static const char* base_label[] = {"Poisson", "negative binomial", "beta binomial",
                                     "beta negative binomial"};
  static const char* base_abbrev[] = {"P", "NB", "BB", "BNB"};
  const auto fi = static_cast<std::size_t>(spec.family);
  switch (spec.kind) {
    case ZeroKind::none:
      if (spec.family == Family::poisson) return "Poisson";
      return std::string(base_label[fi]) + " (" + base_abbrev[fi] + ")";
    case ZeroKind::zero_inflated:
      return "zero-inflated " + std::string(base_label[fi]) + " (ZI" + base_abbrev[fi] + ")";
    case ZeroKind::hurdle:
      return std::string(base_label[fi]) + " hurdle (" + base_abbrev[fi] + "H)";
  }
  throw std::invalid_argument("model_label: unknown kind");
}

ModelSpec parse_model_name(const std::string& name) {
  for (const auto& spec : all_model_specs()) {
    if (model_short_name(spec) == name) return spec;
  }
  throw std::invalid_argument("unknown model '" + name +
                              "' (expected one of poisson, nb, bb, bnb, zip, zinb, zibb, "
                              "zibnb, ph, nbh, bbh, bnbh)");
}

ScanReport scan_table(const CountTable& table, const ScanOptions& opts) {
  if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) {
    throw std::invalid_argument("scan_table: alpha must lie in (0,1)");
  }
  const std::vector<ModelSpec>& models = opts.models.empty() ? all_model_specs() : opts.models;

  ScanReport report;
  report.feature_ids = table.feature_ids;
  report.alpha = opts.alpha;
  report.bootstrap = opts.bootstrap;
  report.seed = opts.seed;
  for (const auto& spec : models) report.model_names.push_back(model_short_name(spec));

  const std::size_t n_jobs_total = table.features() * models.size();
  report.records.resize(n_jobs_total);

  auto run_job = [&](std::size_t job) {
    const std::size_t f = job / models.size();
    const std::size_t mi = job % models.size();
    const ModelSpec& spec = models[mi];

    FeatureModelResult rec;
    rec.feature_id = table.feature_ids[f];
    rec.model = model_short_name(spec);
    try {
      const CountVector data = table.row(f);
      GofOptions gof;
      gof.bootstrap = opts.bootstrap;
      gof.seed = derive_seed(derive_seed(opts.seed, f), mi);
      gof.jobs = 1;  // parallelism lives at the job level
      gof.resample = opts.resample;
      gof.fit = opts.fit;
      const KSReport ks = bootstrap_ks_pvalue(data, spec.family, spec.kind, gof);
      rec.ok = true;
      rec.phi = ks.fit.model.phi;
      rec.param_names = param_names(spec.family);
      rec.params = ks.fit.model.baseline.values();
      rec.loglik = ks.fit.loglik;
      rec.converged = ks.fit.converged;
      rec.case_tag = fit_case_name(ks.fit.case_tag);
      rec.d_n = ks.d_n;
      rec.p_value = ks.p_value;
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
    }
    report.records[job] = std::move(rec);
  };

  int jobs = opts.jobs > 0 ? opts.jobs
                           : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(n_jobs_total)));
  if (jobs == 1) {
    for (std::size_t job = 0; job < n_jobs_total; ++job) run_job(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t job = next.fetch_add(1); job < n_jobs_total;
             job = next.fetch_add(1)) {
          run_job(job);
        }
      });
    }
    for (auto& t : workers) t.join();
  }

  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    ModelAggregate agg;
    agg.name = model_short_name(models[mi]);
    agg.label = model_label(models[mi]);
    agg.total = static_cast<int>(table.features());
    for (std::size_t f = 0; f < table.features(); ++f) {
      const auto& rec = report.records[f * models.size() + mi];
      if (rec.ok && rec.p_value > opts.alpha) ++agg.pass_count;
    }
    report.aggregates.push_back(std::move(agg));
  }
  return report;
}

void write_scan_csv(const ScanReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "feature_id,model,status,converged,case,loglik,d_n,p_value,phi,params,error\n";
  for (const auto& rec : report.records) {
    out << rec.feature_id << ',' << rec.model << ',';
    if (rec.ok) {
      out << "ok," << (rec.converged ? "true" : "false") << ',' << rec.case_tag << ','
          << fmt_double(rec.loglik) << ',' << fmt_double(rec.d_n) << ','
          << fmt_double(rec.p_value) << ',' << fmt_double(rec.phi) << ',';
      for (std::size_t j = 0; j < rec.params.size(); ++j) {
        if (j > 0) out << ';';
        out << rec.param_names[j] << '=' << fmt_double(rec.params[j]);
      }
      out << ',';
    } else {
      std::string msg = rec.error;
      for (char& c : msg) {
        if (c == ',' || c == '\n') c = ';';
      }
      out << "failed,,,,,,,," << msg;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void write_scan_json(const ScanReport& report, const std::string& path) {
  nlohmann::ordered_json doc;
  doc["alpha"] = report.alpha;
  doc["bootstrap"] = report.bootstrap;
  doc["seed"] = report.seed;
  doc["models"] = report.model_names;

  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  const std::size_t n_models = report.model_names.size();
  for (std::size_t f = 0; f < report.feature_ids.size(); ++f) {
    nlohmann::ordered_json entry;
    entry["feature_id"] = report.feature_ids[f];
    nlohmann::ordered_json results;
    for (std::size_t mi = 0; mi < n_models; ++mi) {
      const auto& rec = report.records[f * n_models + mi];
      nlohmann::ordered_json r;
      if (rec.ok) {
        r["status"] = "ok";
        r["phi"] = rec.phi;
        nlohmann::ordered_json params;
        for (std::size_t j = 0; j < rec.params.size(); ++j) {
          params[rec.param_names[j]] = rec.params[j];
        }
        r["params"] = std::move(params);
        r["loglik"] = rec.loglik;
        r["converged"] = rec.converged;
        r["case"] = rec.case_tag;
        r["d_n"] = rec.d_n;
        r["p_value"] = rec.p_value;
      } else {
        r["status"] = "failed";
        r["error"] = rec.error;
      }
      results[rec.model] = std::move(r);
    }
    entry["results"] = std::move(results);
    features.push_back(std::move(entry));
  }
  doc["features"] = std::move(features);

  nlohmann::ordered_json aggregates = nlohmann::ordered_json::array();
  for (const auto& agg : report.aggregates) {
    nlohmann::ordered_json a;
    a["model"] = agg.name;
    a["label"] = agg.label;
    a["pass_count"] = agg.pass_count;
    a["total"] = agg.total;
    a["pass_fraction"] =
        agg.total > 0 ? static_cast<double>(agg.pass_count) / agg.total : 0.0;
    aggregates.push_back(std::move(a));
  }
  doc["aggregate"] = std::move(aggregates);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string format_aggregate_table(const ScanReport& report) {
  std::ostringstream out;
  std::size_t width = 12;
  for (const auto& agg : report.aggregates) width = std::max(width, agg.label.size());
  out << "Distribution" << std::string(width - 12, ' ') << "  Number  Percentage\n";
  for (const auto& agg : report.aggregates) {
    const double pct =
        agg.total > 0 ? 100.0 * static_cast<double>(agg.pass_count) / agg.total : 0.0;
    char pct_buf[16];
    std::snprintf(pct_buf, sizeof(pct_buf), "%.1f%%", std::min(pct, 100.0));
    out << agg.label << std::string(width - agg.label.size(), ' ') << "  "
        << std::setw(6) << agg.pass_count << "  " << std::setw(10) << pct_buf << '\n';
  }
  return out.str();
}

}  // namespace sparsefit
