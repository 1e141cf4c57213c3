#include "sketchlb/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "sketchlb/distinguishers.hpp"

namespace sketchlb {

namespace {

constexpr std::uint64_t kMatrixLabel = 0x4d41545249580000ULL;
constexpr std::uint64_t kInputLabel = 0x494e505554000000ULL;
constexpr std::uint64_t kTvLabel = 0x5456000000000000ULL;
constexpr std::uint64_t kEventLabel = 0x4556454e54000000ULL;

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* to_string(Conditioning c) { return c == Conditioning::Analytic ? "analytic" : "mc"; }

}  // namespace

void validate(const ExperimentConfig& config) {
  if (config.trials < 100) throw std::invalid_argument("experiment: trials must be >= 100");
  for (std::size_t m : config.m_list) {
    if (m < 1 || m > config.n) {
      throw std::invalid_argument("experiment: every m must satisfy 1 <= m <= n (got m=" +
                                  std::to_string(m) + ")");
    }
  }
}

std::vector<std::size_t> auto_m_list(std::size_t n, double p, double eps) {
  std::vector<std::size_t> out;
  std::size_t m = std::max<std::size_t>(1, measurement_threshold(n, p, eps));
  for (; m < n; m *= 2) out.push_back(m);
  out.push_back(n);
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  ExperimentResult result;
  result.config = config;
  result.params = derive_params(config.n, config.p, config.eps);
  const HardInstanceParams& params = result.params;
  result.m_threshold = measurement_threshold(params.n, params.p, params.eps);
  result.m_list = config.m_list.empty() ? auto_m_list(params.n, params.p, params.eps) : config.m_list;

  BoundConfig bound_config;
  bound_config.conditioning = config.conditioning;
  bound_config.mc_trials = config.trials;
  bound_config.seed = derive_seed(config.seed, kEventLabel);

  for (std::size_t m : result.m_list) {
    const auto start = std::chrono::steady_clock::now();
    const SketchMatrix a = make_orthonormal_sketch(m, params.n, derive_seed(config.seed, kMatrixLabel + m));
    const ColumnSet set = small_column_set(a);
    const BoundReport bound = success_probability_bound(a, params, bound_config);

    const std::vector<Estimator> estimators = {
        lr_estimator(mixture_from_sketch(a, set, params), params),
        [](const SketchMatrix& mat, const Vector& sketch, double p) {
          return plugin_estimator(mat, sketch, p);
        }};
    const auto rates =
        evaluate_estimators(estimators, params, a, config.trials, derive_seed(config.seed, kInputLabel));
    const ConditionedTv tv =
        conditioned_sketch_tv(params, a, config.trials, derive_seed(config.seed, kTvLabel));

    ExperimentRecord rec;
    rec.m = m;
    rec.chi2_exact = bound.chi2_exact;
    rec.log1p_chi2 = bound.log1p_chi2;
    rec.tv_upper = bound.tv_tilde;
    rec.success_ceiling = bound.success_ceiling;
    rec.lr_success = rates[0].rate;
    rec.lr_se = rates[0].std_error;
    rec.plugin_success = rates[1].rate;
    rec.plugin_se = rates[1].std_error;
    rec.tv_hat = tv.tv.value;
    rec.tv_hat_se = tv.tv.std_error;
    rec.lemma1_lhs = bound.lemma1_lhs;
    rec.lemma1_rhs = bound.lemma1_rhs;
    rec.lemma1_holds = bound.lemma1_holds;
    rec.lemma1_preconditions_met = bound.lemma1_preconditions_met;
    rec.complement_size = bound.complement_size;
    rec.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.records.push_back(rec);
  }
  return result;
}

nlohmann::json to_json(const ExperimentResult& result) {
  const auto& c = result.config;
  const auto& params = result.params;
  nlohmann::json config = {{"n", c.n},
                           {"p", c.p},
                           {"eps", params.eps},
                           {"seed", c.seed},
                           {"trials", c.trials},
                           {"m_list", result.m_list},
                           {"conditioning", to_string(c.conditioning)},
                           {"t_p", params.t_p},
                           {"C", params.C},
                           {"C1", params.C1},
                           {"spike", params.spike},
                           {"m_threshold", result.m_threshold}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : result.records) {
    rows.push_back({{"m", r.m},
                    {"chi2_exact", number_or_null(r.chi2_exact)},
                    {"log1p_chi2", r.log1p_chi2},
                    {"tv_upper", r.tv_upper},
                    {"success_ceiling", r.success_ceiling},
                    {"lr_success", r.lr_success},
                    {"lr_se", r.lr_se},
                    {"plugin_success", r.plugin_success},
                    {"plugin_se", r.plugin_se},
                    {"tv_hat", r.tv_hat},
                    {"tv_hat_se", r.tv_hat_se},
                    {"lemma1_lhs", number_or_null(r.lemma1_lhs)},
                    {"lemma1_rhs", number_or_null(r.lemma1_rhs)},
                    {"lemma1_holds", r.lemma1_holds},
                    {"lemma1_preconditions_met", r.lemma1_preconditions_met},
                    {"complement_size", r.complement_size},
                    {"wall_time", r.wall_time}});
  }
  return {{"config", config}, {"results", rows}};
}

void write_csv(std::ostream& out, const ExperimentResult& result) {
  out << "m,chi2_exact,log1p_chi2,tv_upper,success_ceiling,lr_success,lr_se,plugin_success,"
         "plugin_se,tv_hat,tv_hat_se,lemma1_lhs,lemma1_rhs,lemma1_holds,"
         "lemma1_preconditions_met,complement_size,wall_time\n";
  for (const auto& r : result.records) {
    out << r.m << ',' << fmt(r.chi2_exact) << ',' << fmt(r.log1p_chi2) << ',' << fmt(r.tv_upper)
        << ',' << fmt(r.success_ceiling) << ',' << fmt(r.lr_success) << ',' << fmt(r.lr_se) << ','
        << fmt(r.plugin_success) << ',' << fmt(r.plugin_se) << ',' << fmt(r.tv_hat) << ','
        << fmt(r.tv_hat_se) << ',' << fmt(r.lemma1_lhs) << ',' << fmt(r.lemma1_rhs) << ','
        << (r.lemma1_holds ? "true" : "false") << ','
        << (r.lemma1_preconditions_met ? "true" : "false") << ',' << r.complement_size << ','
        << fmt(r.wall_time) << '\n';
  }
}

void write_result(std::ostream& out, const ExperimentResult& result, OutputFormat format) {
  if (format == OutputFormat::Json) {
    out << to_json(result).dump(2) << '\n';
  } else {
    write_csv(out, result);
  }
}

std::vector<SweepRow> run_sweep(double p, std::optional<double> eps, std::size_t n_min,
                                std::size_t n_max) {
  if (n_min == 0 || n_max < n_min) throw std::invalid_argument("sweep: need 1 <= n_min <= n_max");
  std::vector<SweepRow> rows;
  for (std::size_t n = n_min; n <= n_max; n *= 2) {
    const HardInstanceParams params = derive_params(n, p, eps);
    SweepRow row;
    row.n = n;
    row.t_p = params.t_p;
    row.C = params.C;
    row.C1 = params.C1;
    row.spike = params.spike;
    row.m_threshold_real = measurement_threshold_real(n, p, params.eps);
    row.m_threshold = measurement_threshold(n, p, params.eps);
    row.chi2_bound_at_threshold = chi2_closed_form_bound(params, row.m_threshold_real);
    rows.push_back(row);
    if (n > n_max / 2) break;
  }
  return rows;
}

void write_sweep(std::ostream& out, const std::vector<SweepRow>& rows, double p, double eps,
                 OutputFormat format) {
  if (format == OutputFormat::Json) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& r : rows) {
      list.push_back({{"n", r.n},
                      {"t_p", r.t_p},
                      {"C", r.C},
                      {"C1", r.C1},
                      {"spike", r.spike},
                      {"m_threshold_real", r.m_threshold_real},
                      {"m_threshold", r.m_threshold},
                      {"chi2_bound_at_threshold", r.chi2_bound_at_threshold}});
    }
    out << nlohmann::json{{"config", {{"p", p}, {"eps", eps}}}, {"results", list}}.dump(2) << '\n';
    return;
  }
  out << "n,t_p,C,C1,spike,m_threshold_real,m_threshold,chi2_bound_at_threshold\n";
  for (const auto& r : rows) {
    out << r.n << ',' << fmt(r.t_p) << ',' << fmt(r.C) << ',' << fmt(r.C1) << ',' << fmt(r.spike)
        << ',' << fmt(r.m_threshold_real) << ',' << r.m_threshold << ','
        << fmt(r.chi2_bound_at_threshold) << '\n';
  }
}

}  // namespace sketchlb
