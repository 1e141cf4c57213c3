#include "sketchlb/bound_engine.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sketchlb/divergence.hpp"
#include "sketchlb/logsumexp.hpp"

namespace sketchlb {

double measurement_threshold_real(std::size_t n, double p, double eps) {
  const HardInstanceParams params = derive_params(n, p, eps);
  const double nn = static_cast<double>(n);
  return eps / (100.0 * params.C1 * params.C1) * std::pow(nn, 1.0 - 2.0 / p) * std::log(nn);
}

std::size_t measurement_threshold(std::size_t n, double p, double eps) {
  return static_cast<std::size_t>(std::floor(measurement_threshold_real(n, p, eps)));
}

double chi2_closed_form_bound(const HardInstanceParams& params, double m) {
  if (!(m >= 0.0)) throw std::invalid_argument("chi2_closed_form_bound: m must be >= 0");
  const double n = static_cast<double>(params.n);
  const double p = params.p;
  const double c1_4 = std::pow(params.C1, 4);
  return 1.03 * c1_4 *
         (std::pow(n, -2.0 + 4.0 / p + params.eps) * m + std::pow(n, 2.0 / p - 1.0) * std::sqrt(m));
}

double chi2_closed_form_bound(const HardInstanceParams& params, const SketchMatrix& a) {
  return chi2_closed_form_bound(params, static_cast<double>(a.rows()));
}

Lemma1Result lemma1_check(const SketchMatrix& a, const HardInstanceParams& params) {
  if (a.cols() != params.n) throw std::invalid_argument("lemma1_check: matrix width differs from n");
  const ColumnSet set = small_column_set(a);
  const Matrix columns = gather_columns(a, set.indices);
  const double log_k = std::log(static_cast<double>(set.size()));
  const std::vector<double> log_weights(set.size(), -log_k);
  // C1^2 n^(2/p) = spike^2
  const double scale = params.spike * params.spike;

  Lemma1Result r;
  r.set_size = set.size();
  r.log_lhs = log_gram_exp_sum(columns, log_weights, scale);
  r.lhs = std::exp(r.log_lhs);
  r.rhs = chi2_closed_form_bound(params, a) + 1.0;
  r.holds = r.log_lhs <= std::log(r.rhs) + std::log1p(1e-9);
  const double n = static_cast<double>(params.n);
  r.preconditions_met =
      static_cast<double>(a.rows()) < measurement_threshold_real(params.n, params.p, params.eps) &&
      100.0 * static_cast<double>(set.size()) >= 99.0 * n;
  return r;
}

ChainTerms compose_chain(double log1p_chi2, std::size_t complement_size, std::size_t n,
                         double cond_null_term, double cond_spiked_term) {
  ChainTerms t;
  t.tv_tilde = tv_upper_from_log1p_chi2(std::max(0.0, log1p_chi2));
  t.tv_bar = std::min(1.0, t.tv_tilde + static_cast<double>(complement_size) / static_cast<double>(n));
  t.tv_total = std::min(1.0, t.tv_bar + cond_null_term + cond_spiked_term);
  t.success_ceiling = 0.5 * (1.0 + t.tv_total);
  return t;
}

BoundReport success_probability_bound(const SketchMatrix& a, const HardInstanceParams& params,
                                      const BoundConfig& config) {
  BoundReport r;
  r.m_threshold = measurement_threshold(params.n, params.p, params.eps);
  const Lemma1Result lemma = lemma1_check(a, params);
  r.lemma1_lhs = lemma.lhs;
  r.lemma1_rhs = lemma.rhs;
  r.lemma1_holds = lemma.holds;
  r.lemma1_preconditions_met = lemma.preconditions_met;
  r.chi2_bound = chi2_closed_form_bound(params, a);
  // chi2(E~2 || E1bar) = lemma1 lhs - 1, both being sum_{ij} p_i p_j e^{spike^2 <A_i,A_j>} - 1.
  r.log1p_chi2 = std::max(0.0, lemma.log_lhs);
  r.chi2_exact = std::expm1(r.log1p_chi2);
  r.within_chi2_budget = r.chi2_exact <= config.chi2_budget;
  r.complement_size = params.n - lemma.set_size;

  if (config.conditioning == Conditioning::Analytic) {
    r.cond_null_term = 0.01;
    r.cond_spiked_term = 0.01;
  } else {
    r.cond_null_term =
        event_probability_mc(params, TruncationEvent::EComplement, config.mc_trials, config.seed).value;
    r.cond_spiked_term =
        event_probability_mc(params, TruncationEvent::FComplement, config.mc_trials,
                             derive_seed(config.seed, 1))
            .value;
  }
  const ChainTerms chain =
      compose_chain(r.log1p_chi2, r.complement_size, params.n, r.cond_null_term, r.cond_spiked_term);
  r.tv_tilde = chain.tv_tilde;
  r.tv_bar = chain.tv_bar;
  r.tv_total = chain.tv_total;
  r.success_ceiling = chain.success_ceiling;
  return r;
}

namespace {
nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}
}  // namespace

void to_json(nlohmann::json& j, const BoundReport& r) {
  j = nlohmann::json{{"m_threshold", r.m_threshold},
                     {"lemma1_lhs", number_or_null(r.lemma1_lhs)},
                     {"lemma1_rhs", number_or_null(r.lemma1_rhs)},
                     {"lemma1_holds", r.lemma1_holds},
                     {"lemma1_preconditions_met", r.lemma1_preconditions_met},
                     {"chi2_bound", number_or_null(r.chi2_bound)},
                     {"log1p_chi2", r.log1p_chi2},
                     {"chi2_exact", number_or_null(r.chi2_exact)},
                     {"within_chi2_budget", r.within_chi2_budget},
                     {"complement_size", r.complement_size},
                     {"cond_null_term", r.cond_null_term},
                     {"cond_spiked_term", r.cond_spiked_term},
                     {"tv_tilde", r.tv_tilde},
                     {"tv_bar", r.tv_bar},
                     {"tv_total", r.tv_total},
                     {"success_ceiling", r.success_ceiling}};
}

}  // namespace sketchlb
