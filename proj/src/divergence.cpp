#include "sketchlb/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "mc_stats.hpp"
#include "sketchlb/logsumexp.hpp"
#include "sketchlb/parallel.hpp"

namespace sketchlb {

namespace {

const double kLogTwoPi = std::log(2.0 * std::numbers::pi);

double standard_log_density(const Vector& z) {
  return -0.5 * (z.squaredNorm() + static_cast<double>(z.size()) * kLogTwoPi);
}

void require_dim(const Vector& z, std::size_t dim, const char* who) {
  if (static_cast<std::size_t>(z.size()) != dim) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  }
}

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

StandardGaussian::StandardGaussian(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("StandardGaussian: dimension must be positive");
}

double StandardGaussian::log_density(const Vector& z) const {
  require_dim(z, dim_, "StandardGaussian::log_density");
  return standard_log_density(z);
}

Vector StandardGaussian::sample(Stream& rng) const {
  Vector z(static_cast<Eigen::Index>(dim_));
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return z;
}

GaussianMixture::GaussianMixture(Matrix means, std::vector<double> weights)
    : means_(std::move(means)), weights_(std::move(weights)) {
  if (means_.rows() == 0 || means_.cols() == 0) {
    throw std::invalid_argument("GaussianMixture: need at least one mean of positive dimension");
  }
  if (weights_.size() != static_cast<std::size_t>(means_.cols())) {
    throw std::invalid_argument("GaussianMixture: one weight per mean required");
  }
  long double total = 0.0L;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw std::invalid_argument("GaussianMixture: weights must be nonnegative");
    total += w;
  }
  if (std::abs(static_cast<double>(total) - 1.0) > 1e-12) {
    throw std::invalid_argument("GaussianMixture: weights must sum to 1");
  }
  log_weights_.reserve(weights_.size());
  cumulative_.reserve(weights_.size());
  long double running = 0.0L;
  for (double w : weights_) {
    log_weights_.push_back(std::log(w));
    running += w;
    cumulative_.push_back(static_cast<double>(running));
  }
  half_sq_norms_ = 0.5 * means_.colwise().squaredNorm().transpose();
}

GaussianMixture GaussianMixture::uniform(Matrix means) {
  const auto k = static_cast<std::size_t>(means.cols());
  if (k == 0) throw std::invalid_argument("GaussianMixture: need at least one mean");
  return GaussianMixture(std::move(means), std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

double GaussianMixture::log_ratio_to_standard(const Vector& z) const {
  require_dim(z, dim(), "GaussianMixture::log_ratio_to_standard");
  const Vector projections = means_.transpose() * z;
  LogSumAccumulator acc;
  for (Eigen::Index i = 0; i < projections.size(); ++i) {
    acc.add(log_weights_[static_cast<std::size_t>(i)] + projections(i) - half_sq_norms_(i));
  }
  return acc.value();
}

double GaussianMixture::log_density(const Vector& z) const {
  return standard_log_density(z) + log_ratio_to_standard(z);
}

Vector GaussianMixture::sample(Stream& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  const auto k = static_cast<Eigen::Index>(it - cumulative_.begin());
  Vector z = means_.col(k);
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) += rng.normal();
  return z;
}

SpikedGaussian::SpikedGaussian(std::size_t n, std::vector<std::size_t> support, double amplitude)
    : n_(n), support_(std::move(support)), amplitude_(amplitude) {
  if (n_ == 0 || support_.empty()) throw std::invalid_argument("SpikedGaussian: empty support");
  for (std::size_t i : support_) {
    if (i >= n_) throw std::invalid_argument("SpikedGaussian: support index out of range");
  }
}

double SpikedGaussian::log_ratio_to_standard(const Vector& y) const {
  require_dim(y, n_, "SpikedGaussian::log_ratio_to_standard");
  LogSumAccumulator acc;
  const double half_sq = 0.5 * amplitude_ * amplitude_;
  for (std::size_t i : support_) acc.add(amplitude_ * y(static_cast<Eigen::Index>(i)) - half_sq);
  return acc.value() - std::log(static_cast<double>(support_.size()));
}

double SpikedGaussian::log_density(const Vector& y) const {
  return standard_log_density(y) + log_ratio_to_standard(y);
}

Vector SpikedGaussian::sample(Stream& rng) const {
  Vector y(static_cast<Eigen::Index>(n_));
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = rng.normal();
  y(static_cast<Eigen::Index>(support_[rng.below(support_.size())])) += amplitude_;
  return y;
}

GaussianMixture sketched_spike_mixture(const SketchMatrix& a, const std::vector<std::size_t>& columns,
                                       double amplitude) {
  if (columns.empty()) throw std::invalid_argument("sketched_spike_mixture: empty column set");
  return GaussianMixture::uniform(amplitude * gather_columns(a, columns));
}

GaussianMixture mixture_from_sketch(const SketchMatrix& a, const ColumnSet& set,
                                    const HardInstanceParams& params) {
  return sketched_spike_mixture(a, set.indices, params.spike);
}

double log1p_chi2_mixture(const GaussianMixture& mix) {
  return log_gram_exp_sum(mix.means(), mix.log_weights(), 1.0);
}

double chi2_mixture_exact(const GaussianMixture& mix) {
  const double log1p_chi2 = log1p_chi2_mixture(mix);
  const double chi2 = std::expm1(log1p_chi2);
  if (!std::isfinite(chi2)) {
    throw std::overflow_error("chi2_mixture_exact: log(1 + chi2) = " + std::to_string(log1p_chi2) +
                              " exceeds the double range");
  }
  // Rounding can leave a value a hair below zero for near-null mixtures.
  return std::max(chi2, 0.0);
}

Estimate chi2_monte_carlo(const GaussianMixture& mix, std::size_t trials, std::uint64_t seed) {
  if (trials < 1000) throw std::invalid_argument("chi2_monte_carlo: trials must be >= 1000");
  std::vector<double> ratios(trials);
  parallel_for(trials, [&](std::size_t i) {
    Stream rng(seed, Purpose::Chi2, i);
    ratios[i] = std::exp(mix.log_ratio_to_standard(mix.sample(rng)));
  });
  Estimate e = detail::mean_with_se(ratios);
  e.value -= 1.0;
  return e;
}

double tv_upper_from_chi2(double chi2) {
  if (std::isnan(chi2) || chi2 < 0.0) throw std::invalid_argument("tv_upper_from_chi2: chi2 must be >= 0");
  return tv_upper_from_log1p_chi2(std::log1p(chi2));
}

double tv_upper_from_log1p_chi2(double log1p_chi2) {
  if (std::isnan(log1p_chi2) || log1p_chi2 < 0.0) {
    throw std::invalid_argument("tv_upper_from_log1p_chi2: argument must be >= 0");
  }
  return std::min(1.0, std::sqrt(0.5 * log1p_chi2));
}

Estimate tv_monte_carlo(const Distribution& p, const Distribution& q, std::size_t trials,
                        std::uint64_t seed) {
  if (p.dim() != q.dim()) throw std::invalid_argument("tv_monte_carlo: dimension mismatch");
  if (trials == 0) throw std::invalid_argument("tv_monte_carlo: trials must be positive");
  std::vector<double> terms(trials);
  parallel_for(trials, [&](std::size_t i) {
    Stream rng(seed, Purpose::TotalVariation, i);
    const Vector z = q.sample(rng);
    terms[i] = std::max(0.0, 1.0 - std::exp(p.log_density(z) - q.log_density(z)));
  });
  return detail::mean_with_se(terms);
}

double bayes_error(double tv) {
  if (!(tv >= 0.0 && tv <= 1.0)) throw std::invalid_argument("bayes_error: tv must lie in [0, 1]");
  return 1.0 - tv;
}

DivergenceReport divergence_report(const GaussianMixture& mix, std::size_t mc_trials,
                                   std::uint64_t seed) {
  DivergenceReport r;
  const double log1p_chi2 = log1p_chi2_mixture(mix);
  r.chi2_exact = std::max(0.0, std::expm1(log1p_chi2));
  const Estimate mc = chi2_monte_carlo(mix, mc_trials, seed);
  r.chi2_mc = mc.value;
  r.chi2_mc_se = mc.std_error;
  r.tv_upper = tv_upper_from_log1p_chi2(std::max(0.0, log1p_chi2));
  r.bayes_error_lower = bayes_error(r.tv_upper);
  return r;
}

void to_json(nlohmann::json& j, const DivergenceReport& r) {
  j = nlohmann::json{{"chi2_exact", number_or_null(r.chi2_exact)},
                     {"chi2_mc", number_or_null(r.chi2_mc)},
                     {"chi2_mc_se", number_or_null(r.chi2_mc_se)},
                     {"tv_upper", r.tv_upper},
                     {"bayes_error_lower", r.bayes_error_lower}};
}

DataProcessingCheck data_processing_check(const SketchMatrix& a, const ColumnSet& set,
                                          double amplitude, std::size_t trials, std::uint64_t seed) {
  if (trials < 2) throw std::invalid_argument("data_processing_check: trials must be >= 2");
  const SpikedGaussian input_law(a.cols(), set.indices, amplitude);
  const GaussianMixture sketch_law = sketched_spike_mixture(a, set.indices, amplitude);
  std::vector<double> input_terms(trials), sketch_terms(trials), diffs(trials);
  parallel_for(trials, [&](std::size_t i) {
    Stream rng(seed, Purpose::TotalVariation, i);
    Vector y(static_cast<Eigen::Index>(a.cols()));
    for (Eigen::Index k = 0; k < y.size(); ++k) y(k) = rng.normal();
    const Vector z = a.apply(y);
    input_terms[i] = std::max(0.0, 1.0 - std::exp(input_law.log_ratio_to_standard(y)));
    sketch_terms[i] = std::max(0.0, 1.0 - std::exp(sketch_law.log_ratio_to_standard(z)));
    diffs[i] = input_terms[i] - sketch_terms[i];
  });
  return {detail::mean_with_se(input_terms), detail::mean_with_se(sketch_terms),
          detail::mean_with_se(diffs)};
}

}  // namespace sketchlb
