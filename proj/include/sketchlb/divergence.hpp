#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "sketchlb/hard_instance.hpp"
#include "sketchlb/rng.hpp"
#include "sketchlb/sketch_linalg.hpp"

namespace sketchlb {

/// A law with an exact log-density and a sampler.
class Distribution {
 public:
  virtual ~Distribution() = default;
  virtual std::size_t dim() const = 0;
  virtual double log_density(const Vector& z) const = 0;
  virtual Vector sample(Stream& rng) const = 0;
};

/// N(0, I_dim).
class StandardGaussian final : public Distribution {
 public:
  explicit StandardGaussian(std::size_t dim);
  std::size_t dim() const override { return dim_; }
  double log_density(const Vector& z) const override;
  Vector sample(Stream& rng) const override;

 private:
  std::size_t dim_;
};

/// sum_i w_i N(mu_i, I_dim). Means are the columns of a dim x k matrix.
class GaussianMixture final : public Distribution {
 public:
  /// Throws std::invalid_argument on an empty mixture, a weight count that does
  /// not match the means, negative weights, or weights not summing to 1 (1e-12).
  GaussianMixture(Matrix means, std::vector<double> weights);

  /// Uniform weights 1/k.
  static GaussianMixture uniform(Matrix means);

  std::size_t dim() const override { return static_cast<std::size_t>(means_.rows()); }
  std::size_t components() const { return static_cast<std::size_t>(means_.cols()); }
  const Matrix& means() const { return means_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& log_weights() const { return log_weights_; }

  /// log of (mixture density / standard normal density) at z:
  /// log sum_i w_i exp(<z, mu_i> - |mu_i|^2 / 2).
  double log_ratio_to_standard(const Vector& z) const;

  double log_density(const Vector& z) const override;
  Vector sample(Stream& rng) const override;

 private:
  Matrix means_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
  std::vector<double> cumulative_;
  Vector half_sq_norms_;
};

/// Input-space spiked law: uniform mixture of N(amplitude * e_i, I_n) over
/// the coordinates i in `support`. Densities are O(n) per point.
class SpikedGaussian final : public Distribution {
 public:
  SpikedGaussian(std::size_t n, std::vector<std::size_t> support, double amplitude);
  std::size_t dim() const override { return n_; }
  double log_ratio_to_standard(const Vector& y) const;
  double log_density(const Vector& y) const override;
  Vector sample(Stream& rng) const override;

 private:
  std::size_t n_;
  std::vector<std::size_t> support_;
  double amplitude_;
};

/// Uniform mixture with means amplitude * A_i over the listed columns.
GaussianMixture sketched_spike_mixture(const SketchMatrix& a, const std::vector<std::size_t>& columns,
                                       double amplitude);

/// The sketched S-restricted spiked law: means spike * A_i for i in `set`.
GaussianMixture mixture_from_sketch(const SketchMatrix& a, const ColumnSet& set,
                                    const HardInstanceParams& params);

/// log(1 + chi^2(mix || N(0, I))) = log sum_{i,j} w_i w_j exp(<mu_i, mu_j>).
/// Always finite for finite means.
double log1p_chi2_mixture(const GaussianMixture& mix);

/// chi^2(mix || N(0, I)), exponentiating the log-domain sum once.
/// Throws std::overflow_error if the result is not representable.
double chi2_mixture_exact(const GaussianMixture& mix);

/// Estimate of E_{z ~ mix}[ratio(z)] - 1. Trial i uses stream (seed, Chi2, i).
/// Requires trials >= 1000.
Estimate chi2_monte_carlo(const GaussianMixture& mix, std::size_t trials, std::uint64_t seed);

/// min(1, sqrt(log(1 + chi2) / 2)). Accepts +inf (returns 1); rejects negatives.
double tv_upper_from_chi2(double chi2);
/// Same bound from log(1 + chi2), for values whose chi2 overflows.
double tv_upper_from_log1p_chi2(double log1p_chi2);

/// Estimate of V(P, Q) = E_{z ~ Q}[max(0, 1 - p(z)/q(z))].
/// Trial i uses stream (seed, TotalVariation, i).
Estimate tv_monte_carlo(const Distribution& p, const Distribution& q, std::size_t trials,
                        std::uint64_t seed);

/// 1 - tv; rejects tv outside [0, 1].
double bayes_error(double tv);

struct DivergenceReport {
  double chi2_exact = 0.0;  // +inf when not representable
  double chi2_mc = 0.0;
  double chi2_mc_se = 0.0;
  double tv_upper = 0.0;
  double bayes_error_lower = 0.0;
};

DivergenceReport divergence_report(const GaussianMixture& mix, std::size_t mc_trials,
                                   std::uint64_t seed);

void to_json(nlohmann::json& j, const DivergenceReport& r);

/// Paired TV estimates before and after the map y -> A y.
///
/// y ~ N(0, I_n) is drawn once per trial; the input-space integrand uses the
/// spiked law over `set` with the given amplitude, the sketch-space integrand
/// evaluates the pushed-forward mixture at A y. Both densities are exact.
struct DataProcessingCheck {
  Estimate input_tv;
  Estimate sketch_tv;
  Estimate difference;  // input - sketch, with the paired standard error
};

DataProcessingCheck data_processing_check(const SketchMatrix& a, const ColumnSet& set,
                                          double amplitude, std::size_t trials, std::uint64_t seed);

}  // namespace sketchlb
