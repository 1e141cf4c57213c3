#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "sketchlb/rng.hpp"
#include "sketchlb/sketch_linalg.hpp"

namespace sketchlb {

/// Constants of the hard input distributions for a given (n, p, eps).
struct HardInstanceParams {
  std::size_t n = 0;
  double p = 0.0;
  double eps = 0.0;
  double t_p = 0.0;    // E|g|^p for a standard normal g
  double C = 0.0;      // (100 t_p)^(1/p)
  double C1 = 0.0;     // 4 C + 10
  double spike = 0.0;  // C1 * n^(1/p)

  /// C * n^(1/p): the p-norm ceiling of the conditioned null law.
  double null_radius() const;
  /// 4 C * n^(1/p): the p-norm floor of the conditioned spiked law.
  double spiked_radius() const;
};

enum class Source { BaseNull, BaseSpiked, CondNull, CondSpiked };

std::string_view to_string(Source source);

struct LabeledSample {
  Vector x;
  Source source = Source::BaseNull;
  std::optional<std::size_t> spike_index;  // 0-based, present iff spiked
  double pnorm = 0.0;
};

struct ConditionedSample {
  LabeledSample sample;
  std::size_t retries = 0;  // rejected draws before acceptance
};

/// Thrown when rejection sampling exceeds its retry budget. This means the
/// acceptance probability is far below 99/100, i.e. n is too small for the
/// regime the construction is designed for.
class RetriesExhausted : public std::runtime_error {
 public:
  explicit RetriesExhausted(std::size_t retries);
  std::size_t retries() const { return retries_; }

 private:
  std::size_t retries_;
};

inline constexpr std::size_t kDefaultMaxRetries = 1000;

/// t_p = 2^(p/2) Gamma((p+1)/2) / sqrt(pi), evaluated through lgamma.
double gaussian_abs_moment(double p);

/// Rejects n == 0, p <= 2 (or non-finite) and eps outside (0, 1 - 2/p).
/// Default eps is (1 - 2/p) / 2.
HardInstanceParams derive_params(std::size_t n, double p, std::optional<double> eps = std::nullopt);

/// ||x||_p, scaled by max|x_i| so that large p cannot overflow.
double pnorm(const Vector& x, double p);

LabeledSample sample_base_null(const HardInstanceParams& params, Stream& rng);
LabeledSample sample_base_spiked(const HardInstanceParams& params, Stream& rng);

/// Rejection-samples the base law until the conditioning event holds:
/// CondNull requires ||x||_p <= C n^(1/p), CondSpiked requires ||x||_p >= 4 C n^(1/p).
/// Throws RetriesExhausted after `max_retries` consecutive rejections.
ConditionedSample sample_conditioned(const HardInstanceParams& params, Source which, Stream& rng,
                                     std::size_t max_retries = kDefaultMaxRetries);

enum class TruncationEvent {
  EComplement,     // base null draw with ||y||_p > C n^(1/p)
  FComplement,     // base spiked draw with ||x||_p < 4 C n^(1/p)
  SpikeShortfall,  // base spiked draw with |y_t + spike|^p <= 4^p * 100 n t_p
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo frequency of a truncation event under its base law, with the
/// binomial standard error. Trial i uses stream (seed, Event, i).
Estimate event_probability_mc(const HardInstanceParams& params, TruncationEvent event,
                              std::size_t trials, std::uint64_t seed);

/// CSV export: header "source,spike_index,pnorm" (plus x_0..x_{n-1} when
/// `with_vector`). spike_index is 0-based and empty for null samples.
void write_samples_csv_header(std::ostream& out, std::size_t n, bool with_vector);
void write_sample_csv(std::ostream& out, const LabeledSample& sample, bool with_vector);

}  // namespace sketchlb
