#include "sketchlb/hard_instance.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>

namespace sketchlb {

namespace {

double log_abs_moment(double p) {
  return 0.5 * p * std::numbers::ln2 + std::lgamma(0.5 * (p + 1.0)) - 0.5 * std::log(std::numbers::pi);
}

double nth_root_of_n(const HardInstanceParams& params) {
  return std::exp(std::log(static_cast<double>(params.n)) / params.p);
}

LabeledSample labeled(Vector x, Source source, std::optional<std::size_t> spike_index, double p) {
  LabeledSample s;
  s.pnorm = pnorm(x, p);
  s.x = std::move(x);
  s.source = source;
  s.spike_index = spike_index;
  return s;
}

}  // namespace

double HardInstanceParams::null_radius() const { return C * nth_root_of_n(*this); }

double HardInstanceParams::spiked_radius() const { return 4.0 * C * nth_root_of_n(*this); }

std::string_view to_string(Source source) {
  switch (source) {
    case Source::BaseNull: return "BaseNull";
    case Source::BaseSpiked: return "BaseSpiked";
    case Source::CondNull: return "CondNull";
    case Source::CondSpiked: return "CondSpiked";
  }
  return "?";
}

RetriesExhausted::RetriesExhausted(std::size_t retries)
    : std::runtime_error("conditioned sampler rejected " + std::to_string(retries) +
                         " consecutive draws; n is likely too small for the 99/100 acceptance regime"),
      retries_(retries) {}

double gaussian_abs_moment(double p) {
  if (!std::isfinite(p) || p <= 0.0) {
    throw std::invalid_argument("gaussian_abs_moment: p must be finite and positive");
  }
  return std::exp(log_abs_moment(p));
}

HardInstanceParams derive_params(std::size_t n, double p, std::optional<double> eps) {
  if (n == 0) throw std::invalid_argument("derive_params: n must be at least 1");
  if (!std::isfinite(p) || p <= 2.0) {
    throw std::invalid_argument("derive_params: p must lie in (2, inf), got " + std::to_string(p));
  }
  const double eps_max = 1.0 - 2.0 / p;
  const double e = eps.value_or(0.5 * eps_max);
  if (!(e > 0.0 && e < eps_max)) {
    throw std::invalid_argument("derive_params: eps must lie in (0, 1 - 2/p) = (0, " +
                                std::to_string(eps_max) + "), got " + std::to_string(e));
  }
  HardInstanceParams params;
  params.n = n;
  params.p = p;
  params.eps = e;
  params.t_p = gaussian_abs_moment(p);
  // (100 t_p)^(1/p) through logs; t_p itself can be astronomically large.
  params.C = std::exp((std::log(100.0) + log_abs_moment(p)) / p);
  params.C1 = 4.0 * params.C + 10.0;
  params.spike = params.C1 * nth_root_of_n(params);
  return params;
}

double pnorm(const Vector& x, double p) {
  const double scale = x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  long double sum = 0.0L;
  for (Eigen::Index i = 0; i < x.size(); ++i) sum += std::pow(std::abs(x(i)) / scale, p);
  return scale * std::pow(static_cast<double>(sum), 1.0 / p);
}

LabeledSample sample_base_null(const HardInstanceParams& params, Stream& rng) {
  Vector x(static_cast<Eigen::Index>(params.n));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
  return labeled(std::move(x), Source::BaseNull, std::nullopt, params.p);
}

LabeledSample sample_base_spiked(const HardInstanceParams& params, Stream& rng) {
  Vector x(static_cast<Eigen::Index>(params.n));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
  const std::size_t t = rng.below(params.n);
  x(static_cast<Eigen::Index>(t)) += params.spike;
  return labeled(std::move(x), Source::BaseSpiked, t, params.p);
}

ConditionedSample sample_conditioned(const HardInstanceParams& params, Source which, Stream& rng,
                                     std::size_t max_retries) {
  if (which != Source::CondNull && which != Source::CondSpiked) {
    throw std::invalid_argument("sample_conditioned: which must be CondNull or CondSpiked");
  }
  if (max_retries == 0) throw std::invalid_argument("sample_conditioned: max_retries must be >= 1");
  const double null_radius = params.null_radius();
  const double spiked_radius = params.spiked_radius();
  for (std::size_t retries = 0; retries < max_retries; ++retries) {
    if (which == Source::CondNull) {
      LabeledSample s = sample_base_null(params, rng);
      if (s.pnorm <= null_radius) {
        s.source = Source::CondNull;
        return {std::move(s), retries};
      }
    } else {
      LabeledSample s = sample_base_spiked(params, rng);
      if (s.pnorm >= spiked_radius) {
        s.source = Source::CondSpiked;
        return {std::move(s), retries};
      }
    }
  }
  throw RetriesExhausted(max_retries);
}

Estimate event_probability_mc(const HardInstanceParams& params, TruncationEvent event,
                              std::size_t trials, std::uint64_t seed) {
  if (trials < 100) throw std::invalid_argument("event_probability_mc: trials must be >= 100");
  const double null_radius = params.null_radius();
  const double spiked_radius = params.spiked_radius();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    Stream rng(seed, Purpose::Event, i);
    switch (event) {
      case TruncationEvent::EComplement:
        hits += sample_base_null(params, rng).pnorm > null_radius;
        break;
      case TruncationEvent::FComplement:
        hits += sample_base_spiked(params, rng).pnorm < spiked_radius;
        break;
      case TruncationEvent::SpikeShortfall: {
        const LabeledSample s = sample_base_spiked(params, rng);
        hits += std::abs(s.x(static_cast<Eigen::Index>(*s.spike_index))) <= spiked_radius;
        break;
      }
    }
  }
  const double freq = static_cast<double>(hits) / static_cast<double>(trials);
  return {freq, std::sqrt(freq * (1.0 - freq) / static_cast<double>(trials))};
}

void write_samples_csv_header(std::ostream& out, std::size_t n, bool with_vector) {
  out << "source,spike_index,pnorm";
  if (with_vector) {
    for (std::size_t i = 0; i < n; ++i) out << ",x_" << i;
  }
  out << '\n';
}

void write_sample_csv(std::ostream& out, const LabeledSample& sample, bool with_vector) {
  const auto old_precision = out.precision();
  out << std::setprecision(17) << to_string(sample.source) << ',';
  if (sample.spike_index) out << *sample.spike_index;
  out << ',' << sample.pnorm;
  if (with_vector) {
    for (Eigen::Index i = 0; i < sample.x.size(); ++i) out << ',' << sample.x(i);
  }
  out << '\n';
  out.precision(old_precision);
}

}  // namespace sketchlb
