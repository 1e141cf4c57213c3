#include "sketchlb/distinguishers.hpp"

#include <cmath>
#include <stdexcept>

#include "mc_stats.hpp"
#include "sketchlb/parallel.hpp"

namespace sketchlb {

namespace {

Estimate binomial(std::size_t hits, std::size_t trials) {
  const double f = static_cast<double>(hits) / static_cast<double>(trials);
  return {f, std::sqrt(f * (1.0 - f) / static_cast<double>(trials))};
}

}  // namespace

Decision lr_test(const Vector& sketch, const GaussianMixture& mix) {
  if (static_cast<std::size_t>(sketch.size()) != mix.dim()) {
    throw std::invalid_argument("lr_test: sketch dimension differs from mixture dimension");
  }
  Decision d;
  d.log_lr = mix.log_ratio_to_standard(sketch);
  d.verdict = d.log_lr > 0.0 ? Verdict::Spiked : Verdict::Null;
  return d;
}

double plugin_estimator(const SketchMatrix& a, const Vector& sketch, double p) {
  return pnorm(a.adjoint_apply(sketch), p);
}

Estimator lr_estimator(GaussianMixture mix, const HardInstanceParams& params) {
  const double null_value = std::pow(static_cast<double>(params.n) * params.t_p, 1.0 / params.p);
  const double spiked_value = params.spike;
  return [mix = std::move(mix), null_value, spiked_value](const SketchMatrix&, const Vector& sketch,
                                                          double) {
    return lr_test(sketch, mix).verdict == Verdict::Spiked ? spiked_value : null_value;
  };
}

std::vector<SuccessRate> evaluate_estimators(const std::vector<Estimator>& estimators,
                                             const HardInstanceParams& params,
                                             const SketchMatrix& a, std::size_t trials,
                                             std::uint64_t seed) {
  if (trials < 100) throw std::invalid_argument("evaluate_estimators: trials must be >= 100");
  if (a.cols() != params.n) throw std::invalid_argument("evaluate_estimators: matrix width differs from n");
  const std::size_t k = estimators.size();
  std::vector<unsigned char> hits(trials * k, 0);
  parallel_for(trials, [&](std::size_t i) {
    Stream rng(seed, Purpose::Estimator, i);
    const Source which = rng.uniform() < 0.5 ? Source::CondNull : Source::CondSpiked;
    const LabeledSample s = sample_conditioned(params, which, rng).sample;
    const Vector sketch = a.apply(s.x);
    for (std::size_t e = 0; e < k; ++e) {
      const double value = estimators[e](a, sketch, params.p);
      hits[i * k + e] = 0.5 * s.pnorm <= value && value <= 2.0 * s.pnorm;
    }
  });
  std::vector<SuccessRate> out(k);
  for (std::size_t e = 0; e < k; ++e) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < trials; ++i) count += hits[i * k + e];
    const Estimate b = binomial(count, trials);
    out[e] = {b.value, b.std_error, trials};
  }
  return out;
}

SuccessRate evaluate_estimator(const Estimator& f, const HardInstanceParams& params,
                               const SketchMatrix& a, std::size_t trials, std::uint64_t seed) {
  return evaluate_estimators({f}, params, a, trials, seed).front();
}

ErrorSum lr_error_sum(const GaussianMixture& mix, std::size_t trials, std::uint64_t seed,
                      double log_threshold) {
  if (trials == 0) throw std::invalid_argument("lr_error_sum: trials must be positive");
  const StandardGaussian null_law(mix.dim());
  std::vector<unsigned char> false_alarm(trials), miss(trials);
  const std::uint64_t null_seed = derive_seed(seed, 1);
  const std::uint64_t alt_seed = derive_seed(seed, 2);
  parallel_for(trials, [&](std::size_t i) {
    Stream null_rng(null_seed, Purpose::Estimator, i);
    false_alarm[i] = mix.log_ratio_to_standard(null_law.sample(null_rng)) > log_threshold;
    Stream alt_rng(alt_seed, Purpose::Estimator, i);
    miss[i] = mix.log_ratio_to_standard(mix.sample(alt_rng)) <= log_threshold;
  });
  std::size_t fa = 0, ms = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    fa += false_alarm[i];
    ms += miss[i];
  }
  ErrorSum r;
  r.type1 = binomial(fa, trials);
  r.type2 = binomial(ms, trials);
  r.sum = r.type1.value + r.type2.value;
  r.std_error = std::hypot(r.type1.std_error, r.type2.std_error);
  return r;
}

ConditionedTv conditioned_sketch_tv(const HardInstanceParams& params, const SketchMatrix& a,
                                    std::size_t trials, std::uint64_t seed) {
  if (trials < 2) throw std::invalid_argument("conditioned_sketch_tv: trials must be >= 2");
  std::vector<std::size_t> all(params.n);
  for (std::size_t i = 0; i < params.n; ++i) all[i] = i;
  const GaussianMixture spiked = sketched_spike_mixture(a, all, params.spike);

  std::vector<double> log_ratios(trials);
  std::vector<std::size_t> null_retries(trials), spiked_retries(trials);
  const std::uint64_t null_seed = derive_seed(seed, 1);
  const std::uint64_t spiked_seed = derive_seed(seed, 2);
  parallel_for(trials, [&](std::size_t i) {
    Stream rng(null_seed, Purpose::Conditioned, i);
    const ConditionedSample s = sample_conditioned(params, Source::CondNull, rng);
    null_retries[i] = s.retries;
    log_ratios[i] = spiked.log_ratio_to_standard(a.apply(s.sample.x));
    Stream spiked_rng(spiked_seed, Purpose::Conditioned, i);
    spiked_retries[i] = sample_conditioned(params, Source::CondSpiked, spiked_rng).retries;
  });
  std::size_t null_total = trials, spiked_total = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    null_total += null_retries[i];
    spiked_total += spiked_retries[i];
  }
  ConditionedTv out;
  out.accept_null = static_cast<double>(trials) / static_cast<double>(null_total);
  out.accept_spiked = static_cast<double>(trials) / static_cast<double>(spiked_total);
  out.truncation_slack = (1.0 - out.accept_null) + (1.0 - out.accept_spiked);
  std::vector<double> terms(trials);
  for (std::size_t i = 0; i < trials; ++i) terms[i] = std::max(0.0, 1.0 - std::exp(log_ratios[i]));
  out.tv = detail::mean_with_se(terms);
  return out;
}

}  // namespace sketchlb
