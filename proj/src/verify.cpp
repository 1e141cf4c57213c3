#include "sketchlb/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sketchlb/bound_engine.hpp"
#include "sketchlb/divergence.hpp"
#include "sketchlb/hard_instance.hpp"
#include "sketchlb/rng.hpp"
#include "sketchlb/sketch_linalg.hpp"

namespace sketchlb {

namespace {

std::string printf_string(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Relative difference of expm1(a) and expm1(b); falls back to the log-domain
// difference (the first-order relative error) once the values overflow.
double chi2_relative_gap(double a, double b) {
  const double x = std::expm1(a), y = std::expm1(b);
  if (std::isfinite(x) && std::isfinite(y)) {
    return x == y ? 0.0 : std::abs(x - y) / std::max(std::abs(x), std::abs(y));
  }
  return std::abs(a - b);
}

VerifyReport verify_frobenius(const VerifyConfig& config) {
  VerifyReport report{"frobenius", {}};
  Stream rng(config.seed, Purpose::Verification, 0);
  for (std::size_t k = 0; k < config.cases; ++k) {
    std::size_t n = config.n;
    std::size_t m = config.m.value_or(0);
    if (!config.m) {
      n = 1 + rng.below(config.n);
      m = 1 + rng.below(std::min<std::size_t>(n, 256));
    }
    const SketchMatrix a = make_orthonormal_sketch(m, n, derive_seed(config.seed, k));
    const double total = gram_frobenius_total(a);
    const double rel = std::abs(total - static_cast<double>(m)) / static_cast<double>(m);
    report.checks.push_back({printf_string("gram total (m=%zu, n=%zu)", m, n), rel <= 1e-6,
                             printf_string("total=%.15g relative error=%.3g", total, rel)});
    const ColumnSet set = small_column_set(a);
    report.checks.push_back({printf_string("|S-bar| < n/100 (m=%zu, n=%zu)", m, n),
                             100 * set.complement_size() < n,
                             printf_string("|S-bar|=%zu", set.complement_size())});
  }
  return report;
}

VerifyReport verify_chi2(const VerifyConfig& config) {
  VerifyReport report{"chi2", {}};
  Stream rng(config.seed, Purpose::Verification, 1);
  for (std::size_t k = 0; k < config.cases; ++k) {
    const std::size_t dim = 1 + rng.below(8);
    const std::size_t comps = 1 + rng.below(32);
    Matrix means(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(comps));
    for (Eigen::Index c = 0; c < means.cols(); ++c) {
      for (Eigen::Index r = 0; r < means.rows(); ++r) means(r, c) = rng.normal();
      means.col(c) *= std::sqrt(4.0 * rng.uniform()) / means.col(c).norm();
    }
    const GaussianMixture mix = GaussianMixture::uniform(means);
    const double exact = chi2_mixture_exact(mix);
    const Estimate mc = chi2_monte_carlo(mix, config.trials, derive_seed(config.seed, k));
    const double z = std::abs(mc.value - exact) / mc.std_error;
    report.checks.push_back({printf_string("exact vs MC (dim=%zu, k=%zu)", dim, comps), z <= 3.0,
                             printf_string("exact=%.6g mc=%.6g se=%.3g z=%.2f", exact, mc.value,
                                           mc.std_error, z)});
  }
  for (double sq : {0.0, 0.5, 1.0, 4.0, 20.0}) {
    Matrix mean = Matrix::Zero(3, 1);
    mean(0, 0) = std::sqrt(sq);
    const double exact = chi2_mixture_exact(GaussianMixture::uniform(mean));
    const double closed = std::expm1(sq);
    const double rel = sq == 0.0 ? std::abs(exact) : std::abs(exact - closed) / closed;
    report.checks.push_back({printf_string("single mean |mu|^2=%g", sq), rel <= 1e-10,
                             printf_string("relative error=%.3g", rel)});
  }
  return report;
}

VerifyReport verify_events(const VerifyConfig& config) {
  VerifyReport report{"events", {}};
  const HardInstanceParams params = derive_params(config.n, config.p, config.eps);
  const struct {
    TruncationEvent event;
    const char* label;
  } events[] = {{TruncationEvent::EComplement, "P(||y||_p > C n^(1/p)) <= 0.01"},
                {TruncationEvent::FComplement, "P(||x||_p < 4C n^(1/p)) <= 0.01"},
                {TruncationEvent::SpikeShortfall, "P(|y_t + spike|^p <= 4^p 100 n t_p) <= 0.01"}};
  std::uint64_t label = 0;
  for (const auto& e : events) {
    const Estimate est = event_probability_mc(params, e.event, config.trials,
                                              derive_seed(config.seed, label++));
    report.checks.push_back({e.label, est.value <= 0.01,
                             printf_string("estimate=%.6g se=%.3g", est.value, est.std_error)});
  }
  return report;
}

VerifyReport verify_lemma1(const VerifyConfig& config) {
  VerifyReport report{"lemma1", {}};
  const HardInstanceParams params = derive_params(config.n, config.p, config.eps);
  const std::size_t threshold = measurement_threshold(params.n, params.p, params.eps);
  const std::size_t m = config.m.value_or(std::max<std::size_t>(1, threshold));
  std::size_t in_regime = 0;
  for (std::size_t k = 0; k < config.cases; ++k) {
    const SketchMatrix a = make_orthonormal_sketch(m, params.n, derive_seed(config.seed, k));
    const Lemma1Result r = lemma1_check(a, params);
    in_regime += r.preconditions_met;
    if (r.preconditions_met) {
      report.checks.push_back({printf_string("lhs <= rhs (case %zu, m=%zu)", k, m), r.holds,
                               printf_string("lhs=%.12g rhs=%.6g", r.lhs, r.rhs)});
    }
    const ColumnSet set = small_column_set(a);
    const double log1p_chi2 = log1p_chi2_mixture(mixture_from_sketch(a, set, params));
    const double gap = chi2_relative_gap(log1p_chi2, r.log_lhs);
    report.checks.push_back({printf_string("chi2 exact = lhs - 1 (case %zu)", k), gap <= 1e-9,
                             printf_string("log(1+chi2)=%.15g log(lhs)=%.15g relative gap=%.3g",
                                           log1p_chi2, r.log_lhs, gap)});
  }
  if (in_regime == 0) {
    report.checks.push_back(
        {"preconditions", true,
         printf_string("no case met the preconditions (threshold %.4g); inequality check vacuous",
                       measurement_threshold_real(params.n, params.p, params.eps))});
  }
  return report;
}

VerifyReport verify_dpi(const VerifyConfig& config) {
  VerifyReport report{"dpi", {}};
  const HardInstanceParams params = derive_params(config.n, config.p, config.eps);
  Stream rng(config.seed, Purpose::Verification, 4);
  for (std::size_t k = 0; k < config.cases; ++k) {
    const std::size_t m = config.m.value_or(1 + rng.below(std::min<std::size_t>(params.n, 16)));
    const SketchMatrix a = make_orthonormal_sketch(m, params.n, derive_seed(config.seed, 100 + k));
    const ColumnSet set = small_column_set(a);
    // Alternate the construction's spike with a weak amplitude where both TVs are informative.
    const double amplitude = k % 2 == 0 ? params.spike : 2.5;
    const DataProcessingCheck c =
        data_processing_check(a, set, amplitude, config.trials, derive_seed(config.seed, 200 + k));
    report.checks.push_back(
        {printf_string("V(input) >= V(sketch) - 3 SE (m=%zu, amplitude=%.4g)", m, amplitude),
         c.difference.value >= -3.0 * c.difference.std_error,
         printf_string("input=%.5f sketch=%.5f diff=%.5f se=%.3g", c.input_tv.value, c.sketch_tv.value,
                       c.difference.value, c.difference.std_error)});
  }
  return report;
}

}  // namespace

VerifyKind parse_verify_kind(const std::string& name) {
  if (name == "lemma1") return VerifyKind::Lemma1;
  if (name == "chi2") return VerifyKind::Chi2;
  if (name == "events") return VerifyKind::Events;
  if (name == "frobenius") return VerifyKind::Frobenius;
  if (name == "dpi") return VerifyKind::Dpi;
  throw std::invalid_argument("unknown verification suite \"" + name +
                              "\" (expected lemma1, chi2, events, frobenius or dpi)");
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.passed; });
}

VerifyReport run_verification(VerifyKind kind, const VerifyConfig& config) {
  switch (kind) {
    case VerifyKind::Lemma1: return verify_lemma1(config);
    case VerifyKind::Chi2: return verify_chi2(config);
    case VerifyKind::Events: return verify_events(config);
    case VerifyKind::Frobenius: return verify_frobenius(config);
    case VerifyKind::Dpi: return verify_dpi(config);
  }
  throw std::logic_error("run_verification: unhandled suite");
}

}  // namespace sketchlb
