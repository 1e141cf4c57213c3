#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sketchlb/divergence.hpp"
#include "sketchlb/hard_instance.hpp"
#include "sketchlb/sketch_linalg.hpp"

namespace sketchlb {

enum class Verdict { Null, Spiked };

struct Decision {
  double log_lr = 0.0;  // log(mixture density / standard density) at the sketch
  Verdict verdict = Verdict::Null;
  std::optional<double> estimate;
};

/// Likelihood-ratio test of the mixture against N(0, I) at threshold 1:
/// Spiked iff log_lr > 0. Throws std::invalid_argument on a dimension mismatch.
Decision lr_test(const Vector& sketch, const GaussianMixture& mix);

/// Any moment estimator that sees only the matrix and the sketch.
using Estimator = std::function<double(const SketchMatrix&, const Vector& sketch, double p)>;

/// ||A^T sketch||_p: the p-norm of the minimum-norm preimage.
double plugin_estimator(const SketchMatrix& a, const Vector& sketch, double p);

/// Estimator driven by lr_test against `mix`: reports the typical null norm
/// (n t_p)^(1/p) on a Null verdict and the spike size on a Spiked verdict.
/// The two values sit on either side of the cut 2 C n^(1/p), so the test the
/// estimator induces at that cut is exactly lr_test.
Estimator lr_estimator(GaussianMixture mix, const HardInstanceParams& params);

struct SuccessRate {
  double rate = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

/// Factor-2 success frequency of each estimator on x ~ (D1 + D2)/2.
/// Every estimator sees the same draws; trial i uses stream (seed, Estimator, i).
/// RetriesExhausted from the conditioned sampler propagates.
std::vector<SuccessRate> evaluate_estimators(const std::vector<Estimator>& estimators,
                                             const HardInstanceParams& params,
                                             const SketchMatrix& a, std::size_t trials,
                                             std::uint64_t seed);

SuccessRate evaluate_estimator(const Estimator& f, const HardInstanceParams& params,
                               const SketchMatrix& a, std::size_t trials, std::uint64_t seed);

/// Type-I and type-II error frequencies of lr_test, estimated from independent
/// draws under N(0, I) and under `mix`.
struct ErrorSum {
  Estimate type1;
  Estimate type2;
  double sum = 0.0;
  double std_error = 0.0;
};

ErrorSum lr_error_sum(const GaussianMixture& mix, std::size_t trials, std::uint64_t seed,
                      double log_threshold = 0.0);

/// Monte Carlo V(E1, E2) between the sketched conditioned laws.
///
/// z = A x with x drawn from D1 by rejection (the indicator-accepted draws of
/// the base law). The density ratio e2/e1 is replaced by the closed-form ratio
/// of the unconditioned sketched laws, i.e. the full n-column spiked mixture
/// over N(0, I); the estimate is E[max(0, 1 - ratio)]. The replacement moves
/// V by at most P(not E) + P(not F), reported as `truncation_slack` from the
/// observed acceptance rates.
struct ConditionedTv {
  Estimate tv;
  double accept_null = 1.0;
  double accept_spiked = 1.0;
  double truncation_slack = 0.0;
};

ConditionedTv conditioned_sketch_tv(const HardInstanceParams& params, const SketchMatrix& a,
                                    std::size_t trials, std::uint64_t seed);

}  // namespace sketchlb
