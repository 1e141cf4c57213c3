#pragma once

#include <cstddef>
#include <cstdint>

#include <json.hpp>

#include "sketchlb/hard_instance.hpp"
#include "sketchlb/sketch_linalg.hpp"

namespace sketchlb {

/// eps / (100 C1^2) * n^(1 - 2/p) * ln n, before flooring.
double measurement_threshold_real(std::size_t n, double p, double eps);

/// floor of measurement_threshold_real. Zero means no m >= 1 is inside the
/// regime the bound is proved for at this n.
std::size_t measurement_threshold(std::size_t n, double p, double eps);

struct Lemma1Result {
  double lhs = 0.0;      // |S|^-2 sum_{i,j in S} exp(C1^2 n^(2/p) <A_i, A_j>); may be +inf
  double log_lhs = 0.0;  // always finite
  double rhs = 0.0;      // 1.03 C1^4 (n^(-2+4/p+eps) m + n^(2/p-1) sqrt(m)) + 1
  bool holds = false;    // lhs <= rhs (1 + 1e-9)
  bool preconditions_met = false;  // m below threshold and |S| >= 99n/100
  std::size_t set_size = 0;
};

/// Evaluates both sides of the exponential Gram-sum inequality on the column
/// set S of `a`. Both sides are reported even when the preconditions fail.
Lemma1Result lemma1_check(const SketchMatrix& a, const HardInstanceParams& params);

/// 1.03 C1^4 (n^(-2+4/p+eps) m + n^(2/p-1) sqrt(m)) for a real-valued m >= 0.
double chi2_closed_form_bound(const HardInstanceParams& params, double m);
double chi2_closed_form_bound(const HardInstanceParams& params, const SketchMatrix& a);

enum class Conditioning { Analytic, MonteCarlo };

struct BoundConfig {
  /// The chain needs chi2(E~2 || E1bar) <= c for a small constant c. With the
  /// default, tv_tilde <= sqrt(ln(1.46)/2) ~ 0.435.
  double chi2_budget = 0.46;
  Conditioning conditioning = Conditioning::Analytic;
  std::size_t mc_trials = 10000;  // Monte Carlo conditioning only
  std::uint64_t seed = 0;
};

struct BoundReport {
  std::size_t m_threshold = 0;
  double lemma1_lhs = 0.0;
  double lemma1_rhs = 0.0;
  bool lemma1_holds = false;
  bool lemma1_preconditions_met = false;
  double chi2_bound = 0.0;   // closed-form bound at this m
  double log1p_chi2 = 0.0;   // exact, log domain
  double chi2_exact = 0.0;   // exact; +inf if not representable
  bool within_chi2_budget = false;
  std::size_t complement_size = 0;
  double cond_null_term = 0.0;    // V(D1bar, D1)
  double cond_spiked_term = 0.0;  // V(D2bar, D2)
  double tv_tilde = 0.0;
  double tv_bar = 0.0;
  double tv_total = 0.0;
  double success_ceiling = 0.0;
};

/// The arithmetic of the chain, separated from the matrix work:
/// tv_tilde from chi2, + |S-bar|/n (clamped), + both conditioning terms
/// (clamped), success ceiling (1 + tv_total) / 2.
struct ChainTerms {
  double tv_tilde = 0.0;
  double tv_bar = 0.0;
  double tv_total = 0.0;
  double success_ceiling = 0.0;
};

ChainTerms compose_chain(double log1p_chi2, std::size_t complement_size, std::size_t n,
                         double cond_null_term, double cond_spiked_term);

BoundReport success_probability_bound(const SketchMatrix& a, const HardInstanceParams& params,
                                      const BoundConfig& config = {});

void to_json(nlohmann::json& j, const BoundReport& r);

}  // namespace sketchlb
