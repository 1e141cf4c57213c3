#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sketchlb/bound_engine.hpp"

namespace sketchlb {

enum class OutputFormat { Json, Csv };

struct ExperimentConfig {
  std::size_t n = 4096;
  double p = 4.0;
  std::optional<double> eps;      // default (1 - 2/p) / 2
  std::uint64_t seed = 1;
  std::size_t trials = 10000;
  std::vector<std::size_t> m_list;  // empty means "auto"
  Conditioning conditioning = Conditioning::Analytic;
};

/// Throws std::invalid_argument when trials < 100 or some m is outside [1, n].
void validate(const ExperimentConfig& config);

/// {m0, 2 m0, 4 m0, ..., n} with m0 = max(1, measurement threshold); n is
/// always the last entry.
std::vector<std::size_t> auto_m_list(std::size_t n, double p, double eps);

struct ExperimentRecord {
  std::size_t m = 0;
  double chi2_exact = 0.0;  // +inf when not representable
  double log1p_chi2 = 0.0;
  double tv_upper = 0.0;
  double success_ceiling = 0.0;
  double lr_success = 0.0;
  double lr_se = 0.0;
  double plugin_success = 0.0;
  double plugin_se = 0.0;
  double tv_hat = 0.0;  // Monte Carlo V(E1, E2)
  double tv_hat_se = 0.0;
  double lemma1_lhs = 0.0;
  double lemma1_rhs = 0.0;
  bool lemma1_holds = false;
  bool lemma1_preconditions_met = false;
  std::size_t complement_size = 0;
  double wall_time = 0.0;  // seconds
};

struct ExperimentResult {
  ExperimentConfig config;
  HardInstanceParams params;
  std::size_t m_threshold = 0;
  std::vector<std::size_t> m_list;
  std::vector<ExperimentRecord> records;  // in m_list order
};

/// Runs one record per m. Each m gets its own sketch matrix; every m shares
/// the same input draws so rows are directly comparable.
ExperimentResult run_experiment(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentResult& result);
void write_csv(std::ostream& out, const ExperimentResult& result);
void write_result(std::ostream& out, const ExperimentResult& result, OutputFormat format);

/// Analytic table of constants and thresholds over n = n_min, 2 n_min, ..., <= n_max.
struct SweepRow {
  std::size_t n = 0;
  double t_p = 0.0;
  double C = 0.0;
  double C1 = 0.0;
  double spike = 0.0;
  double m_threshold_real = 0.0;
  std::size_t m_threshold = 0;
  double chi2_bound_at_threshold = 0.0;  // bound at the real-valued threshold
};

std::vector<SweepRow> run_sweep(double p, std::optional<double> eps, std::size_t n_min, std::size_t n_max);
void write_sweep(std::ostream& out, const std::vector<SweepRow>& rows, double p, double eps,
                 OutputFormat format);

}  // namespace sketchlb
