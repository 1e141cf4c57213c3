#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sketchlb {

enum class VerifyKind { Lemma1, Chi2, Events, Frobenius, Dpi };

/// Parses "lemma1", "chi2", "events", "frobenius" or "dpi".
VerifyKind parse_verify_kind(const std::string& name);

struct VerifyConfig {
  std::size_t n = 4096;
  double p = 4.0;
  std::optional<double> eps;
  std::optional<std::size_t> m;  // fixed m where the suite uses one
  std::size_t trials = 10000;
  std::size_t cases = 10;
  std::uint64_t seed = 1;
};

struct CheckLine {
  std::string label;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  std::vector<CheckLine> checks;

  bool passed() const;
};

/// Runs one property suite. Parameter errors propagate as exceptions.
VerifyReport run_verification(VerifyKind kind, const VerifyConfig& config);

}  // namespace sketchlb
