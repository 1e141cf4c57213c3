#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>

namespace sketchlb {

/// Tags separating the independent random streams used across the library.
/// Values are part of the reproducibility contract: changing one changes
/// every result derived from that stream.
enum class Purpose : std::uint64_t {
  SketchMatrix = 1,
  BaseNull = 2,
  BaseSpiked = 3,
  Conditioned = 4,
  Event = 5,
  Chi2 = 6,
  TotalVariation = 7,
  Estimator = 8,
  Mixture = 9,
  Verification = 10,
};

/// One reproducible random stream, keyed by (seed, purpose, index).
///
/// Streams with different keys are statistically independent, so a Monte
/// Carlo loop can hand stream `i` to trial `i` and obtain results that do not
/// depend on how trials are scheduled across threads.
///
/// Normals and uniforms are derived from the raw 64-bit engine output with
/// fixed formulas rather than the <random> distributions, whose algorithms
/// are implementation-defined.
class Stream {
 public:
  Stream(std::uint64_t seed, Purpose purpose, std::uint64_t index = 0);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal (Marsaglia polar method).
  double normal();

  /// Uniform integer in [0, bound). `bound` must be positive.
  std::size_t below(std::size_t bound);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// SplitMix64 finalizer; exposed for deriving sub-seeds.
std::uint64_t mix64(std::uint64_t x);

/// Derives a child seed from a parent seed and a label.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label);

}  // namespace sketchlb
