#include "sketchlb/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sketchlb {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
  return mix64(mix64(seed) ^ mix64(label + 0x632be59bd9b4e019ULL));
}

Stream::Stream(std::uint64_t seed, Purpose purpose, std::uint64_t index)
    : engine_(mix64(derive_seed(seed, static_cast<std::uint64_t>(purpose)) ^
                    mix64(index * 0xd1b54a32d192ed03ULL + 1))) {}

double Stream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Stream::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  return u * factor;
}

std::size_t Stream::below(std::size_t bound) {
  if (bound == 0) throw std::invalid_argument("Stream::below: bound must be positive");
  // Rejection on the top of the range keeps the result exactly uniform.
  const std::uint64_t b = bound;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % b;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return static_cast<std::size_t>(r % b);
}

}  // namespace sketchlb
