#pragma once

#include <cmath>
#include <vector>

#include "sketchlb/hard_instance.hpp"

namespace sketchlb::detail {

/// Sample mean and its standard error, summed in index order.
inline Estimate mean_with_se(const std::vector<double>& values) {
  const double count = static_cast<double>(values.size());
  if (values.empty()) return {};
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const double mean = static_cast<double>(sum / values.size());
  if (values.size() < 2) return {mean, 0.0};
  long double sq = 0.0L;
  for (double v : values) sq += (v - mean) * static_cast<long double>(v - mean);
  const double variance = static_cast<double>(sq / (values.size() - 1));
  return {mean, std::sqrt(variance / count)};
}

}  // namespace sketchlb::detail
