#pragma once

// Independent reference computations for the test suites. Nothing here may
// call into the log-domain kernels it is used to check.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "sketchlb/rng.hpp"
#include "sketchlb/sketch_linalg.hpp"

namespace oracle {

/// Composite Simpson rule with `intervals` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t intervals = 200000) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / static_cast<double>(intervals);
  long double sum = f(a) + f(b);
  for (std::size_t i = 1; i < intervals; ++i) {
    sum += (i % 2 ? 4.0L : 2.0L) * f(a + h * static_cast<double>(i));
  }
  return static_cast<double>(sum * h / 3.0L);
}

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// |S|^-2 sum_{i,j in S} exp(scale <A_i, A_j>) by direct summation. Long
/// double so that moderately large exponents stay finite.
inline long double naive_exp_gram_mean(const sketchlb::SketchMatrix& a, const std::vector<std::size_t>& set,
                                       double scale) {
  long double sum = 0.0L;
  for (std::size_t i : set) {
    for (std::size_t j : set) sum += std::exp(static_cast<long double>(scale * a.column(i).dot(a.column(j))));
  }
  const long double k = static_cast<long double>(set.size());
  return sum / (k * k);
}

/// |exp(log_value) / reference - 1|, evaluated in long double.
inline double log_relative_error(double log_value, long double reference) {
  return static_cast<double>(std::abs(std::exp(static_cast<long double>(log_value)) / reference - 1.0L));
}

/// sum_{i,j} w_i w_j exp(<mu_i, mu_j>) - 1 by direct summation.
inline double naive_chi2(const Eigen::MatrixXd& means, const std::vector<double>& weights) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < means.cols(); ++i) {
    for (Eigen::Index j = 0; j < means.cols(); ++j) {
      sum += weights[i] * weights[j] * std::exp(means.col(i).dot(means.col(j)));
    }
  }
  return sum - 1.0;
}

/// Uniform mixture means in dimension `dim` with squared norms uniform in [0, max_sq].
inline Eigen::MatrixXd random_means(sketchlb::Stream& rng, std::size_t dim, std::size_t count,
                                    double max_sq) {
  Eigen::MatrixXd means(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(count));
  for (Eigen::Index c = 0; c < means.cols(); ++c) {
    for (Eigen::Index r = 0; r < means.rows(); ++r) means(r, c) = rng.normal();
    means.col(c) *= std::sqrt(max_sq * rng.uniform()) / means.col(c).norm();
  }
  return means;
}

inline double relative_error(double value, double expected) {
  return expected == 0.0 ? std::abs(value) : std::abs(value - expected) / std::abs(expected);
}

}  // namespace oracle
