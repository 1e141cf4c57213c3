#pragma once

#include <cmath>
#include <limits>
#include <span>

#include <Eigen/Dense>

namespace sketchlb {

/// Running log-domain sum: value() == log(sum of exp(term)) over added terms.
/// The partial sum is kept relative to the largest term seen so far.
class LogSumAccumulator {
 public:
  void add(double term) {
    if (term == -std::numeric_limits<double>::infinity()) return;
    if (term > max_) {
      sum_ = sum_ * std::exp(static_cast<long double>(max_ - term)) + 1.0L;
      max_ = term;
    } else {
      sum_ += std::exp(static_cast<long double>(term - max_));
    }
  }

  /// Adds exp(max) * scaled_sum, where scaled_sum is already relative to max.
  void add_scaled(double max, long double scaled_sum) {
    if (scaled_sum <= 0.0L) return;
    if (max > max_) {
      sum_ = sum_ * std::exp(static_cast<long double>(max_ - max)) + scaled_sum;
      max_ = max;
    } else {
      sum_ += scaled_sum * std::exp(static_cast<long double>(max - max_));
    }
  }

  void merge(const LogSumAccumulator& other) { add_scaled(other.max_, other.sum_); }

  double value() const {
    if (sum_ <= 0.0L) return -std::numeric_limits<double>::infinity();
    return max_ + static_cast<double>(std::log(sum_));
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  long double sum_ = 0.0L;
};

/// log(sum_i exp(terms_i)); -inf for an empty range.
inline double log_sum_exp(std::span<const double> terms) {
  LogSumAccumulator acc;
  for (double t : terms) acc.add(t);
  return acc.value();
}

/// log( sum_{i,j} exp(log_weights_i + log_weights_j + scale * <c_i, c_j>) )
/// over all ordered pairs of columns of `columns`.
///
/// Works in symmetric tiles so memory stays linear in the column count; tile
/// results are merged in a fixed order, so the value does not depend on the
/// number of worker threads.
double log_gram_exp_sum(const Eigen::MatrixXd& columns, std::span<const double> log_weights,
                        double scale);

}  // namespace sketchlb
