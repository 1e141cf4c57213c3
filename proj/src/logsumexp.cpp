#include "sketchlb/logsumexp.hpp"

#include <stdexcept>

#include "gram_tiles.hpp"

namespace sketchlb {

double log_gram_exp_sum(const Eigen::MatrixXd& columns, std::span<const double> log_weights,
                        double scale) {
  if (static_cast<Eigen::Index>(log_weights.size()) != columns.cols()) {
    throw std::invalid_argument("log_gram_exp_sum: one log-weight per column required");
  }
  const Eigen::Map<const Eigen::ArrayXd> lw(log_weights.data(), columns.cols());
  const auto states = detail::walk_upper_gram<LogSumAccumulator>(
      columns, [] { return LogSumAccumulator{}; },
      [&](LogSumAccumulator& acc, Eigen::Index i0, Eigen::Index j0, const Eigen::MatrixXd& tile) {
        const Eigen::Index rows = tile.rows(), width = tile.cols();
        Eigen::ArrayXXd terms = scale * tile.array();
        terms.colwise() += lw.segment(i0, rows);
        terms.rowwise() += lw.segment(j0, width).transpose();
        // Only the tile on the diagonal reaches below it: entries with i > j.
        const bool diagonal = j0 == i0;
        if (diagonal) {
          for (Eigen::Index c = 0; c < std::min(rows, width); ++c) {
            terms.col(c).segment(c + 1, rows - c - 1).setConstant(-std::numeric_limits<double>::infinity());
          }
        }
        const double tile_max = terms.maxCoeff();
        if (tile_max == -std::numeric_limits<double>::infinity()) return;
        terms = (terms - tile_max).exp();
        long double sum = 0.0L;
        for (Eigen::Index c = 0; c < width; ++c) sum += terms.col(c).sum();
        // Off-diagonal pairs stand for both (i, j) and (j, i).
        sum *= 2.0L;
        if (diagonal) {
          for (Eigen::Index c = 0; c < std::min(rows, width); ++c) {
            sum -= terms(c, c);
            // Masked entries below the diagonal may come back as tiny nonzeros.
            for (Eigen::Index r = c + 1; r < rows; ++r) sum -= 2.0L * terms(r, c);
          }
        }
        acc.add_scaled(tile_max, sum);
      });
  LogSumAccumulator total;
  for (const auto& s : states) total.merge(s);
  return total.value();
}

}  // namespace sketchlb
