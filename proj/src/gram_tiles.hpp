#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "sketchlb/parallel.hpp"

namespace sketchlb::detail {

inline constexpr Eigen::Index kRowBlock = 64;
inline constexpr Eigen::Index kColTile = 2048;

/// Visits the upper triangle (j >= i) of C^T C in tiles. For each row block,
/// `make()` creates a per-block state and `visit(state, i0, j0, tile)` is called
/// with tile(r, c) = <C_{i0+r}, C_{j0+c}> and j0 >= i0. Returns the per-block
/// states in row-block order.
template <typename State, typename Make, typename Visit>
std::vector<State> walk_upper_gram(const Eigen::MatrixXd& cols, Make make, Visit visit) {
  const Eigen::Index k = cols.cols();
  const std::size_t blocks = static_cast<std::size_t>((k + kRowBlock - 1) / kRowBlock);
  std::vector<State> states(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    State state = make();
    const Eigen::Index i0 = static_cast<Eigen::Index>(b) * kRowBlock;
    const Eigen::Index rows = std::min(kRowBlock, k - i0);
    const auto left = cols.middleCols(i0, rows);
    Eigen::MatrixXd tile;
    for (Eigen::Index j0 = i0; j0 < k; j0 += kColTile) {
      const Eigen::Index width = std::min(kColTile, k - j0);
      tile.noalias() = left.transpose() * cols.middleCols(j0, width);
      visit(state, i0, j0, tile);
    }
    states[b] = std::move(state);
  });
  return states;
}

}  // namespace sketchlb::detail
