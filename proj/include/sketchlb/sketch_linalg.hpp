#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace sketchlb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// An m x n measurement matrix with orthonormal rows (A A^T = I_m).
class SketchMatrix {
 public:
  /// Wraps an explicit matrix after checking |<row_r,row_s> - delta_rs| <= tolerance
  /// for every pair of rows. Throws std::invalid_argument otherwise.
  static SketchMatrix from_rows(Matrix entries, double tolerance = 1e-9);

  std::size_t rows() const { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(entries_.cols()); }
  const Matrix& entries() const { return entries_; }

  auto column(std::size_t i) const { return entries_.col(static_cast<Eigen::Index>(i)); }
  double column_norm(std::size_t i) const { return column(i).norm(); }

  /// Sketch of x, i.e. A x.
  Vector apply(const Vector& x) const;
  /// Minimum-norm preimage A^T s of a sketch s.
  Vector adjoint_apply(const Vector& sketch) const;

 private:
  explicit SketchMatrix(Matrix entries) : entries_(std::move(entries)) {}
  friend SketchMatrix make_orthonormal_sketch(std::size_t m, std::size_t n, std::uint64_t seed);

  Matrix entries_;
};

/// Columns whose Euclidean norm is at most 10 * sqrt(m / n).
struct ColumnSet {
  std::vector<std::size_t> indices;  // sorted, 0-based
  double threshold = 0.0;
  std::size_t n = 0;

  std::size_t size() const { return indices.size(); }
  std::size_t complement_size() const { return n - indices.size(); }
  std::vector<std::size_t> complement() const;
};

/// 10 * sqrt(m / n).
double column_norm_threshold(std::size_t m, std::size_t n);

/// Row-orthonormalization of an m x n standard Gaussian draw.
///
/// The draw is filled row by row from the (seed, SketchMatrix) stream, then
/// its transpose is factored with Householder QR. Columns of Q are flipped so
/// that diag(R) >= 0, which makes the factorization unique and the result a
/// deterministic function of (m, n, seed). Throws std::invalid_argument unless
/// 1 <= m <= n.
SketchMatrix make_orthonormal_sketch(std::size_t m, std::size_t n, std::uint64_t seed);

/// Sum over all column pairs of <A_i, A_j>^2, i.e. ||A^T A||_F^2. Equals m for
/// orthonormal rows. Evaluated in fixed-order tiles, never materializing A^T A.
double gram_frobenius_total(const SketchMatrix& a);

/// The set S of columns meeting the norm threshold (non-strict). Throws
/// std::logic_error if S comes out empty, which orthonormal rows rule out.
ColumnSet small_column_set(const SketchMatrix& a);

/// Dense Gram matrix of the columns in `set`, indexed by position in
/// set.indices. Quadratic memory; meant for small n.
Matrix column_gram(const SketchMatrix& a, const ColumnSet& set);

/// Copies the listed columns into a dense m x |indices| matrix.
Matrix gather_columns(const SketchMatrix& a, const std::vector<std::size_t>& indices);

/// Plain-text dump: "m n" then m lines of n values with 17 significant digits.
void write_matrix(std::ostream& out, const SketchMatrix& a);
SketchMatrix read_matrix(std::istream& in, double tolerance = 1e-9);

}  // namespace sketchlb
