#include "sketchlb/sketch_linalg.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "gram_tiles.hpp"
#include "sketchlb/rng.hpp"

namespace sketchlb {

SketchMatrix SketchMatrix::from_rows(Matrix entries, double tolerance) {
  if (entries.rows() < 1 || entries.cols() < entries.rows()) {
    throw std::invalid_argument("SketchMatrix: need 1 <= rows <= cols");
  }
  const Matrix gram = entries * entries.transpose();
  const Matrix deviation = gram - Matrix::Identity(gram.rows(), gram.cols());
  const double worst = deviation.cwiseAbs().maxCoeff();
  if (!(worst <= tolerance)) {
    throw std::invalid_argument("SketchMatrix: rows are not orthonormal (max deviation " +
                                std::to_string(worst) + ")");
  }
  return SketchMatrix(std::move(entries));
}

Vector SketchMatrix::apply(const Vector& x) const {
  if (x.size() != entries_.cols()) throw std::invalid_argument("SketchMatrix::apply: dimension mismatch");
  return entries_ * x;
}

Vector SketchMatrix::adjoint_apply(const Vector& sketch) const {
  if (sketch.size() != entries_.rows()) {
    throw std::invalid_argument("SketchMatrix::adjoint_apply: dimension mismatch");
  }
  return entries_.transpose() * sketch;
}

std::vector<std::size_t> ColumnSet::complement() const {
  std::vector<std::size_t> out;
  out.reserve(complement_size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (next < indices.size() && indices[next] == i) {
      ++next;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

double column_norm_threshold(std::size_t m, std::size_t n) {
  return 10.0 * std::sqrt(static_cast<double>(m) / static_cast<double>(n));
}

SketchMatrix make_orthonormal_sketch(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m == 0 || m > n) {
    throw std::invalid_argument("make_orthonormal_sketch: need 1 <= m <= n (got m=" +
                                std::to_string(m) + ", n=" + std::to_string(n) + ")");
  }
  const auto rows = static_cast<Eigen::Index>(m);
  const auto cols = static_cast<Eigen::Index>(n);

  // Draw the m x n Gaussian matrix row by row, stored transposed (n x m).
  Stream stream(seed, Purpose::SketchMatrix);
  Matrix draw_t(cols, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) draw_t(c, r) = stream.normal();
  }

  Eigen::HouseholderQR<Matrix> qr(draw_t);
  Matrix q = qr.householderQ() * Matrix::Identity(cols, rows);
  const auto diag = qr.matrixQR().diagonal();
  for (Eigen::Index k = 0; k < rows; ++k) {
    if (diag(k) < 0.0) q.col(k) = -q.col(k);
  }
  return SketchMatrix(q.transpose());
}

double gram_frobenius_total(const SketchMatrix& a) {
  struct Partial {
    long double sum = 0.0L;
  };
  const auto partials = detail::walk_upper_gram<Partial>(
      a.entries(), [] { return Partial{}; },
      [](Partial& p, Eigen::Index i0, Eigen::Index j0, const Matrix& tile) {
        for (Eigen::Index c = 0; c < tile.cols(); ++c) {
          const Eigen::Index j = j0 + c;
          for (Eigen::Index r = 0; r < tile.rows() && i0 + r <= j; ++r) {
            const double g2 = tile(r, c) * tile(r, c);
            p.sum += (i0 + r == j) ? g2 : 2.0 * g2;
          }
        }
      });
  long double total = 0.0L;
  for (const auto& p : partials) total += p.sum;
  return static_cast<double>(total);
}

ColumnSet small_column_set(const SketchMatrix& a) {
  ColumnSet set;
  set.n = a.cols();
  set.threshold = column_norm_threshold(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) {
    if (a.column_norm(i) <= set.threshold) set.indices.push_back(i);
  }
  if (set.indices.empty()) {
    throw std::logic_error("small_column_set: no column meets the norm threshold");
  }
  return set;
}

Matrix gather_columns(const SketchMatrix& a, const std::vector<std::size_t>& indices) {
  Matrix out(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = a.column(indices[k]);
  }
  return out;
}

Matrix column_gram(const SketchMatrix& a, const ColumnSet& set) {
  const Matrix cols = gather_columns(a, set.indices);
  return cols.transpose() * cols;
}

void write_matrix(std::ostream& out, const SketchMatrix& a) {
  const auto old_precision = out.precision();
  out << a.rows() << ' ' << a.cols() << '\n' << std::setprecision(17);
  for (Eigen::Index r = 0; r < a.entries().rows(); ++r) {
    for (Eigen::Index c = 0; c < a.entries().cols(); ++c) {
      if (c) out << ' ';
      out << a.entries()(r, c);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

SketchMatrix read_matrix(std::istream& in, double tolerance) {
  std::size_t m = 0, n = 0;
  if (!(in >> m >> n) || m == 0 || n < m) {
    throw std::runtime_error("read_matrix: malformed header, expected \"m n\" with 1 <= m <= n");
  }
  Matrix entries(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (Eigen::Index r = 0; r < entries.rows(); ++r) {
    for (Eigen::Index c = 0; c < entries.cols(); ++c) {
      if (!(in >> entries(r, c))) throw std::runtime_error("read_matrix: truncated matrix body");
    }
  }
  return SketchMatrix::from_rows(std::move(entries), tolerance);
}

}  // namespace sketchlb
