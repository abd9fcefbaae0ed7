#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rlnc/gf.hpp"

namespace rlnc {

/// Row-major collection of coefficient vectors over one field.  Every row has
/// length cols; rows may be freely appended.
struct CoeffMatrix {
  std::size_t cols = 0;
  std::vector<std::vector<gf::Elem>> rows;

  CoeffMatrix() = default;
  explicit CoeffMatrix(std::size_t c) : cols(c) {}

  void append_row(std::vector<gf::Elem> row);
  std::size_t row_count() const { return rows.size(); }
};

/// Incremental row-echelon accumulator with normalized pivots (leading
/// coefficient 1), kept sorted by pivot column.  absorb() returns whether the
/// rank grew; reduce() maps a row to its residue modulo the current span.
class Echelon {
 public:
  Echelon(std::size_t cols, const gf::Field& f) : cols_(cols), f_(&f) {}

  bool absorb(std::vector<gf::Elem> row);
  void reduce(std::span<gf::Elem> row) const;

  /// Back-eliminate so every pivot column is zero in all other rows (full
  /// reduced echelon form).  After this, any vector v in the row space
  /// satisfies v = sum_j v[pivot_cols()[j]] * rows()[j].
  void full_reduce();

  int rank() const { return static_cast<int>(rows_.size()); }
  std::size_t cols() const { return cols_; }
  const std::vector<std::vector<gf::Elem>>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivot_cols() const { return pivot_cols_; }

 private:
  std::size_t cols_;
  const gf::Field* f_;
  std::vector<std::vector<gf::Elem>> rows_;  // parallel to pivot_cols_
  std::vector<std::size_t> pivot_cols_;      // strictly increasing
};

int rank(const CoeffMatrix& m, const gf::Field& f);

/// Dimension of the intersection of the two row spaces, computed as
/// rank(A) + rank(B) - rank(A stacked on B).
int intersection_dim(const CoeffMatrix& a, const CoeffMatrix& b, const gf::Field& f);

}  // namespace rlnc
