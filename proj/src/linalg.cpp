#include "rlnc/linalg.hpp"

#include <algorithm>

#include "rlnc/errors.hpp"

namespace rlnc {

void CoeffMatrix::append_row(std::vector<gf::Elem> row) {
  if (row.size() != cols) throw Error(ErrorKind::Unsupported, "row length mismatch");
  rows.push_back(std::move(row));
}

bool Echelon::absorb(std::vector<gf::Elem> row) {
  if (row.size() != cols_) throw Error(ErrorKind::Unsupported, "row length mismatch");
  reduce(row);
  std::size_t lead = cols_;
  for (std::size_t c = 0; c < cols_; ++c) {
    if (row[c]) {
      lead = c;
      break;
    }
  }
  if (lead == cols_) return false;
  f_->scale(std::span<gf::Elem>(row.data() + lead, cols_ - lead), f_->inv(row[lead]));
  auto pos = std::lower_bound(pivot_cols_.begin(), pivot_cols_.end(), lead);
  std::size_t idx = static_cast<std::size_t>(pos - pivot_cols_.begin());
  pivot_cols_.insert(pos, lead);
  rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(idx), std::move(row));
  return true;
}

void Echelon::reduce(std::span<gf::Elem> row) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const std::size_t c = pivot_cols_[i];
    const gf::Elem v = row[c];
    if (v) {
      f_->axpy(row.subspan(c), std::span<const gf::Elem>(rows_[i].data() + c, cols_ - c), v);
    }
  }
}

void Echelon::full_reduce() {
  // Back-substitution pass, highest pivot first.  Pivots are monic, so
  // subtracting v * pivot_row clears column c of the target row exactly.
  for (std::size_t i = rows_.size(); i-- > 1;) {
    const std::size_t c = pivot_cols_[i];
    for (std::size_t r = 0; r < i; ++r) {
      const gf::Elem v = rows_[r][c];
      if (v == 0) continue;
      f_->axpy(std::span<gf::Elem>(rows_[r].data() + c, cols_ - c),
               std::span<const gf::Elem>(rows_[i].data() + c, cols_ - c), v);
    }
  }
}

int rank(const CoeffMatrix& m, const gf::Field& f) {
  Echelon e(m.cols, f);
  for (const auto& r : m.rows) e.absorb(r);
  return e.rank();
}

int intersection_dim(const CoeffMatrix& a, const CoeffMatrix& b, const gf::Field& f) {
  if (a.cols != b.cols) throw Error(ErrorKind::Unsupported, "column count mismatch");
  Echelon ea(a.cols, f);
  for (const auto& r : a.rows) ea.absorb(r);
  Echelon eboth(a.cols, f);
  for (const auto& r : a.rows) eboth.absorb(r);
  int rank_b = 0;
  {
    Echelon eb(b.cols, f);
    for (const auto& r : b.rows) {
      eb.absorb(r);
      eboth.absorb(r);
    }
    rank_b = eb.rank();
  }
  return ea.rank() + rank_b - eboth.rank();
}

}  // namespace rlnc
