#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "rlnc/gf.hpp"
#include "rlnc/linalg.hpp"

using rlnc::CoeffMatrix;
using rlnc::Echelon;
using rlnc::gf::Elem;
using rlnc::gf::Field;

namespace {

CoeffMatrix from_rows(std::size_t cols, std::vector<std::vector<Elem>> rows) {
  CoeffMatrix m(cols);
  for (auto& r : rows) m.append_row(std::move(r));
  return m;
}

CoeffMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                          const Field& f) {
  CoeffMatrix m(cols);
  for (std::size_t i = 0; i < rows; ++i) m.append_row(rlnc::gf::random_vector(cols, rng, f));
  return m;
}

}  // namespace

TEST_CASE("rank of canonical matrices") {
  const Field& f = Field::gf16();

  CoeffMatrix id(5);
  for (int i = 0; i < 5; ++i) {
    std::vector<Elem> row(5, 0);
    row[i] = 1;
    id.append_row(std::move(row));
  }
  CHECK(rank(id, f) == 5);

  CoeffMatrix zeros = from_rows(4, {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}});
  CHECK(rank(zeros, f) == 0);

  // {v, 2v, u} with u outside span{v}: rank 2.
  const std::vector<Elem> v = {1, 2, 3};
  std::vector<Elem> twice = v;
  f.scale(twice, 2);
  const std::vector<Elem> u = {1, 0, 0};
  CHECK(rank(from_rows(3, {v, twice, u}), f) == 2);
  // Same set absorbed in the opposite order gives the same rank.
  CHECK(rank(from_rows(3, {u, twice, v}), f) == 2);
}

TEST_CASE("rank is invariant under row permutation and scaling") {
  const Field& f = Field::gf8();
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const std::size_t rows = 1 + rng() % 8, cols = 1 + rng() % 8;
    CoeffMatrix m = random_matrix(rows, cols, rng, f);
    const int r = rank(m, f);

    CoeffMatrix shuffled = m;
    std::shuffle(shuffled.rows.begin(), shuffled.rows.end(), rng);
    for (auto& row : shuffled.rows) {
      Elem c = rlnc::gf::random_elem(rng, f);
      if (c == 0) c = 1;
      f.scale(row, c);
    }
    CHECK(rank(shuffled, f) == r);
  }
}

TEST_CASE("intersection dimension") {
  const Field& f = Field::gf16();

  CoeffMatrix a = from_rows(4, {{1, 0, 0, 0}, {0, 1, 0, 0}});  // span{e1,e2}
  CoeffMatrix b = from_rows(4, {{0, 1, 0, 0}, {0, 0, 1, 0}});  // span{e2,e3}
  CHECK(intersection_dim(a, b, f) == 1);

  CHECK(intersection_dim(a, a, f) == rank(a, f));

  CoeffMatrix c = from_rows(4, {{0, 0, 0, 1}});  // disjoint coordinate block
  CHECK(intersection_dim(a, c, f) == 0);

  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    CoeffMatrix x = random_matrix(1 + rng() % 6, 6, rng, f);
    CoeffMatrix y = random_matrix(1 + rng() % 6, 6, rng, f);
    const int d = intersection_dim(x, y, f);
    CHECK(d == intersection_dim(y, x, f));
    CHECK(d >= 0);
    CHECK(d <= std::min(rank(x, f), rank(y, f)));
  }
}

TEST_CASE("echelon absorb and reduce") {
  const Field& f = Field::gf16();
  std::mt19937_64 rng(13);
  for (int t = 0; t < 50; ++t) {
    const std::size_t cols = 4 + rng() % 8;
    Echelon ech(cols, f);
    std::vector<std::vector<Elem>> basis;
    for (int i = 0; i < 6; ++i) {
      std::vector<Elem> row = rlnc::gf::random_vector(cols, rng, f);
      if (ech.absorb(row)) basis.push_back(row);
    }
    CHECK(ech.rank() == static_cast<int>(basis.size()));

    // A random combination of absorbed rows reduces to zero and does not grow
    // the rank.
    std::vector<Elem> combo(cols, 0);
    for (const auto& row : basis) f.axpy(combo, row, rlnc::gf::random_elem(rng, f));
    std::vector<Elem> residue = combo;
    ech.reduce(residue);
    CHECK(std::all_of(residue.begin(), residue.end(), [](Elem e) { return e == 0; }));
    CHECK_FALSE(ech.absorb(combo));
  }
}

TEST_CASE("full_reduce exposes coordinates over the pivot columns") {
  const Field& f = Field::gf16();
  std::mt19937_64 rng(14);
  for (int t = 0; t < 50; ++t) {
    const std::size_t cols = 4 + rng() % 8;
    Echelon ech(cols, f);
    std::vector<std::vector<Elem>> basis;
    for (int i = 0; i < 5; ++i) {
      std::vector<Elem> row = rlnc::gf::random_vector(cols, rng, f);
      if (ech.absorb(row)) basis.push_back(row);
    }
    ech.full_reduce();

    // Pivot columns form an identity pattern across the stored rows.
    const auto& pivots = ech.pivot_cols();
    REQUIRE(pivots.size() == ech.rows().size());
    for (std::size_t i = 0; i < ech.rows().size(); ++i)
      for (std::size_t j = 0; j < pivots.size(); ++j)
        CHECK(ech.rows()[i][pivots[j]] == (i == j ? 1 : 0));

    // Any vector in the row space equals the pivot-coordinate combination of
    // the reduced rows.
    std::vector<Elem> v(cols, 0);
    for (const auto& row : basis) f.axpy(v, row, rlnc::gf::random_elem(rng, f));
    std::vector<Elem> rebuilt(cols, 0);
    for (std::size_t j = 0; j < pivots.size(); ++j) f.axpy(rebuilt, ech.rows()[j], v[pivots[j]]);
    CHECK(rebuilt == v);
  }
}
