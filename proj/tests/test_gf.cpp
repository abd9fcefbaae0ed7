#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "rlnc/gf.hpp"

using rlnc::gf::Elem;
using rlnc::gf::Field;

namespace {

// Reference multiply: carry-less (polynomial) product followed by long
// division by the field polynomial.  Shares nothing with the table-driven
// implementation under test.
Elem ref_mul(Elem a, Elem b, int w, std::uint32_t poly) {
  std::uint64_t prod = 0;
  std::uint64_t aa = a;
  for (int i = 0; i < w; ++i)
    if ((b >> i) & 1) prod ^= aa << i;
  for (int bit = 2 * w - 2; bit >= w; --bit)
    if ((prod >> bit) & 1) prod ^= std::uint64_t(poly) << (bit - w);
  return static_cast<Elem>(prod);
}

constexpr std::uint32_t kPoly8 = 0x11d;
constexpr std::uint32_t kPoly16 = 0x1100b;

}  // namespace

TEST_CASE("multiplication basics") {
  const Field& f8 = Field::gf8();
  const Field& f16 = Field::gf16();

  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const Elem x8 = static_cast<Elem>(rng() & 0xff);
    const Elem x16 = static_cast<Elem>(rng() & 0xffff);
    CHECK(f8.mul(0, x8) == 0);
    CHECK(f8.mul(1, x8) == x8);
    CHECK(f16.mul(0, x16) == 0);
    CHECK(f16.mul(1, x16) == x16);
  }

  CHECK(f8.mul(0x02, 0x80) == 0x1D);
  CHECK(f8.width() == 8);
  CHECK(f8.order() == 256);
  CHECK(f16.width() == 16);
  CHECK(f16.order() == 65536);
  CHECK(&Field::of_width(8) == &f8);
  CHECK(&Field::of_width(16) == &f16);
}

TEST_CASE("table multiply matches long-division reference") {
  const Field& f8 = Field::gf8();
  const Field& f16 = Field::gf16();
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20000; ++t) {
    const Elem a8 = static_cast<Elem>(rng() & 0xff), b8 = static_cast<Elem>(rng() & 0xff);
    CHECK(f8.mul(a8, b8) == ref_mul(a8, b8, 8, kPoly8));
    const Elem a16 = static_cast<Elem>(rng() & 0xffff), b16 = static_cast<Elem>(rng() & 0xffff);
    CHECK(f16.mul(a16, b16) == ref_mul(a16, b16, 16, kPoly16));
  }
}

TEST_CASE("field axioms hold on random triples") {
  for (int w : {8, 16}) {
    const Field& f = Field::of_width(w);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100000; ++t) {
      const Elem a = static_cast<Elem>(rng() & f.mask());
      const Elem b = static_cast<Elem>(rng() & f.mask());
      const Elem c = static_cast<Elem>(rng() & f.mask());
      CHECK(f.mul(a, b) == f.mul(b, a));
      CHECK(f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c));
      CHECK(f.mul(a, static_cast<Elem>(b ^ c)) == (f.mul(a, b) ^ f.mul(a, c)));
    }
  }
}

TEST_CASE("inverse and division") {
  for (int w : {8, 16}) {
    const Field& f = Field::of_width(w);
    std::mt19937_64 rng(4);
    for (int t = 0; t < 5000; ++t) {
      Elem a = static_cast<Elem>(rng() & f.mask());
      if (a == 0) a = 1;
      CHECK(f.mul(a, f.inv(a)) == 1);
      const Elem b = static_cast<Elem>(rng() & f.mask());
      CHECK(f.mul(f.div(b, a), a) == b);
    }
    // Exhaustive for the small field.
    if (w == 8)
      for (int a = 1; a < 256; ++a)
        CHECK(f.mul(static_cast<Elem>(a), f.inv(static_cast<Elem>(a))) == 1);
  }
}

TEST_CASE("axpy and scale match elementwise arithmetic") {
  const Field& f = Field::gf16();
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t len = rng() % 64;
    std::vector<Elem> dst = rlnc::gf::random_vector(len, rng, f);
    std::vector<Elem> src = rlnc::gf::random_vector(len, rng, f);
    const Elem c = rlnc::gf::random_elem(rng, f);
    std::vector<Elem> expect = dst;
    for (std::size_t i = 0; i < len; ++i) expect[i] ^= f.mul(c, src[i]);
    f.axpy(dst, src, c);
    CHECK(dst == expect);

    std::vector<Elem> row = src;
    for (std::size_t i = 0; i < len; ++i) row[i] = f.mul(row[i], c);
    f.scale(src, c);
    CHECK(src == row);
  }
}

TEST_CASE("random draws are deterministic and uniform") {
  const Field& f8 = Field::gf8();

  std::mt19937_64 a(99), b(99);
  CHECK(rlnc::gf::random_vector(0, a, f8).empty());
  CHECK(rlnc::gf::random_vector(32, a, f8) == rlnc::gf::random_vector(32, b, f8));

  // 10^6 draws over 256 values: each count within 3 sigma of N/256.
  std::mt19937_64 rng(6);
  std::array<std::uint32_t, 256> counts{};
  const int N = 1000000;
  for (int t = 0; t < N; ++t) counts[rlnc::gf::random_elem(rng, f8)]++;
  const double mean = N / 256.0;
  const double sigma = std::sqrt(N * (1.0 / 256) * (255.0 / 256));
  for (int v = 0; v < 256; ++v) {
    CHECK(counts[v] > mean - 3 * sigma);
    CHECK(counts[v] < mean + 3 * sigma);
  }
}
