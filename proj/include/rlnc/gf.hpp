#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace rlnc::gf {

using Elem = std::uint16_t;

/// Arithmetic in GF(2^w) for w = 8 or 16.  Addition is xor; multiplication
/// goes through log/antilog tables built over a fixed primitive polynomial
/// (0x11d for w = 8, 0x1100b for w = 16).  The constructor verifies that
/// x = 2 generates the full multiplicative group, so a bad polynomial cannot
/// produce silently wrong tables.
class Field {
 public:
  explicit Field(int width);

  int width() const { return w_; }
  std::uint32_t order() const { return q_; }
  Elem mask() const { return static_cast<Elem>(q_ - 1); }

  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return alog_[log_[a] + log_[b]];
  }

  /// Multiplicative inverse; a must be nonzero.
  Elem inv(Elem a) const;

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  /// dst[i] ^= c * src[i] for all i.  The workhorse of every engine.
  void axpy(std::span<Elem> dst, std::span<const Elem> src, Elem c) const;

  /// row[i] *= c for all i.
  void scale(std::span<Elem> row, Elem c) const;

  static const Field& gf8();
  static const Field& gf16();
  static const Field& of_width(int w);

 private:
  int w_;
  std::uint32_t q_;
  std::uint32_t poly_;
  std::vector<std::uint32_t> log_;  // index by element, valid for x != 0
  std::vector<Elem> alog_;          // doubled so exponent sums skip the mod
};

/// Uniform draw over the whole field (zero included).  The field order is a
/// power of two, so masking raw engine output is exactly uniform.
inline Elem random_elem(std::mt19937_64& rng, const Field& f) {
  return static_cast<Elem>(rng() & f.mask());
}

std::vector<Elem> random_vector(std::size_t len, std::mt19937_64& rng, const Field& f);

}  // namespace rlnc::gf
