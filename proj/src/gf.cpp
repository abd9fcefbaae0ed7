#include "rlnc/gf.hpp"

#include "rlnc/errors.hpp"

namespace rlnc::gf {

Field::Field(int width) : w_(width) {
  switch (width) {
    case 8:
      poly_ = 0x11d;
      break;
    case 16:
      poly_ = 0x1100b;
      break;
    default:
      throw Error(ErrorKind::Unsupported, "field width must be 8 or 16");
  }
  q_ = 1u << w_;
  log_.assign(q_, 0);
  alog_.assign(2 * (q_ - 1), 0);

  std::uint32_t x = 1;
  for (std::uint32_t e = 0; e < q_ - 1; ++e) {
    if (x != 1 && log_[x] != 0) {
      // x = 2 revisited an element before exhausting the group, i.e. the
      // polynomial is not primitive.
      throw Error(ErrorKind::Unsupported, "generator cycle shorter than field order");
    }
    alog_[e] = static_cast<Elem>(x);
    alog_[e + (q_ - 1)] = static_cast<Elem>(x);
    log_[x] = e;
    x <<= 1;
    if (x & q_) x ^= poly_;
  }
  if (x != 1) throw Error(ErrorKind::Unsupported, "generator does not close its cycle");
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw Error(ErrorKind::Unsupported, "inverse of zero");
  if (a == 1) return 1;
  return alog_[(q_ - 1) - log_[a]];
}

void Field::axpy(std::span<Elem> dst, std::span<const Elem> src, Elem c) const {
  if (c == 0) return;
  const std::uint32_t lc = log_[c];
  const Elem* s = src.data();
  Elem* d = dst.data();
  const std::size_t n = src.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Elem v = s[i];
    if (v) d[i] ^= alog_[lc + log_[v]];
  }
}

void Field::scale(std::span<Elem> row, Elem c) const {
  if (c == 1) return;
  if (c == 0) {
    for (Elem& v : row) v = 0;
    return;
  }
  const std::uint32_t lc = log_[c];
  for (Elem& v : row) {
    if (v) v = alog_[lc + log_[v]];
  }
}

const Field& Field::gf8() {
  static const Field f(8);
  return f;
}

const Field& Field::gf16() {
  static const Field f(16);
  return f;
}

const Field& Field::of_width(int w) {
  if (w == 8) return gf8();
  if (w == 16) return gf16();
  throw Error(ErrorKind::Unsupported, "field width must be 8 or 16");
}

std::vector<Elem> random_vector(std::size_t len, std::mt19937_64& rng, const Field& f) {
  std::vector<Elem> v(len);
  for (auto& e : v) e = random_elem(rng, f);
  return v;
}

}  // namespace rlnc::gf
