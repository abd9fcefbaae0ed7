#include "rlnc/packetized.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "rlnc/errors.hpp"

namespace rlnc {

namespace {

// splitmix64 finalizer; used to derive a decorrelated coefficient stream from
// the channel seed.
std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

bool is_zero(const std::vector<gf::Elem>& v) {
  return std::all_of(v.begin(), v.end(), [](gf::Elem e) { return e == 0; });
}

}  // namespace

DensePacketizedEngine::DensePacketizedEngine(const ErasureNetwork& net,
                                             std::uint64_t block_length,
                                             const gf::Field& field,
                                             std::uint64_t seed)
    : net_(&net),
      f_(&field),
      k_(block_length),
      dest_(block_length, field),
      rng_(seed) {
  if (k_ == 0 || k_ > kMaxBlockLength)
    throw Error(ErrorKind::MemoryBudget,
                "dense engine needs a block length between 1 and " +
                    std::to_string(kMaxBlockLength) +
                    "; use PacketizedEngine for longer blocks");
  rows_.resize(static_cast<std::size_t>(net.relay_count()) + 1);
  for (int i = 1; i <= net.relay_count(); ++i)
    rows_[static_cast<std::size_t>(i)].assign(
        static_cast<std::size_t>(net.buffer_size(i)),
        std::vector<gf::Elem>(k_, 0));
}

const std::vector<std::vector<gf::Elem>>& DensePacketizedEngine::relay_rows(
    int relay) const {
  return rows_[static_cast<std::size_t>(relay)];
}

int DensePacketizedEngine::step_epoch(ChannelRealization realization) {
  const auto& edges = net_->edges();
  // Phase 1: every link forms its outgoing packet from the transmitter's
  // start-of-epoch contents, whether or not the link is up this epoch.
  std::vector<std::vector<gf::Elem>> tx(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.tail == net_->source()) {
      tx[i] = gf::random_vector(k_, rng_, *f_);
    } else {
      const auto& src = rows_[static_cast<std::size_t>(e.tail)];
      const std::vector<gf::Elem> alpha =
          gf::random_vector(src.size(), rng_, *f_);
      std::vector<gf::Elem> pkt(k_, 0);
      for (std::size_t l = 0; l < src.size(); ++l)
        f_->axpy(pkt, src[l], alpha[l]);
      tx[i] = std::move(pkt);
    }
  }
  // Phase 2: packets on up links are absorbed one edge at a time.
  int delivered = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!(realization >> i & 1)) continue;
    const Edge& e = edges[i];
    if (e.head == net_->dest()) {
      if (dest_.absorb(std::move(tx[i]))) ++delivered;
    } else {
      auto& dst = rows_[static_cast<std::size_t>(e.head)];
      const std::vector<gf::Elem> r = gf::random_vector(dst.size(), rng_, *f_);
      for (std::size_t l = 0; l < dst.size(); ++l)
        f_->axpy(dst[l], tx[i], r[l]);
    }
  }
  ++epoch_;
  return delivered;
}

int DensePacketizedEngine::measure_occupancy(std::uint32_t relay_mask) const {
  // Rank growth is measured in the quotient by the destination span, so a row
  // is first reduced against everything already delivered.
  Echelon ech(k_, *f_);
  auto absorb_side = [&](bool selected) {
    for (int i = 1; i <= net_->relay_count(); ++i) {
      if ((relay_mask >> (i - 1) & 1) != static_cast<std::uint32_t>(selected))
        continue;
      for (const auto& stored : rows_[static_cast<std::size_t>(i)]) {
        std::vector<gf::Elem> row = stored;
        dest_.reduce(row);
        ech.absorb(std::move(row));
      }
    }
  };
  absorb_side(false);
  const int complement_rank = ech.rank();
  absorb_side(true);
  return ech.rank() - complement_rank;
}

PacketizedEngine::PacketizedEngine(const ErasureNetwork& net,
                                   std::uint64_t block_length,
                                   const gf::Field& field, std::uint64_t seed)
    : net_(&net), f_(&field), k_(block_length), rng_(seed) {
  offset_.assign(static_cast<std::size_t>(net.relay_count()) + 1, 0);
  std::size_t total = 0;
  for (int i = 1; i <= net.relay_count(); ++i) {
    offset_[static_cast<std::size_t>(i)] = total;
    total += static_cast<std::size_t>(net.buffer_size(i));
  }
  rows_.assign(total, {});
}

void PacketizedEngine::allocate_direction(std::vector<Pending>& pending,
                                          std::size_t next) {
  ++width_;
  for (auto& row : rows_) row.push_back(0);
  for (std::size_t t = next; t < pending.size(); ++t) {
    Pending& p = pending[t];
    // A not-yet-absorbed source packet has a uniform component along the
    // newly split-off direction; anything formed from stored rows has none.
    p.coords.push_back(p.fresh ? gf::random_elem(rng_, *f_) : 0);
  }
}

void PacketizedEngine::quotient_out(std::vector<gf::Elem> dir,
                                    std::vector<Pending>& pending,
                                    std::size_t next) {
  // The delivered combination `dir` is now part of the destination span, so
  // one basis column becomes expressible through the others and is removed
  // from every stored row and every packet still waiting to be absorbed.
  std::size_t piv = dir.size();
  while (dir[piv - 1] == 0) --piv;  // caller guarantees a nonzero entry
  --piv;
  f_->scale(dir, f_->inv(dir[piv]));
  const std::size_t last = width_ - 1;
  auto transform = [&](std::vector<gf::Elem>& row) {
    const gf::Elem v = row[piv];
    if (v != 0) f_->axpy(row, dir, v);  // clears row[piv]
    row[piv] = row[last];               // move the tail column into the gap
    row.pop_back();
  };
  for (auto& row : rows_) transform(row);
  for (std::size_t t = next; t < pending.size(); ++t)
    transform(pending[t].coords);
  --width_;
}

void PacketizedEngine::compact() {
  // Re-express every stored row over a reduced-echelon basis of the rows
  // themselves; directions nothing references any more fall away.
  Echelon ech(width_, *f_);
  for (const auto& row : rows_) ech.absorb(row);
  ech.full_reduce();
  const auto& piv = ech.pivot_cols();
  const std::size_t r = piv.size();
  for (auto& row : rows_) {
    std::vector<gf::Elem> packed(r);
    for (std::size_t j = 0; j < r; ++j) packed[j] = row[piv[j]];
    row = std::move(packed);
  }
  width_ = r;
}

int PacketizedEngine::step_epoch(ChannelRealization realization) {
  const auto& edges = net_->edges();
  // Phase 1, up links only: a packet on a down link never interacts with
  // anything, so forming it is skipped.
  std::vector<Pending> pending;
  pending.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!(realization >> i & 1)) continue;
    const Edge& e = edges[i];
    Pending p;
    p.edge = static_cast<std::uint32_t>(i);
    if (e.tail == net_->source()) {
      p.fresh = true;
      p.coords = gf::random_vector(width_, rng_, *f_);
    } else {
      p.fresh = false;
      const std::size_t base = offset_[static_cast<std::size_t>(e.tail)];
      const auto m = static_cast<std::size_t>(net_->buffer_size(e.tail));
      const std::vector<gf::Elem> alpha = gf::random_vector(m, rng_, *f_);
      std::vector<gf::Elem> pkt(width_, 0);
      for (std::size_t l = 0; l < m; ++l)
        f_->axpy(pkt, rows_[base + l], alpha[l]);
      p.coords = std::move(pkt);
    }
    pending.push_back(std::move(p));
  }
  // Phase 2.
  int delivered = 0;
  for (std::size_t t = 0; t < pending.size(); ++t) {
    Pending& p = pending[t];
    const Edge& e = edges[p.edge];
    const bool fresh = p.fresh && can_allocate();
    if (e.head == net_->dest()) {
      if (fresh) {
        // A direction never seen before is independent of everything
        // delivered so far; it moves straight into the destination span and
        // no stored row references it, so no state changes.
        ++dest_rank_;
        ++delivered;
      } else if (!is_zero(p.coords)) {
        quotient_out(std::move(p.coords), pending, t + 1);
        ++dest_rank_;
        ++delivered;
      }
    } else {
      if (fresh) {
        allocate_direction(pending, t + 1);
        p.coords.resize(width_, 0);
        p.coords[width_ - 1] = 1;  // the new direction, scale absorbed
      }
      const std::size_t base = offset_[static_cast<std::size_t>(e.head)];
      const auto m = static_cast<std::size_t>(net_->buffer_size(e.head));
      const std::vector<gf::Elem> r = gf::random_vector(m, rng_, *f_);
      for (std::size_t l = 0; l < m; ++l)
        f_->axpy(rows_[base + l], p.coords, r[l]);
    }
  }
  ++epoch_;
  if (width_ > static_cast<std::size_t>(net_->total_buffer()) + kWidthSlack)
    compact();
  return delivered;
}

int PacketizedEngine::measure_occupancy(std::uint32_t relay_mask) const {
  Echelon ech(width_, *f_);
  auto absorb_side = [&](bool selected) {
    for (int i = 1; i <= net_->relay_count(); ++i) {
      if ((relay_mask >> (i - 1) & 1) != static_cast<std::uint32_t>(selected))
        continue;
      const std::size_t base = offset_[static_cast<std::size_t>(i)];
      const auto m = static_cast<std::size_t>(net_->buffer_size(i));
      for (std::size_t l = 0; l < m; ++l) ech.absorb(rows_[base + l]);
    }
  };
  absorb_side(false);
  const int complement_rank = ech.rank();
  absorb_side(true);
  return ech.rank() - complement_rank;
}

ThroughputRun run_throughput(const ErasureNetwork& net,
                             std::uint64_t block_length, std::uint64_t seed,
                             const gf::Field& field, std::uint64_t max_epochs) {
  if (block_length == 0)
    throw Error(ErrorKind::Unsupported, "block length must be positive");
  const MinCut cut = min_cut_capacity(net);
  if (!(cut.value > 0.0))
    throw Error(ErrorKind::NonTerminating,
                "min-cut capacity is zero; the block can never be decoded");
  if (max_epochs == 0)
    max_epochs = 100000 + static_cast<std::uint64_t>(
                              10.0 * static_cast<double>(block_length) /
                              cut.value);
  PacketizedEngine eng(net, block_length, field, mix_seed(seed));
  std::mt19937_64 channel(seed);
  while (eng.dest_rank() < block_length) {
    if (eng.epoch() >= max_epochs)
      throw Error(ErrorKind::NonTerminating,
                  "epoch guard exceeded before the block was decoded");
    eng.step_epoch(sample_realization(net, channel));
  }
  ThroughputRun out;
  out.block_length = block_length;
  out.epochs = eng.epoch();
  out.throughput =
      static_cast<double>(block_length) / static_cast<double>(out.epochs);
  return out;
}

}  // namespace rlnc
