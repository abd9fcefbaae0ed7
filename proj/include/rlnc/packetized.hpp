#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rlnc/gf.hpp"
#include "rlnc/linalg.hpp"
#include "rlnc/netmodel.hpp"

namespace rlnc {

// Two packet-level simulators of randomized linear mixing over an erasure
// network.  Both advance in epochs: in the first phase every link that is up
// this epoch forms its outgoing packet from the transmitter's state at the
// start of the epoch, and in the second phase the formed packets are folded
// into the receivers one link at a time, in canonical edge order.  The source
// emits fresh uniformly random combinations of the k message symbols; a relay
// with buffer size m emits a uniformly random combination of its m stored
// rows and absorbs an arriving packet by adding an independently scaled copy
// of it into each of its m rows.  The destination keeps the span of
// everything it has received; a delivery counts when it enlarges that span.

/// Literal simulator: every stored row and packet is a full k-symbol
/// coefficient vector.  Memory is Theta((total buffer + rank) * k), so k is
/// capped; use PacketizedEngine for long blocks.
class DensePacketizedEngine {
 public:
  DensePacketizedEngine(const ErasureNetwork& net, std::uint64_t block_length,
                        const gf::Field& field, std::uint64_t seed);

  /// Runs one epoch under the given channel realization (bit i of the mask is
  /// the up/down state of edges()[i]).  Returns the number of deliveries that
  /// enlarged the destination span.
  int step_epoch(ChannelRealization realization);

  /// Rank of the joint content of the relays in `relay_mask` (bit i-1 for
  /// relay i) measured beyond what the complement relays and the destination
  /// already hold.
  int measure_occupancy(std::uint32_t relay_mask) const;

  std::uint64_t dest_rank() const { return static_cast<std::uint64_t>(dest_.rank()); }
  std::uint64_t epoch() const { return epoch_; }
  std::uint64_t block_length() const { return k_; }
  const std::vector<std::vector<gf::Elem>>& relay_rows(int relay) const;

  static constexpr std::uint64_t kMaxBlockLength = 8192;

 private:
  const ErasureNetwork* net_;
  const gf::Field* f_;
  std::uint64_t k_;
  std::vector<std::vector<std::vector<gf::Elem>>> rows_;  // [relay][slot]
  Echelon dest_;
  std::uint64_t epoch_ = 0;
  std::mt19937_64 rng_;
};

/// Compressed simulator with the same observable behaviour.  Relay rows are
/// stored as coordinates over a working basis of directions that are linearly
/// independent of the destination's span; a delivered direction is quotiented
/// out of every stored row, and directions never seen before are allocated
/// lazily when a fresh source packet is first absorbed.  The working basis
/// re-compacts itself whenever it grows past total buffer + kWidthSlack, so
/// state size is independent of both the block length and the epoch count.
///
/// block_length = 0 selects the unbounded-block regime in which every source
/// packet carries a new direction; this matches the infinite-block model the
/// occupancy recursion describes.  With a finite block length the engine
/// stops allocating directions once destination rank + working width reaches
/// the block length, after which source packets mix only what is still
/// undelivered.  The one simplification relative to the literal engine is
/// that a source packet's component outside the working basis is taken to be
/// nonzero whenever undelivered directions remain; the neglected event has
/// probability at most 1/q per injection (q = field order), i.e. 2^-16 at the
/// default width.
class PacketizedEngine {
 public:
  PacketizedEngine(const ErasureNetwork& net, std::uint64_t block_length,
                   const gf::Field& field, std::uint64_t seed);

  /// Same contract as DensePacketizedEngine::step_epoch.
  int step_epoch(ChannelRealization realization);

  /// Same contract as DensePacketizedEngine::measure_occupancy.
  int measure_occupancy(std::uint32_t relay_mask) const;

  std::uint64_t dest_rank() const { return dest_rank_; }
  std::uint64_t epoch() const { return epoch_; }
  std::uint64_t block_length() const { return k_; }
  std::uint64_t delivered_total() const { return dest_rank_; }

  /// Current working-basis width (exposed for tests).
  std::size_t width() const { return width_; }

  static constexpr std::size_t kWidthSlack = 128;

 private:
  struct Pending {
    std::uint32_t edge;
    bool fresh;  // source packet whose new direction is not yet allocated
    std::vector<gf::Elem> coords;
  };

  bool can_allocate() const {
    return k_ == 0 || width_ < k_ - dest_rank_;
  }
  void allocate_direction(std::vector<Pending>& pending, std::size_t next);
  void quotient_out(std::vector<gf::Elem> dir, std::vector<Pending>& pending,
                    std::size_t next);
  void compact();

  const ErasureNetwork* net_;
  const gf::Field* f_;
  std::uint64_t k_;
  std::size_t width_ = 0;
  std::vector<std::size_t> offset_;                // relay -> first row index
  std::vector<std::vector<gf::Elem>> rows_;        // all relay slots, flat
  std::uint64_t dest_rank_ = 0;
  std::uint64_t epoch_ = 0;
  std::mt19937_64 rng_;
};

struct ThroughputRun {
  std::uint64_t block_length = 0;
  std::uint64_t epochs = 0;
  double throughput = 0.0;  // block_length / epochs
};

/// Runs the compressed engine until the destination has decoded the whole
/// block and reports block_length / epochs.  Throws NonTerminating if the
/// network has zero min-cut or the epoch guard (default derived from the
/// min-cut) is exceeded.
ThroughputRun run_throughput(const ErasureNetwork& net,
                             std::uint64_t block_length, std::uint64_t seed,
                             const gf::Field& field = gf::Field::gf16(),
                             std::uint64_t max_epochs = 0);

}  // namespace rlnc
