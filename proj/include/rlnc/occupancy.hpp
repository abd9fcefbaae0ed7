#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "rlnc/netmodel.hpp"

namespace rlnc {

/// Per-subset innovation counts for the relay set.  Entry b[S] is the number
/// of dimensions the relays in S hold that the rest of the network together
/// with the destination cannot reproduce (the destination's accumulated span
/// always counts against a subset's exclusivity).  Indexed by bitmask:
/// relay i <-> bit (i-1).  b[0] is always 0.
class OccupancyVector {
 public:
  explicit OccupancyVector(int n) : n_(n), b_(std::size_t(1) << n, 0) {}

  int n() const { return n_; }
  std::uint32_t full_mask() const { return static_cast<std::uint32_t>((1u << n_) - 1); }
  std::int32_t at(std::uint32_t mask) const { return b_[mask]; }
  std::int32_t& at(std::uint32_t mask) { return b_[mask]; }
  std::size_t size() const { return b_.size(); }

  bool operator==(const OccupancyVector& o) const { return n_ == o.n_ && b_ == o.b_; }

  const std::vector<std::int32_t>& entries() const { return b_; }

 private:
  int n_;
  std::vector<std::int32_t> b_;
};

/// Number of dimensions the relays in S could deliver to S2 that S2 (plus the
/// destination) does not already cover: b[~S2] - b[~(S|S2)], complements taken
/// within the relay set.  Throws NegativeInnovativeness if the stored vector
/// is inconsistent.
int innovativeness(const OccupancyVector& b, std::uint32_t S, std::uint32_t S2);

/// Update for a successful source -> relay i transmission.  The source always
/// has fresh content, so i's buffer gains a dimension unless it is already
/// full; subsets not containing i gain one exactly when i's buffer is not
/// full yet everything i holds is already exclusive against them.
OccupancyVector apply_source_to_relay(const OccupancyVector& b, const ErasureNetwork& net,
                                      int relay);

/// Update for a successful relay i -> relay j transmission.  A subset S
/// containing i but not j loses a dimension when the packet both carries
/// innovation out of S (i has something S-complement lacks) and j has room to
/// absorb it relative to the rest of S-complement.
OccupancyVector apply_relay_to_relay(const OccupancyVector& b, const ErasureNetwork& net, int i,
                                     int j);

struct DestDelivery {
  OccupancyVector state;
  bool innovative = false;  // true iff the network-wide entry decreased
};

/// Update for a successful relay j -> destination transmission.  Every subset
/// containing j loses a dimension when j still holds something exclusive
/// against that subset's complement.
DestDelivery apply_relay_to_dest(const OccupancyVector& b, const ErasureNetwork& net, int relay);

struct EpochOutcome {
  OccupancyVector state;
  int delivered = 0;  // innovative packets absorbed by the destination
};

/// One epoch: apply the per-edge updates for every successful edge in
/// canonical transmission order.  Conditions for each edge are evaluated on
/// the state immediately before that edge's update.
EpochOutcome step_epoch(const OccupancyVector& b, const ErasureNetwork& net,
                        ChannelRealization realization);

/// In-place engine for long runs (no per-edge allocation).
class OccupancyEngine {
 public:
  explicit OccupancyEngine(const ErasureNetwork& net);

  int step(ChannelRealization realization);  // returns innovative deliveries
  const OccupancyVector& state() const { return b_; }
  void set_state(const OccupancyVector& b) { b_ = b; }
  std::uint64_t epoch() const { return epoch_; }

 private:
  const ErasureNetwork* net_;
  OccupancyVector b_;
  OccupancyVector pre_;
  std::uint64_t epoch_ = 0;
};

struct ThroughputEstimate {
  double throughput = 0.0;
  double ci95 = 0.0;  // half-width
  std::uint64_t epochs_measured = 0;
  std::uint64_t warmup = 0;
};

/// Epochs discarded before measuring: max(10^4, 50 * total buffer slots).
std::uint64_t default_warmup(const ErasureNetwork& net);

/// Long-run innovative deliveries per epoch with a batch-means 95% interval.
/// total_epochs includes the warmup prefix.
ThroughputEstimate monte_carlo_throughput(const ErasureNetwork& net, std::uint64_t total_epochs,
                                          std::uint64_t seed);

struct CensusResult {
  std::uint64_t distinct_states = 0;   // distinct vectors seen after warmup
  std::uint64_t transient_states = 0;  // seen during warmup only, never after
  std::uint64_t warmup = 0;
  std::uint64_t epochs_measured = 0;
  long double crude_bound = 0.0L;      // (m+1)^(2^n - 1) with m = max buffer
  std::unordered_map<std::string, std::uint64_t> visits;  // packed state -> count
};

/// Count distinct occupancy vectors over a long run; total_epochs includes
/// the warmup prefix, states seen only during warmup are not counted.
CensusResult state_census(const ErasureNetwork& net, std::uint64_t total_epochs,
                          std::uint64_t seed);

/// Packed byte key for hashing states (census, chain enumeration).
std::string pack_state(const OccupancyVector& b);

}  // namespace rlnc
