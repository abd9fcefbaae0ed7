#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "rlnc/netmodel.hpp"
#include "rlnc/occupancy.hpp"

namespace rlnc {

/// Relays grouped by shortest hop distance to the destination.
/// layers[0] holds the destination itself; every relay lands in some
/// layers[k], k >= 1, because validation guarantees it can reach d.
struct LayerPartition {
  std::vector<int> layer_of;             // node id -> distance; source = -1
  std::vector<std::vector<int>> layers;  // layers[k] = nodes at distance k
};

LayerPartition layered_partition(const ErasureNetwork& net);

/// True when every relay-to-relay and relay-to-destination edge descends
/// exactly one layer (distance drops by exactly 1).  Source edges may enter
/// any layer.  The reduced engine is defined only for layered networks.
bool is_layered(const ErasureNetwork& net);

/// All subsets S of the relays (as bitmasks, bit i-1 for relay i) whose
/// complement drains on its own: every relay outside S can reach the
/// destination without passing through S.  These are exactly the occupancy
/// entries the reduced engine tracks.  Always contains the empty set and the
/// full set.  Exhaustive over 2^n subsets; n <= 24.
std::vector<std::uint32_t> tracked_family(const ErasureNetwork& net);

/// Static worst-case closure probe: walks every (tracked set, edge) pair and
/// checks that every occupancy entry any update rule could demand is itself
/// tracked.  A network that passes can never raise ClosureViolation at
/// runtime, whatever the channel does.  A network that fails may or may not
/// hit the missing entry, depending on which states are reachable.
struct ClosureCheck {
  bool closed = true;
  std::uint32_t target = 0;    // first offending tracked set (when !closed)
  std::uint32_t demanded = 0;  // the untracked entry it would need
  int edge = -1;               // index into net.edges()
};

ClosureCheck static_closure_check(const ErasureNetwork& net);

/// Occupancy recursion restricted to the tracked family.  Follows the exact
/// update semantics of OccupancyEngine but stores only tracked entries; if an
/// update condition needs an entry outside the family (after short-circuiting
/// conjuncts that tracked entries already decide), it throws ClosureViolation
/// rather than guessing.
class ReducedEngine {
 public:
  explicit ReducedEngine(const ErasureNetwork& net);  // throws NotLayered

  /// Applies one epoch (bit i of the mask = up/down of edges()[i]).
  /// Returns the number of innovative deliveries.  Throws ClosureViolation.
  int step_epoch(ChannelRealization realization);

  bool tracks(std::uint32_t mask) const { return index_.count(mask) != 0; }
  int entry(std::uint32_t mask) const;  // throws Unsupported if untracked
  const std::vector<std::uint32_t>& family() const { return family_; }
  std::uint64_t epoch() const { return epoch_; }

  /// Overwrites the tracked entries with the projection of a full occupancy
  /// vector (test hook for projection-equivalence checks).
  void set_from_full(const OccupancyVector& b);

 private:
  void apply_edge(std::size_t edge_index, int& delivered);

  const ErasureNetwork* net_;
  std::vector<std::uint32_t> family_;  // sorted masks
  std::unordered_map<std::uint32_t, std::size_t> index_;
  std::vector<int> values_;  // parallel to family_
  std::uint64_t epoch_ = 0;
};

}  // namespace rlnc
