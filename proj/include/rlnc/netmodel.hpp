#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rlnc/errors.hpp"

namespace rlnc {

/// Exact fraction with overflow-checked int64 arithmetic.  Used so min-cut
/// values computed from short decimal probabilities are exact rather than
/// float-rounded.  Operations that would overflow throw; callers fall back to
/// doubles in that case.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);

  static Rational from_decimal(const std::string& text);

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;
};

/// One directed link.  tail/head are internal node indices: 0 is the source,
/// 1..n are relays in topological order, n+1 is the destination.
struct Edge {
  int tail = 0;
  int head = 0;
  double erasure = 0.0;
  std::optional<Rational> erasure_exact;  // set when the input was a clean decimal
};

/// Raw parsed form of a network, before validation.  Node names are free-form
/// labels; edges reference labels.  `erasure_text` keeps the decimal spelling
/// when available so validation can build exact values.
struct NetworkDescription {
  std::vector<std::string> node_ids;
  std::vector<int> buffers;  // parallel to node_ids; ignored for source/dest
  struct RawEdge {
    std::string from, to;
    double erasure = 0.0;
    std::string erasure_text;  // empty when only a float was given
  };
  std::vector<RawEdge> edges;
  std::string source, dest;
};

/// Success/failure bits for one epoch; bit i corresponds to edges()[i].
using ChannelRealization = std::uint64_t;

/// A validated acyclic erasure network.  Relays are renumbered 1..n in
/// topological order; edges are stored in canonical transmission order (see
/// topological_edge_order).
class ErasureNetwork {
 public:
  static ErasureNetwork validate(const NetworkDescription& desc);

  int relay_count() const { return n_; }
  int node_count() const { return n_ + 2; }
  int source() const { return 0; }
  int dest() const { return n_ + 1; }
  bool is_relay(int node) const { return node >= 1 && node <= n_; }

  const std::vector<Edge>& edges() const { return edges_; }
  int buffer_size(int relay) const { return buffers_[relay]; }
  int total_buffer() const;
  const std::string& node_name(int node) const { return names_[node]; }

  /// Uniform buffer override for sweeps; every relay gets m slots.
  ErasureNetwork with_uniform_buffers(int m) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;        // canonical transmission order
  std::vector<int> buffers_;       // index 1..n used
  std::vector<std::string> names_; // index by internal node id
};

/// Edge transmission order used by every engine: edges sorted by topological
/// position of the tail, downstream tails first (ties broken by head index).
/// This guarantees that all edges out of a node are processed before any edge
/// into it, so nothing received in an epoch is forwarded in the same epoch.
std::vector<Edge> topological_edge_order(const ErasureNetwork& net);

struct MinCut {
  double value = 0.0;
  std::optional<Rational> exact;  // present when every erasure was exact
};

/// Max-flow value from source to destination with edge capacities 1 - erasure.
MinCut min_cut_capacity(const ErasureNetwork& net);

/// Draw one epoch's success bits; edge i succeeds with probability
/// 1 - erasure_i, independently.
ChannelRealization sample_realization(const ErasureNetwork& net, std::mt19937_64& rng);

/// Canonical JSON-ready form; validate(serialize(net)) reproduces net exactly.
NetworkDescription serialize_network(const ErasureNetwork& net);

}  // namespace rlnc
