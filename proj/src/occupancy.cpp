#include "rlnc/occupancy.hpp"

#include <cmath>
#include <cstring>

#include "rlnc/stats.hpp"

namespace rlnc {

namespace {

void check_relay(const ErasureNetwork& net, int relay) {
  if (!net.is_relay(relay)) throw Error(ErrorKind::UsageError, "node is not a relay");
}

inline std::uint32_t bit_of(int relay) { return 1u << (relay - 1); }

/// Core per-edge transitions.  All conditions read `pre`; all writes go to
/// `post`.  Callers must pass post == pre (copied) beforehand.

void source_to_relay(const OccupancyVector& pre, OccupancyVector& post, const ErasureNetwork& net,
                     int i) {
  const std::uint32_t ib = bit_of(i);
  const std::uint32_t full = pre.full_mask();
  const int m_i = net.buffer_size(i);
  if (pre.at(ib) >= m_i) return;  // buffer already holds all it can keep exclusive
  for (std::uint32_t S = 0; S <= full; ++S) {
    if (S & ib) {
      post.at(S) = pre.at(S) + 1;
    } else {
      // i's entire buffer is already exclusive against the rest of S's
      // complement, so the overwritten slot content was common knowledge and
      // S's own exclusivity grows alongside.
      if (pre.at(S | ib) - pre.at(S) == m_i) post.at(S) = pre.at(S) + 1;
    }
  }
}

void relay_to_relay(const OccupancyVector& pre, OccupancyVector& post, const ErasureNetwork& net,
                    int i, int j) {
  const std::uint32_t ib = bit_of(i), jb = bit_of(j);
  const std::uint32_t full = pre.full_mask();
  const int m_j = net.buffer_size(j);
  for (std::uint32_t S = 0; S <= full; ++S) {
    if (!(S & ib) || (S & jb)) continue;
    const int carried_out = pre.at(S) - pre.at(S & ~ib);   // i exclusive vs S's complement
    const int j_exclusive = pre.at(S | jb) - pre.at(S);    // j exclusive vs rest of complement
    if (carried_out > 0 && j_exclusive < m_j) post.at(S) = pre.at(S) - 1;
  }
}

bool relay_to_dest(const OccupancyVector& pre, OccupancyVector& post, const ErasureNetwork& net,
                   int j) {
  (void)net;
  const std::uint32_t jb = bit_of(j);
  const std::uint32_t full = pre.full_mask();
  for (std::uint32_t S = 0; S <= full; ++S) {
    if (!(S & jb)) continue;
    if (pre.at(S) - pre.at(S & ~jb) > 0) post.at(S) = pre.at(S) - 1;
  }
  return pre.at(full) - pre.at(full & ~jb) > 0;
}

/// Applies one successful edge in place, using `pre` as scratch for the
/// pre-edge snapshot.  Returns 1 for an innovative delivery, else 0.
int apply_edge(OccupancyVector& b, OccupancyVector& pre, const ErasureNetwork& net,
               const Edge& e) {
  if (e.tail == net.source() && e.head == net.dest()) {
    // Direct source->destination link: the source is always innovative and
    // no relay state is involved.
    return 1;
  }
  pre = b;
  if (e.tail == net.source()) {
    source_to_relay(pre, b, net, e.head);
    return 0;
  }
  if (e.head == net.dest()) {
    return relay_to_dest(pre, b, net, e.tail) ? 1 : 0;
  }
  relay_to_relay(pre, b, net, e.tail, e.head);
  return 0;
}

}  // namespace

int innovativeness(const OccupancyVector& b, std::uint32_t S, std::uint32_t S2) {
  const std::uint32_t full = b.full_mask();
  const int v = b.at(full & ~S2) - b.at(full & ~(S | S2));
  if (v < 0)
    throw Error(ErrorKind::NegativeInnovativeness,
                "occupancy vector yields negative innovativeness");
  return v;
}

OccupancyVector apply_source_to_relay(const OccupancyVector& b, const ErasureNetwork& net,
                                      int relay) {
  check_relay(net, relay);
  OccupancyVector out = b;
  source_to_relay(b, out, net, relay);
  return out;
}

OccupancyVector apply_relay_to_relay(const OccupancyVector& b, const ErasureNetwork& net, int i,
                                     int j) {
  check_relay(net, i);
  check_relay(net, j);
  OccupancyVector out = b;
  relay_to_relay(b, out, net, i, j);
  return out;
}

DestDelivery apply_relay_to_dest(const OccupancyVector& b, const ErasureNetwork& net, int relay) {
  check_relay(net, relay);
  DestDelivery out{b, false};
  out.innovative = relay_to_dest(b, out.state, net, relay);
  return out;
}

EpochOutcome step_epoch(const OccupancyVector& b, const ErasureNetwork& net,
                        ChannelRealization realization) {
  EpochOutcome out{b, 0};
  OccupancyVector pre(b.n());
  const auto& edges = net.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (realization & (ChannelRealization(1) << i))
      out.delivered += apply_edge(out.state, pre, net, edges[i]);
  }
  return out;
}

OccupancyEngine::OccupancyEngine(const ErasureNetwork& net)
    : net_(&net), b_(net.relay_count()), pre_(net.relay_count()) {
  if (net.relay_count() > 16)
    throw Error(ErrorKind::Unsupported, "occupancy engine supports at most 16 relays");
}

int OccupancyEngine::step(ChannelRealization realization) {
  int delivered = 0;
  const auto& edges = net_->edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (realization & (ChannelRealization(1) << i))
      delivered += apply_edge(b_, pre_, *net_, edges[i]);
  }
  ++epoch_;
  return delivered;
}

std::uint64_t default_warmup(const ErasureNetwork& net) {
  const std::uint64_t by_buffer = 50ull * static_cast<std::uint64_t>(net.total_buffer());
  return by_buffer > 10000 ? by_buffer : 10000;
}

ThroughputEstimate monte_carlo_throughput(const ErasureNetwork& net, std::uint64_t total_epochs,
                                          std::uint64_t seed) {
  const std::uint64_t warmup = default_warmup(net);
  if (total_epochs <= warmup)
    throw Error(ErrorKind::UsageError,
                "epoch budget must exceed the warmup of " + std::to_string(warmup));
  const std::uint64_t measured = total_epochs - warmup;

  OccupancyEngine engine(net);
  std::mt19937_64 rng(seed);
  for (std::uint64_t t = 0; t < warmup; ++t) engine.step(sample_realization(net, rng));

  BatchAccumulator batches(measured);
  for (std::uint64_t t = 0; t < measured; ++t)
    batches.add(static_cast<double>(engine.step(sample_realization(net, rng))));

  const MeanCI ci = batches.mean_ci95();
  return ThroughputEstimate{ci.mean, ci.half, measured, warmup};
}

std::string pack_state(const OccupancyVector& b) {
  std::string key(b.size() * 2, '\0');
  for (std::size_t i = 0; i < b.size(); ++i) {
    const std::uint16_t v = static_cast<std::uint16_t>(b.entries()[i]);
    std::memcpy(&key[i * 2], &v, 2);
  }
  return key;
}

CensusResult state_census(const ErasureNetwork& net, std::uint64_t total_epochs,
                          std::uint64_t seed) {
  CensusResult res;
  res.warmup = default_warmup(net);
  if (total_epochs <= res.warmup)
    throw Error(ErrorKind::UsageError,
                "epoch budget must exceed the warmup of " + std::to_string(res.warmup));
  res.epochs_measured = total_epochs - res.warmup;

  OccupancyEngine engine(net);
  std::mt19937_64 rng(seed);
  std::unordered_map<std::string, bool> warm_seen;  // states visited during warmup
  warm_seen[pack_state(engine.state())] = true;
  for (std::uint64_t t = 0; t < res.warmup; ++t) {
    engine.step(sample_realization(net, rng));
    warm_seen[pack_state(engine.state())] = true;
  }
  for (std::uint64_t t = 0; t < res.epochs_measured; ++t) {
    engine.step(sample_realization(net, rng));
    res.visits[pack_state(engine.state())]++;
  }
  res.distinct_states = res.visits.size();
  for (const auto& [key, _] : warm_seen)
    if (!res.visits.count(key)) ++res.transient_states;

  int max_m = 1;
  for (int i = 1; i <= net.relay_count(); ++i)
    if (net.buffer_size(i) > max_m) max_m = net.buffer_size(i);
  const long double cells = static_cast<long double>((1u << net.relay_count()) - 1);
  res.crude_bound = std::pow(static_cast<long double>(max_m + 1), cells);
  return res;
}

}  // namespace rlnc
