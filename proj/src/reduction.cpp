#include "rlnc/reduction.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <string>

#include "rlnc/errors.hpp"

namespace rlnc {

namespace {

std::string mask_text(std::uint32_t mask) {
  std::string out = "{";
  for (int i = 0; mask != 0; ++i, mask >>= 1) {
    if (!(mask & 1)) continue;
    if (out.size() > 1) out += ",";
    out += std::to_string(i + 1);
  }
  return out + "}";
}

// Reversed relay adjacency: rev[v] lists nodes u with an edge u -> v whose
// tail is a relay (source edges never matter for drain checks).
std::vector<std::vector<int>> reverse_relay_adjacency(const ErasureNetwork& net) {
  std::vector<std::vector<int>> rev(static_cast<std::size_t>(net.node_count()));
  for (const Edge& e : net.edges())
    if (net.is_relay(e.tail))
      rev[static_cast<std::size_t>(e.head)].push_back(e.tail);
  return rev;
}

}  // namespace

LayerPartition layered_partition(const ErasureNetwork& net) {
  LayerPartition out;
  out.layer_of.assign(static_cast<std::size_t>(net.node_count()), -1);
  const auto rev = reverse_relay_adjacency(net);
  std::deque<int> queue{net.dest()};
  out.layer_of[static_cast<std::size_t>(net.dest())] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int u : rev[static_cast<std::size_t>(v)]) {
      if (out.layer_of[static_cast<std::size_t>(u)] != -1) continue;
      out.layer_of[static_cast<std::size_t>(u)] =
          out.layer_of[static_cast<std::size_t>(v)] + 1;
      queue.push_back(u);
    }
  }
  int depth = 0;
  for (int v = 1; v <= net.relay_count(); ++v)
    depth = std::max(depth, out.layer_of[static_cast<std::size_t>(v)]);
  out.layers.assign(static_cast<std::size_t>(depth) + 1, {});
  out.layers[0].push_back(net.dest());
  for (int v = 1; v <= net.relay_count(); ++v)
    out.layers[static_cast<std::size_t>(out.layer_of[static_cast<std::size_t>(v)])]
        .push_back(v);
  return out;
}

bool is_layered(const ErasureNetwork& net) {
  const LayerPartition lp = layered_partition(net);
  for (const Edge& e : net.edges()) {
    if (!net.is_relay(e.tail)) continue;  // source edges are unconstrained
    if (lp.layer_of[static_cast<std::size_t>(e.tail)] !=
        lp.layer_of[static_cast<std::size_t>(e.head)] + 1)
      return false;
  }
  return true;
}

std::vector<std::uint32_t> tracked_family(const ErasureNetwork& net) {
  const int n = net.relay_count();
  if (n > 24)
    throw Error(ErrorKind::Unsupported,
                "family enumeration is exhaustive and limited to 24 relays");
  const auto rev = reverse_relay_adjacency(net);
  std::vector<std::uint32_t> family;
  std::vector<int> stack;
  std::vector<char> drained(static_cast<std::size_t>(net.node_count()));
  const std::uint32_t full = (n >= 32) ? 0xffffffffu : ((1u << n) - 1);
  for (std::uint32_t s = 0; s <= full; ++s) {
    // Every relay outside s must reach d while avoiding s: walk backwards
    // from d through relays outside s and see whether all of them are hit.
    std::fill(drained.begin(), drained.end(), 0);
    stack.assign(1, net.dest());
    drained[static_cast<std::size_t>(net.dest())] = 1;
    int found = 0;
    const int outside = n - std::popcount(s);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int u : rev[static_cast<std::size_t>(v)]) {
        if (s >> (u - 1) & 1) continue;
        if (drained[static_cast<std::size_t>(u)]) continue;
        drained[static_cast<std::size_t>(u)] = 1;
        ++found;
        stack.push_back(u);
      }
    }
    if (found == outside) family.push_back(s);
  }
  return family;
}

ClosureCheck static_closure_check(const ErasureNetwork& net) {
  const std::vector<std::uint32_t> family = tracked_family(net);
  std::vector<char> tracked(1u << net.relay_count(), 0);
  for (std::uint32_t s : family) tracked[s] = 1;
  ClosureCheck out;
  const auto& edges = net.edges();
  for (std::size_t idx = 0; idx < edges.size(); ++idx) {
    const Edge& e = edges[idx];
    if (e.tail == net.source() && e.head == net.dest()) continue;
    auto demand = [&](std::uint32_t target, std::uint32_t needed) {
      if (tracked[needed]) return true;
      out.closed = false;
      out.target = target;
      out.demanded = needed;
      out.edge = static_cast<int>(idx);
      return false;
    };
    for (std::uint32_t s : family) {
      if (e.tail == net.source()) {
        const std::uint32_t ib = 1u << (e.head - 1);
        if (!demand(s, ib)) return out;
        if (!(s & ib) && !demand(s, s | ib)) return out;
      } else if (e.head == net.dest()) {
        const std::uint32_t jb = 1u << (e.tail - 1);
        if ((s & jb) && !demand(s, s & ~jb)) return out;
      } else {
        const std::uint32_t ib = 1u << (e.tail - 1);
        const std::uint32_t jb = 1u << (e.head - 1);
        if ((s & ib) && !(s & jb)) {
          if (!demand(s, s & ~ib)) return out;
          if (!demand(s, s | jb)) return out;
        }
      }
    }
  }
  return out;
}

ReducedEngine::ReducedEngine(const ErasureNetwork& net) : net_(&net) {
  if (!is_layered(net))
    throw Error(ErrorKind::NotLayered,
                "reduced engine requires a layered network (every relay link "
                "must descend exactly one layer)");
  family_ = tracked_family(net);
  index_.reserve(family_.size() * 2);
  for (std::size_t i = 0; i < family_.size(); ++i) index_[family_[i]] = i;
  values_.assign(family_.size(), 0);
}

int ReducedEngine::entry(std::uint32_t mask) const {
  auto it = index_.find(mask);
  if (it == index_.end())
    throw Error(ErrorKind::Unsupported,
                "occupancy entry " + mask_text(mask) + " is not tracked");
  return values_[it->second];
}

void ReducedEngine::set_from_full(const OccupancyVector& b) {
  for (std::size_t i = 0; i < family_.size(); ++i)
    values_[i] = b.at(family_[i]);
}

void ReducedEngine::apply_edge(std::size_t edge_index, int& delivered) {
  const Edge& e = net_->edges()[edge_index];
  if (e.tail == net_->source() && e.head == net_->dest()) {
    ++delivered;  // direct link: always innovative, relay entries untouched
    return;
  }
  const std::vector<int> pre = values_;
  const std::uint32_t full = family_.back();
  // Conditions read the pre-edge snapshot; a demanded entry outside the
  // family aborts with a diagnostic naming the entry and the edge.
  auto pre_at = [&](std::uint32_t needed, std::uint32_t target) -> int {
    auto it = index_.find(needed);
    if (it == index_.end())
      throw ClosureViolation(
          target, needed, static_cast<int>(edge_index),
          "updating entry " + mask_text(target) + " for edge " +
              net_->node_name(e.tail) + "->" + net_->node_name(e.head) +
              " needs untracked entry " + mask_text(needed));
    return pre[it->second];
  };
  if (e.tail == net_->source()) {
    const int i = e.head;
    const std::uint32_t ib = 1u << (i - 1);
    const int mi = net_->buffer_size(i);
    for (std::size_t t = 0; t < family_.size(); ++t) {
      const std::uint32_t s = family_[t];
      if (s & ib) {
        if (pre_at(ib, s) < mi) ++values_[t];
      } else {
        if (pre_at(ib, s) < mi && pre_at(s | ib, s) - pre[t] == mi)
          ++values_[t];
      }
    }
  } else if (e.head == net_->dest()) {
    const int j = e.tail;
    const std::uint32_t jb = 1u << (j - 1);
    for (std::size_t t = 0; t < family_.size(); ++t) {
      const std::uint32_t s = family_[t];
      if (!(s & jb)) continue;
      if (pre[t] - pre_at(s & ~jb, s) > 0) {
        --values_[t];
        if (s == full) ++delivered;
      }
    }
  } else {
    const int i = e.tail;
    const int j = e.head;
    const std::uint32_t ib = 1u << (i - 1);
    const std::uint32_t jb = 1u << (j - 1);
    const int mj = net_->buffer_size(j);
    for (std::size_t t = 0; t < family_.size(); ++t) {
      const std::uint32_t s = family_[t];
      if (!(s & ib) || (s & jb)) continue;
      // The carried-out test only needs tracked entries, so it runs first;
      // the receiver-saturation test may demand an untracked superset.
      if (pre[t] - pre_at(s & ~ib, s) > 0 &&
          pre_at(s | jb, s) - pre[t] < mj)
        --values_[t];
    }
  }
}

int ReducedEngine::step_epoch(ChannelRealization realization) {
  int delivered = 0;
  for (std::size_t i = 0; i < net_->edges().size(); ++i)
    if (realization >> i & 1) apply_edge(i, delivered);
  ++epoch_;
  return delivered;
}

}  // namespace rlnc
