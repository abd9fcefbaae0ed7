#include "rlnc/netmodel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <queue>

namespace rlnc {

namespace {

std::int64_t checked(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw Error(ErrorKind::Unsupported, "rational overflow");
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (den == 0) throw Error(ErrorKind::Unsupported, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::from_decimal(const std::string& text) {
  // Accepts [+-]?digits[.digits]; no exponents, which is all configs use.
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    neg = text[i] == '-';
    ++i;
  }
  std::int64_t num = 0, den = 1;
  bool any = false, frac = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.') {
      if (frac) throw Error(ErrorKind::ParseError, "bad decimal: " + text);
      frac = true;
      continue;
    }
    if (c < '0' || c > '9') throw Error(ErrorKind::ParseError, "bad decimal: " + text);
    num = checked(static_cast<__int128>(num) * 10 + (c - '0'));
    if (frac) den = checked(static_cast<__int128>(den) * 10);
    any = true;
  }
  if (!any) throw Error(ErrorKind::ParseError, "bad decimal: " + text);
  return Rational(neg ? -num : num, den);
}

Rational Rational::operator+(const Rational& o) const {
  const __int128 n = static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den;
  const __int128 d = static_cast<__int128>(den) * o.den;
  return Rational(checked(n), checked(d));
}

Rational Rational::operator-(const Rational& o) const {
  const __int128 n = static_cast<__int128>(num) * o.den - static_cast<__int128>(o.num) * den;
  const __int128 d = static_cast<__int128>(den) * o.den;
  return Rational(checked(n), checked(d));
}

bool Rational::operator<(const Rational& o) const {
  return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}

std::string Rational::to_string() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

int ErasureNetwork::total_buffer() const {
  int sum = 0;
  for (int i = 1; i <= n_; ++i) sum += buffers_[i];
  return sum;
}

ErasureNetwork ErasureNetwork::with_uniform_buffers(int m) const {
  if (m < 1) throw Error(ErrorKind::NonPositiveBuffer, "buffer size must be >= 1");
  ErasureNetwork out = *this;
  for (int i = 1; i <= n_; ++i) out.buffers_[i] = m;
  return out;
}

ErasureNetwork ErasureNetwork::validate(const NetworkDescription& desc) {
  if (desc.source.empty() || desc.dest.empty())
    throw Error(ErrorKind::MissingSourceOrDest, "source and dest must be named");
  if (desc.source == desc.dest)
    throw Error(ErrorKind::MissingSourceOrDest, "source and dest must differ");

  std::map<std::string, int> pos;  // label -> index into desc.node_ids
  for (std::size_t i = 0; i < desc.node_ids.size(); ++i) {
    if (!pos.emplace(desc.node_ids[i], static_cast<int>(i)).second)
      throw Error(ErrorKind::ParseError, "duplicate node id: " + desc.node_ids[i]);
  }
  if (!pos.count(desc.source) || !pos.count(desc.dest))
    throw Error(ErrorKind::MissingSourceOrDest, "source or dest not among nodes");

  const int raw_n = static_cast<int>(desc.node_ids.size());
  const int src_raw = pos[desc.source];
  const int dst_raw = pos[desc.dest];

  // Adjacency on raw indices.
  std::vector<std::vector<int>> out_adj(raw_n), in_adj(raw_n);
  for (const auto& e : desc.edges) {
    auto it_from = pos.find(e.from);
    auto it_to = pos.find(e.to);
    if (it_from == pos.end() || it_to == pos.end())
      throw Error(ErrorKind::ParseError, "edge references unknown node: " + e.from + "->" + e.to);
    const int u = it_from->second, v = it_to->second;
    if (v == src_raw)
      throw Error(ErrorKind::MissingSourceOrDest, "edge enters the source");
    if (u == dst_raw)
      throw Error(ErrorKind::MissingSourceOrDest, "edge leaves the destination");
    if (u == v) throw Error(ErrorKind::CycleDetected, "self-loop on " + e.from);
    if (!(e.erasure >= 0.0 && e.erasure <= 1.0))
      throw Error(ErrorKind::InvalidProbability,
                  "erasure probability out of [0,1] on " + e.from + "->" + e.to);
    out_adj[u].push_back(v);
    in_adj[v].push_back(u);
  }
  if (desc.edges.size() > 64)
    throw Error(ErrorKind::Unsupported, "at most 64 edges supported");

  // Buffers: relays need a positive size.
  for (std::size_t i = 0; i < desc.node_ids.size(); ++i) {
    const int raw = static_cast<int>(i);
    if (raw == src_raw || raw == dst_raw) continue;
    const int m = i < desc.buffers.size() ? desc.buffers[i] : 1;
    if (m < 1)
      throw Error(ErrorKind::NonPositiveBuffer, "buffer size must be >= 1 on " + desc.node_ids[i]);
  }

  // Kahn topological sort; leftovers mean a cycle.
  std::vector<int> indeg(raw_n, 0);
  for (int v = 0; v < raw_n; ++v) indeg[v] = static_cast<int>(in_adj[v].size());
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int v = 0; v < raw_n; ++v)
    if (indeg[v] == 0) ready.push(v);
  std::vector<int> topo;
  std::vector<int> indeg_work = indeg;
  while (!ready.empty()) {
    const int u = ready.top();
    ready.pop();
    topo.push_back(u);
    for (int v : out_adj[u])
      if (--indeg_work[v] == 0) ready.push(v);
  }
  if (static_cast<int>(topo.size()) != raw_n)
    throw Error(ErrorKind::CycleDetected, "network graph contains a cycle");

  // Reachability: forward from source, backward from dest.
  auto bfs = [&](int start, const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(raw_n, 0);
    std::queue<int> q;
    q.push(start);
    seen[start] = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          q.push(v);
        }
    }
    return seen;
  };
  const auto fwd = bfs(src_raw, out_adj);
  const auto bwd = bfs(dst_raw, in_adj);
  for (int v = 0; v < raw_n; ++v) {
    if (v == src_raw || v == dst_raw) continue;
    if (!fwd[v] || !bwd[v])
      throw Error(ErrorKind::DisconnectedRelay,
                  "relay " + desc.node_ids[v] + " is not on any source-destination path");
  }

  // Renumber: source -> 0, relays 1..n in topological order, dest -> n+1.
  ErasureNetwork net;
  net.n_ = raw_n - 2;
  std::vector<int> newid(raw_n, -1);
  newid[src_raw] = 0;
  int next = 1;
  for (int u : topo) {
    if (u == src_raw || u == dst_raw) continue;
    newid[u] = next++;
  }
  newid[dst_raw] = net.n_ + 1;

  net.names_.assign(net.n_ + 2, "");
  net.buffers_.assign(net.n_ + 2, 0);
  for (int v = 0; v < raw_n; ++v) {
    net.names_[newid[v]] = desc.node_ids[v];
    if (v != src_raw && v != dst_raw)
      net.buffers_[newid[v]] =
          static_cast<std::size_t>(v) < desc.buffers.size() ? desc.buffers[v] : 1;
  }

  for (const auto& e : desc.edges) {
    Edge edge;
    edge.tail = newid[pos[e.from]];
    edge.head = newid[pos[e.to]];
    edge.erasure = e.erasure;
    if (!e.erasure_text.empty()) {
      edge.erasure_exact = Rational::from_decimal(e.erasure_text);
    } else {
      // Recover a short decimal from the double's shortest round-trip form,
      // which is exact for inputs written as decimal literals.
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, e.erasure);
      std::string text(buf, res.ptr);
      if (text.find_first_of("eE") == std::string::npos) {
        try {
          edge.erasure_exact = Rational::from_decimal(text);
        } catch (const Error&) {
          edge.erasure_exact.reset();
        }
      }
    }
    net.edges_.push_back(edge);
  }

  // Canonical transmission order: tails in reverse topological order so every
  // node's outgoing edges are handled before its incoming ones; head index
  // breaks ties among a tail's own edges.
  std::stable_sort(net.edges_.begin(), net.edges_.end(), [](const Edge& a, const Edge& b) {
    if (a.tail != b.tail) return a.tail > b.tail;
    return a.head < b.head;
  });
  return net;
}

std::vector<Edge> topological_edge_order(const ErasureNetwork& net) {
  return net.edges();  // stored canonically by validate()
}

namespace {

/// Dinic max-flow over an additive capacity type (double or Rational).
template <typename Cap>
struct FlowGraph {
  struct Arc {
    int to;
    Cap cap;
    int rev;
  };
  std::vector<std::vector<Arc>> g;
  std::vector<int> level, iter;

  explicit FlowGraph(int n) : g(n), level(n), iter(n) {}

  void add_edge(int from, int to, Cap cap) {
    g[from].push_back({to, cap, static_cast<int>(g[to].size())});
    g[to].push_back({from, Cap{}, static_cast<int>(g[from].size()) - 1});
  }

  bool bfs(int s, int t) {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (const auto& a : g[u]) {
        if (Cap{} < a.cap && level[a.to] < 0) {
          level[a.to] = level[u] + 1;
          q.push(a.to);
        }
      }
    }
    return level[t] >= 0;
  }

  Cap dfs(int u, int t, Cap f) {
    if (u == t) return f;
    for (int& i = iter[u]; i < static_cast<int>(g[u].size()); ++i) {
      Arc& a = g[u][i];
      if (Cap{} < a.cap && level[u] < level[a.to]) {
        const Cap take = a.cap < f ? a.cap : f;
        const Cap d = dfs(a.to, t, take);
        if (Cap{} < d) {
          a.cap = a.cap - d;
          g[a.to][a.rev].cap = g[a.to][a.rev].cap + d;
          return d;
        }
      }
    }
    return Cap{};
  }

  Cap max_flow(int s, int t, Cap inf) {
    Cap flow{};
    while (bfs(s, t)) {
      std::fill(iter.begin(), iter.end(), 0);
      for (;;) {
        const Cap f = dfs(s, t, inf);
        if (!(Cap{} < f)) break;
        flow = flow + f;
      }
    }
    return flow;
  }
};

}  // namespace

MinCut min_cut_capacity(const ErasureNetwork& net) {
  MinCut result;
  bool all_exact = true;
  for (const auto& e : net.edges())
    if (!e.erasure_exact) all_exact = false;

  if (all_exact) {
    try {
      FlowGraph<Rational> fg(net.node_count());
      Rational inf(0, 1);
      for (const auto& e : net.edges()) {
        const Rational cap = Rational(1, 1) - *e.erasure_exact;
        fg.add_edge(e.tail, e.head, cap);
        inf = inf + cap;
      }
      const Rational flow = fg.max_flow(net.source(), net.dest(), inf + Rational(1, 1));
      result.exact = flow;
      result.value = flow.to_double();
      return result;
    } catch (const Error&) {
      // Rational overflow; fall through to doubles.
    }
  }

  FlowGraph<double> fg(net.node_count());
  double inf = 1.0;
  for (const auto& e : net.edges()) {
    fg.add_edge(e.tail, e.head, 1.0 - e.erasure);
    inf += 1.0 - e.erasure;
  }
  result.value = fg.max_flow(net.source(), net.dest(), inf);
  return result;
}

ChannelRealization sample_realization(const ErasureNetwork& net, std::mt19937_64& rng) {
  ChannelRealization bits = 0;
  const auto& edges = net.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    // u in [0,1) with 53 random bits; success iff u >= erasure, which makes
    // erasure 0 always succeed and erasure 1 never succeed, exactly.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u >= edges[i].erasure) bits |= ChannelRealization(1) << i;
  }
  return bits;
}

NetworkDescription serialize_network(const ErasureNetwork& net) {
  NetworkDescription d;
  for (int v = 0; v < net.node_count(); ++v) {
    d.node_ids.push_back(net.node_name(v));
    d.buffers.push_back(net.is_relay(v) ? net.buffer_size(v) : 0);
  }
  d.source = net.node_name(net.source());
  d.dest = net.node_name(net.dest());
  for (const auto& e : net.edges()) {
    NetworkDescription::RawEdge re;
    re.from = net.node_name(e.tail);
    re.to = net.node_name(e.head);
    re.erasure = e.erasure;
    if (e.erasure_exact) {
      // Re-emit as a decimal when the denominator is a power of ten.
      std::int64_t den = e.erasure_exact->den;
      int digits = 0;
      while (den % 10 == 0) {
        den /= 10;
        ++digits;
      }
      if (den == 1) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", digits, e.erasure_exact->to_double());
        re.erasure_text = buf;
      }
    }
    d.edges.push_back(re);
  }
  return d;
}

}  // namespace rlnc
