#include "rlnc/chain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

#include "rlnc/errors.hpp"

namespace rlnc {

namespace {

struct RealizationTable {
  std::vector<ChannelRealization> masks;
  std::vector<double> probs;
};

// Enumerates only channel outcomes with nonzero probability: deterministic
// edges (erasure 0 or 1) are pinned, the rest vary freely.
RealizationTable enumerate_realizations(const ErasureNetwork& net) {
  const auto& edges = net.edges();
  ChannelRealization forced = 0;
  std::vector<std::size_t> random_edges;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].erasure == 0.0)
      forced |= ChannelRealization{1} << i;
    else if (edges[i].erasure < 1.0)
      random_edges.push_back(i);
  }
  RealizationTable out;
  const std::size_t combos = std::size_t{1} << random_edges.size();
  out.masks.reserve(combos);
  out.probs.reserve(combos);
  for (std::size_t v = 0; v < combos; ++v) {
    ChannelRealization mask = forced;
    double prob = 1.0;
    for (std::size_t b = 0; b < random_edges.size(); ++b) {
      const double eps = edges[random_edges[b]].erasure;
      if (v >> b & 1) {
        mask |= ChannelRealization{1} << random_edges[b];
        prob *= 1.0 - eps;
      } else {
        prob *= eps;
      }
    }
    out.masks.push_back(mask);
    out.probs.push_back(prob);
  }
  return out;
}

}  // namespace

TransitionChain build_chain(const ErasureNetwork& net, std::size_t max_states) {
  if (net.edges().size() > kMaxChainEdges)
    throw Error(ErrorKind::Unsupported,
                "exact chain analysis is gated to " +
                    std::to_string(kMaxChainEdges) + " edges");
  TransitionChain chain{net, {}, {}, {}, {}, {}};
  RealizationTable table = enumerate_realizations(net);
  chain.realizations = std::move(table.masks);
  chain.realization_prob = std::move(table.probs);

  std::unordered_map<std::string, std::uint32_t> seen;
  OccupancyVector zero(net.relay_count());
  chain.states.push_back(zero);
  seen.emplace(pack_state(zero), 0);

  for (std::uint32_t s = 0; s < chain.states.size(); ++s) {
    // chain.states grows inside the loop; index-based BFS keeps it valid.
    std::map<std::uint32_t, double> row;
    std::vector<std::uint8_t> delivered(chain.realizations.size(), 0);
    for (std::size_t r = 0; r < chain.realizations.size(); ++r) {
      const EpochOutcome next =
          step_epoch(chain.states[s], net, chain.realizations[r]);
      const std::string key = pack_state(next.state);
      auto [it, inserted] =
          seen.emplace(key, static_cast<std::uint32_t>(chain.states.size()));
      if (inserted) {
        if (chain.states.size() >= max_states)
          throw Error(ErrorKind::StateBudgetExceeded,
                      "reachable state count exceeds " +
                          std::to_string(max_states));
        chain.states.push_back(next.state);
      }
      row[it->second] += chain.realization_prob[r];
      delivered[r] = static_cast<std::uint8_t>(next.delivered);
    }
    chain.rows.emplace_back(row.begin(), row.end());
    chain.delivery.push_back(std::move(delivered));
  }
  return chain;
}

std::vector<std::uint32_t> recurrent_class(const TransitionChain& chain) {
  // Iterative Tarjan over the successor graph, then keep the components with
  // no edge leaving them.
  const std::size_t n = chain.states.size();
  std::vector<int> comp(n, -1), low(n, 0), disc(n, -1);
  std::vector<std::uint32_t> tarjan_stack;
  std::vector<char> on_stack(n, 0);
  int timer = 0, ncomp = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t next_edge;
  };
  for (std::uint32_t root = 0; root < n; ++root) {
    if (disc[root] != -1) continue;
    std::vector<Frame> call_stack{{root, 0}};
    while (!call_stack.empty()) {
      Frame& f = call_stack.back();
      const std::uint32_t v = f.v;
      if (f.next_edge == 0) {
        disc[v] = low[v] = timer++;
        tarjan_stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      while (f.next_edge < chain.rows[v].size()) {
        const std::uint32_t w = chain.rows[v][f.next_edge].first;
        ++f.next_edge;
        if (disc[w] == -1) {
          call_stack.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], disc[w]);
      }
      if (descended) continue;
      if (low[v] == disc[v]) {
        while (true) {
          const std::uint32_t w = tarjan_stack.back();
          tarjan_stack.pop_back();
          on_stack[w] = 0;
          comp[w] = ncomp;
          if (w == v) break;
        }
        ++ncomp;
      }
      call_stack.pop_back();
      if (!call_stack.empty()) {
        Frame& parent = call_stack.back();
        low[parent.v] = std::min(low[parent.v], low[v]);
      }
    }
  }

  std::vector<char> closed(static_cast<std::size_t>(ncomp), 1);
  for (std::uint32_t v = 0; v < n; ++v)
    for (const auto& [w, p] : chain.rows[v])
      if (comp[v] != comp[w]) closed[static_cast<std::size_t>(comp[v])] = 0;
  int closed_count = 0, closed_comp = -1;
  for (int c = 0; c < ncomp; ++c)
    if (closed[static_cast<std::size_t>(c)]) {
      ++closed_count;
      closed_comp = c;
    }
  if (closed_count != 1)
    throw Error(ErrorKind::Unsupported,
                "chain has " + std::to_string(closed_count) +
                    " closed communicating classes; the stationary "
                    "distribution is not unique");
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < n; ++v)
    if (comp[v] == closed_comp) out.push_back(v);
  return out;
}

std::vector<double> steady_state(const TransitionChain& chain) {
  const std::vector<std::uint32_t> rec = recurrent_class(chain);
  const std::size_t n = chain.states.size();
  std::vector<int> slot(n, -1);
  for (std::size_t i = 0; i < rec.size(); ++i) slot[rec[i]] = static_cast<int>(i);

  // Restricted transition rows (recurrent class is closed, so rows restrict
  // cleanly and stay stochastic).
  std::vector<std::vector<std::pair<int, double>>> rows(rec.size());
  for (std::size_t i = 0; i < rec.size(); ++i)
    for (const auto& [w, p] : chain.rows[rec[i]])
      rows[i].emplace_back(slot[w], p);

  std::vector<double> pi(rec.size(), 1.0 / static_cast<double>(rec.size()));
  std::vector<double> next(rec.size());
  constexpr double kTol = 1e-12;
  constexpr std::uint64_t kMaxIters = 5000000;
  for (std::uint64_t it = 0; it < kMaxIters; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (const auto& [j, p] : rows[i]) next[static_cast<std::size_t>(j)] += pi[i] * p;
    // L1 residual of pi*T = pi, checked before applying the lazy step.
    double residual = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) residual += std::abs(next[i] - pi[i]);
    // Half-lazy update keeps periodic chains convergent.
    double total = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) {
      pi[i] = 0.5 * (pi[i] + next[i]);
      total += pi[i];
    }
    for (double& x : pi) x /= total;  // counter float drift
    if (residual < kTol) {
      std::vector<double> full(n, 0.0);
      for (std::size_t i = 0; i < rec.size(); ++i) full[rec[i]] = pi[i];
      return full;
    }
  }
  throw Error(ErrorKind::NonConvergence,
              "stationary distribution did not converge to 1e-12 within " +
                  std::to_string(kMaxIters) + " iterations");
}

double exact_throughput(const TransitionChain& chain,
                        const std::vector<double>& pi) {
  double total = 0.0;
  for (std::size_t s = 0; s < chain.states.size(); ++s) {
    if (pi[s] == 0.0) continue;
    double per_state = 0.0;
    for (std::size_t r = 0; r < chain.realizations.size(); ++r)
      per_state += chain.realization_prob[r] *
                   static_cast<double>(chain.delivery[s][r]);
    total += pi[s] * per_state;
  }
  return total;
}

}  // namespace rlnc
