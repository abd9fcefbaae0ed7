#pragma once

#include <cstdint>
#include <vector>

#include "rlnc/netmodel.hpp"
#include "rlnc/occupancy.hpp"

namespace rlnc {

/// Exact finite-state analysis of the occupancy recursion for small
/// networks: the reachable state graph under every channel realization with
/// nonzero probability, the row-stochastic transition matrix, and per
/// (state, realization) delivery counts.
struct TransitionChain {
  ErasureNetwork net;
  std::vector<OccupancyVector> states;  // index 0 = all-zero initial state
  // Merged transition rows: rows[s] lists (successor, probability), sorted by
  // successor index; each row sums to 1.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;
  // Channel realizations with nonzero probability and their probabilities.
  std::vector<ChannelRealization> realizations;
  std::vector<double> realization_prob;
  // delivery[s][r] = innovative packets delivered when realization
  // realizations[r] hits state s.
  std::vector<std::vector<std::uint8_t>> delivery;
};

inline constexpr std::size_t kMaxChainEdges = 12;
inline constexpr std::size_t kDefaultMaxStates = 100000;

/// Breadth-first enumeration from the all-zero state.  Gated to
/// kMaxChainEdges edges (realization enumeration is exponential) and
/// max_states reachable states (StateBudgetExceeded beyond).
TransitionChain build_chain(const ErasureNetwork& net,
                            std::size_t max_states = kDefaultMaxStates);

/// State indices of the unique closed communicating class (the states the
/// chain keeps revisiting forever).  Throws Unsupported if more than one
/// closed class exists.
std::vector<std::uint32_t> recurrent_class(const TransitionChain& chain);

/// Stationary distribution over all states (transient states get 0), found
/// by power iteration on the half-lazy chain (T+I)/2 restricted to the
/// recurrent class, run until the L1 residual of pi*T = pi drops below
/// 1e-12.  Throws NonConvergence after the iteration cap.
std::vector<double> steady_state(const TransitionChain& chain);

/// Expected innovative deliveries per epoch in steady state:
/// sum over states and realizations of pi(s) * Pr(r) * delivery[s][r].
double exact_throughput(const TransitionChain& chain,
                        const std::vector<double>& pi);

}  // namespace rlnc
