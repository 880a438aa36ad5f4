#pragma once

#include "swapmap/error.hpp"
#include "swapmap/graph.hpp"

#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace swapmap {

/// Disjoint SWAPs on coupling-map edges, applied in one time step.
struct SwapLayer {
  std::vector<Edge> swaps;

  friend bool operator==(const SwapLayer&, const SwapLayer&) = default;
};

/// Effective adjacency of initial-position labels after `depth` swap layers.
struct ConnectivityGraph {
  Graph graph;
  std::size_t depth = 0;

  [[nodiscard]] std::size_t numQubits() const noexcept { return graph.numNodes(); }
};

/**
 * A predetermined swap strategy: a pool of swap layers, the order in which
 * they are applied (1-based indices into the pool) and the coupling map.
 */
class SwapStrategy {
public:
  SwapStrategy(CouplingMap coupling, std::vector<SwapLayer> layers,
               std::vector<std::size_t> order)
      : coupling_(std::move(coupling)), layers_(std::move(layers)),
        order_(std::move(order)) {
    for (std::size_t li = 0; li < layers_.size(); ++li) {
      std::vector<bool> used(coupling_.numNodes(), false);
      for (const auto& s : layers_[li].swaps) {
        if (!coupling_.hasEdge(s.u, s.v)) {
          throw InvalidArgument("swap (" + std::to_string(s.u) + "," +
                                std::to_string(s.v) + ") in layer " +
                                std::to_string(li + 1) +
                                " is not a coupling-map edge");
        }
        if (used[s.u] || used[s.v]) {
          throw InvalidArgument("swaps in layer " + std::to_string(li + 1) +
                                " are not disjoint");
        }
        used[s.u] = used[s.v] = true;
      }
    }
    for (auto o : order_) {
      if (o < 1 || o > layers_.size()) {
        throw InvalidArgument("order entry " + std::to_string(o) +
                              " is outside 1.." + std::to_string(layers_.size()));
      }
    }
  }

  [[nodiscard]] const CouplingMap& coupling() const noexcept { return coupling_; }
  [[nodiscard]] const std::vector<SwapLayer>& layers() const noexcept { return layers_; }
  [[nodiscard]] const std::vector<std::size_t>& order() const noexcept { return order_; }
  [[nodiscard]] std::size_t numQubits() const noexcept { return coupling_.numNodes(); }
  /// L, the number of swap layers in a full run of the strategy.
  [[nodiscard]] std::size_t depth() const noexcept { return order_.size(); }

  /// The t-th applied layer, t in 1..depth().
  [[nodiscard]] const SwapLayer& appliedLayer(std::size_t t) const {
    return layers_.at(order_.at(t - 1) - 1);
  }

  friend bool operator==(const SwapStrategy&, const SwapStrategy&) = default;

private:
  CouplingMap coupling_;
  std::vector<SwapLayer> layers_;
  std::vector<std::size_t> order_;
};

/// Alternating even/odd swap layers on a line; reaches K_n after n-2 layers.
inline SwapStrategy lineSwapStrategy(std::size_t n) {
  auto coupling = lineCouplingMap(n);
  SwapLayer even;
  SwapLayer odd;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    (i % 2 == 0 ? even : odd).swaps.emplace_back(static_cast<Node>(i),
                                                 static_cast<Node>(i + 1));
  }
  std::vector<std::size_t> order(n - 2);
  for (std::size_t j = 0; j < order.size(); ++j) {
    order[j] = j % 2 + 1;
  }
  std::vector<SwapLayer> layers{std::move(even)};
  if (!odd.swaps.empty()) {
    layers.push_back(std::move(odd));
  }
  return {std::move(coupling), std::move(layers), std::move(order)};
}

namespace detail {
inline void checkDepth(const SwapStrategy& strategy, std::size_t l) {
  if (l > strategy.depth()) {
    throw InvalidArgument("depth " + std::to_string(l) + " exceeds strategy length " +
                          std::to_string(strategy.depth()));
  }
}
} // namespace detail

/**
 * Tracks where the qubits that started on each physical position currently
 * sit while swap layers are applied one at a time.
 */
class PermutationTracker {
public:
  explicit PermutationTracker(std::size_t n) : position_(n), occupant_(n) {
    std::iota(position_.begin(), position_.end(), Node{0});
    std::iota(occupant_.begin(), occupant_.end(), Node{0});
  }

  void apply(const SwapLayer& layer) {
    for (const auto& s : layer.swaps) {
      std::swap(occupant_[s.u], occupant_[s.v]);
      position_[occupant_[s.u]] = s.u;
      position_[occupant_[s.v]] = s.v;
    }
  }

  /// Current position of the qubit that started at `label`.
  [[nodiscard]] const std::vector<Node>& positions() const noexcept { return position_; }
  /// Starting label of the qubit currently at each position.
  [[nodiscard]] const std::vector<Node>& occupants() const noexcept { return occupant_; }

private:
  std::vector<Node> position_;
  std::vector<Node> occupant_;
};

/// sigma_l: result[p] is where the qubit that started at p sits after l layers.
inline std::vector<Node> permutationAfter(const SwapStrategy& strategy, std::size_t l) {
  detail::checkDepth(strategy, l);
  PermutationTracker tracker(strategy.numQubits());
  for (std::size_t t = 1; t <= l; ++t) {
    tracker.apply(strategy.appliedLayer(t));
  }
  return tracker.positions();
}

/// Inverse of permutationAfter: result[p] is the starting label now at p.
inline std::vector<Node> occupantsAfter(const SwapStrategy& strategy, std::size_t l) {
  detail::checkDepth(strategy, l);
  PermutationTracker tracker(strategy.numQubits());
  for (std::size_t t = 1; t <= l; ++t) {
    tracker.apply(strategy.appliedLayer(t));
  }
  return tracker.occupants();
}

namespace detail {
inline std::vector<std::vector<bool>> connectivityMatrix(const SwapStrategy& strategy,
                                                          std::size_t l) {
  const auto n = strategy.numQubits();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  PermutationTracker tracker(n);
  auto record = [&] {
    const auto& occ = tracker.occupants();
    for (const auto& e : strategy.coupling().edges()) {
      adj[occ[e.u]][occ[e.v]] = true;
      adj[occ[e.v]][occ[e.u]] = true;
    }
  };
  record();
  for (std::size_t t = 1; t <= l; ++t) {
    tracker.apply(strategy.appliedLayer(t));
    record();
  }
  return adj;
}
} // namespace detail

/// C_l: labels i, j adjacent iff they sit on a coupling edge at some t <= l.
inline ConnectivityGraph connectivityGraph(const SwapStrategy& strategy, std::size_t l) {
  detail::checkDepth(strategy, l);
  const auto adj = detail::connectivityMatrix(strategy, l);
  std::vector<Edge> edges;
  for (Node i = 0; i < adj.size(); ++i) {
    for (Node j = i + 1; j < adj.size(); ++j) {
      if (adj[i][j]) {
        edges.emplace_back(i, j);
      }
    }
  }
  return {Graph(adj.size(), std::move(edges)), l};
}

/**
 * Depth at which each label pair first becomes adjacent; -1 if never within
 * the strategy. Indexed [i][j], symmetric.
 */
inline std::vector<std::vector<int>> firstContactDepth(const SwapStrategy& strategy) {
  const auto n = strategy.numQubits();
  std::vector<std::vector<int>> first(n, std::vector<int>(n, -1));
  PermutationTracker tracker(n);
  for (std::size_t t = 0; t <= strategy.depth(); ++t) {
    if (t > 0) {
      tracker.apply(strategy.appliedLayer(t));
    }
    const auto& occ = tracker.occupants();
    for (const auto& e : strategy.coupling().edges()) {
      auto& slot = first[occ[e.u]][occ[e.v]];
      if (slot < 0) {
        slot = static_cast<int>(t);
        first[occ[e.v]][occ[e.u]] = static_cast<int>(t);
      }
    }
  }
  return first;
}

} // namespace swapmap
