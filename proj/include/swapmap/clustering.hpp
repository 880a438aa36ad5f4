#pragma once

#include "swapmap/error.hpp"
#include "swapmap/graph.hpp"
#include "swapmap/mapping.hpp"
#include "swapmap/mapping_search.hpp"
#include "swapmap/random.hpp"
#include "swapmap/sat_encoding.hpp"
#include "swapmap/solver.hpp"
#include "swapmap/swap_strategy.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace swapmap {

/// Ordered, pairwise disjoint node sets covering the program graph.
struct ClusterPlan {
  std::vector<std::vector<Node>> clusters;

  [[nodiscard]] std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> s;
    for (const auto& c : clusters) {
      s.push_back(c.size());
    }
    return s;
  }

  /// Throws InvalidArgument unless the clusters partition 0..numNodes-1.
  void validate(std::size_t numNodes) const {
    std::vector<bool> seen(numNodes, false);
    std::size_t total = 0;
    for (const auto& c : clusters) {
      if (c.empty()) {
        throw InvalidArgument("cluster plan contains an empty cluster");
      }
      for (auto v : c) {
        if (v >= numNodes || seen[v]) {
          throw InvalidArgument("cluster plan node " + std::to_string(v) +
                                " is out of range or repeated");
        }
        seen[v] = true;
        ++total;
      }
    }
    if (total != numNodes) {
      throw InvalidArgument("cluster plan covers " + std::to_string(total) + " of " +
                            std::to_string(numNodes) + " nodes");
    }
  }

  friend bool operator==(const ClusterPlan&, const ClusterPlan&) = default;
};

struct KMeansOptions {
  std::size_t maxIterations = 300;
  double tolerance = 1e-6;
};

/// Rows of `points` as observations. Returns the cluster index of each row;
/// every one of the k clusters ends up non-empty.
inline std::vector<std::size_t> kMeans(const Eigen::MatrixXd& points, std::size_t k,
                                       RngSeed seed, KMeansOptions options = {}) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k == 0 || k > n) {
    throw InvalidArgument("k-means needs 1 <= k <= number of points");
  }
  Rng rng(seed);
  Eigen::MatrixXd centers(static_cast<Eigen::Index>(k), points.cols());

  // k-means++ seeding
  std::vector<bool> chosen(n, false);
  std::size_t first = rng.below(n);
  chosen[first] = true;
  centers.row(0) = points.row(static_cast<Eigen::Index>(first));
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = (points.row(static_cast<Eigen::Index>(i)) -
                        centers.row(static_cast<Eigen::Index>(c - 1)))
                           .squaredNorm();
      dist[i] = std::min(dist[i], d);
      total += chosen[i] ? 0.0 : dist[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i]) {
          continue;
        }
        target -= dist[i];
        pick = i;
        if (target < 0.0) {
          break;
        }
      }
    } else {
      std::vector<std::size_t> free;
      for (std::size_t i = 0; i < n; ++i) {
        if (!chosen[i]) {
          free.push_back(i);
        }
      }
      pick = free[rng.below(free.size())];
    }
    chosen[pick] = true;
    centers.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(pick));
  }

  std::vector<std::size_t> label(n, 0);
  for (std::size_t iter = 0; iter < options.maxIterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double bestD = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = (points.row(static_cast<Eigen::Index>(i)) -
                          centers.row(static_cast<Eigen::Index>(c)))
                             .squaredNorm();
        if (d < bestD) {
          bestD = d;
          label[i] = c;
        }
      }
    }
    // an empty cluster takes the point farthest from its own center
    std::vector<std::size_t> count(k, 0);
    for (auto l : label) {
      ++count[l];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] > 0) {
        continue;
      }
      std::size_t far = n;
      double farD = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (count[label[i]] < 2) {
          continue;
        }
        const double d = (points.row(static_cast<Eigen::Index>(i)) -
                          centers.row(static_cast<Eigen::Index>(label[i])))
                             .squaredNorm();
        if (d > farD) {
          farD = d;
          far = i;
        }
      }
      --count[label[far]];
      label[far] = c;
      count[c] = 1;
    }
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(centers.rows(), centers.cols());
    for (std::size_t i = 0; i < n; ++i) {
      next.row(static_cast<Eigen::Index>(label[i])) += points.row(static_cast<Eigen::Index>(i));
    }
    for (std::size_t c = 0; c < k; ++c) {
      next.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(count[c]);
    }
    const double shift = (next - centers).rowwise().norm().maxCoeff();
    centers = next;
    if (shift <= options.tolerance) {
      break;
    }
  }
  return label;
}

/**
 * k smallest eigenvectors of the symmetric normalized Laplacian
 * I - D^{-1/2} A D^{-1/2}, one per column. Isolated nodes get a zero row and
 * column. Each vector's largest-magnitude entry is made positive.
 */
inline Eigen::MatrixXd laplacianEigenvectors(const Graph& graph, std::size_t k,
                                             double residualTolerance = 1e-8) {
  const auto n = static_cast<Eigen::Index>(graph.numNodes());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> invSqrtDeg(graph.numNodes(), 0.0);
  for (Node v = 0; v < graph.numNodes(); ++v) {
    if (graph.degree(v) > 0) {
      invSqrtDeg[v] = 1.0 / std::sqrt(static_cast<double>(graph.degree(v)));
      lap(v, v) = 1.0;
    }
  }
  for (const auto& e : graph.edges()) {
    const double w = -invSqrtDeg[e.u] * invSqrtDeg[e.v];
    lap(e.u, e.v) = w;
    lap(e.v, e.u) = w;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  if (solver.info() != Eigen::Success) {
    throw Error("eigen decomposition of the graph Laplacian failed");
  }
  Eigen::MatrixXd vecs = solver.eigenvectors().leftCols(static_cast<Eigen::Index>(k));
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    const double lambda = solver.eigenvalues()(c);
    const double residual = (lap * vecs.col(c) - lambda * vecs.col(c)).norm();
    if (residual > residualTolerance) {
      throw Error("eigenvector residual " + std::to_string(residual) + " above tolerance");
    }
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (std::abs(vecs(i, c)) > std::abs(vecs(arg, c)) + 1e-12) {
        arg = i;
      }
    }
    if (vecs(arg, c) < 0) {
      vecs.col(c) *= -1.0;
    }
  }
  return vecs;
}

/**
 * Spectral partition into k clusters: Laplacian eigenvector embedding with
 * unit-normalized rows, then seeded k-means++. Clusters come back largest
 * first (ties: smallest member first), each sorted ascending.
 */
inline ClusterPlan spectralPartition(const ProgramGraph& program, std::size_t k,
                                     RngSeed seed, KMeansOptions options = {}) {
  const auto n = program.numNodes();
  if (k < 1 || k > n) {
    throw InvalidArgument("cluster count must lie in 1.." + std::to_string(n));
  }
  std::vector<std::size_t> label(n, 0);
  if (k > 1) {
    Eigen::MatrixXd embed = laplacianEigenvectors(program, k);
    for (Eigen::Index i = 0; i < embed.rows(); ++i) {
      const double norm = embed.row(i).norm();
      if (norm > 0.0) {
        embed.row(i) /= norm;
      }
    }
    label = kMeans(embed, k, seed, options);
  }
  ClusterPlan plan;
  plan.clusters.assign(k, {});
  for (Node v = 0; v < n; ++v) {
    plan.clusters[label[v]].push_back(v);
  }
  std::sort(plan.clusters.begin(), plan.clusters.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() > b.size() : a.front() < b.front();
  });
  return plan;
}

/**
 * Maps the clusters one after another. Cluster i is placed on free qubits
 * around the already pinned nodes by a binary search over [l_{i-1}, L];
 * edges to earlier clusters must become adjacent within the chosen depth.
 * The returned depth is the one reached after the last cluster.
 */
inline SearchResult clusteredMapping(const ProgramGraph& program, const SwapStrategy& strategy,
                                     const ClusterPlan& plan, SolveBudget budget = {},
                                     const SatBackend& backend = builtinBackend()) {
  plan.validate(program.numNodes());
  if (program.numNodes() > strategy.numQubits()) {
    throw Infeasible("program larger than device");
  }
  ConnectivityCache cache(strategy);
  PinSet pins;
  std::size_t lPrev = 0;
  SearchResult total;
  for (const auto& cluster : plan.clusters) {
    auto decide = [&](std::size_t l) {
      const auto& target = cache.at(l).graph;
      const auto enc = encodeSubproblem(program, cluster, target, pins);
      const auto outcome = backend(enc.formula, budget);
      DepthAttempt a{outcome.status, std::nullopt, outcome.elapsed};
      if (outcome.status == SolveStatus::Sat) {
        a.mapping = decodeModel(*outcome.model, enc.vars);
      }
      return a;
    };
    SearchResult step;
    try {
      step = binarySearchDepth(lPrev, strategy.depth(), decide);
    } catch (const InfeasibleWithTrace& e) {
      auto trace = total.trace;
      trace.insert(trace.end(), e.trace().begin(), e.trace().end());
      throw InfeasibleWithTrace(std::string("cluster placement failed: ") + e.what(),
                                std::move(trace));
    }
    for (std::size_t i = 0; i < cluster.size(); ++i) {
      pins.emplace(cluster[i], step.mapping[i]);
    }
    lPrev = step.lMin;
    total.trace.insert(total.trace.end(), step.trace.begin(), step.trace.end());
    total.solverCalls += step.solverCalls;
  }
  total.lMin = lPrev;
  total.mapping.assignment.resize(program.numNodes());
  for (const auto& [node, physical] : pins) {
    total.mapping.assignment[node] = physical;
  }
  if (!preservesEdges(program, cache.at(lPrev).graph, total.mapping)) {
    throw InconsistentModel("clustered mapping breaks a program edge at depth " +
                            std::to_string(lPrev));
  }
  return total;
}

} // namespace swapmap
