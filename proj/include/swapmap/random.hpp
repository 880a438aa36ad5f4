#pragma once

#include "swapmap/error.hpp"
#include "swapmap/graph.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace swapmap {

struct RngSeed {
  std::uint64_t value = 0;
};

/**
 * Platform-stable random source.
 *
 * std::mt19937_64 is fully specified by the standard, but the standard
 * distributions are not, so bounded integers and reals are derived here.
 */
class Rng {
public:
  explicit Rng(RngSeed seed) : engine_(seed.value) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) {
      throw InvalidArgument("Rng::below called with bound 0");
    }
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x = 0;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11U) * 0x1.0p-53; }

  template <class T> void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

private:
  std::mt19937_64 engine_;
};

/**
 * Random simple `degree`-regular graph.
 *
 * Configuration model: pair up n*degree stubs uniformly and restart from
 * scratch whenever a self-loop or a multi-edge appears.
 */
inline ProgramGraph randomRegularGraph(std::size_t n, std::size_t degree,
                                       RngSeed seed) {
  if ((n * degree) % 2 != 0) {
    throw InvalidArgument("n * degree must be even (n=" + std::to_string(n) +
                          ", degree=" + std::to_string(degree) + ")");
  }
  if (degree >= n && !(degree == 0 && n == 0)) {
    throw InvalidArgument("degree must be smaller than n (n=" +
                          std::to_string(n) +
                          ", degree=" + std::to_string(degree) + ")");
  }
  Rng rng(seed);
  std::vector<Node> stubs(n * degree);
  constexpr int maxAttempts = 100000;
  for (int attempt = 0; attempt < maxAttempts; ++attempt) {
    for (std::size_t i = 0; i < stubs.size(); ++i) {
      stubs[i] = static_cast<Node>(i / degree);
    }
    rng.shuffle(stubs);
    std::vector<Edge> edges;
    edges.reserve(stubs.size() / 2);
    bool simple = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      if (stubs[i] == stubs[i + 1]) {
        simple = false;
        break;
      }
      edges.emplace_back(stubs[i], stubs[i + 1]);
    }
    if (!simple) {
      continue;
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
      continue;
    }
    return {n, std::move(edges)};
  }
  throw InvalidArgument("could not draw a simple regular graph");
}

/// Erdos-Renyi G(n, p): every pair is an edge independently with probability p.
inline ProgramGraph gnpGraph(std::size_t n, double p, RngSeed seed) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("edge probability must lie in [0, 1]");
  }
  Rng rng(seed);
  std::vector<Edge> edges;
  for (Node i = 0; i < n; ++i) {
    for (Node j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) {
        edges.emplace_back(i, j);
      }
    }
  }
  return {n, std::move(edges)};
}

} // namespace swapmap
