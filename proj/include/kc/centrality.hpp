#pragma once

// Network measures on the binary adjacency of a Graph: mean degree, density,
// degree, harmonic closeness, pair-normalized betweenness and eigencentrality.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kc/error.hpp"
#include "kc/graph.hpp"
#include "kc/parallel.hpp"

namespace kc {

inline double mean_degree(std::size_t nodes, std::size_t links) {
  if (nodes == 0) throw DomainError("mean degree of an empty graph is undefined");
  return 2.0 * static_cast<double>(links) / static_cast<double>(nodes);
}

inline double density(std::size_t nodes, std::size_t links) {
  if (nodes < 2) throw DomainError("density needs at least 2 nodes");
  return 2.0 * static_cast<double>(links) / (static_cast<double>(nodes) * static_cast<double>(nodes - 1));
}

inline double mean_degree(const Graph& g) { return mean_degree(g.node_count(), g.edge_count()); }
inline double density(const Graph& g) { return density(g.node_count(), g.edge_count()); }

inline std::size_t degree(const Graph& g, std::string_view node) { return g.degree(g.index_of(node)); }

// Weighted degree; not one of the default report columns.
inline double strength(const Graph& g, std::string_view node) {
  double s = 0;
  for (const auto& nb : g.neighbors(g.index_of(node))) s += nb.weight;
  return s;
}

namespace detail {

// Hop distances from `source`; -1 marks unreachable nodes.
inline void bfs_distances(const Graph& g, NodeIndex source, std::vector<int>& dist, std::vector<NodeIndex>& queue) {
  std::fill(dist.begin(), dist.end(), -1);
  queue.clear();
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto u = queue[head];
    for (const auto& nb : g.neighbors(u))
      if (dist[nb.node] < 0) {
        dist[nb.node] = dist[u] + 1;
        queue.push_back(nb.node);
      }
  }
}

inline double harmonic_closeness(const Graph& g, NodeIndex k, std::vector<int>& dist, std::vector<NodeIndex>& queue) {
  bfs_distances(g, k, dist, queue);
  double sum = 0;
  for (std::size_t i = 1; i < queue.size(); ++i) sum += 1.0 / dist[queue[i]];
  return sum / static_cast<double>(g.node_count() - 1);
}

constexpr std::size_t kSourceBlock = 32;

}  // namespace detail

// Sum of inverse hop distances to every other node, over (n - 1).
// Unreachable nodes contribute nothing.
inline double closeness(const Graph& g, std::string_view node) {
  auto k = g.index_of(node);
  if (g.node_count() < 2) throw DomainError("closeness needs at least 2 nodes");
  std::vector<int> dist(g.node_count());
  std::vector<NodeIndex> queue;
  return detail::harmonic_closeness(g, k, dist, queue);
}

inline std::vector<double> closeness_all(const Graph& g, std::size_t threads = 1) {
  const auto n = g.node_count();
  if (n < 2) throw DomainError("closeness needs at least 2 nodes");
  std::vector<double> out(n);
  parallel::for_each_block(parallel::block_count(n, detail::kSourceBlock), threads, [&](std::size_t b) {
    std::vector<int> dist(n);
    std::vector<NodeIndex> queue;
    auto end = std::min(n, (b + 1) * detail::kSourceBlock);
    for (auto k = b * detail::kSourceBlock; k < end; ++k) out[k] = detail::harmonic_closeness(g, k, dist, queue);
  });
  return out;
}

// Brandes accumulation over breadth-first searches. Each unordered pair {i, j}
// adds g_ij(k) / g_ij to every k strictly between them; the sums are divided by
// (n - 1)(n - 2) / 2. Sources are processed in fixed blocks whose partial sums are
// merged in block order, so the result does not depend on the thread count.
inline std::vector<double> betweenness_all(const Graph& g, std::size_t threads = 1) {
  const auto n = g.node_count();
  if (n < 3) throw DomainError("betweenness needs at least 3 nodes");
  const auto blocks = parallel::block_count(n, detail::kSourceBlock);
  std::vector<std::vector<double>> partial(blocks);

  parallel::for_each_block(blocks, threads, [&](std::size_t b) {
    std::vector<double> acc(n, 0.0);
    std::vector<int> dist(n);
    std::vector<double> sigma(n);
    std::vector<double> delta(n);
    std::vector<NodeIndex> order;
    order.reserve(n);
    auto end = std::min(n, (b + 1) * detail::kSourceBlock);
    for (auto s = b * detail::kSourceBlock; s < end; ++s) {
      std::fill(dist.begin(), dist.end(), -1);
      std::fill(sigma.begin(), sigma.end(), 0.0);
      order.clear();
      dist[s] = 0;
      sigma[s] = 1.0;
      order.push_back(s);
      for (std::size_t head = 0; head < order.size(); ++head) {
        auto u = order[head];
        for (const auto& nb : g.neighbors(u)) {
          auto v = nb.node;
          if (dist[v] < 0) {
            dist[v] = dist[u] + 1;
            order.push_back(v);
          }
          if (dist[v] == dist[u] + 1) sigma[v] += sigma[u];
        }
      }
      for (auto v : order) delta[v] = 0.0;
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        auto v = *it;
        for (const auto& nb : g.neighbors(v)) {
          auto w = nb.node;
          if (dist[w] == dist[v] - 1) delta[w] += sigma[w] / sigma[v] * (1.0 + delta[v]);
        }
        if (v != s) acc[v] += delta[v];
      }
    }
    partial[b] = std::move(acc);
  });

  std::vector<double> bc(n, 0.0);
  for (const auto& p : partial)
    for (std::size_t v = 0; v < n; ++v) bc[v] += p[v];
  // Every unordered pair was visited from both ends.
  const double pairs = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
  for (auto& x : bc) x = x / 2.0 / pairs;
  return bc;
}

enum class Weighting { binary, weighted };

struct EigenOptions {
  double tol = 1e-10;
  std::size_t max_iter = 10000;
  Weighting weighting = Weighting::binary;
};

struct EigenResult {
  std::vector<double> vector;  // max-normalized
  double dominant_eigenvalue = 0;
  std::size_t iterations = 0;
  bool converged = false;
  bool degenerate = false;  // edgeless graph, all zeros
};

// Power iteration from the all-ones vector. The iteration runs on A + I, which has
// the same eigenvectors as A but a strictly dominant top eigenvalue even on
// bipartite graphs, where plain iteration on A oscillates.
inline EigenResult eigencentrality(const Graph& g, const EigenOptions& opt = {}) {
  const auto n = g.node_count();
  if (n == 0) throw DomainError("eigencentrality of an empty graph is undefined");
  if (!(opt.tol > 0)) throw DomainError("eigencentrality tolerance must be positive");
  if (opt.max_iter < 1) throw DomainError("eigencentrality needs max_iter >= 1");

  EigenResult res;
  if (g.edge_count() == 0) {
    res.vector.assign(n, 0.0);
    res.degenerate = true;
    return res;
  }
  auto w = [&](const Neighbor& nb) { return opt.weighting == Weighting::weighted ? nb.weight : 1.0; };

  std::vector<double> x(n, 1.0);
  std::vector<double> y(n);
  double prev_diff = 0;
  for (res.iterations = 1; res.iterations <= opt.max_iter; ++res.iterations) {
    double top = 0;
    for (NodeIndex i = 0; i < n; ++i) {
      double s = x[i];
      for (const auto& nb : g.neighbors(i)) s += w(nb) * x[nb.node];
      y[i] = s;
      top = std::max(top, s);
    }
    double diff = 0;
    for (NodeIndex i = 0; i < n; ++i) {
      y[i] /= top;
      diff = std::max(diff, std::abs(y[i] - x[i]));
    }
    x.swap(y);
    // Also bound the remaining distance to the fixed point by the observed contraction
    // rate, so slowly decaying components do not stop the iteration early.
    double rate = prev_diff > 0 ? diff / prev_diff : 0.0;
    double remaining = rate < 1 ? diff * rate / (1 - rate) : diff;
    prev_diff = diff;
    if (diff < opt.tol && remaining < opt.tol) {
      res.converged = true;
      break;
    }
  }
  if (!res.converged) res.iterations = opt.max_iter;

  double num = 0;
  double den = 0;
  for (NodeIndex i = 0; i < n; ++i) {
    double ax = 0;
    for (const auto& nb : g.neighbors(i)) ax += w(nb) * x[nb.node];
    num += x[i] * ax;
    den += x[i] * x[i];
  }
  res.dominant_eigenvalue = num / den;
  res.vector = std::move(x);
  return res;
}

struct CentralityReport {
  std::vector<std::string> ids;
  std::vector<std::size_t> degree;
  std::vector<double> closeness;
  std::vector<double> betweenness;
  std::vector<double> eigencentrality;
  std::optional<double> mean_degree;  // undefined for n = 0
  std::optional<double> density;      // undefined for n < 2
  std::size_t nodes = 0;
  std::size_t links = 0;
  bool eigen_converged = false;
};

struct CentralityOptions {
  EigenOptions eigen;
  std::size_t threads = 1;
};

// Measures that are undefined on tiny graphs (closeness for n < 2, betweenness
// for n < 3) are reported as zeros.
inline CentralityReport centrality_report(const Graph& g, const CentralityOptions& opt = {}) {
  CentralityReport r;
  const auto n = g.node_count();
  r.ids = g.ids();
  r.nodes = n;
  r.links = g.edge_count();
  r.degree.resize(n);
  for (NodeIndex i = 0; i < n; ++i) r.degree[i] = g.degree(i);
  r.closeness = n >= 2 ? closeness_all(g, opt.threads) : std::vector<double>(n, 0.0);
  r.betweenness = n >= 3 ? betweenness_all(g, opt.threads) : std::vector<double>(n, 0.0);
  if (n >= 1) {
    auto eig = eigencentrality(g, opt.eigen);
    r.eigencentrality = std::move(eig.vector);
    r.eigen_converged = eig.converged;
    r.mean_degree = mean_degree(g);
  }
  if (n >= 2) r.density = density(g);
  return r;
}

}  // namespace kc
