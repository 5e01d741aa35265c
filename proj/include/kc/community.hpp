#pragma once

// Deterministic Louvain-style modularity clustering, cluster composition and
// the display filters (largest clusters, highest-betweenness nodes).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "kc/error.hpp"
#include "kc/graph.hpp"

namespace kc {

struct Partition {
  std::vector<std::string> node_ids;  // graph node order
  std::vector<std::size_t> cluster;   // 1-based cluster id per node
  std::vector<std::size_t> sizes;     // sizes[c - 1]
  double modularity = 0;

  std::size_t cluster_count() const { return sizes.size(); }
  std::size_t node_count() const { return cluster.size(); }
  std::size_t size_of(std::size_t c) const { return sizes.at(c - 1); }
};

// Q = sum_c [ w_in(c) / W - gamma * (s_c / 2W)^2 ]. s_c is taken as 2 w_in(c) + cut(c),
// which makes the single-cluster partition score exactly 0.
inline double modularity(const Graph& g, const std::vector<std::size_t>& assignment, double resolution = 1.0) {
  if (assignment.size() != g.node_count()) throw ValidationError("partition does not cover the graph");
  std::map<std::size_t, std::pair<double, double>> per;  // cluster -> (w_in, cut)
  double total = 0;
  for (auto c : assignment) per[c];
  for (const auto& e : g.edges()) {
    total += e.weight;
    auto cu = assignment[e.u];
    auto cv = assignment[e.v];
    if (cu == cv) {
      per[cu].first += e.weight;
    } else {
      per[cu].second += e.weight;
      per[cv].second += e.weight;
    }
  }
  if (total == 0) return 0.0;
  double q = 0;
  for (const auto& [c, wc] : per) {
    double s = 2.0 * wc.first + wc.second;
    double frac = s / (2.0 * total);
    q += wc.first / total - resolution * frac * frac;
  }
  return q;
}

// Renumbers clusters 1..k by descending size, ties to the cluster holding the
// smallest node, and scores the result.
inline Partition make_partition(const Graph& g, const std::vector<std::size_t>& raw, double resolution = 1.0) {
  if (raw.size() != g.node_count()) throw ValidationError("partition does not cover the graph");
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> info;  // raw id -> (size, min node)
  for (NodeIndex i = 0; i < raw.size(); ++i) {
    auto [it, fresh] = info.emplace(raw[i], std::make_pair(std::size_t{0}, i));
    ++it->second.first;
  }
  std::vector<std::pair<std::size_t, std::pair<std::size_t, std::size_t>>> order(info.begin(), info.end());
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second.first != b.second.first) return a.second.first > b.second.first;
    return a.second.second < b.second.second;
  });
  std::map<std::size_t, std::size_t> renumber;
  Partition p;
  for (std::size_t k = 0; k < order.size(); ++k) {
    renumber[order[k].first] = k + 1;
    p.sizes.push_back(order[k].second.first);
  }
  p.node_ids = g.ids();
  p.cluster.resize(raw.size());
  for (NodeIndex i = 0; i < raw.size(); ++i) p.cluster[i] = renumber[raw[i]];
  p.modularity = modularity(g, p.cluster, resolution);
  return p;
}

inline double modularity(const Graph& g, const Partition& p, double resolution = 1.0) {
  return modularity(g, p.cluster, resolution);
}

struct CommunityOptions {
  double resolution = 1.0;
  std::size_t max_sweeps = 1000;  // per level
};

namespace detail {

struct LevelGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // no self entries
  std::vector<double> self;                                      // internal weight folded into the node
  double total = 0;                                              // W
};

// One local-moving phase. Returns the community of every node and whether anything moved.
inline bool local_moves(const LevelGraph& lg, const std::vector<std::size_t>& order, double gamma,
                        std::size_t max_sweeps, std::vector<std::size_t>& comm) {
  const auto n = lg.adj.size();
  std::vector<double> k(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = 2.0 * lg.self[i];
    for (const auto& [j, w] : lg.adj[i]) k[i] += w;
  }
  comm.resize(n);
  std::iota(comm.begin(), comm.end(), 0);
  std::vector<double> tot = k;
  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> seen;
  const double two_w = 2.0 * lg.total;
  bool any = false;

  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    bool moved = false;
    for (auto i : order) {
      auto home = comm[i];
      tot[home] -= k[i];
      seen.clear();
      for (const auto& [j, w] : lg.adj[i]) {
        auto c = comm[j];
        if (link[c] == 0.0 && std::find(seen.begin(), seen.end(), c) == seen.end()) seen.push_back(c);
        link[c] += w;
      }
      std::sort(seen.begin(), seen.end());
      auto gain = [&](std::size_t c) { return link[c] - gamma * tot[c] * k[i] / two_w; };
      auto best = home;
      double best_gain = gain(home);
      for (auto c : seen) {
        if (c == home) continue;
        double gc = gain(c);
        if (gc > best_gain + 1e-12) {
          best = c;
          best_gain = gc;
        }
      }
      for (auto c : seen) link[c] = 0.0;
      link[home] = 0.0;
      comm[i] = best;
      tot[best] += k[i];
      if (best != home) moved = true;
    }
    if (!moved) break;
    any = true;
  }
  return any;
}

}  // namespace detail

// Greedy modularity maximization: local moves in the given node order, then
// aggregation of communities into nodes, repeated until a level moves nothing.
// Fully sequential, so identical input and ordering give identical output.
inline Partition detect_communities(const Graph& g, std::vector<NodeIndex> seed_order = {},
                                    const CommunityOptions& opt = {}) {
  const auto n = g.node_count();
  if (n == 0) throw DomainError("community detection needs at least one node");
  if (seed_order.empty()) {
    seed_order.resize(n);
    std::iota(seed_order.begin(), seed_order.end(), 0);
  }
  {
    auto sorted = seed_order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i)
      if (sorted.size() != n || sorted[i] != i) throw ValidationError("seed order must be a permutation of the nodes");
  }

  detail::LevelGraph lg;
  lg.adj.resize(n);
  lg.self.assign(n, 0.0);
  for (const auto& e : g.edges()) {
    lg.adj[e.u].push_back({e.v, e.weight});
    lg.adj[e.v].push_back({e.u, e.weight});
    lg.total += e.weight;
  }

  std::vector<std::size_t> membership(n);
  std::iota(membership.begin(), membership.end(), 0);
  if (lg.total > 0) {
    auto order = seed_order;
    while (true) {
      std::vector<std::size_t> comm;
      if (!detail::local_moves(lg, order, opt.resolution, opt.max_sweeps, comm)) break;

      // Dense renumbering by first appearance in the visiting order.
      const auto m = lg.adj.size();
      std::vector<std::size_t> dense(m, m);
      std::size_t next = 0;
      std::vector<std::size_t> new_order;
      for (auto i : order)
        if (dense[comm[i]] == m) {
          dense[comm[i]] = next++;
          new_order.push_back(dense[comm[i]]);
        }
      for (auto& c : membership) c = dense[comm[c]];

      detail::LevelGraph up;
      up.adj.resize(next);
      up.self.assign(next, 0.0);
      up.total = lg.total;
      std::vector<std::map<std::size_t, double>> acc(next);
      for (std::size_t i = 0; i < m; ++i) {
        auto ci = dense[comm[i]];
        up.self[ci] += lg.self[i];
        for (const auto& [j, w] : lg.adj[i]) {
          auto cj = dense[comm[j]];
          if (ci == cj) {
            if (i < j) up.self[ci] += w;
          } else {
            acc[ci][cj] += w;
          }
        }
      }
      for (std::size_t c = 0; c < next; ++c)
        for (const auto& [d, w] : acc[c]) up.adj[c].push_back({d, w});
      if (next == m) break;
      lg = std::move(up);
      order = std::move(new_order);
    }
  }

  auto p = make_partition(g, membership, opt.resolution);
  if (p.modularity < 0) p = make_partition(g, std::vector<std::size_t>(n, 0), opt.resolution);
  return p;
}

// ---------------------------------------------------------------------------
// Composition and display filters

struct ClusterShare {
  std::size_t cluster = 0;
  std::size_t size = 0;
  double percent = 0;  // exact
  long rounded = 0;    // for display
};

inline std::vector<ClusterShare> composition(const Partition& p) {
  if (p.node_count() == 0) throw DomainError("composition of an empty partition is undefined");
  std::vector<ClusterShare> out;
  const double n = static_cast<double>(p.node_count());
  for (std::size_t c = 1; c <= p.cluster_count(); ++c) {
    double pct = static_cast<double>(p.size_of(c)) / n * 100.0;
    out.push_back({c, p.size_of(c), pct, std::lround(pct)});
  }
  return out;
}

// The k largest clusters; ties go to the cluster holding the smaller node id.
inline std::vector<std::size_t> top_clusters(const Partition& p, std::size_t k) {
  if (k < 1) throw ValidationError("top_clusters needs k >= 1");
  std::vector<std::size_t> min_node(p.cluster_count(), p.node_count());
  for (NodeIndex i = 0; i < p.node_count(); ++i) min_node[p.cluster[i] - 1] = std::min(min_node[p.cluster[i] - 1], i);
  std::vector<std::size_t> ids(p.cluster_count());
  std::iota(ids.begin(), ids.end(), 1);
  std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
    if (p.size_of(a) != p.size_of(b)) return p.size_of(a) > p.size_of(b);
    return min_node[a - 1] < min_node[b - 1];
  });
  if (ids.size() > k) ids.resize(k);
  return ids;
}

// Induced subgraph on the ceil(fraction * n) nodes of highest betweenness, ties to smaller ids.
inline Graph filter_top_betweenness(const Graph& g, const std::vector<double>& betweenness, double fraction) {
  if (!(fraction > 0 && fraction <= 1)) throw ValidationError("betweenness fraction must lie in (0, 1]");
  if (betweenness.size() != g.node_count()) throw ValidationError("betweenness vector does not match the graph");
  const auto n = g.node_count();
  auto keep_count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  keep_count = std::min(keep_count, n);
  std::vector<NodeIndex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeIndex a, NodeIndex b) { return betweenness[a] > betweenness[b]; });
  order.resize(keep_count);
  return induced_subgraph(g, order);
}

}  // namespace kc
