#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kc/csv.hpp"
#include "kc/error.hpp"
#include "kc/text.hpp"

namespace kc {

using NodeIndex = std::size_t;

struct Neighbor {
  NodeIndex node;
  double weight;
};

struct Edge {
  NodeIndex u;  // u < v
  NodeIndex v;
  double weight;

  bool operator==(const Edge&) const = default;
};

// Immutable undirected weighted graph. Nodes are kept in id order (text::id_less),
// so a smaller index always means a smaller id.
class Graph {
 public:
  Graph() = default;

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return ids_.empty(); }

  const std::string& id(NodeIndex i) const { return ids_.at(i); }
  const std::string& label(NodeIndex i) const { return labels_.at(i); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<NodeIndex> find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  NodeIndex index_of(std::string_view id) const {
    auto i = find(id);
    if (!i) throw LookupError("unknown node '" + std::string(id) + "'");
    return *i;
  }

  // Sorted by neighbor index.
  std::span<const Neighbor> neighbors(NodeIndex i) const { return adjacency_.at(i); }
  std::size_t degree(NodeIndex i) const { return adjacency_.at(i).size(); }

  // Sorted by (u, v).
  const std::vector<Edge>& edges() const { return edges_; }

  std::optional<double> weight(NodeIndex a, NodeIndex b) const {
    auto nb = neighbors(a);
    auto it = std::lower_bound(nb.begin(), nb.end(), b, [](const Neighbor& n, NodeIndex x) { return n.node < x; });
    if (it == nb.end() || it->node != b) return std::nullopt;
    return it->weight;
  }

  bool operator==(const Graph& o) const { return ids_ == o.ids_ && labels_ == o.labels_ && edges_ == o.edges_; }

 private:
  friend class GraphBuilder;

  std::vector<std::string> ids_;
  std::vector<std::string> labels_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, NodeIndex> index_;
};

class GraphBuilder {
 public:
  // Re-adding a node is allowed; a non-empty label overrides an empty one.
  GraphBuilder& add_node(std::string id, std::string label = {}) {
    if (id.empty()) throw ValidationError("node id must not be empty");
    auto [it, inserted] = pos_.emplace(id, nodes_.size());
    if (inserted) {
      nodes_.push_back({std::move(id), std::move(label)});
    } else if (!label.empty()) {
      auto& existing = nodes_[it->second].second;
      if (!existing.empty() && existing != label)
        throw ValidationError("node '" + it->first + "' added twice with different labels");
      existing = std::move(label);
    }
    return *this;
  }

  GraphBuilder& add_edge(std::string_view a, std::string_view b, double weight = 1.0) {
    auto ia = pos_.find(std::string(a));
    auto ib = pos_.find(std::string(b));
    if (ia == pos_.end()) throw LookupError("edge endpoint '" + std::string(a) + "' is not a node");
    if (ib == pos_.end()) throw LookupError("edge endpoint '" + std::string(b) + "' is not a node");
    if (ia->second == ib->second) throw ValidationError("self-loop on node '" + std::string(a) + "'");
    if (!(weight > 0) || !std::isfinite(weight))
      throw ValidationError("edge " + std::string(a) + "-" + std::string(b) + " needs a positive finite weight");
    edges_.push_back({ia->second, ib->second, weight});
    return *this;
  }

  bool has_node(std::string_view id) const { return pos_.count(std::string(id)) > 0; }

  Graph build() const {
    const std::size_t n = nodes_.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return text::id_less(nodes_[a].first, nodes_[b].first); });
    std::vector<NodeIndex> rank(n);
    for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;

    Graph g;
    g.ids_.reserve(n);
    g.labels_.reserve(n);
    for (auto i : order) {
      g.index_.emplace(nodes_[i].first, g.ids_.size());
      g.ids_.push_back(nodes_[i].first);
      g.labels_.push_back(nodes_[i].second);
    }
    g.edges_.reserve(edges_.size());
    for (const auto& e : edges_) {
      auto u = rank[e.u];
      auto v = rank[e.v];
      g.edges_.push_back({std::min(u, v), std::max(u, v), e.weight});
    }
    std::sort(g.edges_.begin(), g.edges_.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    for (std::size_t i = 1; i < g.edges_.size(); ++i)
      if (g.edges_[i].u == g.edges_[i - 1].u && g.edges_[i].v == g.edges_[i - 1].v)
        throw ValidationError("duplicate edge " + g.ids_[g.edges_[i].u] + "-" + g.ids_[g.edges_[i].v]);

    g.adjacency_.assign(n, {});
    for (const auto& e : g.edges_) {
      g.adjacency_[e.u].push_back({e.v, e.weight});
      g.adjacency_[e.v].push_back({e.u, e.weight});
    }
    for (auto& nb : g.adjacency_)
      std::sort(nb.begin(), nb.end(), [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    return g;
  }

 private:
  std::vector<std::pair<std::string, std::string>> nodes_;
  std::unordered_map<std::string, std::size_t> pos_;
  std::vector<Edge> edges_;
};

// ---------------------------------------------------------------------------
// Structural helpers

inline Graph induced_subgraph(const Graph& g, const std::vector<NodeIndex>& keep) {
  std::vector<char> in(g.node_count(), 0);
  for (auto i : keep) in.at(i) = 1;
  GraphBuilder b;
  for (NodeIndex i = 0; i < g.node_count(); ++i)
    if (in[i]) b.add_node(g.id(i), g.label(i));
  for (const auto& e : g.edges())
    if (in[e.u] && in[e.v]) b.add_edge(g.id(e.u), g.id(e.v), e.weight);
  return b.build();
}

// Component number per node; components are numbered by their smallest node index.
inline std::vector<std::size_t> connected_components(const Graph& g) {
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> comp(g.node_count(), unset);
  std::size_t next = 0;
  std::vector<NodeIndex> stack;
  for (NodeIndex s = 0; s < g.node_count(); ++s) {
    if (comp[s] != unset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(u))
        if (comp[nb.node] == unset) {
          comp[nb.node] = next;
          stack.push_back(nb.node);
        }
    }
    ++next;
  }
  return comp;
}

// Ties go to the component holding the smallest node id.
inline Graph largest_component(const Graph& g) {
  if (g.empty()) return {};
  auto comp = connected_components(g);
  std::size_t count = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::size_t> size(count, 0);
  for (auto c : comp) ++size[c];
  // Components are numbered in order of their smallest member, so the first maximum wins the tie.
  auto best = static_cast<std::size_t>(std::max_element(size.begin(), size.end()) - size.begin());
  std::vector<NodeIndex> keep;
  for (NodeIndex i = 0; i < g.node_count(); ++i)
    if (comp[i] == best) keep.push_back(i);
  return induced_subgraph(g, keep);
}

inline Graph remove_isolated(const Graph& g) {
  std::vector<NodeIndex> keep;
  for (NodeIndex i = 0; i < g.node_count(); ++i)
    if (g.degree(i) > 0) keep.push_back(i);
  return induced_subgraph(g, keep);
}

enum class Reduction { full, non_isolated, largest_component };

inline Reduction parse_reduction(std::string_view s) {
  if (s == "full") return Reduction::full;
  if (s == "non-isolated") return Reduction::non_isolated;
  if (s == "largest-component") return Reduction::largest_component;
  throw ValidationError("unknown graph reduction '" + std::string(s) +
                        "' (expected full, non-isolated or largest-component)");
}

inline std::string to_string(Reduction r) {
  switch (r) {
    case Reduction::full:
      return "full";
    case Reduction::non_isolated:
      return "non-isolated";
    case Reduction::largest_component:
      return "largest-component";
  }
  return "unknown";
}

inline Graph reduce(const Graph& g, Reduction r) {
  switch (r) {
    case Reduction::full:
      return g;
    case Reduction::non_isolated:
      return remove_isolated(g);
    case Reduction::largest_component:
      return largest_component(g);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Edge list (src<TAB>dst<TAB>weight) and node table (id,label)

inline std::string write_edge_list(const Graph& g) {
  std::string out;
  for (const auto& e : g.edges()) out += g.id(e.u) + "\t" + g.id(e.v) + "\t" + text::exact(e.weight) + "\n";
  return out;
}

inline std::string write_node_table(const Graph& g) {
  std::string out = "id,label\n";
  for (NodeIndex i = 0; i < g.node_count(); ++i) out += csv::line({g.id(i), g.label(i)});
  return out;
}

// Nodes missing from the node table are created from the edge list.
inline Graph read_graph(std::string_view edge_list, std::optional<std::string_view> node_table = std::nullopt) {
  GraphBuilder b;
  if (node_table) {
    auto rows = csv::parse(*node_table);
    if (rows.empty() || rows[0].fields.size() < 2 || text::lower(rows[0].fields[0]) != "id")
      throw ParseError("node table must start with an 'id,label' header");
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& f = rows[r].fields;
      b.add_node(f.at(0), f.size() > 1 ? f[1] : std::string{});
    }
  }
  std::size_t lineno = 0;
  for (auto& raw : text::split(edge_list, "\n")) {
    ++lineno;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty()) continue;
    auto parts = text::split(line, "\t");
    if (parts.size() < 2 || parts.size() > 3)
      throw ParseError("edge list line " + std::to_string(lineno) + ": expected src<TAB>dst<TAB>weight");
    double w = 1.0;
    if (parts.size() == 3) {
      char* end = nullptr;
      w = std::strtod(parts[2].c_str(), &end);
      if (end == parts[2].c_str() || *end != '\0')
        throw ParseError("edge list line " + std::to_string(lineno) + ": bad weight '" + parts[2] + "'");
    }
    if (!b.has_node(parts[0])) b.add_node(parts[0]);
    if (!b.has_node(parts[1])) b.add_node(parts[1]);
    b.add_edge(parts[0], parts[1], w);
  }
  return b.build();
}

}  // namespace kc
