#pragma once

// Small named graphs and corpus builders shared by the test suites.

#include <string>
#include <utility>
#include <vector>

#include "kc/graph.hpp"
#include "kc/record.hpp"

namespace fx {

inline kc::Graph graph(const std::vector<std::string>& nodes, const std::vector<std::pair<std::string, std::string>>& edges) {
  kc::GraphBuilder b;
  for (const auto& n : nodes) b.add_node(n);
  for (const auto& [u, v] : edges) b.add_edge(u, v);
  return b.build();
}

inline kc::Graph k3() { return graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}}); }
inline kc::Graph p3() { return graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}); }
// center "c", leaves l1..l3
inline kc::Graph star() { return graph({"c", "l1", "l2", "l3"}, {{"c", "l1"}, {"c", "l2"}, {"c", "l3"}}); }
inline kc::Graph k4() {
  return graph({"a", "b", "c", "d"}, {{"a", "b"}, {"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}, {"c", "d"}});
}
// {1,2,3} and {4,5,6} with bridge 3-4
inline kc::Graph two_triangles() {
  return graph({"1", "2", "3", "4", "5", "6"},
               {{"1", "2"}, {"2", "3"}, {"1", "3"}, {"4", "5"}, {"5", "6"}, {"4", "6"}, {"3", "4"}});
}
// Nodes 0..9 and 10..19 as cliques, bridge 9-10.
inline kc::Graph two_cliques(int size = 10) {
  kc::GraphBuilder b;
  for (int i = 0; i < 2 * size; ++i) b.add_node(std::to_string(i));
  for (int block = 0; block < 2; ++block)
    for (int i = 0; i < size; ++i)
      for (int j = i + 1; j < size; ++j) b.add_edge(std::to_string(block * size + i), std::to_string(block * size + j));
  b.add_edge(std::to_string(size - 1), std::to_string(size));
  return b.build();
}

inline kc::BibRecord record(std::string id, int year, std::vector<std::string> refs = {},
                            std::vector<std::string> keywords = {}, std::string title = "Governance and risk") {
  kc::BibRecord r;
  r.id = std::move(id);
  r.title = std::move(title);
  r.year = year;
  r.references = std::move(refs);
  r.keywords = std::move(keywords);
  r.authors = {"Doe J."};
  r.source = "Journal";
  return r;
}

inline kc::Corpus corpus(std::vector<kc::BibRecord> recs) {
  kc::Corpus c;
  c.records = std::move(recs);
  kc::sort_by_id(c.records);
  return c;
}

}  // namespace fx
