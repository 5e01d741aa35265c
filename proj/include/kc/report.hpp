#pragma once

// Reporting artifacts: affiliation/topic flows, per-cluster centrality tables,
// graph exports (GEXF 1.2 plus edge list / node table) and the digest manifest.

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "kc/centrality.hpp"
#include "kc/community.hpp"
#include "kc/csv.hpp"
#include "kc/error.hpp"
#include "kc/graph.hpp"
#include "kc/record.hpp"
#include "kc/text.hpp"

namespace kc {

// ---------------------------------------------------------------------------
// Country / institution / topic flows

struct FlowTriple {
  std::string country;
  std::string institution;
  std::string topic;
  std::size_t weight = 0;

  bool operator==(const FlowTriple&) const = default;
};

struct FlowLimits {
  std::size_t top_countries = 10;
  std::size_t top_institutions = 10;
  std::size_t top_topics = 10;
};

namespace detail {

template <class Key>
std::set<Key> top_by_weight(const std::map<Key, std::size_t>& totals, std::size_t n) {
  std::vector<std::pair<Key, std::size_t>> v(totals.begin(), totals.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::set<Key> out;
  for (std::size_t i = 0; i < v.size() && i < n; ++i) out.insert(v[i].first);
  return out;
}

}  // namespace detail

// Every (country, institution, keyword) combination counts once per article.
// Only the top-N countries, institutions and topics by total weight are kept.
inline std::vector<FlowTriple> affiliation_topic_flows(const Corpus& corpus, const FlowLimits& lim = {}) {
  if (lim.top_countries < 1 || lim.top_institutions < 1 || lim.top_topics < 1)
    throw ValidationError("flow limits must be at least 1");
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> counts;
  for (const auto& rec : corpus.records) {
    std::set<std::pair<std::string, std::string>> places;
    for (const auto& a : rec.affiliations)
      if (!a.country.empty() && !a.institution.empty()) places.insert({a.country, a.institution});
    std::set<std::string> topics(rec.keywords.begin(), rec.keywords.end());
    for (const auto& [country, inst] : places)
      for (const auto& t : topics) ++counts[{country, inst, t}];
  }
  std::map<std::string, std::size_t> by_country, by_inst, by_topic;
  for (const auto& [k, w] : counts) {
    by_country[std::get<0>(k)] += w;
    by_inst[std::get<1>(k)] += w;
    by_topic[std::get<2>(k)] += w;
  }
  auto countries = detail::top_by_weight(by_country, lim.top_countries);
  auto insts = detail::top_by_weight(by_inst, lim.top_institutions);
  auto topics = detail::top_by_weight(by_topic, lim.top_topics);

  std::vector<FlowTriple> out;
  for (const auto& [k, w] : counts) {
    const auto& [c, i, t] = k;
    if (countries.count(c) && insts.count(i) && topics.count(t)) out.push_back({c, i, t, w});
  }
  std::stable_sort(out.begin(), out.end(), [](const FlowTriple& a, const FlowTriple& b) { return a.weight > b.weight; });
  return out;
}

inline std::string flows_csv(const std::vector<FlowTriple>& flows) {
  std::string out = "country,institution,topic,weight\n";
  for (const auto& f : flows) out += csv::line({f.country, f.institution, f.topic, std::to_string(f.weight)});
  return out;
}

struct CountryShare {
  std::string country;
  std::size_t articles = 0;
  double percent = 0;
};

// Share of articles with at least one affiliation in each country. An article
// with several countries counts for each, so shares can sum past 100.
inline std::vector<CountryShare> country_shares(const Corpus& corpus) {
  std::map<std::string, std::size_t> counts;
  for (const auto& rec : corpus.records) {
    std::set<std::string> cs;
    for (const auto& a : rec.affiliations)
      if (!a.country.empty()) cs.insert(a.country);
    for (const auto& c : cs) ++counts[c];
  }
  std::vector<CountryShare> out;
  for (const auto& [c, n] : counts)
    out.push_back({c, n, corpus.empty() ? 0.0 : 100.0 * static_cast<double>(n) / static_cast<double>(corpus.size())});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.articles > b.articles; });
  return out;
}

// ---------------------------------------------------------------------------
// Centrality report I/O

inline std::string metrics_csv(const CentralityReport& r, const std::vector<std::string>& labels) {
  std::string out = "id,label,degree,closeness,betweenness,eigencentrality\n";
  for (std::size_t i = 0; i < r.ids.size(); ++i)
    out += csv::line({r.ids[i], i < labels.size() ? labels[i] : std::string{}, std::to_string(r.degree[i]),
                      text::exact(r.closeness[i]), text::exact(r.betweenness[i]), text::exact(r.eigencentrality[i])});
  return out;
}

// Reads per-node values back; global fields are recomputed by the caller from the graph.
inline CentralityReport metrics_from_csv(std::string_view doc) {
  auto rows = csv::parse(doc);
  if (rows.empty() || rows[0].fields.size() != 6 || rows[0].fields[0] != "id")
    throw ParseError("metrics table must start with 'id,label,degree,closeness,betweenness,eigencentrality'");
  CentralityReport r;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& f = rows[k].fields;
    if (f.size() != 6) throw ParseError("metrics table line " + std::to_string(rows[k].line) + ": expected 6 fields");
    try {
      r.ids.push_back(f[0]);
      r.degree.push_back(std::stoul(f[2]));
      r.closeness.push_back(std::stod(f[3]));
      r.betweenness.push_back(std::stod(f[4]));
      r.eigencentrality.push_back(std::stod(f[5]));
    } catch (const std::logic_error&) {
      throw ParseError("metrics table line " + std::to_string(rows[k].line) + ": bad number");
    }
  }
  r.nodes = r.ids.size();
  return r;
}

// Network summaries at the printed precision: one decimal, truncated.
inline std::string network_summary_csv(const std::vector<std::pair<std::string, Graph const*>>& graphs) {
  std::string out = "graph,articles,links,mean_degree,density,isolated\n";
  for (const auto& [name, g] : graphs) {
    std::size_t isolated = 0;
    for (NodeIndex i = 0; i < g->node_count(); ++i) isolated += g->degree(i) == 0;
    out += csv::line({name, std::to_string(g->node_count()), std::to_string(g->edge_count()),
                      g->node_count() >= 1 ? text::truncated(mean_degree(*g), 1) : "NA",
                      g->node_count() >= 2 ? text::truncated(density(*g), 1) : "NA", std::to_string(isolated)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Partition I/O

inline std::string partition_csv(const Partition& p) {
  std::string out = "node_id,cluster,percent_of_network\n";
  const double n = static_cast<double>(p.node_count());
  for (std::size_t i = 0; i < p.node_count(); ++i) {
    double pct = static_cast<double>(p.size_of(p.cluster[i])) / n * 100.0;
    out += csv::line({p.node_ids[i], std::to_string(p.cluster[i]), text::fixed(pct, 4)});
  }
  return out;
}

inline Partition partition_from_csv(std::string_view doc, const Graph& g, double resolution = 1.0) {
  auto rows = csv::parse(doc);
  if (rows.empty() || rows[0].fields.empty() || rows[0].fields[0] != "node_id")
    throw ParseError("partition table must start with 'node_id,cluster,percent_of_network'");
  std::vector<std::size_t> raw(g.node_count(), 0);
  std::vector<char> seen(g.node_count(), 0);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& f = rows[k].fields;
    if (f.size() < 2) throw ParseError("partition table line " + std::to_string(rows[k].line) + ": too few fields");
    auto i = g.index_of(f[0]);
    raw[i] = std::stoul(f[1]);
    seen[i] = 1;
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw ValidationError("partition table does not cover every graph node");
  return make_partition(g, raw, resolution);
}

// Display colors; the first five follow the published cluster colors.
inline std::string cluster_color(std::size_t cluster) {
  static const std::array<const char*, 5> names = {"green", "blue", "pink", "black", "orange"};
  return cluster >= 1 && cluster <= names.size() ? names[cluster - 1] : "grey";
}

inline std::array<int, 3> color_rgb(std::string_view name) {
  if (name == "green") return {46, 160, 67};
  if (name == "blue") return {31, 119, 180};
  if (name == "pink") return {227, 119, 194};
  if (name == "black") return {0, 0, 0};
  if (name == "orange") return {255, 127, 14};
  return {153, 153, 153};
}

// Cluster summary: size, share and the top members by betweenness.
inline nlohmann::json clusters_json(const Partition& p, const std::vector<double>& betweenness,
                                    const std::vector<std::string>& labels, std::size_t top_members) {
  nlohmann::json arr = nlohmann::json::array();
  if (p.node_count() == 0) return {{"modularity", 0.0}, {"clusters", arr}};
  for (const auto& share : composition(p)) {
    std::vector<NodeIndex> members;
    for (NodeIndex i = 0; i < p.node_count(); ++i)
      if (p.cluster[i] == share.cluster) members.push_back(i);
    std::stable_sort(members.begin(), members.end(),
                     [&](NodeIndex a, NodeIndex b) { return betweenness[a] > betweenness[b]; });
    nlohmann::json top = nlohmann::json::array();
    for (std::size_t k = 0; k < members.size() && k < top_members; ++k)
      top.push_back({{"id", p.node_ids[members[k]]}, {"label", labels.at(members[k])}, {"betweenness", betweenness[members[k]]}});
    arr.push_back({{"cluster", share.cluster},
                   {"size", share.size},
                   {"percent", share.percent},
                   {"percent_rounded", share.rounded},
                   {"color", cluster_color(share.cluster)},
                   {"top_members", top}});
  }
  return {{"modularity", p.modularity}, {"clusters", arr}};
}

// ---------------------------------------------------------------------------
// Centrality table

struct CentralityRow {
  std::size_t cluster = 0;
  std::string id;
  std::string label;
  std::size_t degree = 0;
  double closeness = 0;
  double betweenness = 0;
  double eigencentrality = 0;
};

using CentralityTable = std::vector<CentralityRow>;

// For each of the `clusters` largest clusters, its k nodes of highest betweenness
// (ties to the smaller node id). Values are copied from the report unchanged.
inline CentralityTable centrality_table(const CentralityReport& report, const Partition& p,
                                        const std::vector<std::string>& labels, std::size_t k,
                                        std::size_t clusters = 5) {
  if (k < 1) throw ValidationError("centrality table needs k >= 1");
  if (report.ids != p.node_ids) throw ValidationError("centrality report and partition cover different nodes");
  CentralityTable table;
  if (p.node_count() == 0) return table;
  for (auto c : top_clusters(p, clusters)) {
    std::vector<NodeIndex> members;
    for (NodeIndex i = 0; i < p.node_count(); ++i)
      if (p.cluster[i] == c) members.push_back(i);
    std::stable_sort(members.begin(), members.end(),
                     [&](NodeIndex a, NodeIndex b) { return report.betweenness[a] > report.betweenness[b]; });
    for (std::size_t r = 0; r < members.size() && r < k; ++r) {
      auto i = members[r];
      table.push_back({c, report.ids[i], labels.at(i), report.degree[i], report.closeness[i], report.betweenness[i],
                       report.eigencentrality[i]});
    }
  }
  return table;
}

// Label is always quoted: 2,438,"elshandidy t. 2015. corp gov: int rev",733,0.749,0.010,0.885
inline std::string centrality_row_csv(const CentralityRow& r) {
  return std::to_string(r.cluster) + "," + csv::field(r.id) + "," + csv::quote(r.label) + "," +
         std::to_string(r.degree) + "," + text::fixed(r.closeness, 3) + "," + text::fixed(r.betweenness, 3) + "," +
         text::fixed(r.eigencentrality, 3) + "\n";
}

inline std::string centrality_table_csv(const CentralityTable& table) {
  std::string out = "cluster,id,label,degree,closeness,betweenness,eigencentrality\n";
  for (const auto& r : table) out += centrality_row_csv(r);
  return out;
}

// ---------------------------------------------------------------------------
// GEXF

struct NodeAttributes {
  std::vector<std::size_t> cluster;  // per graph node
  std::vector<double> betweenness;   // per graph node
};

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        // XML 1.0 forbids most control characters.
        if (static_cast<unsigned char>(c) < 0x20 && c != '\t' && c != '\n' && c != '\r')
          out += ' ';
        else
          out.push_back(c);
    }
  }
  return out;
}

}  // namespace detail

inline std::string export_gexf(const Graph& g, const NodeAttributes& attrs) {
  if (attrs.cluster.size() != g.node_count() || attrs.betweenness.size() != g.node_count())
    throw ValidationError("node attributes must cover cluster and betweenness for every node");
  using detail::xml_escape;
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out +=
      "<gexf xmlns=\"http://www.gexf.net/1.2draft\" xmlns:viz=\"http://www.gexf.net/1.2draft/viz\" "
      "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
      "xsi:schemaLocation=\"http://www.gexf.net/1.2draft http://www.gexf.net/1.2draft/gexf.xsd\" version=\"1.2\">\n";
  out += "  <meta>\n    <creator>kc</creator>\n    <description>bibliographic coupling network</description>\n  </meta>\n";
  out += "  <graph mode=\"static\" defaultedgetype=\"undirected\">\n";
  out += "    <attributes class=\"node\">\n";
  out += "      <attribute id=\"0\" title=\"cluster\" type=\"integer\"/>\n";
  out += "      <attribute id=\"1\" title=\"betweenness\" type=\"double\"/>\n";
  out += "      <attribute id=\"2\" title=\"color\" type=\"string\"/>\n";
  out += "    </attributes>\n";
  out += "    <nodes>\n";
  for (NodeIndex i = 0; i < g.node_count(); ++i) {
    auto color = cluster_color(attrs.cluster[i]);
    auto rgb = color_rgb(color);
    out += "      <node id=\"" + xml_escape(g.id(i)) + "\" label=\"" + xml_escape(g.label(i)) + "\">\n";
    out += "        <attvalues>\n";
    out += "          <attvalue for=\"0\" value=\"" + std::to_string(attrs.cluster[i]) + "\"/>\n";
    out += "          <attvalue for=\"1\" value=\"" + text::exact(attrs.betweenness[i]) + "\"/>\n";
    out += "          <attvalue for=\"2\" value=\"" + color + "\"/>\n";
    out += "        </attvalues>\n";
    out += "        <viz:color r=\"" + std::to_string(rgb[0]) + "\" g=\"" + std::to_string(rgb[1]) + "\" b=\"" +
           std::to_string(rgb[2]) + "\"/>\n";
    out += "      </node>\n";
  }
  out += "    </nodes>\n";
  out += "    <edges>\n";
  std::size_t eid = 0;
  for (const auto& e : g.edges())
    out += "      <edge id=\"" + std::to_string(eid++) + "\" source=\"" + xml_escape(g.id(e.u)) + "\" target=\"" +
           xml_escape(g.id(e.v)) + "\" weight=\"" + text::exact(e.weight) + "\"/>\n";
  out += "    </edges>\n";
  out += "  </graph>\n";
  out += "</gexf>\n";
  return out;
}

// ---------------------------------------------------------------------------
// Files and the manifest

inline std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw InvariantError("SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

struct Artifact {
  std::string path;  // relative to the workspace
  std::string content;
};

struct ManifestEntry {
  std::string file;
  std::size_t bytes = 0;
  std::string digest;

  bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
  std::vector<ManifestEntry> entries;  // sorted by file

  bool operator==(const Manifest&) const = default;
};

inline nlohmann::json to_json(const Manifest& m) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& e : m.entries) files.push_back({{"file", e.file}, {"bytes", e.bytes}, {"digest", e.digest}});
  return {{"digest_algorithm", "sha256"}, {"files", files}};
}

inline Manifest manifest_from_json(const nlohmann::json& j) {
  Manifest m;
  for (const auto& f : j.at("files"))
    m.entries.push_back({f.at("file").get<std::string>(), f.at("bytes").get<std::size_t>(), f.at("digest").get<std::string>()});
  return m;
}

inline constexpr const char* kManifestFile = "manifest.json";

inline std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline void write_artifact(const std::filesystem::path& workspace, const Artifact& a) {
  auto target = workspace / a.path;
  try {
    std::filesystem::create_directories(target.parent_path());
    text::write_file(target.string(), a.content);
  } catch (const std::exception& e) {
    throw IoError("failed to write artifact '" + a.path + "': " + e.what());
  }
}

inline void remove_manifest(const std::filesystem::path& workspace) {
  std::error_code ec;
  std::filesystem::remove(workspace / kManifestFile, ec);
}

// Writes every artifact, then the manifest. Any failure leaves no manifest behind.
inline Manifest write_report_bundle(const std::vector<Artifact>& artifacts, const std::filesystem::path& workspace) {
  try {
    std::filesystem::create_directories(workspace);
  } catch (const std::exception& e) {
    throw IoError("cannot create workspace '" + workspace.string() + "': " + e.what());
  }
  remove_manifest(workspace);
  Manifest m;
  for (const auto& a : artifacts) {
    write_artifact(workspace, a);
    m.entries.push_back({a.path, a.content.size(), sha256_hex(a.content)});
  }
  std::sort(m.entries.begin(), m.entries.end(), [](const auto& a, const auto& b) { return a.file < b.file; });
  write_artifact(workspace, {kManifestFile, dump_json(to_json(m))});
  return m;
}

// <stem>.gexf, <stem>.edges.tsv and <stem>.nodes.csv
inline std::vector<Artifact> graph_artifacts(const Graph& g, const NodeAttributes& attrs, const std::string& stem) {
  return {{stem + ".gexf", export_gexf(g, attrs)},
          {stem + ".edges.tsv", write_edge_list(g)},
          {stem + ".nodes.csv", write_node_table(g)}};
}

inline void export_graph(const Graph& g, const NodeAttributes& attrs, const std::filesystem::path& dir,
                         const std::string& stem) {
  for (const auto& a : graph_artifacts(g, attrs, stem)) write_artifact(dir, a);
}

// True when every manifest entry matches the file on disk.
inline bool verify_manifest(const std::filesystem::path& workspace) {
  auto path = workspace / kManifestFile;
  if (!std::filesystem::exists(path)) return false;
  auto m = manifest_from_json(nlohmann::json::parse(text::read_file(path.string())));
  for (const auto& e : m.entries) {
    auto f = workspace / e.file;
    if (!std::filesystem::exists(f)) return false;
    auto content = text::read_file(f.string());
    if (content.size() != e.bytes || sha256_hex(content) != e.digest) return false;
  }
  return true;
}

}  // namespace kc
