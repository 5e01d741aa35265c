#pragma once

// End-to-end pipeline: configuration, the individual stages, workspace
// artifacts and the full run.

#include <algorithm>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kc/centrality.hpp"
#include "kc/community.hpp"
#include "kc/coupling.hpp"
#include "kc/coword.hpp"
#include "kc/error.hpp"
#include "kc/graph.hpp"
#include "kc/record.hpp"
#include "kc/report.hpp"
#include "kc/text.hpp"

namespace kc {

struct PipelineConfig {
  std::vector<std::string> inputs;
  std::string format = "scopus-csv";
  std::string reference_delimiter = ";";
  TitleQuery query{{"governance"}, {"security", "risk", "competition", "cooperation"}, false};
  Period years{1998, 2018};
  PeriodSlicing periods{{{1998, 2002}, {2003, 2007}, {2008, 2012}, {2013, 2018}}};
  KeywordOptions keywords;
  Similarity similarity = Similarity::jaccard;
  std::size_t min_shared = 1;
  std::size_t max_postings = 0;
  Reduction reduction = Reduction::non_isolated;
  ThemeOptions themes;
  double min_inclusion = 0.1;
  double resolution = 1.0;
  std::size_t top_clusters = 5;
  double betweenness_fraction = 0.5;
  std::size_t table_k = 5;
  FlowLimits flows;
  EigenOptions eigen;
  std::string workspace = "kc-workspace";
  std::size_t threads = 0;  // 0 = hardware concurrency

  // Checks every parameter range. Does not touch the file system.
  void validate() const {
    parse_format(format);
    if (reference_delimiter.empty()) throw ValidationError("reference_delimiter must not be empty");
    query.validate();
    if (years.start > years.end || years.start < kMinYear || years.end > kMaxYear)
      throw ValidationError("years must be an ordered range within " + std::to_string(kMinYear) + "-" +
                            std::to_string(kMaxYear));
    if (periods.periods.empty()) throw ValidationError("at least one period is required");
    periods.validate();
    if (min_shared < 1) throw ValidationError("coupling.min_shared must be at least 1");
    themes.validate();
    if (!(min_inclusion > 0 && min_inclusion <= 1)) throw ValidationError("evolution.min_inclusion must lie in (0, 1]");
    if (!(resolution > 0)) throw ValidationError("community.resolution must be positive");
    if (top_clusters < 1) throw ValidationError("display.top_clusters must be at least 1");
    if (!(betweenness_fraction > 0 && betweenness_fraction <= 1))
      throw ValidationError("display.betweenness_fraction must lie in (0, 1]");
    if (table_k < 1) throw ValidationError("display.table_k must be at least 1");
    if (flows.top_countries < 1 || flows.top_institutions < 1 || flows.top_topics < 1)
      throw ValidationError("flows limits must be at least 1");
    if (!(eigen.tol > 0)) throw ValidationError("eigen.tol must be positive");
    if (eigen.max_iter < 1) throw ValidationError("eigen.max_iter must be at least 1");
  }
};

inline nlohmann::json to_json(const PipelineConfig& c) {
  nlohmann::json periods = nlohmann::json::array();
  for (const auto& p : c.periods.periods) periods.push_back({p.start, p.end});
  return {
      {"inputs", c.inputs},
      {"format", c.format},
      {"reference_delimiter", c.reference_delimiter},
      {"query", {{"required", c.query.required_terms}, {"any_of", c.query.any_of_terms}, {"stemming", c.query.stemming}}},
      {"years", {c.years.start, c.years.end}},
      {"periods", periods},
      {"keywords", {{"title_unigrams", c.keywords.include_title_unigrams}}},
      {"superposition", {{"similarity", to_string(c.similarity)}}},
      {"coupling", {{"min_shared", c.min_shared}, {"max_postings", c.max_postings}, {"reduction", to_string(c.reduction)}}},
      {"themes", {{"max_theme_size", c.themes.max_theme_size}, {"min_e", c.themes.min_e}}},
      {"evolution", {{"min_inclusion", c.min_inclusion}}},
      {"community", {{"resolution", c.resolution}}},
      {"display",
       {{"top_clusters", c.top_clusters}, {"betweenness_fraction", c.betweenness_fraction}, {"table_k", c.table_k}}},
      {"flows",
       {{"top_countries", c.flows.top_countries},
        {"top_institutions", c.flows.top_institutions},
        {"top_topics", c.flows.top_topics}}},
      {"eigen", {{"tol", c.eigen.tol}, {"max_iter", c.eigen.max_iter}}},
      {"workspace", c.workspace},
      {"threads", c.threads == 0 ? nlohmann::json("auto") : nlohmann::json(c.threads)},
  };
}

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& given, const nlohmann::json& known, const std::string& path) {
  if (!given.is_object() || !known.is_object()) return;
  for (const auto& [k, v] : given.items()) {
    if (!known.contains(k)) throw ValidationError("unknown config key '" + path + k + "'");
    reject_unknown_keys(v, known.at(k), path + k + ".");
  }
}

inline std::size_t parse_threads(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "auto") return 0;
    auto s = j.get<std::string>();
    if (text::all_digits(s)) return std::stoul(s);
    throw ValidationError("threads must be a positive integer or 'auto'");
  }
  auto n = j.get<long long>();
  if (n < 1) throw ValidationError("threads must be a positive integer or 'auto'");
  return static_cast<std::size_t>(n);
}

}  // namespace detail

inline PipelineConfig config_from_json(const nlohmann::json& patch) {
  const PipelineConfig defaults;
  const auto known = to_json(defaults);
  detail::reject_unknown_keys(patch, known, "");
  auto j = known;
  j.merge_patch(patch);
  PipelineConfig c;
  try {
    c.inputs = j.at("inputs").get<std::vector<std::string>>();
    c.format = j.at("format").get<std::string>();
    c.reference_delimiter = j.at("reference_delimiter").get<std::string>();
    c.query.required_terms = j.at("query").at("required").get<std::vector<std::string>>();
    c.query.any_of_terms = j.at("query").at("any_of").get<std::vector<std::string>>();
    c.query.stemming = j.at("query").at("stemming").get<bool>();
    auto years = j.at("years").get<std::vector<int>>();
    if (years.size() != 2) throw ValidationError("years must be [start, end]");
    c.years = {years[0], years[1]};
    c.periods.periods.clear();
    for (const auto& p : j.at("periods")) {
      auto v = p.get<std::vector<int>>();
      if (v.size() != 2) throw ValidationError("each period must be [start, end]");
      c.periods.periods.push_back({v[0], v[1]});
    }
    c.keywords.include_title_unigrams = j.at("keywords").at("title_unigrams").get<bool>();
    c.similarity = parse_similarity(j.at("superposition").at("similarity").get<std::string>());
    c.min_shared = j.at("coupling").at("min_shared").get<std::size_t>();
    c.max_postings = j.at("coupling").at("max_postings").get<std::size_t>();
    c.reduction = parse_reduction(j.at("coupling").at("reduction").get<std::string>());
    c.themes.max_theme_size = j.at("themes").at("max_theme_size").get<std::size_t>();
    c.themes.min_e = j.at("themes").at("min_e").get<double>();
    c.min_inclusion = j.at("evolution").at("min_inclusion").get<double>();
    c.resolution = j.at("community").at("resolution").get<double>();
    c.top_clusters = j.at("display").at("top_clusters").get<std::size_t>();
    c.betweenness_fraction = j.at("display").at("betweenness_fraction").get<double>();
    c.table_k = j.at("display").at("table_k").get<std::size_t>();
    c.flows.top_countries = j.at("flows").at("top_countries").get<std::size_t>();
    c.flows.top_institutions = j.at("flows").at("top_institutions").get<std::size_t>();
    c.flows.top_topics = j.at("flows").at("top_topics").get<std::size_t>();
    c.eigen.tol = j.at("eigen").at("tol").get<double>();
    c.eigen.max_iter = j.at("eigen").at("max_iter").get<std::size_t>();
    c.workspace = j.at("workspace").get<std::string>();
    c.threads = detail::parse_threads(j.at("threads"));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid config value: ") + e.what());
  }
  return c;
}

// "coupling.min_shared=2"; the value is read as JSON when it parses, else as a string.
inline void apply_override(nlohmann::json& patch, std::string_view assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) throw ValidationError("--set expects key=value, got '" + std::string(assignment) + "'");
  std::string key(assignment.substr(0, eq));
  std::string raw(assignment.substr(eq + 1));
  nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  std::string pointer;
  for (auto& part : text::split(key, ".")) pointer += "/" + part;
  patch[nlohmann::json::json_pointer(pointer)] = value;
}

// Reads a config file; relative input paths are resolved against its directory.
inline nlohmann::json load_config_patch(const std::string& path) {
  auto j = nlohmann::json::parse(text::read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ValidationError("config '" + path + "' is not a JSON object");
  if (j.contains("inputs") && j["inputs"].is_array()) {
    auto base = std::filesystem::path(path).parent_path();
    for (auto& in : j["inputs"])
      if (in.is_string() && std::filesystem::path(in.get<std::string>()).is_relative())
        in = (base / in.get<std::string>()).lexically_normal().string();
  }
  return j;
}

// ---------------------------------------------------------------------------
// Stages

// Wraps a stage so that every failure names it.
template <class Fn>
auto run_stage(std::string_view stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    std::string msg = "stage '" + std::string(stage) + "': " + e.what();
    switch (e.kind()) {
      case ErrorKind::io:
        throw IoError(msg);
      case ErrorKind::internal:
        throw InvariantError(msg);
      default:
        throw ValidationError(msg);
    }
  } catch (const std::exception& e) {
    throw InvariantError("stage '" + std::string(stage) + "': " + e.what());
  }
}

struct IngestResult {
  Corpus corpus;
  std::vector<RowError> row_errors;
  std::size_t parsed = 0;
  std::size_t after_dedup = 0;
};

// parse -> dedup -> title filter -> year window
inline IngestResult ingest(const PipelineConfig& cfg) {
  if (cfg.inputs.empty()) throw ValidationError("no input files configured");
  auto format = parse_format(cfg.format);
  IngestResult out;
  std::vector<Corpus> parts;
  std::size_t offset = 0;
  for (const auto& path : cfg.inputs) {
    if (!std::filesystem::exists(path)) throw IoError("input file '" + path + "' does not exist");
    auto content = text::read_file(path);
    ParseOptions opt{cfg.reference_delimiter, path, offset};
    auto res = parse_export(content, format, opt);
    offset += res.corpus.provenance.back().rows;
    out.row_errors.insert(out.row_errors.end(), res.errors.begin(), res.errors.end());
    parts.push_back(std::move(res.corpus));
  }
  auto merged = merge(std::move(parts));
  out.parsed = merged.size();
  auto unique = dedup(merged);
  out.after_dedup = unique.size();
  auto filtered = filter_by_title(unique, cfg.query);
  std::erase_if(filtered.records, [&](const BibRecord& r) { return !cfg.years.contains(r.year); });
  out.corpus = std::move(filtered);
  return out;
}

inline std::vector<SuperpositionStep> superpose_stage(const PipelineConfig& cfg, const Corpus& corpus) {
  auto slices = slice_periods(corpus, cfg.periods);
  return superposition_map(keywords_by_period(slices.slices, cfg.keywords), cfg.similarity);
}

inline std::vector<PeriodThemes> themes_stage(const PipelineConfig& cfg, const Corpus& corpus) {
  std::vector<PeriodThemes> out;
  for (const auto& [period, slice] : slice_periods(corpus, cfg.periods).slices)
    out.push_back({period, detect_themes(cooccurrence(slice, cfg.keywords), cfg.themes)});
  return out;
}

inline EvolutionMap evolve_stage(const PipelineConfig& cfg, const std::vector<PeriodThemes>& themes) {
  return evolution_map(themes, cfg.min_inclusion);
}

struct CouplingResult {
  Graph bcn;       // every document
  Graph analysis;  // after the configured reduction
  std::vector<std::string> warnings;
};

inline CouplingResult couple_stage(const PipelineConfig& cfg, const Corpus& corpus) {
  CouplingResult out;
  out.bcn = build_bcn(corpus, {cfg.min_shared, cfg.max_postings, cfg.threads}, &out.warnings);
  out.analysis = reduce(out.bcn, cfg.reduction);
  return out;
}

inline CentralityReport metrics_stage(const PipelineConfig& cfg, const Graph& g) {
  return centrality_report(g, {cfg.eigen, cfg.threads});
}

inline Partition cluster_stage(const PipelineConfig& cfg, const Graph& g) {
  if (g.empty()) return {};
  return detect_communities(g, {}, {cfg.resolution});
}

struct DisplayResult {
  Graph graph;
  NodeAttributes attrs;
};

// Nodes of the top clusters, then the highest-betweenness fraction of those.
// Betweenness values are the analysis-graph values, not recomputed.
inline DisplayResult display_stage(const PipelineConfig& cfg, const Graph& g, const CentralityReport& metrics,
                                   const Partition& p) {
  DisplayResult out;
  if (g.empty()) return out;
  auto top = top_clusters(p, cfg.top_clusters);
  std::vector<NodeIndex> keep;
  for (NodeIndex i = 0; i < g.node_count(); ++i)
    if (std::find(top.begin(), top.end(), p.cluster[i]) != top.end()) keep.push_back(i);
  auto sub = induced_subgraph(g, keep);
  std::vector<double> bsub;
  for (NodeIndex i = 0; i < sub.node_count(); ++i) bsub.push_back(metrics.betweenness[g.index_of(sub.id(i))]);
  out.graph = sub.empty() ? sub : filter_top_betweenness(sub, bsub, cfg.betweenness_fraction);
  for (NodeIndex i = 0; i < out.graph.node_count(); ++i) {
    auto src = g.index_of(out.graph.id(i));
    out.attrs.cluster.push_back(p.cluster[src]);
    out.attrs.betweenness.push_back(metrics.betweenness[src]);
  }
  return out;
}

inline NodeAttributes full_attributes(const Graph& g, const CentralityReport& metrics, const Partition& p) {
  NodeAttributes a;
  if (g.empty()) return a;
  a.cluster = p.cluster;
  a.betweenness = metrics.betweenness;
  return a;
}

// ---------------------------------------------------------------------------
// Workspace layout

namespace paths {
inline constexpr const char* corpus = "corpus/corpus.json";
inline constexpr const char* superposition = "themes/superposition.csv";
inline constexpr const char* themes = "themes/themes.json";
inline constexpr const char* evolution = "themes/evolution.json";
inline constexpr const char* bcn_stem = "graphs/bcn";
inline constexpr const char* bcn_edges = "graphs/bcn.edges.tsv";
inline constexpr const char* bcn_nodes = "graphs/bcn.nodes.csv";
inline constexpr const char* display_stem = "graphs/display";
inline constexpr const char* summary = "reports/network_summary.csv";
inline constexpr const char* metrics = "reports/metrics.csv";
inline constexpr const char* partition = "reports/partition.csv";
inline constexpr const char* clusters = "reports/clusters.json";
inline constexpr const char* table = "reports/centrality_table.csv";
inline constexpr const char* flows = "reports/flows.csv";
}  // namespace paths

inline Artifact corpus_artifact(const Corpus& c) { return {paths::corpus, dump_json(to_json(c))}; }

inline Artifact superposition_artifact(const std::vector<SuperpositionStep>& s) {
  return {paths::superposition, superposition_csv(s)};
}

inline Artifact themes_artifact(const PipelineConfig& cfg, const std::vector<PeriodThemes>& t) {
  auto j = themes_to_json(t, cfg.themes);
  j["superposition_similarity"] = to_string(cfg.similarity);
  return {paths::themes, dump_json(j)};
}

inline Artifact evolution_artifact(const PipelineConfig& cfg, const EvolutionMap& m) {
  return {paths::evolution, dump_json(to_json(m, cfg.min_inclusion))};
}

inline std::vector<Artifact> coupling_artifacts(const CouplingResult& c) {
  return {{paths::bcn_edges, write_edge_list(c.analysis)},
          {paths::bcn_nodes, write_node_table(c.analysis)},
          {paths::summary, network_summary_csv({{"bcn", &c.bcn}, {"analysis", &c.analysis}})}};
}

inline Artifact metrics_artifact(const CentralityReport& r, const Graph& g) {
  return {paths::metrics, metrics_csv(r, g.labels())};
}

inline std::vector<Artifact> cluster_artifacts(const PipelineConfig& cfg, const Partition& p, const CentralityReport& r,
                                               const Graph& g) {
  return {{paths::partition, partition_csv(p)},
          {paths::clusters, dump_json(clusters_json(p, r.betweenness, g.labels(), cfg.table_k))}};
}

inline std::vector<Artifact> export_artifacts(const PipelineConfig& cfg, const Corpus& corpus, const Graph& g,
                                              const CentralityReport& r, const Partition& p) {
  std::vector<Artifact> out;
  for (auto& a : graph_artifacts(g, full_attributes(g, r, p), paths::bcn_stem))
    if (a.path == std::string(paths::bcn_stem) + ".gexf") out.push_back(std::move(a));
  auto display = display_stage(cfg, g, r, p);
  for (auto& a : graph_artifacts(display.graph, display.attrs, paths::display_stem)) out.push_back(std::move(a));
  out.push_back({paths::table, centrality_table_csv(centrality_table(r, p, g.labels(), cfg.table_k, cfg.top_clusters))});
  out.push_back({paths::flows, flows_csv(affiliation_topic_flows(corpus, cfg.flows))});
  return out;
}

// Loading stage outputs back from a workspace.
inline std::string read_artifact(const std::filesystem::path& ws, const char* rel, std::string_view stage,
                                 std::string_view producer) {
  auto p = ws / rel;
  if (!std::filesystem::exists(p))
    throw IoError("stage '" + std::string(stage) + "' needs " + rel + "; run '" + std::string(producer) + "' first");
  return text::read_file(p.string());
}

inline Corpus load_corpus(const std::filesystem::path& ws, std::string_view stage) {
  auto j = nlohmann::json::parse(read_artifact(ws, paths::corpus, stage, "ingest"), nullptr, false);
  if (j.is_discarded()) throw ParseError(std::string(paths::corpus) + " is not valid JSON");
  return corpus_from_json(j);
}

inline std::vector<PeriodThemes> load_themes(const std::filesystem::path& ws, std::string_view stage) {
  auto j = nlohmann::json::parse(read_artifact(ws, paths::themes, stage, "themes"), nullptr, false);
  if (j.is_discarded()) throw ParseError(std::string(paths::themes) + " is not valid JSON");
  return themes_from_json(j);
}

inline Graph load_analysis_graph(const std::filesystem::path& ws, std::string_view stage) {
  auto edges = read_artifact(ws, paths::bcn_edges, stage, "couple");
  auto nodes = read_artifact(ws, paths::bcn_nodes, stage, "couple");
  return read_graph(edges, nodes);
}

inline CentralityReport load_metrics(const std::filesystem::path& ws, const Graph& g, std::string_view stage) {
  auto r = metrics_from_csv(read_artifact(ws, paths::metrics, stage, "metrics"));
  if (r.ids != g.ids()) throw ValidationError(std::string(paths::metrics) + " does not match the analysis graph");
  r.links = g.edge_count();
  if (g.node_count() >= 1) r.mean_degree = mean_degree(g);
  if (g.node_count() >= 2) r.density = density(g);
  return r;
}

inline Partition load_partition(const PipelineConfig& cfg, const std::filesystem::path& ws, const Graph& g,
                                std::string_view stage) {
  auto doc = read_artifact(ws, paths::partition, stage, "cluster");
  if (g.empty()) return {};
  return partition_from_csv(doc, g, cfg.resolution);
}

// ---------------------------------------------------------------------------
// Full run

struct RunReport {
  Manifest manifest;
  IngestResult ingest;
  NetworkSummary bcn_summary;
  NetworkSummary analysis_summary;
  std::vector<std::string> warnings;
};

// Every stage in order, all artifacts in memory, then the bundle. The manifest is
// only written when every stage and every file succeeded.
inline RunReport run(const PipelineConfig& cfg, const std::filesystem::path& workspace,
                     const std::function<void(std::string_view)>& log = {}) {
  auto note = [&](std::string_view msg) {
    if (log) log(msg);
  };
  cfg.validate();
  remove_manifest(workspace);
  RunReport rep;
  std::vector<Artifact> artifacts;

  rep.ingest = run_stage("ingest", [&] { return ingest(cfg); });
  const auto& corpus = rep.ingest.corpus;
  note("ingest: " + std::to_string(corpus.size()) + " records");
  artifacts.push_back(corpus_artifact(corpus));

  auto steps = run_stage("superpose", [&] { return superpose_stage(cfg, corpus); });
  artifacts.push_back(superposition_artifact(steps));
  auto themes = run_stage("themes", [&] { return themes_stage(cfg, corpus); });
  artifacts.push_back(themes_artifact(cfg, themes));
  auto evo = run_stage("evolve", [&] { return evolve_stage(cfg, themes); });
  artifacts.push_back(evolution_artifact(cfg, evo));
  note("co-word: " + std::to_string(evo.links.size()) + " evolution links");

  auto coupling = run_stage("couple", [&] { return couple_stage(cfg, corpus); });
  rep.bcn_summary = network_summary(coupling.bcn);
  rep.analysis_summary = network_summary(coupling.analysis);
  rep.warnings = coupling.warnings;
  for (auto& a : coupling_artifacts(coupling)) artifacts.push_back(std::move(a));
  note("couple: " + rep.bcn_summary.line());

  const auto& g = coupling.analysis;
  auto metrics = run_stage("metrics", [&] { return metrics_stage(cfg, g); });
  artifacts.push_back(metrics_artifact(metrics, g));
  auto partition = run_stage("cluster", [&] { return cluster_stage(cfg, g); });
  for (auto& a : cluster_artifacts(cfg, partition, metrics, g)) artifacts.push_back(std::move(a));
  note("cluster: " + std::to_string(partition.cluster_count()) + " clusters");
  auto exports = run_stage("export", [&] { return export_artifacts(cfg, corpus, g, metrics, partition); });
  for (auto& a : exports) artifacts.push_back(std::move(a));

  rep.manifest = run_stage("export", [&] { return write_report_bundle(artifacts, workspace); });
  return rep;
}

}  // namespace kc
