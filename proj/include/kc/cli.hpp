#pragma once

// Command-line front end. Kept in a header so tests can drive it in-process.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kc/pipeline.hpp"

namespace kc::cli {

struct GlobalOptions {
  std::string config_path;
  std::string workspace;
  std::optional<std::size_t> threads;
  std::vector<std::string> overrides;
  bool verbose = false;
};

// Precedence for the workspace: flag, KC_WORKSPACE, config file, built-in default.
inline PipelineConfig resolve_config(const GlobalOptions& g) {
  nlohmann::json patch = nlohmann::json::object();
  if (!g.config_path.empty()) {
    if (!std::filesystem::exists(g.config_path)) throw IoError("config file '" + g.config_path + "' does not exist");
    patch = load_config_patch(g.config_path);
  }
  for (const auto& s : g.overrides) apply_override(patch, s);
  auto cfg = config_from_json(patch);
  if (!g.workspace.empty()) {
    cfg.workspace = g.workspace;
  } else if (const char* env = std::getenv("KC_WORKSPACE"); env && *env) {
    cfg.workspace = env;
  }
  if (g.threads) {
    if (*g.threads < 1) throw ValidationError("--threads must be at least 1");
    cfg.threads = *g.threads;
  }
  cfg.validate();
  return cfg;
}

inline void write_stage(const std::filesystem::path& ws, const std::vector<Artifact>& artifacts) {
  remove_manifest(ws);
  for (const auto& a : artifacts) write_artifact(ws, a);
}

inline int main(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Keyword co-word and bibliographic coupling analysis"};
  app.name("kc");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::size_t threads = 0;
  app.add_option("--config", g.config_path, "JSON configuration file");
  app.add_option("--workspace", g.workspace, "Output directory");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (default: all cores)");
  app.add_option("--set", g.overrides, "Override a config value, e.g. coupling.min_shared=2");
  app.add_flag("-v,--verbose", g.verbose, "Stage timings and row diagnostics");

  auto* ingest = app.add_subcommand("ingest", "Parse, deduplicate and filter the input exports");
  auto* superpose = app.add_subcommand("superpose", "Keyword superposition between periods");
  auto* themes = app.add_subcommand("themes", "Co-word themes per period");
  auto* evolve = app.add_subcommand("evolve", "Theme evolution links between periods");
  auto* couple = app.add_subcommand("couple", "Build the bibliographic coupling network");
  auto* metrics = app.add_subcommand("metrics", "Node centralities of the analysis graph");
  std::string edges_path, nodes_path;
  metrics->add_option("--edges", edges_path, "Edge list to use instead of the workspace graph");
  metrics->add_option("--nodes", nodes_path, "Node table for --edges");
  auto* cluster = app.add_subcommand("cluster", "Modularity clustering of the analysis graph");
  auto* exporter = app.add_subcommand("export", "GEXF files, centrality table and flows");
  auto* all = app.add_subcommand("all", "Every stage followed by the manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  if (threads_opt->count()) g.threads = threads;

  auto log = [&](std::string_view msg) {
    if (g.verbose) err << "kc: " << msg << "\n";
  };
  auto timed = [&](std::string_view name, auto&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    log(std::string(name) + " took " + text::fixed(ms, 1) + " ms");
  };

  try {
    auto cfg = resolve_config(g);
    const std::filesystem::path ws = cfg.workspace;
    auto report_rows = [&](const IngestResult& r) {
      for (const auto& e : r.row_errors)
        if (g.verbose) err << "kc: " << e.source << ":" << e.line << ": " << e.message << "\n";
      if (!r.row_errors.empty()) err << "kc: warning: " << r.row_errors.size() << " rows skipped\n";
      out << "records: " << r.corpus.size() << " (parsed " << r.parsed << ", unique " << r.after_dedup << ")\n";
    };

    if (*all) {
      timed("all", [&] {
        auto rep = run(cfg, ws, log);
        report_rows(rep.ingest);
        for (const auto& w : rep.warnings) err << "kc: warning: " << w << "\n";
        out << "bcn: " << rep.bcn_summary.line() << "\n";
        out << "analysis: " << rep.analysis_summary.line() << "\n";
        out << "manifest: " << rep.manifest.entries.size() << " files\n";
      });
    } else if (*ingest) {
      timed("ingest", [&] {
        auto r = run_stage("ingest", [&] { return kc::ingest(cfg); });
        write_stage(ws, {corpus_artifact(r.corpus)});
        report_rows(r);
      });
    } else if (*superpose) {
      timed("superpose", [&] {
        auto corpus = run_stage("superpose", [&] { return load_corpus(ws, "superpose"); });
        auto steps = run_stage("superpose", [&] { return superpose_stage(cfg, corpus); });
        write_stage(ws, {superposition_artifact(steps)});
        out << superposition_csv(steps);
      });
    } else if (*themes) {
      timed("themes", [&] {
        auto corpus = run_stage("themes", [&] { return load_corpus(ws, "themes"); });
        auto t = run_stage("themes", [&] { return themes_stage(cfg, corpus); });
        write_stage(ws, {themes_artifact(cfg, t)});
        for (const auto& pt : t) out << pt.period.label() << ": " << pt.themes.size() << " themes\n";
      });
    } else if (*evolve) {
      timed("evolve", [&] {
        auto t = run_stage("evolve", [&] { return load_themes(ws, "evolve"); });
        auto m = run_stage("evolve", [&] { return evolve_stage(cfg, t); });
        write_stage(ws, {evolution_artifact(cfg, m)});
        out << "links: " << m.links.size() << "\n";
      });
    } else if (*couple) {
      timed("couple", [&] {
        auto corpus = run_stage("couple", [&] { return load_corpus(ws, "couple"); });
        auto c = run_stage("couple", [&] { return couple_stage(cfg, corpus); });
        write_stage(ws, coupling_artifacts(c));
        for (const auto& w : c.warnings) err << "kc: warning: " << w << "\n";
        out << network_summary(c.bcn).line() << "\n";
      });
    } else if (*metrics) {
      timed("metrics", [&] {
        Graph graph = run_stage("metrics", [&] {
          if (edges_path.empty()) {
            if (!nodes_path.empty()) throw ValidationError("--nodes requires --edges");
            return load_analysis_graph(ws, "metrics");
          }
          if (!std::filesystem::exists(edges_path)) throw IoError("edge list '" + edges_path + "' does not exist");
          auto edges = text::read_file(edges_path);
          if (nodes_path.empty()) return read_graph(edges);
          auto nodes = text::read_file(nodes_path);
          return read_graph(edges, std::string_view(nodes));
        });
        auto r = run_stage("metrics", [&] { return metrics_stage(cfg, graph); });
        write_stage(ws, {metrics_artifact(r, graph)});
        out << network_summary(graph).line() << "\n";
      });
    } else if (*cluster) {
      timed("cluster", [&] {
        auto graph = run_stage("cluster", [&] { return load_analysis_graph(ws, "cluster"); });
        auto r = run_stage("cluster", [&] { return load_metrics(ws, graph, "cluster"); });
        auto p = run_stage("cluster", [&] { return cluster_stage(cfg, graph); });
        write_stage(ws, cluster_artifacts(cfg, p, r, graph));
        out << "clusters: " << p.cluster_count() << " modularity=" << text::fixed(p.modularity, 4) << "\n";
      });
    } else if (*exporter) {
      timed("export", [&] {
        auto corpus = run_stage("export", [&] { return load_corpus(ws, "export"); });
        auto graph = run_stage("export", [&] { return load_analysis_graph(ws, "export"); });
        auto r = run_stage("export", [&] { return load_metrics(ws, graph, "export"); });
        auto p = run_stage("export", [&] { return load_partition(cfg, ws, graph, "export"); });
        auto artifacts = run_stage("export", [&] { return export_artifacts(cfg, corpus, graph, r, p); });
        write_stage(ws, artifacts);
        out << "exported: " << artifacts.size() << " files\n";
      });
    }
  } catch (const Error& e) {
    err << "kc: error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "kc: internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace kc::cli
