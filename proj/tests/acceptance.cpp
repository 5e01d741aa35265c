// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "kc/kc.hpp"
#include "oracle.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Check {
  Outcome out;
  void expect(bool cond, const std::string& what) {
    if (!cond && out.ok) {
      out.ok = false;
      out.detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int d = 3) { return kc::text::fixed(v, d); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

oracle::Dense dense_of(const kc::Graph& g) {
  auto w = oracle::weights(g);
  oracle::Dense d{static_cast<int>(g.node_count()), {}};
  d.adj.assign(d.n, std::vector<int>(d.n, 0));
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) d.adj[i][j] = w[i][j] != 0 ? 1 : 0;
  return d;
}

Outcome network_scalars() {
  Check c;
  double md = kc::mean_degree(529, 92308);
  double dens = kc::density(529, 92308);
  c.expect(std::abs(md - 348.99) <= 0.01, "mean degree " + fmt(md, 4));
  c.expect(std::abs(dens - 0.6610) <= 0.0005, "density " + fmt(dens, 5));
  c.expect(kc::text::truncated(md, 1) == "348.9", "truncated mean degree " + kc::text::truncated(md, 1));
  c.expect(kc::text::truncated(dens, 1) == "0.6", "truncated density " + kc::text::truncated(dens, 1));
  if (c.out.ok) c.out.detail = "mean degree " + fmt(md, 4) + ", density " + fmt(dens, 4);
  return c.out;
}

Outcome centralities() {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  std::vector<kc::Graph> graphs{fx::k3(), fx::p3(), fx::star(), fx::k4(), fx::two_triangles()};
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    int n = 4 + static_cast<int>(rng() % 5);
    graphs.push_back(oracle::to_graph(oracle::random_dense(rng, n, 0.15 + 0.1 * (t % 7))));
  }
  double worst = 0;
  for (const auto& g : graphs) {
    auto d = dense_of(g);
    auto rep = kc::centrality_report(g);
    auto deg = oracle::degree(d);
    auto clo = oracle::closeness(d);
    auto bet = oracle::betweenness(d);
    auto eig = oracle::eigenvector(d, 1e-12);
    for (int i = 0; i < d.n; ++i) {
      for (double diff : {std::abs(static_cast<double>(rep.degree[i]) - deg[i]), std::abs(rep.closeness[i] - clo[i]),
                          std::abs(rep.betweenness[i] - bet[i]), std::abs(rep.eigencentrality[i] - eig[i])})
        worst = std::max(worst, diff);
    }
  }
  double secs = seconds_since(t0);
  c.expect(worst <= 1e-9, "max deviation " + sci(worst));
  c.expect(secs < 5.0, "took " + fmt(secs) + " s");
  if (c.out.ok)
    c.out.detail = std::to_string(graphs.size()) + " graphs, max deviation " + sci(worst) + ", " + fmt(secs) + " s";
  return c.out;
}

std::string cite(const std::string& tag) { return "Author, A. (2001). Paper " + tag + ". Journal"; }

// Letters only so each tag yields a distinct reference key.
std::string tag(std::size_t n) {
  std::string s = "t";
  do {
    s.push_back(static_cast<char>('a' + n % 26));
    n /= 26;
  } while (n);
  return s;
}

Outcome coupling_matches_brute_force() {
  Check c;
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(77);
  std::size_t edges = 0;
  for (int t = 0; t < 50; ++t) {
    std::vector<kc::BibRecord> recs;
    std::size_t docs = 1 + rng() % 50, pool = 5 + rng() % 60;
    for (std::size_t d = 0; d < docs; ++d) {
      std::vector<std::string> refs;
      auto k = rng() % 10;
      for (std::size_t i = 0; i < k; ++i) refs.push_back(cite(tag(rng() % pool)));
      recs.push_back(fx::record(std::to_string(d), 2000, refs));
    }
    auto corpus = fx::corpus(recs);
    std::size_t min_shared = 1 + t % 3;
    auto g = kc::build_bcn(corpus, {min_shared, 0, 1 + static_cast<std::size_t>(t % 3)});
    auto expect = oracle::coupling_pairs(corpus, min_shared);
    c.expect(g.edge_count() == expect.size(), "corpus " + std::to_string(t) + ": edge count differs");
    for (const auto& e : g.edges()) {
      auto it = expect.find({g.id(e.u), g.id(e.v)});
      c.expect(it != expect.end() && e.weight == static_cast<double>(it->second),
               "corpus " + std::to_string(t) + ": edge " + g.id(e.u) + "-" + g.id(e.v));
    }
    edges += g.edge_count();
  }
  double secs = seconds_since(t0);
  c.expect(secs < 5.0, "took " + fmt(secs) + " s");
  if (c.out.ok) c.out.detail = "50 corpora, " + std::to_string(edges) + " edges, " + fmt(secs) + " s";
  return c.out;
}

kc::PeriodKeywordSet kwset(const std::set<std::string>& words) {
  kc::PeriodKeywordSet s{{2000, 2001}, {}};
  for (const auto& w : words) s.doc_count[w] = 1;
  return s;
}

Outcome superposition_identities() {
  Check c;
  std::mt19937 rng(88);
  for (int t = 0; t < 1000; ++t) {
    std::set<std::string> a, b;
    int universe = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < universe; ++i) {
      if (rng() % 2) a.insert("w" + std::to_string(i));
      if (rng() % 2) b.insert("w" + std::to_string(i));
    }
    std::vector<std::string> inter, uni;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
    for (auto measure : {kc::Similarity::jaccard, kc::Similarity::overlap}) {
      auto s = kc::superposition(kwset(a), kwset(b), measure);
      c.expect(s.kept == inter.size(), "kept");
      c.expect(s.kept + s.added == b.size() && s.kept + s.dropped == a.size(), "set sizes");
      c.expect(s.similarity >= 0 && s.similarity <= 1, "similarity range");
      double want = 0;
      if (measure == kc::Similarity::jaccard)
        want = uni.empty() ? 0 : static_cast<double>(inter.size()) / static_cast<double>(uni.size());
      else if (std::min(a.size(), b.size()) > 0)
        want = static_cast<double>(inter.size()) / static_cast<double>(std::min(a.size(), b.size()));
      c.expect(std::abs(s.similarity - want) < 1e-15, "similarity value");
      if (!a.empty()) c.expect(kc::superposition(kwset(a), kwset(a), measure).similarity == 1.0, "equal sets");
    }
    std::set<std::string> shifted;
    for (const auto& w : a) shifted.insert("x" + w);
    c.expect(kc::superposition(kwset(a), kwset(shifted)).similarity == 0.0, "disjoint sets");
  }
  std::set<std::string> from, to;
  for (int i = 0; i < 400; ++i) from.insert("old" + std::to_string(i));
  for (int i = 0; i < 250; ++i) to.insert("old" + std::to_string(i));
  for (int i = 0; i < 1793; ++i) to.insert("new" + std::to_string(i));
  auto s = kc::superposition(kwset(from), kwset(to));
  c.expect(to.size() == 2043 && s.added == 1793 && s.kept == 250, "kept " + std::to_string(s.kept));
  if (c.out.ok) c.out.detail = "1000 random pairs; 2043 total with 1793 new keeps " + std::to_string(s.kept);
  return c.out;
}

Outcome modularity_and_louvain() {
  Check c;
  auto g = fx::two_triangles();
  auto w = oracle::weights(g);
  double best = -1;
  oracle::for_each_partition(6, [&](const std::vector<int>& p) { best = std::max(best, oracle::modularity(w, p)); });
  auto p = kc::detect_communities(g);
  c.expect(std::abs(best - 0.3571) <= 1e-4, "exhaustive optimum " + fmt(best, 5));
  c.expect(std::abs(p.modularity - 0.3571) <= 1e-4, "detected Q " + fmt(p.modularity, 5));
  c.expect(p.cluster == std::vector<std::size_t>{1, 1, 1, 2, 2, 2}, "triangles not separated");

  auto cliques = fx::two_cliques();
  auto pc = kc::detect_communities(cliques);
  c.expect(pc.cluster_count() == 2, "planted cliques: " + std::to_string(pc.cluster_count()) + " clusters");
  for (kc::NodeIndex i = 0; i < cliques.node_count(); ++i)
    c.expect(pc.cluster[i] == (std::stoi(cliques.id(i)) < 10 ? 1u : 2u), "planted cliques: node " + cliques.id(i));

  std::mt19937_64 rng(99);
  for (int t = 0; t < 100; ++t) {
    auto r = oracle::to_graph(oracle::random_dense(rng, 3 + static_cast<int>(rng() % 25), 0.3));
    if (r.edge_count() == 0) continue;
    c.expect(kc::modularity(r, std::vector<std::size_t>(r.node_count(), 1)) == 0.0, "all-in-one Q not zero");
  }
  c.expect(kc::modularity(g, std::vector<std::size_t>(6, 1)) == 0.0, "all-in-one Q not zero");
  if (c.out.ok) c.out.detail = "Q " + fmt(p.modularity, 4) + " equals exhaustive optimum; planted cliques recovered";
  return c.out;
}

Outcome display_selection() {
  Check c;
  const std::size_t k = kc::PipelineConfig{}.top_clusters;
  const double frac = kc::PipelineConfig{}.betweenness_fraction;
  c.expect(k == 5, "default k " + std::to_string(k));
  c.expect(frac == 0.5, "default fraction");
  std::mt19937_64 rng(111);
  for (int t = 0; t < 100; ++t) {
    auto g = oracle::to_graph(oracle::random_dense(rng, 5 + static_cast<int>(rng() % 30), 0.12));
    auto p = kc::detect_communities(g);
    double sum = 0;
    for (const auto& s : kc::composition(p)) sum += s.percent;
    c.expect(std::abs(sum - 100.0) < 1e-9, "composition sums to " + std::to_string(sum));
    auto top = kc::top_clusters(p, k);
    c.expect(top.size() == std::min(k, p.cluster_count()), "top cluster count");
    for (std::size_t i = 1; i < top.size(); ++i)
      c.expect(p.sizes[top[i - 1] - 1] >= p.sizes[top[i] - 1], "top clusters not by size");
    auto kept = kc::filter_top_betweenness(g, kc::betweenness_all(g), frac);
    c.expect(kept.node_count() == static_cast<std::size_t>(std::ceil(frac * static_cast<double>(g.node_count()))),
             "filter kept " + std::to_string(kept.node_count()) + " of " + std::to_string(g.node_count()));
  }
  if (c.out.ok) c.out.detail = "k=" + std::to_string(k) + ", fraction " + fmt(frac, 1) + " keeps ceil(n/2)";
  return c.out;
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = kc::text::read_file(e.path().string());
  return files;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("kc-accept-" + name);
  fs::remove_all(p);
  return p;
}

Outcome reproducible_runs() {
  Check c;
  kc::PipelineConfig cfg;
  cfg.inputs = {std::string(KC_DATA_DIR) + "/fixture30.csv"};
  std::vector<std::string> manifests;
  std::vector<std::map<std::string, std::string>> trees;
  for (std::size_t threads : {1u, 1u, 4u}) {
    auto ws = scratch("repro-" + std::to_string(manifests.size()));
    cfg.threads = threads;
    auto r = kc::run(cfg, ws);
    manifests.push_back(kc::dump_json(kc::to_json(r.manifest)));
    trees.push_back(snapshot(ws));
    c.expect(kc::verify_manifest(ws), "manifest does not verify");
    fs::remove_all(ws);
  }
  c.expect(manifests[0] == manifests[1] && trees[0] == trees[1], "repeat run differs");
  c.expect(manifests[0] == manifests[2] && trees[0] == trees[2], "4-thread run differs");
  c.expect(trees[0].size() == 17, "workspace holds " + std::to_string(trees[0].size()) + " files");
  if (c.out.ok) c.out.detail = "3 runs (threads 1, 1, 4), " + std::to_string(trees[0].size()) + " identical files";
  return c.out;
}

// 1315 records; 529 of them cite 32 references from a shared pool, the rest cite nothing shared.
std::string synthetic_csv() {
  std::mt19937_64 rng(1315);
  const std::size_t pool = 830;
  const std::vector<std::string> surnames{"Adams", "Baker", "Costa", "Dietz", "Evans", "Fischer", "Garcia", "Hansen"};
  const std::vector<std::string> countries{"Italy", "Germany", "United States", "China", "Spain", "Canada"};
  std::vector<std::string> vocab;
  for (std::size_t i = 0; i < 80; ++i) vocab.push_back("topic " + tag(i));
  auto reference = [&](std::size_t i) {
    return surnames[i % surnames.size()] + ", A. (" + std::to_string(1990 + i % 25) + "). Study " + tag(i) +
           " of governance. Journal of Risk, 1(1), 1-9";
  };
  std::string out = "Authors,Title,Year,Author Keywords,Affiliations,References,Source title,DOI,EID\n";
  for (std::size_t d = 0; d < 1315; ++d) {
    std::vector<std::string> refs;
    if (d < 529) {
      std::set<std::size_t> picked;
      while (picked.size() < 32) picked.insert(rng() % pool);
      for (auto i : picked) refs.push_back(reference(i));
    } else {
      refs.push_back("Solo, B. (2000). Private " + tag(d) + ". Journal");
    }
    std::vector<std::string> kws;
    for (int k = 0; k < 4; ++k) kws.push_back(vocab[rng() % vocab.size()]);
    out += kc::csv::line({surnames[d % surnames.size()] + " J.", "Governance and risk in sector " + tag(d),
                          std::to_string(1998 + d % 21), kc::text::join(kws, "; "),
                          "University of " + tag(d % 40) + ", " + countries[d % countries.size()],
                          kc::text::join(refs, "; "), "Journal of Risk", "", "syn-" + std::to_string(d)});
  }
  return out;
}

Outcome scale() {
  Check c;
  auto dir = scratch("scale");
  fs::create_directories(dir);
  auto csv = (dir / "synthetic.csv").string();
  kc::text::write_file(csv, synthetic_csv());
  kc::PipelineConfig cfg;
  cfg.inputs = {csv};
  auto t0 = std::chrono::steady_clock::now();
  auto r = kc::run(cfg, dir / "ws");
  double pipeline_secs = seconds_since(t0);
  c.expect(r.ingest.corpus.size() == 1315, "corpus holds " + std::to_string(r.ingest.corpus.size()));
  c.expect(r.bcn_summary.n_links >= 90000, "only " + std::to_string(r.bcn_summary.n_links) + " edges");
  c.expect(pipeline_secs < 60.0, "pipeline took " + fmt(pipeline_secs) + " s");

  auto g = kc::read_graph(kc::text::read_file((dir / "ws/graphs/bcn.edges.tsv").string()), std::nullopt);
  auto t1 = std::chrono::steady_clock::now();
  auto bc = kc::betweenness_all(g, 1);
  double bc_secs = seconds_since(t1);
  c.expect(bc.size() == g.node_count(), "betweenness size");
  c.expect(g.node_count() >= 450 && g.node_count() <= 600, "analysis graph has " + std::to_string(g.node_count()) + " nodes");
  c.expect(bc_secs < 10.0, "betweenness took " + fmt(bc_secs) + " s");
  fs::remove_all(dir);
  if (c.out.ok)
    c.out.detail = std::to_string(r.bcn_summary.n_links) + " edges, pipeline " + fmt(pipeline_secs, 2) +
                   " s; betweenness on " + std::to_string(g.node_count()) + " nodes " + fmt(bc_secs, 2) + " s";
  return c.out;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, network_scalars},        {2, centralities},      {3, coupling_matches_brute_force},
      {4, superposition_identities}, {5, modularity_and_louvain}, {6, display_selection},
      {7, reproducible_runs},      {8, scale}};
  int failures = 0;
  for (const auto& [n, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << n << ": " << o.detail << std::endl;
    if (!o.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
