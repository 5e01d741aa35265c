#pragma once

// Bibliographic coupling: documents are linked by the number of canonical
// references they share.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kc/centrality.hpp"
#include "kc/error.hpp"
#include "kc/graph.hpp"
#include "kc/parallel.hpp"
#include "kc/record.hpp"

namespace kc {

// Inverted index from reference key to the documents citing it.
class RefIndex {
 public:
  explicit RefIndex(const Corpus& corpus) {
    std::map<std::string, std::vector<std::uint32_t>> postings;
    for (std::uint32_t d = 0; d < corpus.records.size(); ++d) {
      const auto& rec = corpus.records[d];
      docs_.push_back(rec.id);
      doc_pos_.emplace(rec.id, d);
      for (const auto& raw : rec.references) {
        auto key = reference_key(raw);
        if (key.key.empty()) continue;
        auto& list = postings[key.key];
        if (list.empty() || list.back() != d) list.push_back(d);
      }
    }
    doc_keys_.resize(docs_.size());
    for (auto& [key, list] : postings) {
      auto k = static_cast<std::uint32_t>(keys_.size());
      keys_.push_back(key);
      for (auto d : list) doc_keys_[d].push_back(k);
      postings_.push_back(std::move(list));
    }
  }

  std::size_t key_count() const { return keys_.size(); }
  std::size_t doc_count() const { return docs_.size(); }
  const std::string& key(std::size_t k) const { return keys_.at(k); }
  const std::string& doc(std::size_t d) const { return docs_.at(d); }

  // Document positions (corpus order) posted under key k, ascending.
  const std::vector<std::uint32_t>& postings(std::size_t k) const { return postings_.at(k); }

  // Document ids posted under a reference key; empty if the key is unknown.
  std::vector<std::string> documents(std::string_view key) const {
    std::vector<std::string> out;
    auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
    if (it == keys_.end() || *it != key) return out;
    for (auto d : postings_[static_cast<std::size_t>(it - keys_.begin())]) out.push_back(docs_[d]);
    return out;
  }

  // Key numbers of a document's distinct references, ascending.
  const std::vector<std::uint32_t>& keys_of(std::size_t d) const { return doc_keys_.at(d); }

  std::size_t position(std::string_view doc_id) const {
    auto it = doc_pos_.find(std::string(doc_id));
    if (it == doc_pos_.end()) throw LookupError("unknown document '" + std::string(doc_id) + "'");
    return it->second;
  }

 private:
  std::vector<std::string> docs_;
  std::unordered_map<std::string, std::size_t> doc_pos_;
  std::vector<std::string> keys_;  // sorted
  std::vector<std::vector<std::uint32_t>> postings_;
  std::vector<std::vector<std::uint32_t>> doc_keys_;
};

inline RefIndex build_ref_index(const Corpus& corpus) { return RefIndex(corpus); }

inline std::size_t coupling_strength(const RefIndex& idx, std::string_view a, std::string_view b) {
  auto pa = idx.position(a);
  auto pb = idx.position(b);
  if (pa == pb) throw ValidationError("coupling strength needs two distinct documents");
  const auto& ka = idx.keys_of(pa);
  const auto& kb = idx.keys_of(pb);
  std::size_t shared = 0;
  for (std::size_t i = 0, j = 0; i < ka.size() && j < kb.size();) {
    if (ka[i] < kb[j]) {
      ++i;
    } else if (kb[j] < ka[i]) {
      ++j;
    } else {
      ++shared;
      ++i;
      ++j;
    }
  }
  return shared;
}

struct CouplingOptions {
  std::size_t min_shared = 1;
  // Keys cited by more documents than this are skipped (0 = no cap).
  std::size_t max_postings = 0;
  std::size_t threads = 1;
};

// Nodes are all corpus documents (labelled with display_label); pairs are only
// generated inside postings lists. Skipped pathological keys are appended to `warnings`.
inline Graph build_bcn(const Corpus& corpus, const CouplingOptions& opt = {},
                       std::vector<std::string>* warnings = nullptr) {
  if (opt.min_shared < 1) throw ValidationError("min_shared must be at least 1");
  RefIndex idx(corpus);
  const auto n = idx.doc_count();

  std::vector<char> capped(idx.key_count(), 0);
  if (opt.max_postings > 0)
    for (std::size_t k = 0; k < idx.key_count(); ++k)
      if (idx.postings(k).size() > opt.max_postings) {
        capped[k] = 1;
        if (warnings)
          warnings->push_back("reference key '" + idx.key(k) + "' is cited by " +
                              std::to_string(idx.postings(k).size()) + " documents; skipped");
      }

  struct Pair {
    std::uint32_t a, b, w;
  };
  constexpr std::size_t block = 64;
  const auto blocks = parallel::block_count(n, block);
  std::vector<std::vector<Pair>> partial(blocks);
  parallel::for_each_block(blocks, opt.threads, [&](std::size_t bi) {
    std::vector<std::uint32_t> count(n, 0);
    std::vector<std::uint32_t> touched;
    auto end = std::min(n, (bi + 1) * block);
    for (auto a = static_cast<std::uint32_t>(bi * block); a < end; ++a) {
      for (auto k : idx.keys_of(a)) {
        if (capped[k]) continue;
        const auto& list = idx.postings(k);
        for (auto it = std::upper_bound(list.begin(), list.end(), a); it != list.end(); ++it) {
          if (count[*it]++ == 0) touched.push_back(*it);
        }
      }
      std::sort(touched.begin(), touched.end());
      for (auto b : touched) {
        if (count[b] >= opt.min_shared) partial[bi].push_back({a, b, count[b]});
        count[b] = 0;
      }
      touched.clear();
    }
  });

  GraphBuilder builder;
  for (const auto& rec : corpus.records) builder.add_node(rec.id, display_label(rec));
  for (const auto& part : partial)
    for (const auto& p : part) builder.add_edge(idx.doc(p.a), idx.doc(p.b), static_cast<double>(p.w));
  return builder.build();
}

struct NetworkSummary {
  std::size_t n_articles = 0;
  std::size_t n_links = 0;
  std::optional<double> density;
  std::optional<double> mean_degree;
  std::size_t n_isolated = 0;

  // n=3 L=1 density=0.333 mean_degree=0.667
  std::string line() const {
    auto fmt = [](const std::optional<double>& v) { return v ? text::fixed(*v, 3) : std::string("NA"); };
    return "n=" + std::to_string(n_articles) + " L=" + std::to_string(n_links) + " density=" + fmt(density) +
           " mean_degree=" + fmt(mean_degree);
  }
};

inline NetworkSummary network_summary(const Graph& g) {
  NetworkSummary s;
  s.n_articles = g.node_count();
  s.n_links = g.edge_count();
  if (s.n_articles >= 1) s.mean_degree = mean_degree(g);
  if (s.n_articles >= 2) s.density = density(g);
  for (NodeIndex i = 0; i < g.node_count(); ++i)
    if (g.degree(i) == 0) ++s.n_isolated;
  return s;
}

}  // namespace kc
