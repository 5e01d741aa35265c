#pragma once

// Co-word analysis per period: keyword superposition between consecutive
// periods, co-occurrence themes (simple-centers clustering on the equivalence
// index) and inclusion-index links between the themes of consecutive periods.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kc/error.hpp"
#include "kc/record.hpp"
#include "kc/text.hpp"

namespace kc {

struct KeywordOptions {
  bool include_title_unigrams = false;
};

namespace detail {

inline bool is_stopword(std::string_view w) {
  static const std::set<std::string_view> words = {
      "a",     "an",   "and",  "are",   "as",    "at",   "between", "by",   "for",  "from",  "in",
      "into",  "is",   "its",  "of",    "on",    "or",   "the",     "their", "to",  "towards", "under",
      "using", "via",  "with", "within", "without", "does", "do",   "how",  "what", "why",   "when"};
  return w.size() < 2 || words.count(w) > 0 || text::all_digits(w);
}

}  // namespace detail

// Author keywords, plus title words when requested. Unique, in order of appearance.
inline std::vector<std::string> document_keywords(const BibRecord& r, const KeywordOptions& opt = {}) {
  std::vector<std::string> out = r.keywords;
  if (opt.include_title_unigrams)
    for (auto& w : text::words(r.title))
      if (!detail::is_stopword(w) && std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
  return out;
}

struct PeriodKeywordSet {
  Period period;
  std::map<std::string, std::size_t> doc_count;  // keyword -> documents using it

  std::size_t size() const { return doc_count.size(); }
  bool contains(const std::string& k) const { return doc_count.count(k) > 0; }
};

inline std::vector<PeriodKeywordSet> keywords_by_period(const std::vector<std::pair<Period, Corpus>>& slices,
                                                        const KeywordOptions& opt = {}) {
  std::vector<PeriodKeywordSet> out;
  for (const auto& [period, corpus] : slices) {
    PeriodKeywordSet set{period, {}};
    for (const auto& rec : corpus.records)
      for (const auto& k : document_keywords(rec, opt)) ++set.doc_count[k];
    out.push_back(std::move(set));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Superposition

enum class Similarity { jaccard, overlap };

inline Similarity parse_similarity(std::string_view s) {
  if (s == "jaccard") return Similarity::jaccard;
  if (s == "overlap") return Similarity::overlap;
  throw ValidationError("unknown similarity '" + std::string(s) + "' (expected jaccard or overlap)");
}

inline std::string to_string(Similarity s) { return s == Similarity::jaccard ? "jaccard" : "overlap"; }

struct SuperpositionStep {
  Period from;
  Period to;
  std::size_t kept = 0;
  std::size_t added = 0;  // keywords new in `to`
  std::size_t dropped = 0;
  double similarity = 0;
};

inline SuperpositionStep superposition(const PeriodKeywordSet& from, const PeriodKeywordSet& to,
                                       Similarity measure = Similarity::jaccard) {
  SuperpositionStep s{from.period, to.period};
  for (const auto& [k, _] : from.doc_count)
    if (to.contains(k)) ++s.kept;
  s.added = to.size() - s.kept;
  s.dropped = from.size() - s.kept;
  if (measure == Similarity::jaccard) {
    auto uni = s.kept + s.added + s.dropped;
    s.similarity = uni ? static_cast<double>(s.kept) / static_cast<double>(uni) : 0.0;
  } else {
    auto m = std::min(from.size(), to.size());
    s.similarity = m ? static_cast<double>(s.kept) / static_cast<double>(m) : 0.0;
  }
  return s;
}

inline std::vector<SuperpositionStep> superposition_map(const std::vector<PeriodKeywordSet>& sets,
                                                        Similarity measure = Similarity::jaccard) {
  std::vector<SuperpositionStep> out;
  for (std::size_t i = 1; i < sets.size(); ++i) out.push_back(superposition(sets[i - 1], sets[i], measure));
  return out;
}

inline std::string superposition_csv(const std::vector<SuperpositionStep>& steps) {
  std::string out = "from,to,kept,new,dropped,similarity\n";
  for (const auto& s : steps)
    out += csv::line({s.from.label(), s.to.label(), std::to_string(s.kept), std::to_string(s.added),
                      std::to_string(s.dropped), text::fixed(s.similarity, 4)});
  return out;
}

// ---------------------------------------------------------------------------
// Co-occurrence

class CooccurrenceMatrix {
 public:
  CooccurrenceMatrix() = default;

  CooccurrenceMatrix(const Corpus& corpus, const KeywordOptions& opt) {
    std::vector<std::vector<std::string>> per_doc;
    std::set<std::string> all;
    for (const auto& rec : corpus.records) {
      auto ks = document_keywords(rec, opt);
      all.insert(ks.begin(), ks.end());
      per_doc.push_back(std::move(ks));
    }
    keywords_.assign(all.begin(), all.end());
    docs_.resize(keywords_.size());
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> pairs;
    for (std::size_t d = 0; d < per_doc.size(); ++d) {
      std::vector<std::size_t> ids;
      for (const auto& k : per_doc[d]) ids.push_back(*index(k));
      std::sort(ids.begin(), ids.end());
      for (std::size_t a = 0; a < ids.size(); ++a) {
        docs_[ids[a]].push_back(d);
        for (std::size_t b = a + 1; b < ids.size(); ++b) ++pairs[{ids[a], ids[b]}];
      }
    }
    neighbors_.resize(keywords_.size());
    for (const auto& [p, c] : pairs) {
      neighbors_[p.first].push_back({p.second, c});
      neighbors_[p.second].push_back({p.first, c});
    }
    for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
  }

  std::size_t size() const { return keywords_.size(); }
  bool empty() const { return keywords_.empty(); }
  const std::vector<std::string>& keywords() const { return keywords_; }
  const std::string& keyword(std::size_t i) const { return keywords_.at(i); }

  std::optional<std::size_t> index(std::string_view k) const {
    auto it = std::lower_bound(keywords_.begin(), keywords_.end(), k);
    if (it == keywords_.end() || *it != k) return std::nullopt;
    return static_cast<std::size_t>(it - keywords_.begin());
  }

  std::size_t index_of(std::string_view k) const {
    auto i = index(k);
    if (!i) throw LookupError("keyword '" + std::string(k) + "' not in co-occurrence matrix");
    return *i;
  }

  std::size_t marginal(std::size_t i) const { return docs_.at(i).size(); }

  // c_ij; the diagonal is the marginal.
  std::size_t count(std::size_t i, std::size_t j) const {
    if (i == j) return marginal(i);
    const auto& nb = neighbors_.at(i);
    auto it = std::lower_bound(nb.begin(), nb.end(), std::make_pair(j, std::size_t{0}));
    return (it != nb.end() && it->first == j) ? it->second : 0;
  }

  std::size_t count(std::string_view a, std::string_view b) const { return count(index_of(a), index_of(b)); }

  // (keyword, c_ij) for every keyword co-occurring with i, ascending.
  const std::vector<std::pair<std::size_t, std::size_t>>& cooccurring(std::size_t i) const {
    return neighbors_.at(i);
  }

  // Positions (in corpus order) of the documents carrying keyword i.
  const std::vector<std::size_t>& documents(std::size_t i) const { return docs_.at(i); }

 private:
  std::vector<std::string> keywords_;  // sorted
  std::vector<std::vector<std::size_t>> docs_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> neighbors_;
};

inline CooccurrenceMatrix cooccurrence(const Corpus& slice, const KeywordOptions& opt = {}) {
  return CooccurrenceMatrix(slice, opt);
}

inline double equivalence_index(std::size_t c_ij, std::size_t c_i, std::size_t c_j) {
  if (c_i == 0 || c_j == 0) throw DomainError("equivalence index needs non-zero marginals");
  return static_cast<double>(c_ij) * static_cast<double>(c_ij) /
         (static_cast<double>(c_i) * static_cast<double>(c_j));
}

inline double equivalence_index(const CooccurrenceMatrix& m, std::size_t i, std::size_t j) {
  return equivalence_index(m.count(i, j), m.marginal(i), m.marginal(j));
}

inline double equivalence_index(const CooccurrenceMatrix& m, std::string_view a, std::string_view b) {
  return equivalence_index(m, m.index_of(a), m.index_of(b));
}

// ---------------------------------------------------------------------------
// Themes

struct Theme {
  std::string label;
  std::vector<std::string> members;  // sorted
  std::size_t article_count = 0;
  double internal_density = 0;
  double external_centrality = 0;
};

struct ThemeOptions {
  std::size_t max_theme_size = 10;
  double min_e = 0.05;

  void validate() const {
    if (max_theme_size < 2) throw ValidationError("max_theme_size must be at least 2");
    if (!(min_e > 0 && min_e <= 1)) throw ValidationError("min_e must lie in (0, 1]");
  }
};

// Simple-centers clustering on the equivalence-index graph restricted to e >= min_e.
// The strongest edge between two unused keywords seeds a theme, which then absorbs
// the unused keyword on its strongest incident edge until it reaches max_theme_size
// or has no such edge left. Ties fall to the lexicographically smaller keyword.
inline std::vector<Theme> detect_themes(const CooccurrenceMatrix& m, const ThemeOptions& opt = {}) {
  opt.validate();
  const auto n = m.size();
  struct Link {
    double e;
    std::size_t a, b;  // a < b
  };
  std::vector<Link> links;
  std::vector<std::vector<std::pair<std::size_t, double>>> strong(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [j, c] : m.cooccurring(i)) {
      if (j <= i) continue;
      double e = equivalence_index(c, m.marginal(i), m.marginal(j));
      if (e < opt.min_e) continue;
      links.push_back({e, i, j});
      strong[i].push_back({j, e});
      strong[j].push_back({i, e});
    }
  std::sort(links.begin(), links.end(), [](const Link& x, const Link& y) {
    if (x.e != y.e) return x.e > y.e;
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });

  std::vector<char> used(n, 0);
  std::vector<Theme> themes;
  for (const auto& seed : links) {
    if (used[seed.a] || used[seed.b]) continue;
    std::vector<std::size_t> members{seed.a, seed.b};
    used[seed.a] = used[seed.b] = 1;
    while (members.size() < opt.max_theme_size) {
      std::optional<std::pair<double, std::size_t>> best;
      for (auto mbr : members)
        for (const auto& [x, e] : strong[mbr]) {
          if (used[x]) continue;
          if (!best || e > best->first || (e == best->first && x < best->second)) best = {e, x};
        }
      if (!best) break;
      used[best->second] = 1;
      members.push_back(best->second);
    }
    std::sort(members.begin(), members.end());

    Theme t;
    std::vector<char> inside(n, 0);
    for (auto x : members) inside[x] = 1;
    double internal = 0;
    double best_strength = -1;
    for (auto x : members) {
      double s = 0;
      for (auto y : members)
        if (y != x) s += equivalence_index(m, x, y);
      internal += s;
      if (s > best_strength) {  // members are sorted, so the first maximum is the smallest keyword
        best_strength = s;
        t.label = m.keyword(x);
      }
      for (const auto& [y, c] : m.cooccurring(x))
        if (!inside[y]) t.external_centrality += equivalence_index(c, m.marginal(x), m.marginal(y));
    }
    const double k = static_cast<double>(members.size());
    t.internal_density = internal / 2.0 / (k * (k - 1) / 2.0);
    std::set<std::size_t> docs;
    for (auto x : members) {
      t.members.push_back(m.keyword(x));
      docs.insert(m.documents(x).begin(), m.documents(x).end());
    }
    t.article_count = docs.size();
    themes.push_back(std::move(t));
  }
  return themes;
}

inline double inclusion_index(const Theme& a, const Theme& b) {
  if (a.members.empty() || b.members.empty()) throw DomainError("inclusion index needs non-empty themes");
  std::vector<std::string> sa = a.members;
  std::vector<std::string> sb = b.members;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::vector<std::string> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(std::min(sa.size(), sb.size()));
}

// ---------------------------------------------------------------------------
// Evolution

struct PeriodThemes {
  Period period;
  std::vector<Theme> themes;
};

enum class LinkKind { solid, weak };

inline std::string to_string(LinkKind k) { return k == LinkKind::solid ? "solid" : "weak"; }

struct EvolutionLink {
  std::size_t from_period = 0;  // index into the period list; to_period = from_period + 1
  std::size_t to_period = 0;
  std::string from_label;
  std::string to_label;
  double inclusion = 0;
  LinkKind kind = LinkKind::weak;
};

struct EvolutionMap {
  std::vector<Period> periods;
  std::vector<EvolutionLink> links;
};

inline EvolutionMap evolution_map(const std::vector<PeriodThemes>& themes_per_period, double min_inclusion) {
  if (!(min_inclusion > 0 && min_inclusion <= 1)) throw ValidationError("min_inclusion must lie in (0, 1]");
  EvolutionMap out;
  for (const auto& p : themes_per_period) out.periods.push_back(p.period);
  for (std::size_t i = 1; i < themes_per_period.size(); ++i)
    for (const auto& a : themes_per_period[i - 1].themes)
      for (const auto& b : themes_per_period[i].themes) {
        double inc = inclusion_index(a, b);
        if (inc <= 0 || inc < min_inclusion) continue;
        out.links.push_back({i - 1, i, a.label, b.label, inc, a.label == b.label ? LinkKind::solid : LinkKind::weak});
      }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const Theme& t) {
  return {{"label", t.label},
          {"members", t.members},
          {"article_count", t.article_count},
          {"internal_density", t.internal_density},
          {"external_centrality", t.external_centrality}};
}

inline Theme theme_from_json(const nlohmann::json& j) {
  Theme t;
  t.label = j.at("label").get<std::string>();
  t.members = j.at("members").get<std::vector<std::string>>();
  t.article_count = j.at("article_count").get<std::size_t>();
  t.internal_density = j.at("internal_density").get<double>();
  t.external_centrality = j.at("external_centrality").get<double>();
  return t;
}

inline nlohmann::json themes_to_json(const std::vector<PeriodThemes>& periods, const ThemeOptions& opt) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : periods) {
    nlohmann::json themes = nlohmann::json::array();
    for (const auto& t : p.themes) themes.push_back(to_json(t));
    arr.push_back({{"period", p.period.label()}, {"start", p.period.start}, {"end", p.period.end}, {"themes", themes}});
  }
  return {{"max_theme_size", opt.max_theme_size}, {"min_e", opt.min_e}, {"periods", arr}};
}

inline std::vector<PeriodThemes> themes_from_json(const nlohmann::json& j) {
  std::vector<PeriodThemes> out;
  try {
    for (const auto& p : j.at("periods")) {
      PeriodThemes pt{{p.at("start").get<int>(), p.at("end").get<int>()}, {}};
      for (const auto& t : p.at("themes")) pt.themes.push_back(theme_from_json(t));
      out.push_back(std::move(pt));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed themes JSON: ") + e.what());
  }
  return out;
}

inline nlohmann::json to_json(const EvolutionMap& m, double min_inclusion) {
  nlohmann::json links = nlohmann::json::array();
  for (const auto& l : m.links)
    links.push_back({{"from", {{"period", m.periods.at(l.from_period).label()}, {"label", l.from_label}}},
                     {"to", {{"period", m.periods.at(l.to_period).label()}, {"label", l.to_label}}},
                     {"inclusion", l.inclusion},
                     {"kind", to_string(l.kind)}});
  nlohmann::json periods = nlohmann::json::array();
  for (const auto& p : m.periods) periods.push_back(p.label());
  return {{"min_inclusion", min_inclusion}, {"periods", periods}, {"links", links}};
}

}  // namespace kc
