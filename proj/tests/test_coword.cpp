#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "kc/coword.hpp"

namespace {

kc::PeriodKeywordSet kwset(std::vector<std::string> words, kc::Period p = {2000, 2004}) {
  kc::PeriodKeywordSet s{p, {}};
  for (auto& w : words) s.doc_count[w] = 1;
  return s;
}

kc::Corpus docs(const std::vector<std::vector<std::string>>& keywords, int year = 2001) {
  std::vector<kc::BibRecord> recs;
  for (std::size_t i = 0; i < keywords.size(); ++i) recs.push_back(fx::record(std::to_string(i), year, {}, keywords[i]));
  return fx::corpus(recs);
}

TEST(Keywords, CountsPerPeriod) {
  auto sets = kc::keywords_by_period({{{2000, 2004}, docs({{"governance"}, {"governance", "risk"}})}, {{2005, 2009}, {}}});
  ASSERT_EQ(sets.size(), 2u);
  EXPECT_EQ(sets[0].doc_count, (std::map<std::string, std::size_t>{{"governance", 2}, {"risk", 1}}));
  EXPECT_EQ(sets[1].size(), 0u);
}

TEST(Keywords, SixRecordsTwoPeriods) {
  auto early = docs({{"risk", "bank"}, {"risk"}, {"security", "nato"}});
  auto late = docs({{"risk", "water"}, {"water"}, {"water", "trust", "risk"}}, 2006);
  auto sets = kc::keywords_by_period({{{2000, 2004}, early}, {{2005, 2009}, late}});
  EXPECT_EQ(sets[0].doc_count, (std::map<std::string, std::size_t>{{"bank", 1}, {"nato", 1}, {"risk", 2}, {"security", 1}}));
  EXPECT_EQ(sets[1].doc_count, (std::map<std::string, std::size_t>{{"risk", 2}, {"trust", 1}, {"water", 3}}));
}

TEST(Keywords, TitleUnigramsOptional) {
  auto r = fx::record("1", 2001, {}, {"risk"}, "The Governance of Water Risk");
  EXPECT_EQ(kc::document_keywords(r), std::vector<std::string>{"risk"});
  EXPECT_EQ(kc::document_keywords(r, {true}), (std::vector<std::string>{"risk", "governance", "water"}));
}

TEST(Superposition, Example) {
  auto s = kc::superposition(kwset({"governance", "risk", "trust"}), kwset({"governance", "risk", "security", "water"}));
  EXPECT_EQ(s.kept, 2u);
  EXPECT_EQ(s.added, 2u);
  EXPECT_EQ(s.dropped, 1u);
  EXPECT_DOUBLE_EQ(s.similarity, 0.4);
  auto o = kc::superposition(kwset({"governance", "risk", "trust"}), kwset({"governance", "risk", "security", "water"}),
                             kc::Similarity::overlap);
  EXPECT_DOUBLE_EQ(o.similarity, 2.0 / 3.0);
}

TEST(Superposition, IdentityAndEmpty) {
  auto a = kwset({"x", "y", "z"});
  auto s = kc::superposition(a, a);
  EXPECT_EQ(s.kept, 3u);
  EXPECT_EQ(s.added, 0u);
  EXPECT_DOUBLE_EQ(s.similarity, 1.0);
  EXPECT_DOUBLE_EQ(kc::superposition(kwset({}), kwset({})).similarity, 0.0);
}

TEST(Superposition, LargeNewVocabulary) {
  // Final period: 2,043 keywords of which 1,793 are new.
  std::vector<std::string> from, to;
  for (int i = 0; i < 400; ++i) from.push_back("old" + std::to_string(i));
  for (int i = 0; i < 250; ++i) to.push_back("old" + std::to_string(i));
  for (int i = 0; i < 1793; ++i) to.push_back("new" + std::to_string(i));
  auto s = kc::superposition(kwset(from), kwset(to));
  EXPECT_EQ(s.kept + s.added, 2043u);
  EXPECT_EQ(s.added, 1793u);
  EXPECT_EQ(s.kept, 250u);
}

TEST(Superposition, SetIdentitiesOnRandomPairs) {
  std::mt19937 rng(17);
  for (int t = 0; t < 1000; ++t) {
    std::vector<std::string> a, b;
    for (int i = 0; i < 30; ++i) {
      if (rng() % 3 == 0) a.push_back("k" + std::to_string(i));
      if (rng() % 3 == 0) b.push_back("k" + std::to_string(i));
    }
    for (auto m : {kc::Similarity::jaccard, kc::Similarity::overlap}) {
      auto s = kc::superposition(kwset(a), kwset(b), m);
      EXPECT_EQ(s.kept + s.added, b.size());
      EXPECT_EQ(s.kept + s.dropped, a.size());
      EXPECT_GE(s.similarity, 0.0);
      EXPECT_LE(s.similarity, 1.0);
    }
  }
}

TEST(Superposition, MapAndCsv) {
  auto steps = kc::superposition_map({kwset({"a", "b"}, {1998, 2002}), kwset({"b", "c"}, {2003, 2007}),
                                      kwset({"b", "c"}, {2008, 2012})});
  ASSERT_EQ(steps.size(), 2u);
  EXPECT_EQ(kc::superposition_csv(steps),
            "from,to,kept,new,dropped,similarity\n1998-2002,2003-2007,1,1,1,0.3333\n2003-2007,2008-2012,2,0,0,1.0000\n");
  EXPECT_THROW(kc::parse_similarity("cosine"), kc::ValidationError);
}

TEST(Cooccurrence, Examples) {
  auto one = kc::cooccurrence(docs({{"a", "b"}}));
  EXPECT_EQ(one.count("a", "b"), 1u);
  EXPECT_EQ(one.marginal(one.index_of("a")), 1u);
  auto three = kc::cooccurrence(docs({{"a", "b"}, {"a", "b"}, {"a"}}));
  EXPECT_EQ(three.count("a", "b"), 2u);
  EXPECT_EQ(three.count("a", "a"), 3u);
  EXPECT_EQ(three.count("b", "b"), 2u);
  auto single = kc::cooccurrence(docs({{"solo"}}));
  EXPECT_TRUE(single.cooccurring(0).empty());
  EXPECT_THROW(single.index_of("zzz"), kc::LookupError);
}

TEST(Cooccurrence, MatchesPairCountsOnRandomCorpora) {
  std::mt19937 rng(23);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::vector<std::string>> kws;
    for (int d = 0; d < 25; ++d) {
      std::vector<std::string> k;
      for (int i = 0; i < 8; ++i)
        if (rng() % 4 == 0) k.push_back("w" + std::to_string(i));
      kws.push_back(k);
    }
    auto m = kc::cooccurrence(docs(kws));
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j) {
        std::size_t both = 0;
        for (const auto& k : kws)
          both += std::count(k.begin(), k.end(), m.keyword(i)) && std::count(k.begin(), k.end(), m.keyword(j));
        EXPECT_EQ(m.count(i, j), both);
        EXPECT_EQ(m.count(i, j), m.count(j, i));
        double e = kc::equivalence_index(m, i, j);
        EXPECT_GE(e, 0.0);
        EXPECT_LE(e, 1.0);
      }
  }
}

TEST(EquivalenceIndex, Examples) {
  EXPECT_DOUBLE_EQ(kc::equivalence_index(2, 4, 2), 0.5);
  EXPECT_DOUBLE_EQ(kc::equivalence_index(3, 3, 3), 1.0);
  EXPECT_DOUBLE_EQ(kc::equivalence_index(0, 3, 5), 0.0);
  EXPECT_THROW(kc::equivalence_index(0, 0, 5), kc::DomainError);
}

TEST(Themes, DisjointCliquesAndSingleEdge) {
  auto m = kc::cooccurrence(docs({{"a", "b", "c"}, {"a", "b", "c"}, {"x", "y"}, {"x", "y"}}));
  auto themes = kc::detect_themes(m);
  ASSERT_EQ(themes.size(), 2u);
  EXPECT_EQ(themes[0].members, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(themes[1].members, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(themes[0].article_count, 2u);
  EXPECT_DOUBLE_EQ(themes[0].internal_density, 1.0);
  EXPECT_DOUBLE_EQ(themes[0].external_centrality, 0.0);

  auto edge = kc::detect_themes(kc::cooccurrence(docs({{"p", "q"}})));
  ASSERT_EQ(edge.size(), 1u);
  EXPECT_EQ(edge[0].members, (std::vector<std::string>{"p", "q"}));
  EXPECT_EQ(edge[0].label, "p");
}

// Two blocks of three keywords with one weak cross link: the blocks come back.
TEST(Themes, PlantedBlocks) {
  std::vector<std::vector<std::string>> kws;
  for (int i = 0; i < 4; ++i) kws.push_back({"a1", "a2", "a3"});
  for (int i = 0; i < 4; ++i) kws.push_back({"b1", "b2", "b3"});
  kws.push_back({"a1", "b1"});
  kc::ThemeOptions opt;
  opt.max_theme_size = 3;
  auto themes = kc::detect_themes(kc::cooccurrence(docs(kws)), opt);
  ASSERT_EQ(themes.size(), 2u);
  std::set<std::vector<std::string>> got{themes[0].members, themes[1].members};
  std::set<std::vector<std::string>> want{{"a1", "a2", "a3"}, {"b1", "b2", "b3"}};
  EXPECT_EQ(got, want);
  for (const auto& t : themes) EXPECT_GT(t.external_centrality, 0.0);
}

TEST(Themes, KeywordsBelongToAtMostOneTheme) {
  std::mt19937 rng(31);
  for (int t = 0; t < 40; ++t) {
    std::vector<std::vector<std::string>> kws;
    for (int d = 0; d < 30; ++d) {
      std::vector<std::string> k;
      for (int i = 0; i < 12; ++i)
        if (rng() % 5 == 0) k.push_back("w" + std::to_string(i));
      kws.push_back(k);
    }
    kc::ThemeOptions opt;
    opt.max_theme_size = 4;
    auto themes = kc::detect_themes(kc::cooccurrence(docs(kws)), opt);
    std::set<std::string> seen;
    for (const auto& th : themes) {
      EXPECT_GE(th.members.size(), 2u);
      EXPECT_LE(th.members.size(), 4u);
      EXPECT_TRUE(std::find(th.members.begin(), th.members.end(), th.label) != th.members.end());
      for (const auto& mbr : th.members) EXPECT_TRUE(seen.insert(mbr).second);
    }
  }
}

TEST(Themes, OptionsValidated) {
  kc::ThemeOptions bad;
  bad.max_theme_size = 1;
  EXPECT_THROW(bad.validate(), kc::ValidationError);
  bad = {};
  bad.min_e = 0;
  EXPECT_THROW(bad.validate(), kc::ValidationError);
}

kc::Theme theme(std::string label, std::vector<std::string> members) {
  kc::Theme t;
  t.label = std::move(label);
  t.members = std::move(members);
  return t;
}

TEST(InclusionIndex, Examples) {
  EXPECT_NEAR(kc::inclusion_index(theme("a", {"a", "b", "c"}), theme("b", {"b", "c", "d", "e"})), 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(kc::inclusion_index(theme("a", {"a", "b"}), theme("a", {"a", "b"})), 1.0);
  EXPECT_DOUBLE_EQ(kc::inclusion_index(theme("a", {"a"}), theme("z", {"z"})), 0.0);
  EXPECT_THROW(kc::inclusion_index(theme("a", {}), theme("z", {"z"})), kc::DomainError);
}

TEST(Evolution, SolidChainAcrossFourPeriods) {
  std::vector<kc::PeriodThemes> pts;
  int starts[] = {1998, 2003, 2008, 2013};
  for (int s : starts) pts.push_back({{s, s + 4}, {theme("governance", {"governance", "corporate governance"})}});
  auto m = kc::evolution_map(pts, 0.1);
  ASSERT_EQ(m.links.size(), 3u);
  for (const auto& l : m.links) EXPECT_EQ(l.kind, kc::LinkKind::solid);
}

TEST(Evolution, DisjointGenerationsGiveNoLinks) {
  std::vector<kc::PeriodThemes> pts{{{1998, 2002}, {theme("a", {"a", "b"})}}, {{2003, 2007}, {theme("c", {"c", "d"})}}};
  EXPECT_TRUE(kc::evolution_map(pts, 0.1).links.empty());
}

TEST(Evolution, WeakLinksAboveThreshold) {
  std::vector<kc::PeriodThemes> pts{
      {{1998, 2002}, {theme("risk", {"risk", "bank"}), theme("water", {"water", "river", "basin"})}},
      {{2003, 2007}, {theme("security", {"security", "bank"}), theme("flood", {"flood", "basin", "dam", "levee"})}}};
  auto m = kc::evolution_map(pts, 0.5);
  // risk->security shares "bank" (1/2); water->flood shares "basin" (1/3, below 0.5).
  ASSERT_EQ(m.links.size(), 1u);
  EXPECT_EQ(m.links[0].from_label, "risk");
  EXPECT_EQ(m.links[0].to_label, "security");
  EXPECT_EQ(m.links[0].kind, kc::LinkKind::weak);
  EXPECT_DOUBLE_EQ(m.links[0].inclusion, 0.5);
  EXPECT_EQ(kc::evolution_map(pts, 0.3).links.size(), 2u);
}

TEST(ThemesJson, RoundTrip) {
  auto t = theme("risk", {"bank", "risk"});
  t.article_count = 3;
  t.internal_density = 0.1 + 0.2;
  t.external_centrality = 1.0 / 3.0;
  std::vector<kc::PeriodThemes> pts{{{1998, 2002}, {t}}, {{2003, 2007}, {}}};
  auto back = kc::themes_from_json(kc::themes_to_json(pts, {}));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].period, (kc::Period{1998, 2002}));
  EXPECT_EQ(back[0].themes[0].members, t.members);
  EXPECT_EQ(back[0].themes[0].internal_density, t.internal_density);
  EXPECT_THROW(kc::themes_from_json(nlohmann::json::object()), kc::ParseError);
}

}  // namespace
