#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "swcat/error.hpp"
#include "swcat/extraction.hpp"
#include "swcat/fixture.hpp"
#include "swcat/profiles.hpp"
#include "swcat/text.hpp"

using namespace swcat;

namespace {

PublicationRecord pub(const std::string& id, std::vector<std::string> keywords, std::vector<std::string> msc,
                      int year = 2010, bool peer = true, PublicationSource src = PublicationSource::Reviewed) {
  PublicationRecord p;
  p.pub_id = id;
  p.title = id;
  p.keywords = std::move(keywords);
  p.msc_codes = std::move(msc);
  p.year = year;
  p.peer_reviewed = peer;
  p.source = src;
  return p;
}

SoftwareRecord sw(const std::string& id, Provenance prov = Provenance::PublicationDerived) {
  SoftwareRecord r;
  r.sw_id = id;
  r.name = id.substr(4);
  r.provenance = prov;
  return r;
}

MentionIndex index_of(std::initializer_list<std::pair<const char*, const char*>> pairs) {
  MentionIndex idx;
  for (auto [s, p] : pairs) idx.add(s, p);
  return idx;
}

}  // namespace

TEST(Cloud, CountsReferencingPublications) {
  Corpus corpus({pub("p1", {"Groebner bases", "ideal"}, {}), pub("p2", {"Groebner bases"}, {}),
                 pub("p3", {"primary decomposition"}, {}), pub("p4", {"unrelated"}, {})});
  auto idx = index_of({{"swm:s", "p1"}, {"swm:s", "p2"}, {"swm:s", "p3"}});
  auto cloud = build_keyword_cloud("swm:s", idx, corpus);
  EXPECT_EQ(cloud, (std::vector<KeywordWeight>{{"Groebner bases", 2}, {"ideal", 1}, {"primary decomposition", 1}}));
  EXPECT_TRUE(build_keyword_cloud("swm:none", idx, corpus).empty());
}

TEST(Cloud, CaseFoldedCountingMostFrequentLabel) {
  Corpus corpus({pub("p1", {"groebner bases"}, {}), pub("p2", {"Groebner bases"}, {}), pub("p3", {"Groebner bases"}, {})});
  auto idx = index_of({{"swm:s", "p1"}, {"swm:s", "p2"}, {"swm:s", "p3"}});
  EXPECT_EQ(build_keyword_cloud("swm:s", idx, corpus), (std::vector<KeywordWeight>{{"Groebner bases", 3}}));
}

TEST(Cloud, TruncatesByWeightThenKeyword) {
  std::vector<PublicationRecord> pubs;
  MentionIndex idx;
  std::vector<std::string> all;
  for (int i = 0; i < 60; ++i) {
    char kw[8];
    std::snprintf(kw, sizeof kw, "k%02d", i);
    all.push_back(kw);
  }
  pubs.push_back(pub("p0", all, {}));
  pubs.push_back(pub("p1", {"k59"}, {}));
  idx.add("swm:s", "p0");
  idx.add("swm:s", "p1");
  auto cloud = build_keyword_cloud("swm:s", idx, Corpus(pubs), 50);
  ASSERT_EQ(cloud.size(), 50u);
  EXPECT_EQ(cloud[0], (KeywordWeight{"k59", 2}));
  EXPECT_EQ(cloud[1].keyword, "k00");
  EXPECT_EQ(cloud[49].keyword, "k48");
}

TEST(Msc, TwoDigitSections) {
  Corpus corpus({pub("p1", {}, {"13P10", "14Q05"}), pub("p2", {}, {"13A50"})});
  auto idx = index_of({{"swm:s", "p1"}, {"swm:s", "p2"}});
  auto dist = build_msc_distribution("swm:s", idx, corpus);
  EXPECT_EQ(dist, (MscDistribution{{"13", 2}, {"14", 1}}));
  EXPECT_DOUBLE_EQ(msc_frequency(dist, "13"), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(msc_frequency(dist, "65"), 0.0);
}

TEST(Msc, SectionCountedOncePerPublication) {
  Corpus corpus({pub("p1", {}, {"13P10", "13A50"})});
  auto idx = index_of({{"swm:s", "p1"}});
  auto dist = build_msc_distribution("swm:s", idx, corpus);
  EXPECT_EQ(dist, (MscDistribution{{"13", 1}}));
  EXPECT_DOUBLE_EQ(msc_frequency(dist, "13"), 1.0);
}

TEST(Timeseries, CountsByYear) {
  Corpus corpus({pub("p1", {}, {}, 2010), pub("p2", {}, {}, 2010), pub("p3", {}, {}, 2012)});
  auto idx = index_of({{"swm:s", "p1"}, {"swm:s", "p2"}, {"swm:s", "p3"}});
  EXPECT_EQ(build_timeseries("swm:s", idx, corpus), (std::map<int, int>{{2010, 2}, {2012, 1}}));
  EXPECT_TRUE(build_timeseries("swm:x", idx, corpus).empty());
}

TEST(Quality, Filter) {
  Corpus corpus({pub("peer", {}, {}), pub("rep", {}, {}, 2010, false, PublicationSource::Report)});
  auto idx = index_of({{"swm:a", "peer"}, {"swm:b", "rep"}});
  EXPECT_TRUE(passes_quality_filter(sw("swm:a"), idx, corpus));
  EXPECT_FALSE(passes_quality_filter(sw("swm:b", Provenance::WebHeuristic), idx, corpus));
  EXPECT_TRUE(passes_quality_filter(sw("swm:c", Provenance::PortalListed), idx, corpus));
  EXPECT_FALSE(passes_quality_filter(sw("swm:c"), idx, corpus));
}

TEST(Similarity, WorkedExample) {
  auto idx = index_of({{"swm:a", "p1"}, {"swm:a", "p2"}, {"swm:b", "p2"}, {"swm:b", "p3"}});
  ProfileMap profiles;
  profiles["swm:a"].msc_distribution = {{"13", 2}, {"14", 1}};
  profiles["swm:b"].msc_distribution = {{"13", 2}, {"14", 1}};
  EXPECT_NEAR(similarity("swm:a", "swm:b", idx, profiles), 2.0 / 3.0, 1e-12);
  EXPECT_EQ(similarity("swm:a", "swm:b", idx, profiles), similarity("swm:b", "swm:a", idx, profiles));
}

TEST(Similarity, Extremes) {
  auto idx = index_of({{"swm:a", "p1"}, {"swm:b", "p2"}, {"swm:c", "p1"}});
  ProfileMap profiles;
  profiles["swm:a"].msc_distribution = {{"13", 1}};
  profiles["swm:b"].msc_distribution = {{"65", 3}};
  profiles["swm:c"].msc_distribution = {{"13", 1}};
  EXPECT_EQ(similarity("swm:a", "swm:b", idx, profiles), 0.0);
  EXPECT_NEAR(similarity("swm:a", "swm:c", idx, profiles), 1.0, 1e-15);
  EXPECT_LE(similarity("swm:a", "swm:c", idx, profiles), 1.0);
}

TEST(Similarity, SelfComparisonRejected) {
  ProfileMap profiles;
  MentionIndex idx;
  try {
    similarity("swm:a", "swm:a", idx, profiles);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SelfComparison);
  }
}

TEST(TopSimilar, ExcludesZeroAndBreaksTiesById) {
  auto idx = index_of({{"swm:a", "p1"}, {"swm:c", "p1"}, {"swm:b", "p1"}, {"swm:z", "p9"}});
  ProfileMap profiles;
  for (auto id : {"swm:a", "swm:b", "swm:c", "swm:z"}) profiles[id].sw_id = id;
  auto top = top_similar("swm:a", idx, profiles, 10);
  ASSERT_EQ(top.size(), 2u);
  EXPECT_EQ(top[0].sw_id, "swm:b");
  EXPECT_EQ(top[1].sw_id, "swm:c");
  EXPECT_EQ(top_similar("swm:a", idx, profiles, 1).size(), 1u);

  ProfileMap lonely;
  lonely["swm:a"].sw_id = "swm:a";
  EXPECT_TRUE(top_similar("swm:a", idx, lonely, 10).empty());
}

namespace {

struct FixtureProfiles {
  Fixture fx;
  Corpus corpus;
  std::vector<SoftwareRecord> catalog;
  MentionIndex index;
  ProfileMap profiles;
};

const FixtureProfiles& fixture_profiles() {
  static const FixtureProfiles fp = [] {
    FixtureProfiles f;
    f.fx = generate_fixture();
    f.corpus = Corpus(f.fx.publications);
    auto cfg = RuleConfig::defaults();
    auto cands = merge_candidates(extract_corpus(f.corpus, cfg));
    f.catalog = apply_curation(cands, f.fx.curation).accepted;
    f.catalog = import_portal_records(f.fx.portals, f.catalog).catalog;
    auto lex = Lexicon::compile(f.catalog, cfg.common_words, cfg.triggers);
    f.index = build_mention_index(f.corpus, lex);
    f.profiles = build_profiles(f.catalog, f.index, f.corpus);
    return f;
  }();
  return fp;
}

}  // namespace

TEST(Profiles, FixtureArithmetic) {
  const auto& f = fixture_profiles();
  ASSERT_EQ(f.profiles.size(), f.catalog.size());
  for (const auto& r : f.catalog) {
    const auto& p = f.profiles.at(r.sw_id);
    auto want = oracle::keyword_counts(r.sw_id, f.index, f.corpus);
    ASSERT_EQ(p.keyword_cloud.size(), std::min<std::size_t>(want.size(), 50));
    for (const auto& kw : p.keyword_cloud) EXPECT_EQ(kw.weight, want.at(oracle::lower(kw.keyword))) << kw.keyword;
    int sum = 0;
    for (const auto& [_, c] : p.references_by_year) sum += c;
    EXPECT_EQ(sum, p.total_references);
    EXPECT_EQ(static_cast<std::size_t>(p.total_references), f.index.publications_of(r.sw_id).size());
  }
}

TEST(Profiles, FixtureSimilarityProperties) {
  const auto& f = fixture_profiles();
  for (const auto& a : f.catalog) {
    for (const auto& b : f.catalog) {
      if (a.sw_id == b.sw_id) {
        EXPECT_THROW(similarity(a.sw_id, b.sw_id, f.index, f.profiles), Error);
        continue;
      }
      double ab = similarity(a.sw_id, b.sw_id, f.index, f.profiles);
      EXPECT_EQ(ab, similarity(b.sw_id, a.sw_id, f.index, f.profiles));
      EXPECT_GE(ab, 0.0);
      EXPECT_LE(ab, 1.0);
    }
    for (const auto& s : f.profiles.at(a.sw_id).similar) {
      EXPECT_NE(s.sw_id, a.sw_id);
      EXPECT_GT(s.score, 0.0);
    }
  }
}

TEST(Profiles, FixtureQualityFlags) {
  const auto& f = fixture_profiles();
  int failing = 0;
  for (const auto& r : f.catalog) {
    bool ok = f.profiles.at(r.sw_id).quality_ok;
    if (!ok) {
      ++failing;
      EXPECT_EQ(text::normalize_name(r.name), text::normalize_name(f.fx.report_only));
    }
    if (r.name == f.fx.portal_only) {
      EXPECT_TRUE(ok);
      EXPECT_EQ(f.profiles.at(r.sw_id).total_references, 0);
    }
  }
  EXPECT_EQ(failing, 1);
}

TEST(Profiles, ParallelMatchesSerial) {
  const auto& f = fixture_profiles();
  auto serial = build_profiles_serial(f.catalog, f.index, f.corpus);
  for (int threads : {1, 2, 4, 8}) EXPECT_EQ(build_profiles(f.catalog, f.index, f.corpus, {}, Parallelism{threads}), serial);
}
