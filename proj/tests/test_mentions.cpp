#include <gtest/gtest.h>

#include "oracles.hpp"
#include "random_corpus.hpp"
#include "swcat/extraction.hpp"
#include "swcat/fixture.hpp"
#include "swcat/mentions.hpp"
#include "tempdir.hpp"

using namespace swcat;

namespace {

SoftwareRecord sw(const std::string& id, const std::string& name, std::vector<std::string> aliases = {}) {
  SoftwareRecord r;
  r.sw_id = id;
  r.name = name;
  r.aliases = std::move(aliases);
  return r;
}

PublicationRecord pub(const std::string& id, const std::string& title, const std::string& abstract_text) {
  PublicationRecord p;
  p.pub_id = id;
  p.title = title;
  p.abstract_text = abstract_text;
  p.year = 2010;
  return p;
}

const WordList& common() {
  static const WordList w = WordList::load(default_common_words_path());
  return w;
}

Lexicon lexicon(const std::vector<SoftwareRecord>& cat) {
  return Lexicon::compile(cat, common(), RuleConfig::default_triggers());
}

const std::vector<SoftwareRecord>& basic_catalog() {
  static const std::vector<SoftwareRecord> cat{sw("swm:singular", "SINGULAR"), sw("swm:maple", "Maple"),
                                               sw("swm:r", "R")};
  return cat;
}

}  // namespace

TEST(Policy, CaseAndAmbiguity) {
  EXPECT_EQ(case_policy_for("SINGULAR"), CasePolicy::StrictCase);
  EXPECT_EQ(case_policy_for("Maple"), CasePolicy::CaseInsensitive);
  EXPECT_EQ(case_policy_for("Z3"), CasePolicy::StrictCase);
  EXPECT_EQ(case_policy_for("deal.II"), CasePolicy::StrictCase);
  EXPECT_EQ(case_policy_for("R"), CasePolicy::CaseInsensitive);
  EXPECT_FALSE(is_ambiguous_pattern("SINGULAR", CasePolicy::StrictCase, common()));
  EXPECT_TRUE(is_ambiguous_pattern("Maple", CasePolicy::CaseInsensitive, common()));
  EXPECT_TRUE(is_ambiguous_pattern("R", CasePolicy::CaseInsensitive, common()));
  EXPECT_TRUE(is_ambiguous_pattern("Z3", CasePolicy::StrictCase, common()));
  EXPECT_FALSE(is_ambiguous_pattern("Bertini", CasePolicy::CaseInsensitive, common()));
}

TEST(Mentions, StrictAbstractMatch) {
  auto lex = lexicon(basic_catalog());
  auto ms = find_mentions(pub("p", "On ideals", "Everything was computed with SINGULAR."), lex);
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].sw_id, "swm:singular");
  EXPECT_EQ(ms[0].field, MentionField::Abstract);
  EXPECT_EQ(ms[0].begin, 29u);
  EXPECT_EQ(ms[0].end, 37u);
}

TEST(Mentions, StrictCaseRejectsOtherSpellings) {
  auto lex = lexicon(basic_catalog());
  EXPECT_TRUE(find_mentions(pub("p", "", "A singular point of the software."), lex).empty());
  EXPECT_TRUE(find_mentions(pub("p", "", "SINGULARITY theory."), lex).empty());
}

TEST(Mentions, AmbiguousNeedsTriggerOrVersion) {
  auto lex = lexicon(basic_catalog());
  EXPECT_TRUE(find_mentions(pub("p", "", "We rested under a maple tree."), lex).empty());
  auto ms = find_mentions(pub("p", "", "Then the Maple package was used."), lex);
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].sw_id, "swm:maple");
  EXPECT_EQ(find_mentions(pub("p", "", "Computed in maple 2021 overnight."), lex).size(), 1u);
  // The trigger must sit in the same sentence.
  EXPECT_TRUE(find_mentions(pub("p", "", "A maple tree. Our software is new."), lex).empty());
  EXPECT_EQ(find_mentions(pub("p", "", "We used R 4.0 here."), lex).size(), 1u);
  EXPECT_TRUE(find_mentions(pub("p", "", "Let R be a ring."), lex).empty());
}

TEST(Mentions, WholeWordBoundaries) {
  auto lex = lexicon({sw("swm:deal-ii", "deal.II"), sw("swm:c", "C++"), sw("swm:pari-gp", "PARI/GP")});
  auto ms = find_mentions(pub("p", "", "Using deal.II, C++ and PARI/GP. Not xdeal.II or deal.IIx or PARI/GPé."), lex);
  ASSERT_EQ(ms.size(), 3u);
  EXPECT_EQ(ms[0].sw_id, "swm:deal-ii");
  EXPECT_EQ(ms[1].sw_id, "swm:c");
  EXPECT_EQ(ms[2].sw_id, "swm:pari-gp");
}

TEST(Mentions, SharedPatternReportsEachOwner) {
  auto lex = lexicon({sw("swm:gap", "GAP"), sw("swm:gap-2", "GAP", {"GAP4"})});
  auto ms = find_mentions(pub("p", "GAP and GAP4", ""), lex);
  ASSERT_EQ(ms.size(), 3u);
}

TEST(Index, AggregatesAsSets) {
  auto lex = lexicon(basic_catalog());
  Corpus corpus({pub("a", "SINGULAR", "SINGULAR and SINGULAR."), pub("b", "", "SINGULAR"), pub("c", "none", "")});
  auto idx = build_mention_index(corpus, lex);
  EXPECT_EQ(idx.publications_of("swm:singular"), (std::set<std::string>{"a", "b"}));
  EXPECT_EQ(idx.pair_count(), 2u);
  EXPECT_TRUE(idx.is_transpose());
  EXPECT_TRUE(idx.publications_of("swm:maple").empty());
  EXPECT_TRUE(build_mention_index(Corpus{}, lex).by_software().empty());
}

TEST(Index, FileRoundTrip) {
  testutil::TempDir dir;
  MentionIndex idx;
  idx.add("swm:a", "p1");
  idx.add("swm:a", "p2");
  idx.add("swm:b", "p2");
  write_mention_index(dir / "m.tsv", idx);
  EXPECT_EQ(read_mention_index(dir / "m.tsv"), idx);
}

TEST(Oracle, FixtureAgrees) {
  auto fx = generate_fixture();
  Corpus corpus(fx.publications);
  std::vector<SoftwareRecord> cat;
  for (const auto& d : fx.curation) {
    if (d.verdict == CurationDecision::Verdict::Accept) cat.push_back(sw("swm:" + d.normalized_name, d.canonical_name));
  }
  auto lex = lexicon(cat);
  auto got = oracle::as_keys(find_all_mentions(corpus, lex));
  auto want = oracle::mentions(corpus, cat, common(), RuleConfig::default_triggers());
  EXPECT_EQ(got, want);
  EXPECT_GT(want.size(), 100u);
}

TEST(Oracle, RandomCorporaAgree) {
  auto triggers = RuleConfig::default_triggers();
  auto words = randgen::common_words();
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    randgen::Generator gen(seed);
    auto cat = gen.catalog();
    auto corpus = gen.corpus(cat, 120);
    auto lex = Lexicon::compile(cat, words, triggers);
    auto got = oracle::as_keys(find_all_mentions(corpus, lex));
    auto want = oracle::mentions(corpus, cat, words, triggers);
    ASSERT_EQ(got, want) << "seed " << seed;
  }
}

// Flipping the case of one letter in a strict-case occurrence removes it.
TEST(Property, StrictCaseMutationDropsMatch) {
  auto lex = lexicon({sw("swm:petsc", "PETSc"), sw("swm:macaulay2", "Macaulay2")});
  for (std::string name : {"PETSc", "Macaulay2"}) {
    for (std::size_t i = 0; i < name.size(); ++i) {
      std::string m = name;
      char& c = m[i];
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
      else if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
      else continue;
      EXPECT_TRUE(find_mentions(pub("p", "", "The " + m + " library."), lex).empty()) << m;
    }
    EXPECT_EQ(find_mentions(pub("p", "", "The " + name + " library."), lex).size(), 1u);
  }
}

// Adding a record never removes the mentions of existing ones.
TEST(Property, MonotoneInCatalog) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    randgen::Generator gen(seed);
    auto cat = gen.catalog();
    auto corpus = gen.corpus(cat, 60);
    auto words = randgen::common_words();
    auto small = std::vector<SoftwareRecord>(cat.begin(), cat.end() - 1);
    auto a = build_mention_index(corpus, Lexicon::compile(small, words, RuleConfig::default_triggers()));
    auto b = build_mention_index(corpus, Lexicon::compile(cat, words, RuleConfig::default_triggers()));
    for (const auto& [sw_id, pubs] : a.by_software()) {
      EXPECT_EQ(pubs, b.publications_of(sw_id)) << "seed " << seed;
    }
  }
}

TEST(Index, ParallelMatchesSerial) {
  auto fx = generate_fixture({.seed = 9, .usage_publications = 600});
  Corpus corpus(fx.publications);
  std::vector<SoftwareRecord> cat;
  for (const auto& p : fx.planted) cat.push_back(sw("swm:" + p.normalized_name, p.name));
  auto lex = lexicon(cat);
  auto serial = build_mention_index_serial(corpus, lex);
  for (int threads : {1, 2, 4, 8}) {
    auto par = build_mention_index(corpus, lex, Parallelism{threads});
    EXPECT_EQ(par, serial);
    EXPECT_TRUE(par.is_transpose());
  }
}
