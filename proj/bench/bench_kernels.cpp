// Serial reference vs OpenMP kernels on scaled-up fixture data.

#include <benchmark/benchmark.h>

#include <random>

#include "swcat/extraction.hpp"
#include "swcat/fixture.hpp"
#include "swcat/mentions.hpp"
#include "swcat/profiles.hpp"

using namespace swcat;

namespace {

struct Data {
  Corpus corpus;
  RuleConfig rules;
  std::vector<SoftwareRecord> catalog;
  Lexicon lexicon;
};

const Data& data() {
  static const Data d = [] {
    auto fx = generate_fixture({.seed = 42, .usage_publications = 20000});
    Corpus corpus(fx.publications);
    auto rules = RuleConfig::defaults();
    auto cands = merge_candidates(extract_corpus(corpus, rules));
    auto catalog = import_portal_records(fx.portals, apply_curation(cands, fx.curation).accepted).catalog;
    auto lex = Lexicon::compile(catalog, rules.common_words, rules.triggers);
    return Data{std::move(corpus), std::move(rules), std::move(catalog), std::move(lex)};
  }();
  return d;
}

// Many software records over a shared publication pool so the all-pairs
// similarity pass dominates.
struct ProfileData {
  std::vector<SoftwareRecord> catalog;
  MentionIndex index;
};

const ProfileData& profile_data() {
  static const ProfileData p = [] {
    ProfileData out;
    std::mt19937_64 rng(7);
    const auto& pubs = data().corpus.records();
    for (int i = 0; i < 1500; ++i) {
      SoftwareRecord r;
      r.sw_id = "swm:tool-" + std::to_string(i);
      r.name = "Tool" + std::to_string(i);
      out.catalog.push_back(r);
      int refs = 1 + static_cast<int>(rng() % 40);
      for (int k = 0; k < refs; ++k) out.index.add(r.sw_id, pubs[rng() % pubs.size()].pub_id);
    }
    return out;
  }();
  return p;
}

void BM_ExtractSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(extract_corpus_serial(data().corpus, data().rules));
}

void BM_ExtractParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_corpus(data().corpus, data().rules, Parallelism{static_cast<int>(state.range(0))}));
  }
}

void BM_MentionIndexSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_mention_index_serial(data().corpus, data().lexicon));
}

void BM_MentionIndexParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        build_mention_index(data().corpus, data().lexicon, Parallelism{static_cast<int>(state.range(0))}));
  }
}

void BM_ProfilesSerial(benchmark::State& state) {
  const auto& p = profile_data();
  for (auto _ : state) benchmark::DoNotOptimize(build_profiles_serial(p.catalog, p.index, data().corpus));
}

void BM_ProfilesParallel(benchmark::State& state) {
  const auto& p = profile_data();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        build_profiles(p.catalog, p.index, data().corpus, {}, Parallelism{static_cast<int>(state.range(0))}));
  }
}

}  // namespace

BENCHMARK(BM_ExtractSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractParallel)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MentionIndexSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MentionIndexParallel)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ProfilesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProfilesParallel)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
