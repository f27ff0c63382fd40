#include "swcat/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "swcat/error.hpp"
#include "swcat/text.hpp"

namespace swcat {

double msc_frequency(const MscDistribution& dist, std::string_view section) {
  long long total = 0;
  for (const auto& [_, c] : dist) total += c;
  auto it = dist.find(std::string(section));
  if (total == 0 || it == dist.end()) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total);
}

std::vector<KeywordWeight> build_keyword_cloud(std::string_view sw_id, const MentionIndex& index,
                                               const Corpus& corpus, std::size_t cloud_size) {
  struct Tally {
    int weight = 0;
    // surface -> (occurrences, first-seen rank)
    std::map<std::string, std::pair<int, std::size_t>> surfaces;
  };
  std::map<std::string, Tally> tallies;
  std::size_t rank = 0;
  for (const auto& pub_id : index.publications_of(sw_id)) {
    const PublicationRecord* pub = corpus.find(pub_id);
    if (pub == nullptr) continue;
    std::set<std::string> seen_here;
    for (const auto& raw : pub->keywords) {
      std::string surface = text::trim(raw);
      if (surface.empty()) continue;
      std::string key = text::ascii_lower(surface);
      Tally& t = tallies[key];
      if (seen_here.insert(key).second) ++t.weight;
      auto [it, inserted] = t.surfaces.emplace(surface, std::make_pair(0, rank));
      if (inserted) ++rank;
      ++it->second.first;
    }
  }

  std::vector<KeywordWeight> cloud;
  cloud.reserve(tallies.size());
  for (const auto& [key, t] : tallies) {
    const std::string* best = nullptr;
    std::pair<int, std::size_t> best_stat{0, 0};
    for (const auto& [surface, stat] : t.surfaces) {
      if (best == nullptr || stat.first > best_stat.first ||
          (stat.first == best_stat.first && stat.second < best_stat.second)) {
        best = &surface;
        best_stat = stat;
      }
    }
    cloud.push_back({*best, t.weight});
  }
  std::sort(cloud.begin(), cloud.end(), [](const KeywordWeight& a, const KeywordWeight& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.keyword < b.keyword;
  });
  if (cloud.size() > cloud_size) cloud.resize(cloud_size);
  return cloud;
}

MscDistribution build_msc_distribution(std::string_view sw_id, const MentionIndex& index,
                                       const Corpus& corpus) {
  MscDistribution dist;
  for (const auto& pub_id : index.publications_of(sw_id)) {
    const PublicationRecord* pub = corpus.find(pub_id);
    if (pub == nullptr) continue;
    std::set<std::string> sections;
    for (const auto& code : pub->msc_codes) sections.insert(msc_section(code));
    for (const auto& s : sections) ++dist[s];
  }
  return dist;
}

std::map<int, int> build_timeseries(std::string_view sw_id, const MentionIndex& index,
                                    const Corpus& corpus) {
  std::map<int, int> years;
  for (const auto& pub_id : index.publications_of(sw_id)) {
    if (const PublicationRecord* pub = corpus.find(pub_id)) ++years[pub->year];
  }
  return years;
}

bool passes_quality_filter(const SoftwareRecord& record, const MentionIndex& index,
                           const Corpus& corpus) {
  if (record.provenance == Provenance::PortalListed) return true;
  for (const auto& pub_id : index.publications_of(record.sw_id)) {
    const PublicationRecord* pub = corpus.find(pub_id);
    if (pub != nullptr && pub->peer_reviewed) return true;
  }
  return false;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

double cosine(const MscDistribution& a, const MscDistribution& b) {
  // Integer accumulation: the result is exact for parallel vectors and does
  // not depend on argument order.
  std::int64_t dot = 0, na = 0, nb = 0;
  for (const auto& [s, c] : a) {
    na += static_cast<std::int64_t>(c) * c;
    auto it = b.find(s);
    if (it != b.end()) dot += static_cast<std::int64_t>(c) * it->second;
  }
  for (const auto& [_, c] : b) nb += static_cast<std::int64_t>(c) * c;
  if (na == 0 || nb == 0) return 0.0;
  double v = static_cast<double>(dot) /
             std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
  return std::clamp(v, 0.0, 1.0);
}

namespace {

const MscDistribution& distribution_of(const ProfileMap& profiles, std::string_view sw_id) {
  static const MscDistribution kEmpty;
  auto it = profiles.find(std::string(sw_id));
  return it == profiles.end() ? kEmpty : it->second.msc_distribution;
}

double combine(double j, double c, SimilarityWeights w) {
  return std::clamp(w.publications * j + w.classification * c, 0.0, 1.0);
}

void sort_similar(std::vector<SimilarSoftware>& v, std::size_t k) {
  std::sort(v.begin(), v.end(), [](const SimilarSoftware& a, const SimilarSoftware& b) {
    return a.score != b.score ? a.score > b.score : a.sw_id < b.sw_id;
  });
  if (v.size() > k) v.resize(k);
}

SoftwareProfile base_profile(const SoftwareRecord& rec, const MentionIndex& index,
                             const Corpus& corpus, const ProfileOptions& options) {
  SoftwareProfile p;
  p.sw_id = rec.sw_id;
  p.keyword_cloud = build_keyword_cloud(rec.sw_id, index, corpus, options.cloud_size);
  p.msc_distribution = build_msc_distribution(rec.sw_id, index, corpus);
  p.references_by_year = build_timeseries(rec.sw_id, index, corpus);
  p.total_references = static_cast<int>(index.publications_of(rec.sw_id).size());
  p.quality_ok = passes_quality_filter(rec, index, corpus);
  return p;
}

}  // namespace

double similarity(std::string_view a, std::string_view b, const MentionIndex& index,
                  const ProfileMap& profiles, SimilarityWeights weights) {
  if (a == b) {
    throw Error(ErrorCode::SelfComparison, "similarity of '" + std::string(a) + "' with itself");
  }
  double j = jaccard(index.publications_of(a), index.publications_of(b));
  double c = cosine(distribution_of(profiles, a), distribution_of(profiles, b));
  return combine(j, c, weights);
}

std::vector<SimilarSoftware> top_similar(std::string_view sw_id, const MentionIndex& index,
                                         const ProfileMap& profiles, std::size_t k,
                                         SimilarityWeights weights) {
  std::vector<SimilarSoftware> out;
  for (const auto& [other, _] : profiles) {
    if (other == sw_id) continue;
    double s = similarity(sw_id, other, index, profiles, weights);
    if (s > 0.0) out.push_back({other, s});
  }
  sort_similar(out, k);
  return out;
}

ProfileMap build_profiles_serial(std::span<const SoftwareRecord> catalog, const MentionIndex& index,
                                 const Corpus& corpus, const ProfileOptions& options) {
  ProfileMap profiles;
  for (const auto& rec : catalog) profiles.emplace(rec.sw_id, base_profile(rec, index, corpus, options));
  for (auto& [id, p] : profiles) {
    p.similar = top_similar(id, index, profiles, options.similar_k, options.weights);
  }
  return profiles;
}

ProfileMap build_profiles(std::span<const SoftwareRecord> catalog, const MentionIndex& index,
                          const Corpus& corpus, const ProfileOptions& options, Parallelism par) {
  const int threads = resolve_threads(par);
  const auto n = static_cast<std::ptrdiff_t>(catalog.size());
  std::vector<SoftwareProfile> base(catalog.size());
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) base[i] = base_profile(catalog[i], index, corpus, options);

  ProfileMap profiles;
  for (auto& p : base) {
    std::string id = p.sw_id;
    profiles.emplace(std::move(id), std::move(p));
  }

  // One row of the pair space per iteration; rows are independent and each
  // keeps only its top k.
  std::vector<const SoftwareProfile*> order;
  std::vector<const std::set<std::string>*> pubs;
  for (const auto& [id, p] : profiles) {
    order.push_back(&p);
    pubs.push_back(&index.publications_of(id));
  }
  const auto m = static_cast<std::ptrdiff_t>(order.size());
  std::vector<std::vector<SimilarSoftware>> similar(order.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    for (std::ptrdiff_t j = 0; j < m; ++j) {
      if (j == i) continue;
      double s = combine(jaccard(*pubs[i], *pubs[j]),
                         cosine(order[i]->msc_distribution, order[j]->msc_distribution),
                         options.weights);
      if (s > 0.0) similar[i].push_back({order[j]->sw_id, s});
    }
    sort_similar(similar[i], options.similar_k);
  }
  std::size_t i = 0;
  for (auto& [_, p] : profiles) p.similar = std::move(similar[i++]);
  return profiles;
}

}  // namespace swcat
