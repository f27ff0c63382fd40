#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swcat/corpus.hpp"
#include "swcat/mentions.hpp"
#include "swcat/parallel.hpp"

namespace swcat {

struct KeywordWeight {
  std::string keyword;
  int weight = 0;

  bool operator==(const KeywordWeight&) const = default;
};

/// Two-digit MSC section -> number of referencing publications classified in it.
using MscDistribution = std::map<std::string, int>;

double msc_frequency(const MscDistribution& dist, std::string_view section);

struct SimilarSoftware {
  std::string sw_id;
  double score = 0.0;

  bool operator==(const SimilarSoftware&) const = default;
};

struct SoftwareProfile {
  std::string sw_id;
  std::vector<KeywordWeight> keyword_cloud;
  MscDistribution msc_distribution;
  std::map<int, int> references_by_year;
  int total_references = 0;
  bool quality_ok = false;
  std::vector<SimilarSoftware> similar;

  bool operator==(const SoftwareProfile&) const = default;
};

using ProfileMap = std::map<std::string, SoftwareProfile>;

struct SimilarityWeights {
  double publications = 0.5;  // Jaccard over referencing publications
  double classification = 0.5;  // cosine over MSC section counts
};

struct ProfileOptions {
  std::size_t cloud_size = 50;
  std::size_t similar_k = 10;
  SimilarityWeights weights;
};

/// Keyword -> number of referencing publications listing it. Counting is on
/// trimmed, case-folded keywords; the label is the most frequent spelling
/// (ties: first seen in pub_id order). Sorted by weight desc, keyword asc.
std::vector<KeywordWeight> build_keyword_cloud(std::string_view sw_id, const MentionIndex& index,
                                               const Corpus& corpus, std::size_t cloud_size = 50);

/// Each referencing publication counts once per distinct section.
MscDistribution build_msc_distribution(std::string_view sw_id, const MentionIndex& index,
                                       const Corpus& corpus);

std::map<int, int> build_timeseries(std::string_view sw_id, const MentionIndex& index,
                                    const Corpus& corpus);

/// A peer-reviewed reference, or a listing on a portal.
bool passes_quality_filter(const SoftwareRecord& record, const MentionIndex& index,
                           const Corpus& corpus);

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);
double cosine(const MscDistribution& a, const MscDistribution& b);

/// weights.publications * Jaccard + weights.classification * cosine, clamped
/// to [0, 1]. Throws Error(SelfComparison) when a == b.
double similarity(std::string_view a, std::string_view b, const MentionIndex& index,
                  const ProfileMap& profiles, SimilarityWeights weights = {});

/// The k best other software with score > 0; ties by sw_id.
std::vector<SimilarSoftware> top_similar(std::string_view sw_id, const MentionIndex& index,
                                         const ProfileMap& profiles, std::size_t k,
                                         SimilarityWeights weights = {});

/// Full profiles for every catalog record. Per-record profiles and the
/// all-pairs similarity pass run in parallel.
ProfileMap build_profiles(std::span<const SoftwareRecord> catalog, const MentionIndex& index,
                          const Corpus& corpus, const ProfileOptions& options = {},
                          Parallelism par = {});
/// Single-threaded reference for build_profiles.
ProfileMap build_profiles_serial(std::span<const SoftwareRecord> catalog, const MentionIndex& index,
                                 const Corpus& corpus, const ProfileOptions& options = {});

}  // namespace swcat
