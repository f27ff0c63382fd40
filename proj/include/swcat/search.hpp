#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swcat/snapshot.hpp"

namespace swcat {

struct SearchHit {
  const SoftwareRecord* record = nullptr;
  double score = 0.0;
  int name_boost = 0;  // 3 exact, 2 prefix, 1 substring, 0 otherwise
};

/// Case-insensitive match of q against name, aliases, cloud keywords and
/// description, ranked by name_boost + ln(1 + total_references); ties by
/// name, then sw_id. Throws Error(EmptyQuery).
std::vector<SearchHit> simple_search(const IndexSnapshot& snap, std::string_view q,
                                     bool include_unfiltered_quality = false);

struct SearchQuery {
  std::optional<std::string> q;
  std::optional<std::string> name;
  std::optional<std::string> keyword;      // exact, case-folded cloud keyword
  std::optional<std::string> msc_section;  // two digits
  std::optional<std::string> author;       // case-folded substring
  std::optional<int> year_from;
  std::optional<int> year_to;
  bool include_unfiltered_quality = false;
  int page = 1;
  int per_page = 20;

  bool has_criteria() const;
  /// Throws Error(InvalidQuery) on page < 1, per_page outside [1, 100], a
  /// malformed section or an inverted year range.
  void validate() const;
};

/// Conjunction of the set criteria, ranked as simple_search. Unpaginated.
/// Throws Error(NoCriteria).
std::vector<SearchHit> advanced_search(const IndexSnapshot& snap, const SearchQuery& query);

enum class BrowseDimension { MscSection, AlphaPrefix };

struct BrowseEntry {
  const SoftwareRecord* record = nullptr;
  int count = 0;  // section count for MscSection, total references for AlphaPrefix
};

/// MscSection: records whose distribution contains the section, by that
/// count descending then name. AlphaPrefix: names starting with the letter
/// or digit, by name. Quality-failing records are hidden unless asked for.
/// Throws Error(InvalidKey).
std::vector<BrowseEntry> browse(const IndexSnapshot& snap, BrowseDimension dim, std::string_view key,
                                bool include_unfiltered_quality = false);

struct SectionStat {
  std::string section;
  int software_count = 0;   // quality-passing software with the section
  int reference_count = 0;  // summed distribution counts
};

/// Every section present in the snapshot, by software_count descending, then
/// reference_count descending, then section.
std::vector<SectionStat> section_stats(const IndexSnapshot& snap);

/// Publications referencing sw_id, year descending then pub_id.
std::vector<const PublicationSummary*> referencing_publications(const IndexSnapshot& snap,
                                                                std::string_view sw_id);

template <typename T>
struct Page {
  std::vector<T> items;
  std::size_t total = 0;
  int page = 1;
  int per_page = 20;
};

template <typename T>
Page<T> paginate(const std::vector<T>& all, int page, int per_page) {
  Page<T> out;
  out.total = all.size();
  out.page = page;
  out.per_page = per_page;
  std::size_t first = static_cast<std::size_t>(page - 1) * static_cast<std::size_t>(per_page);
  for (std::size_t i = first; i < all.size() && i < first + static_cast<std::size_t>(per_page); ++i) {
    out.items.push_back(all[i]);
  }
  return out;
}

}  // namespace swcat
