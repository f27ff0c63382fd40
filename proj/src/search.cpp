#include "swcat/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "swcat/error.hpp"
#include "swcat/text.hpp"

namespace swcat {

namespace {

int name_boost(const SoftwareRecord& rec, const std::string& needle) {
  int best = 0;
  auto consider = [&](std::string_view raw) {
    std::string n = text::normalize_name(raw);
    if (n == needle) {
      best = std::max(best, 3);
    } else if (n.starts_with(needle)) {
      best = std::max(best, 2);
    } else if (n.find(needle) != std::string::npos) {
      best = std::max(best, 1);
    }
  };
  consider(rec.name);
  for (const auto& a : rec.aliases) consider(a);
  return best;
}

bool matches_text(const SoftwareRecord& rec, const SoftwareProfile& prof, const std::string& needle) {
  for (const auto& k : prof.keyword_cloud) {
    if (text::normalize_name(k.keyword).find(needle) != std::string::npos) return true;
  }
  return text::normalize_name(rec.description).find(needle) != std::string::npos;
}

double rank_score(int boost, const SoftwareProfile& prof) {
  return boost + std::log1p(static_cast<double>(prof.total_references));
}

bool name_before(const SoftwareRecord& a, const SoftwareRecord& b) {
  std::string na = text::normalize_name(a.name);
  std::string nb = text::normalize_name(b.name);
  if (na != nb) return na < nb;
  if (a.name != b.name) return a.name < b.name;
  return a.sw_id < b.sw_id;
}

void rank(std::vector<SearchHit>& hits) {
  std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return name_before(*a.record, *b.record);
  });
}

bool visible(const SoftwareProfile& prof, bool include_unfiltered_quality) {
  return include_unfiltered_quality || prof.quality_ok;
}

bool is_section_key(std::string_view s) {
  return s.size() == 2 && text::is_ascii_digit(s[0]) && text::is_ascii_digit(s[1]);
}

bool has_author(const IndexSnapshot& snap, std::string_view sw_id, const std::string& needle) {
  for (const auto& pub_id : snap.index.publications_of(sw_id)) {
    auto it = snap.publications.find(pub_id);
    if (it == snap.publications.end()) continue;
    for (const auto& a : it->second.authors) {
      if (text::normalize_name(a).find(needle) != std::string::npos) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<SearchHit> simple_search(const IndexSnapshot& snap, std::string_view q,
                                     bool include_unfiltered_quality) {
  std::string needle = text::normalize_name(q);
  if (needle.empty()) throw Error(ErrorCode::EmptyQuery, "query is empty");
  std::vector<SearchHit> hits;
  for (const auto& rec : snap.catalog) {
    const SoftwareProfile& prof = snap.profile(rec.sw_id);
    if (!visible(prof, include_unfiltered_quality)) continue;
    int boost = name_boost(rec, needle);
    if (boost == 0 && !matches_text(rec, prof, needle)) continue;
    hits.push_back({&rec, rank_score(boost, prof), boost});
  }
  rank(hits);
  return hits;
}

bool SearchQuery::has_criteria() const {
  auto set = [](const std::optional<std::string>& s) { return s && !text::trim_view(*s).empty(); };
  return set(q) || set(name) || set(keyword) || set(msc_section) || set(author) || year_from ||
         year_to;
}

void SearchQuery::validate() const {
  if (page < 1) throw Error(ErrorCode::InvalidQuery, "page must be at least 1");
  if (per_page < 1 || per_page > 100) {
    throw Error(ErrorCode::InvalidQuery, "per_page must be between 1 and 100");
  }
  if (msc_section && !text::trim_view(*msc_section).empty() &&
      !is_section_key(text::trim_view(*msc_section))) {
    throw Error(ErrorCode::InvalidQuery, "msc section must be two digits: '" + *msc_section + "'");
  }
  if (year_from && year_to && *year_from > *year_to) {
    throw Error(ErrorCode::InvalidQuery, "year_from is after year_to");
  }
}

std::vector<SearchHit> advanced_search(const IndexSnapshot& snap, const SearchQuery& query) {
  if (!query.has_criteria()) throw Error(ErrorCode::NoCriteria, "no search criteria given");
  query.validate();
  auto norm = [](const std::optional<std::string>& s) -> std::optional<std::string> {
    if (!s) return std::nullopt;
    std::string n = text::normalize_name(*s);
    if (n.empty()) return std::nullopt;
    return n;
  };
  const auto q = norm(query.q);
  const auto name = norm(query.name);
  const auto keyword = norm(query.keyword);
  const auto author = norm(query.author);
  std::optional<std::string> section;
  if (query.msc_section && !text::trim_view(*query.msc_section).empty()) {
    section = text::trim(*query.msc_section);
  }

  std::vector<SearchHit> hits;
  for (const auto& rec : snap.catalog) {
    const SoftwareProfile& prof = snap.profile(rec.sw_id);
    if (!visible(prof, query.include_unfiltered_quality)) continue;
    int boost = 0;
    if (q) {
      int b = name_boost(rec, *q);
      if (b == 0 && !matches_text(rec, prof, *q)) continue;
      boost = std::max(boost, b);
    }
    if (name) {
      int b = name_boost(rec, *name);
      if (b == 0) continue;
      boost = std::max(boost, b);
    }
    if (keyword && std::none_of(prof.keyword_cloud.begin(), prof.keyword_cloud.end(),
                                [&](const KeywordWeight& k) {
                                  return text::normalize_name(k.keyword) == *keyword;
                                })) {
      continue;
    }
    if (section && !prof.msc_distribution.count(*section)) continue;
    if (author && !has_author(snap, rec.sw_id, *author)) continue;
    if (query.year_from || query.year_to) {
      int lo = query.year_from.value_or(std::numeric_limits<int>::min());
      int hi = query.year_to.value_or(std::numeric_limits<int>::max());
      auto it = prof.references_by_year.lower_bound(lo);
      if (it == prof.references_by_year.end() || it->first > hi) continue;
    }
    hits.push_back({&rec, rank_score(boost, prof), boost});
  }
  rank(hits);
  return hits;
}

std::vector<BrowseEntry> browse(const IndexSnapshot& snap, BrowseDimension dim, std::string_view key,
                                bool include_unfiltered_quality) {
  std::vector<BrowseEntry> out;
  if (dim == BrowseDimension::MscSection) {
    if (!is_section_key(key)) {
      throw Error(ErrorCode::InvalidKey, "msc section must be two digits: '" + std::string(key) + "'");
    }
    std::string section(key);
    for (const auto& rec : snap.catalog) {
      const SoftwareProfile& prof = snap.profile(rec.sw_id);
      if (!visible(prof, include_unfiltered_quality)) continue;
      auto it = prof.msc_distribution.find(section);
      if (it != prof.msc_distribution.end()) out.push_back({&rec, it->second});
    }
    std::sort(out.begin(), out.end(), [](const BrowseEntry& a, const BrowseEntry& b) {
      if (a.count != b.count) return a.count > b.count;
      return name_before(*a.record, *b.record);
    });
    return out;
  }
  if (key.size() != 1 || !text::is_ascii_alnum(key[0])) {
    throw Error(ErrorCode::InvalidKey, "browse key must be one letter or digit: '" + std::string(key) + "'");
  }
  const char want = text::to_lower(key[0]);
  for (const auto& rec : snap.catalog) {
    const SoftwareProfile& prof = snap.profile(rec.sw_id);
    if (!visible(prof, include_unfiltered_quality)) continue;
    std::string n = text::normalize_name(rec.name);
    if (!n.empty() && n[0] == want) out.push_back({&rec, prof.total_references});
  }
  std::sort(out.begin(), out.end(), [](const BrowseEntry& a, const BrowseEntry& b) {
    return name_before(*a.record, *b.record);
  });
  return out;
}

std::vector<SectionStat> section_stats(const IndexSnapshot& snap) {
  std::map<std::string, SectionStat> by_section;
  for (const auto& [id, prof] : snap.profiles) {
    for (const auto& [section, count] : prof.msc_distribution) {
      SectionStat& s = by_section[section];
      s.section = section;
      s.reference_count += count;
      if (prof.quality_ok) ++s.software_count;
    }
  }
  std::vector<SectionStat> out;
  for (auto& [_, s] : by_section) out.push_back(std::move(s));
  std::sort(out.begin(), out.end(), [](const SectionStat& a, const SectionStat& b) {
    if (a.software_count != b.software_count) return a.software_count > b.software_count;
    if (a.reference_count != b.reference_count) return a.reference_count > b.reference_count;
    return a.section < b.section;
  });
  return out;
}

std::vector<const PublicationSummary*> referencing_publications(const IndexSnapshot& snap,
                                                                std::string_view sw_id) {
  std::vector<const PublicationSummary*> out;
  for (const auto& pub_id : snap.index.publications_of(sw_id)) {
    auto it = snap.publications.find(pub_id);
    if (it != snap.publications.end()) out.push_back(&it->second);
  }
  std::sort(out.begin(), out.end(), [](const PublicationSummary* a, const PublicationSummary* b) {
    return a->year != b->year ? a->year > b->year : a->pub_id < b->pub_id;
  });
  return out;
}

}  // namespace swcat
