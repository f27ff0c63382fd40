#include "swcat/api.hpp"

#include <charconv>
#include <json.hpp>
#include <optional>
#include <string_view>

#include "swcat/error.hpp"
#include "swcat/search.hpp"
#include "swcat/text.hpp"

namespace swcat {

using nlohmann::ordered_json;

namespace {

std::string dump(const ordered_json& j) {
  return j.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

ApiResponse error_response(ErrorCode code, const std::string& message) {
  int status = code == ErrorCode::NotFound ? 404 : is_input_error(code) ? 400 : 500;
  return {status, dump({{"error_code", std::string(to_string(code))}, {"message", message}})};
}

std::optional<std::string> param(const ApiRequest& req, const std::string& key) {
  auto it = req.params.find(key);
  if (it == req.params.end()) return std::nullopt;
  return it->second;
}

std::optional<int> int_param(const ApiRequest& req, const std::string& key) {
  auto v = param(req, key);
  if (!v || text::trim_view(*v).empty()) return std::nullopt;
  std::string_view s = text::trim_view(*v);
  int out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::InvalidQuery, key + " is not an integer: '" + *v + "'");
  }
  return out;
}

bool bool_param(const ApiRequest& req, const std::string& key) {
  auto v = param(req, key);
  if (!v) return false;
  std::string s = text::ascii_lower(text::trim_view(*v));
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s.empty() || s == "false" || s == "0" || s == "no") return false;
  throw Error(ErrorCode::InvalidQuery, key + " is not a boolean: '" + *v + "'");
}

std::pair<int, int> paging(const ApiRequest& req) {
  SearchQuery q;
  q.page = int_param(req, "page").value_or(1);
  q.per_page = int_param(req, "per_page").value_or(20);
  q.validate();
  return {q.page, q.per_page};
}

ordered_json summary_json(const IndexSnapshot& snap, const SoftwareRecord& rec) {
  const SoftwareProfile& prof = snap.profile(rec.sw_id);
  ordered_json j;
  j["sw_id"] = rec.sw_id;
  j["name"] = rec.name;
  j["description"] = rec.description;
  j["total_references"] = prof.total_references;
  j["quality_ok"] = prof.quality_ok;
  return j;
}

ordered_json hits_page(const IndexSnapshot& snap, const std::vector<SearchHit>& hits, int page,
                       int per_page) {
  auto p = paginate(hits, page, per_page);
  ordered_json j;
  j["total"] = p.total;
  j["page"] = p.page;
  j["per_page"] = p.per_page;
  j["results"] = ordered_json::array();
  for (const auto& h : p.items) {
    ordered_json r = summary_json(snap, *h.record);
    r["score"] = h.score;
    j["results"].push_back(std::move(r));
  }
  return j;
}

ordered_json publication_json(const IndexSnapshot& snap, const PublicationSummary& p) {
  return {{"pub_id", p.pub_id},
          {"title", p.title},
          {"authors", p.authors},
          {"year", p.year},
          {"source", std::string(to_string(p.source))},
          {"peer_reviewed", p.peer_reviewed},
          {"link", snap.publication_link(p.pub_id)}};
}

ordered_json status_json(const LinkStatus& s) {
  ordered_json j;
  j["url"] = s.url;
  j["checked_at"] = format_timestamp(s.checked_at);
  j["outcome"] = std::string(to_string(s.outcome));
  j["http_code"] = s.http_code ? ordered_json(*s.http_code) : ordered_json(nullptr);
  j["final_url"] = s.final_url ? ordered_json(*s.final_url) : ordered_json(nullptr);
  j["reachable"] = is_reachable(s.outcome);
  return j;
}

ordered_json detail_json(const IndexSnapshot& snap, const SoftwareRecord& rec) {
  const SoftwareProfile& prof = snap.profile(rec.sw_id);
  ordered_json j = ordered_json::parse(to_json_line(rec));
  for (const char* key : {"aliases", "programming_languages", "dependencies"}) {
    if (!j.contains(key)) j[key] = ordered_json::array();
  }
  if (!j.contains("description")) j["description"] = "";
  j["total_references"] = prof.total_references;
  j["quality_ok"] = prof.quality_ok;
  j["keyword_cloud"] = ordered_json::array();
  for (const auto& k : prof.keyword_cloud) {
    j["keyword_cloud"].push_back({{"keyword", k.keyword}, {"weight", k.weight}});
  }
  j["msc_sections"] = ordered_json::array();
  std::vector<std::pair<std::string, int>> sections(prof.msc_distribution.begin(),
                                                    prof.msc_distribution.end());
  std::stable_sort(sections.begin(), sections.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [s, c] : sections) {
    j["msc_sections"].push_back(
        {{"section", s}, {"count", c}, {"frequency", msc_frequency(prof.msc_distribution, s)}});
  }
  j["references_by_year"] = ordered_json::array();
  for (const auto& [y, c] : prof.references_by_year) {
    j["references_by_year"].push_back({{"year", y}, {"count", c}});
  }
  j["similar"] = ordered_json::array();
  for (const auto& s : prof.similar) {
    const SoftwareRecord* other = snap.find(s.sw_id);
    j["similar"].push_back({{"sw_id", s.sw_id}, {"name", other ? other->name : ""}, {"score", s.score}});
  }
  j["publications"] = ordered_json::array();
  for (const auto* p : referencing_publications(snap, rec.sw_id)) {
    j["publications"].push_back(publication_json(snap, *p));
  }
  auto ls = snap.link_status.find(rec.sw_id);
  j["link_status"] = ls == snap.link_status.end() ? ordered_json(nullptr) : status_json(ls->second);
  return j;
}

ordered_json browse_json(const IndexSnapshot& snap, BrowseDimension dim, std::string_view key,
                         const std::vector<BrowseEntry>& entries) {
  ordered_json j;
  j["dimension"] = dim == BrowseDimension::MscSection ? "msc" : "alpha";
  j["key"] = std::string(key);
  j["total"] = entries.size();
  j["results"] = ordered_json::array();
  for (const auto& e : entries) {
    ordered_json r = summary_json(snap, *e.record);
    if (dim == BrowseDimension::MscSection) r["section_count"] = e.count;
    j["results"].push_back(std::move(r));
  }
  return j;
}

ApiResponse route(const IndexSnapshot& snap, const ApiRequest& req) {
  std::string_view path = req.path;
  if (path.size() > 1 && path.back() == '/') path.remove_suffix(1);

  if (path == "/api/health") {
    ordered_json j;
    j["status"] = "ok";
    j["built_at"] = snap.built_at;
    j["format_version"] = snap.format_version;
    j["software_count"] = snap.catalog.size();
    j["publication_count"] = snap.publication_count;
    j["mention_count"] = snap.index.pair_count();
    return {200, dump(j)};
  }
  if (path == "/api/stats") {
    ordered_json j;
    j["software_count"] = snap.catalog.size();
    std::size_t quality = 0;
    for (const auto& [_, p] : snap.profiles) quality += p.quality_ok ? 1 : 0;
    j["quality_software_count"] = quality;
    j["publication_count"] = snap.publication_count;
    j["referencing_publication_count"] = snap.publications.size();
    j["mention_count"] = snap.index.pair_count();
    j["msc_sections"] = ordered_json::array();
    for (const auto& s : section_stats(snap)) {
      j["msc_sections"].push_back({{"section", s.section},
                                   {"software_count", s.software_count},
                                   {"reference_count", s.reference_count}});
    }
    return {200, dump(j)};
  }
  if (path == "/api/software") {
    auto q = param(req, "q");
    auto [page, per_page] = paging(req);
    auto hits = simple_search(snap, q.value_or(""), bool_param(req, "include_unfiltered_quality"));
    return {200, dump(hits_page(snap, hits, page, per_page))};
  }
  if (path == "/api/software/advanced") {
    SearchQuery q;
    q.q = param(req, "q");
    q.name = param(req, "name");
    q.keyword = param(req, "keyword");
    q.msc_section = param(req, "msc");
    q.author = param(req, "author");
    q.year_from = int_param(req, "year_from");
    q.year_to = int_param(req, "year_to");
    q.include_unfiltered_quality = bool_param(req, "include_unfiltered_quality");
    q.page = int_param(req, "page").value_or(1);
    q.per_page = int_param(req, "per_page").value_or(20);
    auto hits = advanced_search(snap, q);
    return {200, dump(hits_page(snap, hits, q.page, q.per_page))};
  }
  static constexpr std::string_view kSoftware = "/api/software/";
  if (path.starts_with(kSoftware)) {
    std::string_view rest = path.substr(kSoftware.size());
    static constexpr std::string_view kPubs = "/publications";
    bool pubs = rest.ends_with(kPubs);
    if (pubs) rest.remove_suffix(kPubs.size());
    const SoftwareRecord* rec = snap.find(rest);
    if (rec == nullptr) throw Error(ErrorCode::NotFound, "unknown software '" + std::string(rest) + "'");
    if (!pubs) return {200, dump(detail_json(snap, *rec))};
    auto [page, per_page] = paging(req);
    auto all = referencing_publications(snap, rec->sw_id);
    auto p = paginate(all, page, per_page);
    ordered_json j;
    j["sw_id"] = rec->sw_id;
    j["total"] = p.total;
    j["page"] = p.page;
    j["per_page"] = p.per_page;
    j["results"] = ordered_json::array();
    for (const auto* pub : p.items) j["results"].push_back(publication_json(snap, *pub));
    return {200, dump(j)};
  }
  for (auto [prefix, dim] : {std::pair{std::string_view("/api/browse/msc/"), BrowseDimension::MscSection},
                             std::pair{std::string_view("/api/browse/alpha/"), BrowseDimension::AlphaPrefix}}) {
    if (path.starts_with(prefix)) {
      std::string_view key = path.substr(prefix.size());
      auto entries = browse(snap, dim, key, bool_param(req, "include_unfiltered_quality"));
      return {200, dump(browse_json(snap, dim, key, entries))};
    }
  }
  throw Error(ErrorCode::NotFound, "no such endpoint: " + std::string(req.path));
}

}  // namespace

ApiResponse handle_request(const IndexSnapshot& snap, const ApiRequest& req) {
  try {
    if (req.method != "GET" && req.method != "HEAD") {
      return error_response(ErrorCode::InvalidQuery, "only GET is supported");
    }
    return route(snap, req);
  } catch (const Error& e) {
    return error_response(e.code(), e.what());
  } catch (const std::exception& e) {
    return error_response(ErrorCode::Internal, e.what());
  }
}

}  // namespace swcat
