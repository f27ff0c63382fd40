#include "swcat/snapshot.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "swcat/error.hpp"

namespace swcat {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void invalid(const std::string& why) {
  throw Error(ErrorCode::InvalidSnapshot, "invalid snapshot: " + why);
}

ordered_json record_json(const SoftwareRecord& r) { return ordered_json::parse(to_json_line(r)); }

ordered_json profile_json(const SoftwareProfile& p) {
  ordered_json j;
  j["keyword_cloud"] = ordered_json::array();
  for (const auto& k : p.keyword_cloud) {
    j["keyword_cloud"].push_back({{"keyword", k.keyword}, {"weight", k.weight}});
  }
  j["msc_distribution"] = ordered_json::object();
  for (const auto& [s, c] : p.msc_distribution) j["msc_distribution"][s] = c;
  j["references_by_year"] = ordered_json::object();
  for (const auto& [y, c] : p.references_by_year) j["references_by_year"][std::to_string(y)] = c;
  j["total_references"] = p.total_references;
  j["quality_ok"] = p.quality_ok;
  j["similar"] = ordered_json::array();
  for (const auto& s : p.similar) j["similar"].push_back({{"sw_id", s.sw_id}, {"score", s.score}});
  return j;
}

SoftwareProfile profile_from_json(const std::string& sw_id, const ordered_json& j) {
  SoftwareProfile p;
  p.sw_id = sw_id;
  for (const auto& k : j.at("keyword_cloud")) {
    p.keyword_cloud.push_back({k.at("keyword").get<std::string>(), k.at("weight").get<int>()});
  }
  for (const auto& [s, c] : j.at("msc_distribution").items()) p.msc_distribution[s] = c.get<int>();
  for (const auto& [y, c] : j.at("references_by_year").items()) {
    p.references_by_year[std::stoi(y)] = c.get<int>();
  }
  p.total_references = j.at("total_references").get<int>();
  p.quality_ok = j.at("quality_ok").get<bool>();
  for (const auto& s : j.at("similar")) {
    p.similar.push_back({s.at("sw_id").get<std::string>(), s.at("score").get<double>()});
  }
  return p;
}

ordered_json status_json(const LinkStatus& s) {
  ordered_json j;
  j["url"] = s.url;
  j["checked_at"] = format_timestamp(s.checked_at);
  j["outcome"] = std::string(to_string(s.outcome));
  j["http_code"] = s.http_code ? ordered_json(*s.http_code) : ordered_json(nullptr);
  j["final_url"] = s.final_url ? ordered_json(*s.final_url) : ordered_json(nullptr);
  j["latency_ms"] = s.latency.count();
  j["attempts"] = s.attempts;
  return j;
}

LinkStatus status_from_json(const ordered_json& j) {
  LinkStatus s;
  s.url = j.at("url").get<std::string>();
  auto ts = parse_timestamp(j.at("checked_at").get<std::string>());
  auto outcome = parse_outcome(j.at("outcome").get<std::string>());
  if (!ts || !outcome) invalid("bad link status");
  s.checked_at = *ts;
  s.outcome = *outcome;
  if (!j.at("http_code").is_null()) s.http_code = j.at("http_code").get<int>();
  if (!j.at("final_url").is_null()) s.final_url = j.at("final_url").get<std::string>();
  s.latency = Millis(j.at("latency_ms").get<long long>());
  s.attempts = j.at("attempts").get<int>();
  return s;
}

}  // namespace

std::string to_json_line(const SoftwareProfile& profile) {
  ordered_json j;
  j["sw_id"] = profile.sw_id;
  j.update(profile_json(profile));
  return j.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

void IndexSnapshot::finalize() {
  if (format_version != kFormatVersion) {
    invalid("format_version " + std::to_string(format_version) + ", expected " +
            std::to_string(kFormatVersion));
  }
  std::sort(catalog.begin(), catalog.end(),
            [](const SoftwareRecord& a, const SoftwareRecord& b) { return a.sw_id < b.sw_id; });
  try {
    validate_catalog(catalog);
  } catch (const Error& e) {
    invalid(e.what());
  }
  by_id_.clear();
  for (std::size_t i = 0; i < catalog.size(); ++i) by_id_.emplace(catalog[i].sw_id, i);

  if (profiles.size() != catalog.size()) invalid("profile count differs from catalog size");
  for (const auto& [id, p] : profiles) {
    if (!by_id_.count(id) || p.sw_id != id) invalid("profile for unknown sw_id '" + id + "'");
    for (const auto& s : p.similar) {
      if (!by_id_.count(s.sw_id) || s.sw_id == id) invalid("bad similar entry in '" + id + "'");
    }
    int sum = 0;
    for (const auto& [_, c] : p.references_by_year) sum += c;
    if (sum != p.total_references ||
        static_cast<std::size_t>(p.total_references) != index.publications_of(id).size()) {
      invalid("reference counts of '" + id + "' disagree");
    }
  }
  if (!index.is_transpose()) invalid("mention index is not symmetric");
  for (const auto& [sw, pubs] : index.by_software()) {
    if (!by_id_.count(sw)) invalid("mentions for unknown sw_id '" + sw + "'");
    for (const auto& p : pubs) {
      if (!publications.count(p)) invalid("mention of unknown publication '" + p + "'");
    }
  }
  for (const auto& [id, _] : link_status) {
    if (!by_id_.count(id)) invalid("link status for unknown sw_id '" + id + "'");
  }
}

const SoftwareRecord* IndexSnapshot::find(std::string_view sw_id) const {
  auto it = by_id_.find(sw_id);
  return it == by_id_.end() ? nullptr : &catalog[it->second];
}

const SoftwareProfile& IndexSnapshot::profile(std::string_view sw_id) const {
  auto it = profiles.find(std::string(sw_id));
  if (it == profiles.end()) throw Error(ErrorCode::NotFound, "no profile for " + std::string(sw_id));
  return it->second;
}

std::string IndexSnapshot::publication_link(std::string_view pub_id) const {
  std::string out = link_template;
  static constexpr std::string_view kSlot = "{pub_id}";
  for (auto pos = out.find(kSlot); pos != std::string::npos; pos = out.find(kSlot, pos + pub_id.size())) {
    out.replace(pos, kSlot.size(), pub_id);
  }
  return out;
}

bool IndexSnapshot::operator==(const IndexSnapshot& o) const {
  return format_version == o.format_version && built_at == o.built_at &&
         publication_count == o.publication_count && link_template == o.link_template &&
         catalog == o.catalog && profiles == o.profiles && index == o.index &&
         publications == o.publications && link_status == o.link_status;
}

IndexSnapshot build_snapshot(const SnapshotInputs& in) {
  if (in.corpus == nullptr || in.index == nullptr || in.profiles == nullptr) {
    throw Error(ErrorCode::Internal, "build_snapshot: missing inputs");
  }
  IndexSnapshot snap;
  snap.built_at = in.built_at;
  snap.publication_count = in.corpus->size();
  snap.link_template = in.link_template;
  snap.catalog.assign(in.catalog.begin(), in.catalog.end());
  snap.profiles = *in.profiles;
  snap.index = *in.index;
  for (const auto& [pub_id, _] : in.index->by_publication()) {
    const PublicationRecord* pub = in.corpus->find(pub_id);
    if (pub == nullptr) {
      throw Error(ErrorCode::InvalidRecord, "mention index names unknown publication " + pub_id);
    }
    snap.publications[pub_id] = {pub->pub_id, pub->title, pub->authors, pub->year, pub->source,
                                 pub->peer_reviewed};
  }
  if (in.link_status != nullptr) {
    for (const auto& rec : in.catalog) {
      if (!rec.homepage) continue;
      auto it = in.link_status->find(*rec.homepage);
      if (it != in.link_status->end()) snap.link_status[rec.sw_id] = it->second;
    }
  }
  snap.finalize();
  return snap;
}

std::string serialize_snapshot(const IndexSnapshot& snap) {
  ordered_json j;
  j["format_version"] = snap.format_version;
  j["built_at"] = snap.built_at;
  j["publication_count"] = snap.publication_count;
  j["link_template"] = snap.link_template;
  j["software"] = ordered_json::array();
  for (const auto& r : snap.catalog) j["software"].push_back(record_json(r));
  j["profiles"] = ordered_json::object();
  for (const auto& [id, p] : snap.profiles) j["profiles"][id] = profile_json(p);
  j["mentions"] = ordered_json::object();
  for (const auto& [sw, pubs] : snap.index.by_software()) j["mentions"][sw] = pubs;
  j["publications"] = ordered_json::array();
  for (const auto& [_, p] : snap.publications) {
    j["publications"].push_back({{"pub_id", p.pub_id},
                                 {"title", p.title},
                                 {"authors", p.authors},
                                 {"year", p.year},
                                 {"source", std::string(to_string(p.source))},
                                 {"peer_reviewed", p.peer_reviewed}});
  }
  j["link_status"] = ordered_json::object();
  for (const auto& [id, s] : snap.link_status) j["link_status"][id] = status_json(s);
  return j.dump(1, ' ', false, ordered_json::error_handler_t::replace) + "\n";
}

IndexSnapshot parse_snapshot(std::string_view content) {
  IndexSnapshot snap;
  try {
    auto j = ordered_json::parse(content);
    snap.format_version = j.at("format_version").get<int>();
    if (snap.format_version != IndexSnapshot::kFormatVersion) {
      invalid("unsupported format_version " + std::to_string(snap.format_version));
    }
    snap.built_at = j.at("built_at").get<std::string>();
    snap.publication_count = j.at("publication_count").get<std::size_t>();
    snap.link_template = j.at("link_template").get<std::string>();
    for (const auto& r : j.at("software")) snap.catalog.push_back(parse_software(r.dump()));
    for (const auto& [id, p] : j.at("profiles").items()) snap.profiles[id] = profile_from_json(id, p);
    for (const auto& [sw, pubs] : j.at("mentions").items()) {
      for (const auto& p : pubs) snap.index.add(sw, p.get<std::string>());
    }
    for (const auto& p : j.at("publications")) {
      PublicationSummary s;
      s.pub_id = p.at("pub_id").get<std::string>();
      s.title = p.at("title").get<std::string>();
      s.authors = p.at("authors").get<std::vector<std::string>>();
      s.year = p.at("year").get<int>();
      auto src = parse_publication_source(p.at("source").get<std::string>());
      if (!src) invalid("bad publication source");
      s.source = *src;
      s.peer_reviewed = p.at("peer_reviewed").get<bool>();
      snap.publications[s.pub_id] = std::move(s);
    }
    for (const auto& [id, s] : j.at("link_status").items()) snap.link_status[id] = status_from_json(s);
  } catch (const ordered_json::exception& e) {
    invalid(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidSnapshot) throw;
    invalid(e.what());
  }
  snap.finalize();
  return snap;
}

void save_snapshot(const std::filesystem::path& path, const IndexSnapshot& snap) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::UnreadableFile, "cannot write " + tmp.string());
    out << serialize_snapshot(snap);
    if (!out) throw Error(ErrorCode::UnreadableFile, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

IndexSnapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot read snapshot " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_snapshot(ss.str());
}

}  // namespace swcat
