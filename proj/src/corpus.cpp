#include "swcat/corpus.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "swcat/error.hpp"
#include "swcat/text.hpp"

namespace swcat {

using nlohmann::ordered_json;

std::string_view to_string(PublicationSource s) {
  switch (s) {
    case PublicationSource::Reviewed: return "Reviewed";
    case PublicationSource::Proceedings: return "Proceedings";
    case PublicationSource::Report: return "Report";
  }
  return "Reviewed";
}

std::optional<PublicationSource> parse_publication_source(std::string_view s) {
  if (s == "Reviewed") return PublicationSource::Reviewed;
  if (s == "Proceedings") return PublicationSource::Proceedings;
  if (s == "Report") return PublicationSource::Report;
  return std::nullopt;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::PublicationDerived: return "PublicationDerived";
    case Provenance::PortalListed: return "PortalListed";
    case Provenance::WebHeuristic: return "WebHeuristic";
  }
  return "PublicationDerived";
}

std::optional<Provenance> parse_provenance(std::string_view s) {
  if (s == "PublicationDerived") return Provenance::PublicationDerived;
  if (s == "PortalListed") return Provenance::PortalListed;
  if (s == "WebHeuristic") return Provenance::WebHeuristic;
  return std::nullopt;
}

bool is_valid_msc_code(std::string_view c) {
  using text::is_ascii_digit;
  if (c.size() != 5 || !is_ascii_digit(c[0]) || !is_ascii_digit(c[1])) return false;
  if (c[2] == '-') return c[3] == 'X' && c[4] == 'X';
  if (!text::is_ascii_upper(c[2])) return false;
  if (c[3] == 'x' && c[4] == 'x') return true;
  return is_ascii_digit(c[3]) && is_ascii_digit(c[4]);
}

std::string msc_section(std::string_view code) { return std::string(code.substr(0, 2)); }

int default_max_year() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  return tm.tm_year + 1900 + 1;
}

Corpus::Corpus(std::vector<PublicationRecord> records) : records_(std::move(records)) {
  by_id_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (!by_id_.emplace(records_[i].pub_id, i).second) {
      throw Error(ErrorCode::InvalidRecord, "duplicate pub_id '" + records_[i].pub_id + "'");
    }
  }
}

const PublicationRecord* Corpus::find(std::string_view pub_id) const {
  auto it = by_id_.find(std::string(pub_id));
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

MalformedCorpus::MalformedCorpus(std::vector<LineIssue> issues) : issues_(std::move(issues)) {
  message_ = std::to_string(issues_.size()) + " malformed record(s)";
  if (!issues_.empty()) {
    message_ += "; first at line " + std::to_string(issues_.front().line) + ": " +
                issues_.front().reason;
  }
}

namespace {

[[noreturn]] void malformed(const std::string& reason) {
  throw Error(ErrorCode::MalformedRecord, reason);
}

/// Field access for one line-delimited object; tracks which keys were used
/// so unknown keys can be rejected.
class FieldReader {
 public:
  FieldReader(std::string_view line, std::initializer_list<std::string_view> known) {
    try {
      obj_ = ordered_json::parse(line);
    } catch (const ordered_json::parse_error&) {
      malformed("invalid JSON object");
    }
    if (!obj_.is_object()) malformed("record is not a key/value object");
    for (const auto& [key, _] : obj_.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        malformed("unknown field '" + key + "'");
      }
    }
  }

  bool has(const char* key) const { return obj_.contains(key); }

  std::string string(const char* key, bool required) const {
    if (!obj_.contains(key)) {
      if (required) malformed(std::string("missing field '") + key + "'");
      return {};
    }
    const auto& v = obj_.at(key);
    if (!v.is_string()) malformed(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
  }

  std::optional<std::string> optional_string(const char* key) const {
    if (!obj_.contains(key)) return std::nullopt;
    return string(key, true);
  }

  std::vector<std::string> strings(const char* key) const {
    std::vector<std::string> out;
    if (!obj_.contains(key)) return out;
    const auto& v = obj_.at(key);
    if (!v.is_array()) malformed(std::string("field '") + key + "' must be a list");
    for (const auto& e : v) {
      if (!e.is_string()) malformed(std::string("field '") + key + "' must hold strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  long long integer(const char* key) const {
    if (!obj_.contains(key)) malformed(std::string("missing field '") + key + "'");
    const auto& v = obj_.at(key);
    if (!v.is_number_integer()) malformed(std::string("field '") + key + "' must be an integer");
    return v.get<long long>();
  }

  bool boolean(const char* key) const {
    if (!obj_.contains(key)) malformed(std::string("missing field '") + key + "'");
    const auto& v = obj_.at(key);
    if (!v.is_boolean()) malformed(std::string("field '") + key + "' must be a boolean");
    return v.get<bool>();
  }

 private:
  ordered_json obj_;
};

void put_list(ordered_json& obj, const char* key, const std::vector<std::string>& v) {
  if (!v.empty()) obj[key] = v;
}

std::string dump(const ordered_json& obj) {
  return obj.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

template <typename Parse>
auto load_lines_strict(const std::filesystem::path& path, Parse parse) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot read " + path.string());
  std::vector<decltype(parse(std::string_view{}))> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim_view(line).empty()) continue;
    try {
      out.push_back(parse(line));
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::UnreadableFile, "cannot write " + path.string());
  for (const auto& l : lines) out << l << '\n';
  if (!out) throw Error(ErrorCode::UnreadableFile, "write failed for " + path.string());
}

}  // namespace

PublicationRecord parse_publication(std::string_view line, int max_year) {
  FieldReader r(line, {"pub_id", "title", "abstract_text", "keywords", "msc_codes", "year",
                       "authors", "peer_reviewed", "source"});
  PublicationRecord rec;
  rec.pub_id = r.string("pub_id", true);
  if (text::trim_view(rec.pub_id).empty()) malformed("empty pub_id");
  rec.title = r.string("title", true);
  rec.abstract_text = r.string("abstract_text", false);

  for (const auto& raw : r.strings("keywords")) {
    std::string kw = text::trim(raw);
    if (kw.empty()) malformed("empty keyword");
    if (std::find(rec.keywords.begin(), rec.keywords.end(), kw) == rec.keywords.end()) {
      rec.keywords.push_back(std::move(kw));
    }
  }
  for (auto& code : r.strings("msc_codes")) {
    if (!is_valid_msc_code(code)) malformed("invalid msc_code '" + code + "'");
    if (std::find(rec.msc_codes.begin(), rec.msc_codes.end(), code) == rec.msc_codes.end()) {
      rec.msc_codes.push_back(std::move(code));
    }
  }

  long long year = r.integer("year");
  if (year < 1800 || year > max_year) malformed("year out of range");
  rec.year = static_cast<int>(year);
  rec.authors = r.strings("authors");
  rec.peer_reviewed = r.boolean("peer_reviewed");
  auto source = parse_publication_source(r.string("source", true));
  if (!source) malformed("unknown source");
  rec.source = *source;
  return rec;
}

std::string to_json_line(const PublicationRecord& rec) {
  ordered_json obj;
  obj["pub_id"] = rec.pub_id;
  obj["title"] = rec.title;
  if (!rec.abstract_text.empty()) obj["abstract_text"] = rec.abstract_text;
  put_list(obj, "keywords", rec.keywords);
  put_list(obj, "msc_codes", rec.msc_codes);
  obj["year"] = rec.year;
  put_list(obj, "authors", rec.authors);
  obj["peer_reviewed"] = rec.peer_reviewed;
  obj["source"] = std::string(to_string(rec.source));
  return dump(obj);
}

CorpusLoad load_corpus(const std::filesystem::path& path, LoadMode mode, int max_year,
                       Parallelism par) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot read corpus " + path.string());

  struct Line {
    std::size_t number;
    std::string text;
  };
  std::vector<Line> lines;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!text::trim_view(raw).empty()) lines.push_back({line_no, std::move(raw)});
  }
  if (in.bad()) throw Error(ErrorCode::UnreadableFile, "read error on " + path.string());

  std::vector<std::optional<PublicationRecord>> parsed(lines.size());
  std::vector<std::string> errors(lines.size());
  const auto n = static_cast<std::ptrdiff_t>(lines.size());
#pragma omp parallel for schedule(static) num_threads(resolve_threads(par))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      parsed[i] = parse_publication(lines[i].text, max_year);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  }

  CorpusLoad result;
  result.lines_read = lines.size();
  std::vector<PublicationRecord> records;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!parsed[i]) {
      result.issues.push_back({lines[i].number, errors[i]});
      continue;
    }
    if (!seen.insert(parsed[i]->pub_id).second) {
      result.issues.push_back({lines[i].number, "duplicate pub_id '" + parsed[i]->pub_id + "'"});
      continue;
    }
    records.push_back(std::move(*parsed[i]));
  }
  if (mode == LoadMode::Strict && !result.issues.empty()) throw MalformedCorpus(result.issues);
  result.corpus = Corpus(std::move(records));
  return result;
}

void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::vector<std::string> lines;
  lines.reserve(corpus.size());
  for (const auto& r : corpus.records()) lines.push_back(to_json_line(r));
  write_lines(path, lines);
}

SoftwareRecord parse_software(std::string_view line) {
  FieldReader r(line, {"sw_id", "name", "aliases", "homepage", "description", "version",
                       "license", "programming_languages", "dependencies", "provenance"});
  SoftwareRecord rec;
  rec.sw_id = r.string("sw_id", true);
  rec.name = r.string("name", true);
  if (text::trim_view(rec.name).empty()) malformed("empty name");
  rec.aliases = r.strings("aliases");
  rec.homepage = r.optional_string("homepage");
  rec.description = r.string("description", false);
  rec.version = r.optional_string("version");
  rec.license = r.optional_string("license");
  rec.programming_languages = r.strings("programming_languages");
  rec.dependencies = r.strings("dependencies");
  auto prov = parse_provenance(r.string("provenance", true));
  if (!prov) malformed("unknown provenance");
  rec.provenance = *prov;
  return rec;
}

std::string to_json_line(const SoftwareRecord& rec) {
  ordered_json obj;
  obj["sw_id"] = rec.sw_id;
  obj["name"] = rec.name;
  put_list(obj, "aliases", rec.aliases);
  if (rec.homepage) obj["homepage"] = *rec.homepage;
  if (!rec.description.empty()) obj["description"] = rec.description;
  if (rec.version) obj["version"] = *rec.version;
  if (rec.license) obj["license"] = *rec.license;
  put_list(obj, "programming_languages", rec.programming_languages);
  put_list(obj, "dependencies", rec.dependencies);
  obj["provenance"] = std::string(to_string(rec.provenance));
  return dump(obj);
}

PortalRecord parse_portal(std::string_view line) {
  FieldReader r(line, {"portal_name", "software_name", "homepage", "description"});
  PortalRecord rec;
  rec.portal_name = r.string("portal_name", true);
  rec.software_name = r.string("software_name", true);
  if (text::trim_view(rec.portal_name).empty()) malformed("empty portal_name");
  if (text::trim_view(rec.software_name).empty()) malformed("empty software_name");
  rec.homepage = r.optional_string("homepage");
  rec.description = r.string("description", false);
  return rec;
}

std::string to_json_line(const PortalRecord& rec) {
  ordered_json obj;
  obj["portal_name"] = rec.portal_name;
  obj["software_name"] = rec.software_name;
  if (rec.homepage) obj["homepage"] = *rec.homepage;
  if (!rec.description.empty()) obj["description"] = rec.description;
  return dump(obj);
}

std::vector<SoftwareRecord> load_catalog(const std::filesystem::path& path) {
  return load_lines_strict(path, [](std::string_view l) { return parse_software(l); });
}

void write_catalog(const std::filesystem::path& path, std::span<const SoftwareRecord> catalog) {
  std::vector<std::string> lines;
  for (const auto& r : catalog) lines.push_back(to_json_line(r));
  write_lines(path, lines);
}

std::vector<PortalRecord> load_portal_records(const std::filesystem::path& path) {
  return load_lines_strict(path, [](std::string_view l) { return parse_portal(l); });
}

void write_portal_records(const std::filesystem::path& path,
                          std::span<const PortalRecord> records) {
  std::vector<std::string> lines;
  for (const auto& r : records) lines.push_back(to_json_line(r));
  write_lines(path, lines);
}

void validate_catalog(std::span<const SoftwareRecord> catalog) {
  std::set<std::string> ids;
  for (const auto& rec : catalog) {
    if (rec.sw_id.rfind("swm:", 0) != 0 || rec.sw_id.size() <= 4) {
      throw Error(ErrorCode::InvalidRecord, "sw_id '" + rec.sw_id + "' is not of the form swm:<slug>");
    }
    if (!ids.insert(rec.sw_id).second) {
      throw Error(ErrorCode::InvalidRecord, "duplicate sw_id '" + rec.sw_id + "'");
    }
    if (text::trim_view(rec.name).empty()) {
      throw Error(ErrorCode::InvalidRecord, "empty name for '" + rec.sw_id + "'");
    }
    if (std::find(rec.aliases.begin(), rec.aliases.end(), rec.name) != rec.aliases.end()) {
      throw Error(ErrorCode::InvalidRecord, "name of '" + rec.sw_id + "' repeated among aliases");
    }
  }
  for (const auto& rec : catalog) {
    for (const auto& dep : rec.dependencies) {
      if (ids.count(dep) == 0) {
        throw Error(ErrorCode::InvalidRecord,
                    "'" + rec.sw_id + "' depends on unknown sw_id '" + dep + "'");
      }
    }
  }
}

std::string assign_persistent_id(std::string_view name, const std::set<std::string>& existing_ids) {
  std::string slug = text::slugify(name);
  if (slug.empty()) {
    throw Error(ErrorCode::EmptySlug, "name '" + std::string(name) + "' has no alphanumeric characters");
  }
  std::string base = "swm:" + slug;
  if (existing_ids.count(base) == 0) return base;
  for (int suffix = 2;; ++suffix) {
    std::string candidate = base + "-" + std::to_string(suffix);
    if (existing_ids.count(candidate) == 0) return candidate;
  }
}

ImportResult import_portal_records(std::span<const PortalRecord> records,
                                   std::vector<SoftwareRecord> catalog) {
  ImportResult result;
  std::map<std::string, std::size_t> by_name;
  std::set<std::string> ids;
  auto index_record = [&](std::size_t i) {
    const auto& rec = catalog[i];
    ids.insert(rec.sw_id);
    by_name.emplace(text::normalize_name(rec.name), i);
    for (const auto& a : rec.aliases) by_name.emplace(text::normalize_name(a), i);
  };
  for (std::size_t i = 0; i < catalog.size(); ++i) index_record(i);

  for (const auto& portal : records) {
    auto it = by_name.find(text::normalize_name(portal.software_name));
    if (it == by_name.end()) {
      SoftwareRecord rec;
      rec.sw_id = assign_persistent_id(portal.software_name, ids);
      rec.name = text::trim(portal.software_name);
      rec.homepage = portal.homepage;
      rec.description = portal.description;
      rec.provenance = Provenance::PortalListed;
      catalog.push_back(std::move(rec));
      index_record(catalog.size() - 1);
      ++result.created;
      continue;
    }
    SoftwareRecord& rec = catalog[it->second];
    bool changed = false;
    if (portal.homepage) {
      if (!rec.homepage) {
        rec.homepage = portal.homepage;
        changed = true;
      } else if (*rec.homepage != *portal.homepage) {
        result.conflicts.push_back({rec.sw_id, portal.portal_name, *rec.homepage, *portal.homepage});
      }
    }
    if (rec.description.empty() && !portal.description.empty()) {
      rec.description = portal.description;
      changed = true;
    }
    if (changed) ++result.enriched;
  }
  result.catalog = std::move(catalog);
  return result;
}

}  // namespace swcat
