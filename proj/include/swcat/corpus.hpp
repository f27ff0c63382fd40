#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "swcat/parallel.hpp"

namespace swcat {

enum class PublicationSource { Reviewed, Proceedings, Report };

std::string_view to_string(PublicationSource s);
std::optional<PublicationSource> parse_publication_source(std::string_view s);

struct PublicationRecord {
  std::string pub_id;
  std::string title;
  std::string abstract_text;
  std::vector<std::string> keywords;
  std::vector<std::string> msc_codes;
  int year = 0;
  std::vector<std::string> authors;
  bool peer_reviewed = false;
  PublicationSource source = PublicationSource::Reviewed;

  bool operator==(const PublicationRecord&) const = default;
};

enum class Provenance { PublicationDerived, PortalListed, WebHeuristic };

std::string_view to_string(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view s);

struct SoftwareRecord {
  std::string sw_id;
  std::string name;
  std::vector<std::string> aliases;
  std::optional<std::string> homepage;
  std::string description;
  std::optional<std::string> version;
  std::optional<std::string> license;
  std::vector<std::string> programming_languages;
  std::vector<std::string> dependencies;
  Provenance provenance = Provenance::PublicationDerived;

  bool operator==(const SoftwareRecord&) const = default;
};

struct PortalRecord {
  std::string portal_name;
  std::string software_name;
  std::optional<std::string> homepage;
  std::string description;

  bool operator==(const PortalRecord&) const = default;
};

/// MSC2010 code shapes accepted: `13P10`, `65Fxx`, `68-XX`.
bool is_valid_msc_code(std::string_view code);

/// Top-level section of a valid MSC code: its first two digits.
std::string msc_section(std::string_view code);

/// Latest acceptable publication year: current calendar year + 1.
int default_max_year();

/// Immutable collection of publications with lookup by pub_id. Records keep
/// file order.
class Corpus {
 public:
  Corpus() = default;
  /// Throws Error(InvalidRecord) on duplicate pub_id.
  explicit Corpus(std::vector<PublicationRecord> records);

  const std::vector<PublicationRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const PublicationRecord* find(std::string_view pub_id) const;

  bool operator==(const Corpus& other) const { return records_ == other.records_; }

 private:
  std::vector<PublicationRecord> records_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

enum class LoadMode { Strict, Lenient };

struct LineIssue {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct CorpusLoad {
  Corpus corpus;
  std::size_t lines_read = 0;  // non-blank lines
  std::vector<LineIssue> issues;
};

/// Thrown by strict loading; carries every malformed line.
class MalformedCorpus : public std::exception {
 public:
  explicit MalformedCorpus(std::vector<LineIssue> issues);
  const char* what() const noexcept override { return message_.c_str(); }
  const std::vector<LineIssue>& issues() const { return issues_; }

 private:
  std::vector<LineIssue> issues_;
  std::string message_;
};

/// Parses and validates one corpus line. Throws Error(MalformedRecord).
PublicationRecord parse_publication(std::string_view line, int max_year = default_max_year());
std::string to_json_line(const PublicationRecord& rec);

/// Lines are parsed in parallel; duplicate pub_ids are checked in file order
/// afterwards so the first occurrence wins.
CorpusLoad load_corpus(const std::filesystem::path& path, LoadMode mode,
                       int max_year = default_max_year(), Parallelism par = {});
void write_corpus(const std::filesystem::path& path, const Corpus& corpus);

SoftwareRecord parse_software(std::string_view line);
std::string to_json_line(const SoftwareRecord& rec);
PortalRecord parse_portal(std::string_view line);
std::string to_json_line(const PortalRecord& rec);

/// Catalog files are strict: any bad line throws.
std::vector<SoftwareRecord> load_catalog(const std::filesystem::path& path);
void write_catalog(const std::filesystem::path& path, std::span<const SoftwareRecord> catalog);
std::vector<PortalRecord> load_portal_records(const std::filesystem::path& path);
void write_portal_records(const std::filesystem::path& path, std::span<const PortalRecord> records);

/// Unique ids in `swm:` form, non-empty names, name not among aliases and
/// every dependency resolving to a catalog id. Throws Error(InvalidRecord).
void validate_catalog(std::span<const SoftwareRecord> catalog);

/// `swm:` + slug(name); on collision the first free `-2`, `-3`, ... suffix.
/// Throws Error(EmptySlug) when the name has no ASCII letters or digits.
std::string assign_persistent_id(std::string_view name, const std::set<std::string>& existing_ids);

struct ImportConflict {
  std::string sw_id;
  std::string portal_name;
  std::string existing_homepage;
  std::string portal_homepage;
};

struct ImportResult {
  std::vector<SoftwareRecord> catalog;
  std::vector<ImportConflict> conflicts;
  std::size_t enriched = 0;  // existing records that gained a field
  std::size_t created = 0;
};

/// Merges portal listings into the catalog. A listing whose normalized name
/// equals a record's normalized name or alias fills that record's absent
/// homepage/description; present values are never overwritten. Unmatched
/// listings become PortalListed records. Idempotent.
ImportResult import_portal_records(std::span<const PortalRecord> records,
                                   std::vector<SoftwareRecord> catalog);

}  // namespace swcat
