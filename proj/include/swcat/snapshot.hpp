#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swcat/corpus.hpp"
#include "swcat/linkcheck.hpp"
#include "swcat/mentions.hpp"
#include "swcat/profiles.hpp"

namespace swcat {

/// The publication fields detail pages and author search need.
struct PublicationSummary {
  std::string pub_id;
  std::string title;
  std::vector<std::string> authors;
  int year = 0;
  PublicationSource source = PublicationSource::Reviewed;
  bool peer_reviewed = false;

  bool operator==(const PublicationSummary&) const = default;
};

inline constexpr std::string_view kDefaultLinkTemplate = "https://zbmath.org/?q=an:{pub_id}";

/// Everything the catalog service serves, built offline and read-only once
/// loaded. Snapshot files are versioned JSON documents.
class IndexSnapshot {
 public:
  static constexpr int kFormatVersion = 1;

  int format_version = kFormatVersion;
  std::string built_at;
  std::size_t publication_count = 0;  // size of the source corpus
  std::string link_template{kDefaultLinkTemplate};
  std::vector<SoftwareRecord> catalog;  // sorted by sw_id
  ProfileMap profiles;
  MentionIndex index;
  std::map<std::string, PublicationSummary> publications;  // referenced ones only
  std::map<std::string, LinkStatus> link_status;           // by sw_id

  /// Builds the id lookup and checks every cross reference. Throws
  /// Error(InvalidSnapshot).
  void finalize();

  const SoftwareRecord* find(std::string_view sw_id) const;
  const SoftwareProfile& profile(std::string_view sw_id) const;
  std::string publication_link(std::string_view pub_id) const;

  bool operator==(const IndexSnapshot& o) const;

 private:
  std::map<std::string, std::size_t, std::less<>> by_id_;
};

struct SnapshotInputs {
  std::span<const SoftwareRecord> catalog;
  const Corpus* corpus = nullptr;
  const MentionIndex* index = nullptr;
  const ProfileMap* profiles = nullptr;
  std::string built_at;
  std::string link_template{kDefaultLinkTemplate};
  /// Latest status per URL, e.g. StatusStore::latest().
  const std::map<std::string, LinkStatus>* link_status = nullptr;
};

IndexSnapshot build_snapshot(const SnapshotInputs& in);

/// One profile as a single JSON line, sw_id first; used by export.
std::string to_json_line(const SoftwareProfile& profile);

std::string serialize_snapshot(const IndexSnapshot& snap);
/// Throws Error(InvalidSnapshot) on malformed input or a version mismatch.
IndexSnapshot parse_snapshot(std::string_view content);

/// Writes to a temporary sibling and renames it into place.
void save_snapshot(const std::filesystem::path& path, const IndexSnapshot& snap);
IndexSnapshot load_snapshot(const std::filesystem::path& path);

}  // namespace swcat
