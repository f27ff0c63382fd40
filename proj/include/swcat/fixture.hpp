#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "swcat/corpus.hpp"
#include "swcat/extraction.hpp"

namespace swcat {

/// Synthetic demo corpus: 25 software names planted in titles the extraction
/// rules recognize, 50 distractor titles (three of them deliberate false
/// positives), and usage publications whose abstracts mention the planted
/// software. Same seed, same bytes.
struct FixtureOptions {
  std::uint64_t seed = 42;
  std::size_t usage_publications = 100;
};

struct PlantedName {
  std::string name;
  std::string normalized_name;
  std::vector<std::string> title_pub_ids;
};

struct Fixture {
  std::uint64_t seed = 0;
  std::vector<PublicationRecord> publications;
  std::vector<PortalRecord> portals;
  std::vector<CurationDecision> curation;
  std::vector<PlantedName> planted;
  std::vector<std::string> distractor_pub_ids;
  std::vector<std::string> trap_names;  // normalized; expected false positives
  std::string report_only;              // only Report-source references
  std::string portal_only;              // PortalListed, never mentioned
};

Fixture generate_fixture(const FixtureOptions& options = {});

std::string manifest_json(const Fixture& fixture);
std::string curation_text(const Fixture& fixture);

/// Writes corpus.jsonl, portals.jsonl, curation.tsv, rules.conf,
/// manifest.json and a pipeline config swcat.conf pointing at all of them.
void write_fixture(const std::filesystem::path& dir, const Fixture& fixture);

}  // namespace swcat
