#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swcat/config.hpp"
#include "swcat/corpus.hpp"
#include "swcat/parallel.hpp"

namespace swcat {

enum class RuleId : std::uint8_t {
  R1_ColonPattern = 0,
  R2_TriggerAdjacency = 1,
  R3_VersionSuffix = 2,
  R4_DefinitePhrase = 3,
};

std::string_view to_string(RuleId r);

/// Small bit set over RuleId.
class RuleSet {
 public:
  RuleSet() = default;
  RuleSet(std::initializer_list<RuleId> rules) {
    for (auto r : rules) insert(r);
  }
  void insert(RuleId r) { bits_ |= bit(r); }
  bool contains(RuleId r) const { return (bits_ & bit(r)) != 0; }
  bool empty() const { return bits_ == 0; }
  RuleSet& operator|=(RuleSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  std::vector<RuleId> rules() const;
  bool operator==(const RuleSet&) const = default;

 private:
  static std::uint8_t bit(RuleId r) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(r)); }
  std::uint8_t bits_ = 0;
};

struct RuleWeights {
  double colon_pattern = 0.5;
  double trigger_adjacency = 0.25;
  double version_suffix = 0.15;
  double definite_phrase = 0.1;

  double of(RuleId r) const;
};

/// Trigger lexicon, common-word list and rule weights. The trigger lexicon is
/// shared with mention matching.
struct RuleConfig {
  WordList triggers;
  WordList common_words;
  RuleWeights weights;

  static WordList default_triggers();
  /// Default triggers and weights with the given common-word list.
  static RuleConfig with_common_words(WordList common_words);
  /// Default triggers and weights with the bundled common-word list.
  static RuleConfig defaults();
  /// Keys: `trigger_words`, `common_words` (path), `weight.r1` .. `weight.r4`.
  static RuleConfig from_config(const KeyValueConfig& cfg);
  static RuleConfig load(const std::filesystem::path& path);
};

enum class TokenKind { Word, Delimiter };

struct Token {
  std::string text;
  std::size_t begin = 0;  // byte offsets into the title
  std::size_t end = 0;
  TokenKind kind = TokenKind::Word;
  bool sentence_initial = false;

  bool operator==(const Token&) const = default;
};

/// Whitespace split; leading and trailing punctuation of each chunk becomes
/// one delimiter token per character, internal punctuation stays ("deal.II").
/// '+' and '#' directly after a letter or digit are kept ("C++", "F#").
std::vector<Token> tokenize_title(std::string_view title);

/// Heuristic for artificial or capitalized words. Trigger words never qualify.
bool is_namey(std::string_view token, bool sentence_initial, const RuleConfig& config);

struct CandidateHit {
  std::string surface;
  std::string pub_id;
  RuleSet rules;
  double hit_score = 0.0;

  bool operator==(const CandidateHit&) const = default;
};

/// One hit per distinct surface that fires at least one rule, in order of
/// first appearance in the title.
std::vector<CandidateHit> extract_candidates(std::string_view title, std::string_view pub_id,
                                             const RuleConfig& config);

/// Hits over all publication titles, in corpus order.
std::vector<CandidateHit> extract_corpus(const Corpus& corpus, const RuleConfig& config,
                                         Parallelism par = {});
/// Single-threaded reference for extract_corpus.
std::vector<CandidateHit> extract_corpus_serial(const Corpus& corpus, const RuleConfig& config);

enum class CurationStatus { Pending, Accepted, Rejected };

struct SoftwareCandidate {
  std::string normalized_name;
  std::set<std::string> surfaces;
  std::set<std::string> evidence;
  double score = 0.0;
  CurationStatus status = CurationStatus::Pending;

  bool operator==(const SoftwareCandidate&) const = default;
};

/// Groups hits by normalized surface and combines their scores by noisy-or.
/// Sorted by score descending, then normalized name. Independent of hit order.
std::vector<SoftwareCandidate> merge_candidates(std::span<const CandidateHit> hits);

/// Tab-separated: normalized_name, score, surfaces ('|'-joined), evidence
/// ('|'-joined). A leading `#` header line is written and skipped on read.
void write_worklist(const std::filesystem::path& path, std::span<const SoftwareCandidate> candidates);
std::vector<SoftwareCandidate> read_worklist(const std::filesystem::path& path);

struct CurationDecision {
  enum class Verdict { Accept, Reject };
  std::string normalized_name;
  Verdict verdict = Verdict::Reject;
  std::string canonical_name;  // Accept only
};

/// Lines `<normalized_name>\t<accept|reject>\t<canonical_name_if_accept>`.
/// Throws Error(MalformedRecord) with the line number on bad input.
std::vector<CurationDecision> parse_curation(std::string_view content);
std::vector<CurationDecision> load_curation(const std::filesystem::path& path);

struct CurationResult {
  std::vector<SoftwareRecord> accepted;
  std::vector<SoftwareCandidate> rejected;
  std::vector<SoftwareCandidate> pending;
  std::vector<std::string> warnings;  // decisions naming no candidate
};

/// Accepted candidates become PublicationDerived records named by the
/// decision, with the other observed surfaces as aliases. Ids are assigned in
/// normalized-name order so they do not depend on scores.
CurationResult apply_curation(std::span<const SoftwareCandidate> candidates,
                              std::span<const CurationDecision> decisions,
                              const std::set<std::string>& existing_ids = {});

}  // namespace swcat
