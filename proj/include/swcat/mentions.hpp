#pragma once

#include <compare>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swcat/config.hpp"
#include "swcat/corpus.hpp"
#include "swcat/parallel.hpp"

namespace swcat {

namespace detail {
class AhoCorasick;
}

enum class CasePolicy { StrictCase, CaseInsensitive };

struct LexiconEntry {
  std::string sw_id;
  std::string pattern;
  CasePolicy policy = CasePolicy::CaseInsensitive;
  /// Ambiguous entries only match with a trigger word in the same sentence or
  /// a version number right after the name.
  bool ambiguous = false;

  bool operator==(const LexiconEntry&) const = default;
};

/// StrictCase iff the pattern has an uppercase letter after its first
/// character or any digit.
CasePolicy case_policy_for(std::string_view pattern);

/// A case-insensitive pattern that is a common word, or any pattern of at most
/// two characters. Strict-case patterns cannot collide with ordinary prose
/// (it would have to be written in the same capitalization), so only their
/// length counts.
bool is_ambiguous_pattern(std::string_view pattern, CasePolicy policy, const WordList& common_words);

enum class MentionField { Title, Abstract };

std::string_view to_string(MentionField f);

struct Mention {
  std::string pub_id;
  std::string sw_id;
  MentionField field = MentionField::Title;
  std::size_t begin = 0;  // byte span within the field
  std::size_t end = 0;

  auto operator<=>(const Mention&) const = default;
};

/// Compiled software-name dictionary. Immutable after construction and safe
/// to share between threads.
class Lexicon {
 public:
  static Lexicon compile(std::span<const SoftwareRecord> catalog, const WordList& common_words,
                         WordList triggers);

  Lexicon(Lexicon&&) noexcept;
  Lexicon& operator=(Lexicon&&) noexcept;
  ~Lexicon();

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  const WordList& triggers() const { return triggers_; }

  /// Accepted (entry index, begin, end) matches in one text, after boundary,
  /// case and ambiguity checks and per-entry leftmost selection.
  struct Match {
    std::size_t entry;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Match> scan(std::string_view text) const;

 private:
  Lexicon();

  std::vector<LexiconEntry> entries_;
  WordList triggers_;
  std::vector<std::string> folded_patterns_;
  std::vector<std::vector<std::size_t>> entries_by_pattern_;
  std::unique_ptr<detail::AhoCorasick> automaton_;
};

/// Mentions in title and abstract, sorted by (field, begin, end, sw_id).
/// Two entries of the same software matching the same span report it once.
std::vector<Mention> find_mentions(const PublicationRecord& pub, const Lexicon& lexicon);

/// Whole-word test for a sentence containing [begin, end): true if some
/// trigger word outside the span shares the sentence, or a version token
/// follows the span after whitespace.
bool ambiguity_guard_passes(std::string_view text, std::size_t begin, std::size_t end,
                            const WordList& triggers);

/// Software-publication incidence with both directions kept as exact
/// transposes. Only pairs are stored; software without mentions is absent.
class MentionIndex {
 public:
  void add(const std::string& sw_id, const std::string& pub_id);

  const std::map<std::string, std::set<std::string>>& by_software() const { return by_software_; }
  const std::map<std::string, std::set<std::string>>& by_publication() const { return by_publication_; }

  /// Publications referencing sw_id (empty set if none).
  const std::set<std::string>& publications_of(std::string_view sw_id) const;
  const std::set<std::string>& software_of(std::string_view pub_id) const;
  std::size_t pair_count() const;

  bool is_transpose() const;
  bool operator==(const MentionIndex& o) const {
    return by_software_ == o.by_software_ && by_publication_ == o.by_publication_;
  }

 private:
  std::map<std::string, std::set<std::string>> by_software_;
  std::map<std::string, std::set<std::string>> by_publication_;
};

MentionIndex build_mention_index(const Corpus& corpus, const Lexicon& lexicon, Parallelism par = {});
/// Single-threaded reference for build_mention_index.
MentionIndex build_mention_index_serial(const Corpus& corpus, const Lexicon& lexicon);

/// All mentions of the corpus in corpus order.
std::vector<Mention> find_all_mentions(const Corpus& corpus, const Lexicon& lexicon,
                                       Parallelism par = {});

/// `pub_id sw_id field start end`, tab-separated, one mention per line.
void write_mention_dump(const std::filesystem::path& path, std::span<const Mention> mentions);

/// `sw_id<TAB>pub_id` per pair, sorted.
void write_mention_index(const std::filesystem::path& path, const MentionIndex& index);
MentionIndex read_mention_index(const std::filesystem::path& path);

}  // namespace swcat
