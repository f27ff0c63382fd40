#include "swcat/mentions.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "aho_corasick.hpp"
#include "swcat/error.hpp"
#include "swcat/text.hpp"

namespace swcat {

CasePolicy case_policy_for(std::string_view pattern) {
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (text::is_ascii_digit(pattern[i]) || (i > 0 && text::is_ascii_upper(pattern[i]))) {
      return CasePolicy::StrictCase;
    }
  }
  return CasePolicy::CaseInsensitive;
}

bool is_ambiguous_pattern(std::string_view pattern, CasePolicy policy, const WordList& common_words) {
  if (text::utf8_length(pattern) <= 2) return true;
  return policy == CasePolicy::CaseInsensitive && common_words.contains(pattern);
}

std::string_view to_string(MentionField f) {
  return f == MentionField::Title ? "Title" : "Abstract";
}

Lexicon::Lexicon() = default;
Lexicon::Lexicon(Lexicon&&) noexcept = default;
Lexicon& Lexicon::operator=(Lexicon&&) noexcept = default;
Lexicon::~Lexicon() = default;

Lexicon Lexicon::compile(std::span<const SoftwareRecord> catalog, const WordList& common_words,
                         WordList triggers) {
  Lexicon lex;
  lex.triggers_ = std::move(triggers);
  std::map<std::string, std::size_t> pattern_ids;
  for (const auto& rec : catalog) {
    std::vector<std::string> patterns{rec.name};
    patterns.insert(patterns.end(), rec.aliases.begin(), rec.aliases.end());
    std::set<std::string> seen;
    for (const auto& raw : patterns) {
      std::string pattern = text::trim(raw);
      if (pattern.empty() || !seen.insert(pattern).second) continue;
      LexiconEntry e;
      e.sw_id = rec.sw_id;
      e.pattern = pattern;
      e.policy = case_policy_for(pattern);
      e.ambiguous = is_ambiguous_pattern(pattern, e.policy, common_words);

      std::string folded = text::ascii_lower(pattern);
      auto [it, inserted] = pattern_ids.emplace(folded, lex.folded_patterns_.size());
      if (inserted) {
        lex.folded_patterns_.push_back(folded);
        lex.entries_by_pattern_.emplace_back();
      }
      lex.entries_by_pattern_[it->second].push_back(lex.entries_.size());
      lex.entries_.push_back(std::move(e));
    }
  }
  lex.automaton_ = std::make_unique<detail::AhoCorasick>(lex.folded_patterns_);
  return lex;
}

namespace {

bool is_sentence_end(std::string_view t, std::size_t p) {
  return (t[p] == '.' || t[p] == '!' || t[p] == '?') && p + 1 < t.size() && text::is_space(t[p + 1]);
}

}  // namespace

bool ambiguity_guard_passes(std::string_view t, std::size_t begin, std::size_t end,
                            const WordList& triggers) {
  // Version token: whitespace, then digits/dots (optionally 'v'-prefixed).
  std::size_t p = end;
  if (p < t.size() && text::is_space(t[p])) {
    while (p < t.size() && text::is_space(t[p])) ++p;
    std::size_t q = p;
    while (q < t.size() && (text::is_ascii_alnum(t[q]) || t[q] == '.')) ++q;
    std::string_view tok = t.substr(p, q - p);
    while (!tok.empty() && tok.back() == '.') tok.remove_suffix(1);
    if (q == t.size() || !text::is_word_byte(t[q])) {
      if (text::is_version_token(tok)) return true;
    }
  }

  std::size_t s_begin = 0;
  for (std::size_t i = begin; i > 0; --i) {
    if (is_sentence_end(t, i - 1)) {
      s_begin = i;
      break;
    }
  }
  // The sentence runs to the first terminator at or after the span's last byte.
  std::size_t s_end = t.size();
  for (std::size_t i = end > begin ? end - 1 : end; i < t.size(); ++i) {
    if (is_sentence_end(t, i)) {
      s_end = i + 1;
      break;
    }
  }
  std::size_t i = s_begin;
  while (i < s_end) {
    if (!text::is_word_byte(t[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s_end && text::is_word_byte(t[j])) ++j;
    bool overlaps = i < end && begin < j;
    if (!overlaps && triggers.contains(t.substr(i, j - i))) return true;
    i = j;
  }
  return false;
}

std::vector<Lexicon::Match> Lexicon::scan(std::string_view t) const {
  std::vector<Match> raw;
  if (t.empty() || entries_.empty()) return raw;
  const std::string folded = text::ascii_lower(t);
  automaton_->scan(folded, [&](std::size_t pid, std::size_t end) {
    const std::size_t len = folded_patterns_[pid].size();
    const std::size_t begin = end - len;
    if (begin > 0 && text::is_word_byte(t[begin - 1])) return;
    if (end < t.size() && text::is_word_byte(t[end])) return;
    for (std::size_t e : entries_by_pattern_[pid]) {
      const LexiconEntry& entry = entries_[e];
      if (entry.policy == CasePolicy::StrictCase && t.substr(begin, len) != entry.pattern) continue;
      if (entry.ambiguous && !ambiguity_guard_passes(t, begin, end, triggers_)) continue;
      raw.push_back({e, begin, end});
    }
  });
  // Leftmost-first per entry; all spans of one entry have equal length.
  std::sort(raw.begin(), raw.end(), [](const Match& a, const Match& b) {
    return a.entry != b.entry ? a.entry < b.entry : a.begin < b.begin;
  });
  std::vector<Match> out;
  for (const Match& m : raw) {
    if (!out.empty() && out.back().entry == m.entry && m.begin < out.back().end) continue;
    out.push_back(m);
  }
  return out;
}

std::vector<Mention> find_mentions(const PublicationRecord& pub, const Lexicon& lexicon) {
  std::vector<Mention> out;
  auto collect = [&](std::string_view field_text, MentionField field) {
    for (const auto& m : lexicon.scan(field_text)) {
      out.push_back({pub.pub_id, lexicon.entries()[m.entry].sw_id, field, m.begin, m.end});
    }
  };
  collect(pub.title, MentionField::Title);
  collect(pub.abstract_text, MentionField::Abstract);
  std::sort(out.begin(), out.end(), [](const Mention& a, const Mention& b) {
    return std::tie(a.field, a.begin, a.end, a.sw_id) < std::tie(b.field, b.begin, b.end, b.sw_id);
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void MentionIndex::add(const std::string& sw_id, const std::string& pub_id) {
  by_software_[sw_id].insert(pub_id);
  by_publication_[pub_id].insert(sw_id);
}

const std::set<std::string>& MentionIndex::publications_of(std::string_view sw_id) const {
  static const std::set<std::string> kEmpty;
  auto it = by_software_.find(std::string(sw_id));
  return it == by_software_.end() ? kEmpty : it->second;
}

const std::set<std::string>& MentionIndex::software_of(std::string_view pub_id) const {
  static const std::set<std::string> kEmpty;
  auto it = by_publication_.find(std::string(pub_id));
  return it == by_publication_.end() ? kEmpty : it->second;
}

std::size_t MentionIndex::pair_count() const {
  std::size_t n = 0;
  for (const auto& [_, pubs] : by_software_) n += pubs.size();
  return n;
}

bool MentionIndex::is_transpose() const {
  std::size_t forward = 0, backward = 0;
  for (const auto& [sw, pubs] : by_software_) {
    if (pubs.empty()) return false;
    for (const auto& p : pubs) {
      ++forward;
      auto it = by_publication_.find(p);
      if (it == by_publication_.end() || it->second.count(sw) == 0) return false;
    }
  }
  for (const auto& [pub, sws] : by_publication_) {
    if (sws.empty()) return false;
    backward += sws.size();
  }
  return forward == backward;
}

std::vector<Mention> find_all_mentions(const Corpus& corpus, const Lexicon& lexicon,
                                       Parallelism par) {
  const auto& pubs = corpus.records();
  std::vector<std::vector<Mention>> per_pub(pubs.size());
  const auto n = static_cast<std::ptrdiff_t>(pubs.size());
#pragma omp parallel for schedule(dynamic, 32) num_threads(resolve_threads(par))
  for (std::ptrdiff_t i = 0; i < n; ++i) per_pub[i] = find_mentions(pubs[i], lexicon);
  std::vector<Mention> out;
  for (auto& v : per_pub) out.insert(out.end(), v.begin(), v.end());
  return out;
}

MentionIndex build_mention_index(const Corpus& corpus, const Lexicon& lexicon, Parallelism par) {
  const auto& pubs = corpus.records();
  std::vector<std::vector<std::string>> per_pub(pubs.size());
  const auto n = static_cast<std::ptrdiff_t>(pubs.size());
#pragma omp parallel for schedule(dynamic, 32) num_threads(resolve_threads(par))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::vector<std::string> ids;
    for (auto& m : find_mentions(pubs[i], lexicon)) ids.push_back(std::move(m.sw_id));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    per_pub[i] = std::move(ids);
  }
  MentionIndex index;
  for (std::size_t i = 0; i < pubs.size(); ++i) {
    for (const auto& sw : per_pub[i]) index.add(sw, pubs[i].pub_id);
  }
  return index;
}

MentionIndex build_mention_index_serial(const Corpus& corpus, const Lexicon& lexicon) {
  MentionIndex index;
  for (const auto& pub : corpus.records()) {
    for (const auto& m : find_mentions(pub, lexicon)) index.add(m.sw_id, pub.pub_id);
  }
  return index;
}

void write_mention_dump(const std::filesystem::path& path, std::span<const Mention> mentions) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::UnreadableFile, "cannot write " + path.string());
  for (const auto& m : mentions) {
    out << m.pub_id << '\t' << m.sw_id << '\t' << to_string(m.field) << '\t' << m.begin << '\t'
        << m.end << '\n';
  }
}

void write_mention_index(const std::filesystem::path& path, const MentionIndex& index) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::UnreadableFile, "cannot write " + path.string());
  for (const auto& [sw, pubs] : index.by_software()) {
    for (const auto& p : pubs) out << sw << '\t' << p << '\n';
  }
}

MentionIndex read_mention_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot read " + path.string());
  MentionIndex index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim_view(line).empty()) continue;
    auto fields = text::split(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorCode::MalformedRecord,
                  path.string() + ":" + std::to_string(line_no) + ": expected sw_id<TAB>pub_id");
    }
    index.add(fields[0], fields[1]);
  }
  return index;
}

}  // namespace swcat
