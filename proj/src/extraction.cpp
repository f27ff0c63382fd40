#include "swcat/extraction.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "swcat/error.hpp"
#include "swcat/text.hpp"

namespace swcat {

std::string_view to_string(RuleId r) {
  switch (r) {
    case RuleId::R1_ColonPattern: return "R1_ColonPattern";
    case RuleId::R2_TriggerAdjacency: return "R2_TriggerAdjacency";
    case RuleId::R3_VersionSuffix: return "R3_VersionSuffix";
    case RuleId::R4_DefinitePhrase: return "R4_DefinitePhrase";
  }
  return "?";
}

std::vector<RuleId> RuleSet::rules() const {
  std::vector<RuleId> out;
  for (auto r : {RuleId::R1_ColonPattern, RuleId::R2_TriggerAdjacency, RuleId::R3_VersionSuffix,
                 RuleId::R4_DefinitePhrase}) {
    if (contains(r)) out.push_back(r);
  }
  return out;
}

double RuleWeights::of(RuleId r) const {
  switch (r) {
    case RuleId::R1_ColonPattern: return colon_pattern;
    case RuleId::R2_TriggerAdjacency: return trigger_adjacency;
    case RuleId::R3_VersionSuffix: return version_suffix;
    case RuleId::R4_DefinitePhrase: return definite_phrase;
  }
  return 0.0;
}

WordList RuleConfig::default_triggers() {
  return WordList{"software", "package", "packages", "solver", "solvers", "library", "libraries",
                  "toolbox", "program", "system", "code", "tool", "tools"};
}

RuleConfig RuleConfig::with_common_words(WordList common_words) {
  RuleConfig cfg;
  cfg.triggers = default_triggers();
  cfg.common_words = std::move(common_words);
  return cfg;
}

RuleConfig RuleConfig::defaults() {
  return with_common_words(WordList::load(default_common_words_path()));
}

RuleConfig RuleConfig::from_config(const KeyValueConfig& kv) {
  RuleConfig cfg;
  if (kv.has("trigger_words")) {
    cfg.triggers = WordList(kv.get_list("trigger_words"));
  } else {
    cfg.triggers = default_triggers();
  }
  auto words = kv.get("common_words");
  cfg.common_words =
      WordList::load(words ? kv.resolve_path(*words) : default_common_words_path());
  RuleWeights w;
  cfg.weights.colon_pattern = kv.get_double("weight.r1", w.colon_pattern);
  cfg.weights.trigger_adjacency = kv.get_double("weight.r2", w.trigger_adjacency);
  cfg.weights.version_suffix = kv.get_double("weight.r3", w.version_suffix);
  cfg.weights.definite_phrase = kv.get_double("weight.r4", w.definite_phrase);
  for (double v : {cfg.weights.colon_pattern, cfg.weights.trigger_adjacency,
                   cfg.weights.version_suffix, cfg.weights.definite_phrase}) {
    if (!(v > 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::InvalidConfig, "rule weights must lie in (0, 1]");
    }
  }
  return cfg;
}

RuleConfig RuleConfig::load(const std::filesystem::path& path) {
  return from_config(KeyValueConfig::load(path));
}

namespace {

// Length of a punctuation character at the front/back of s, 0 if none.
// ASCII punctuation plus the common UTF-8 dashes and quotes.
constexpr std::string_view kWidePunct[] = {
    "\xE2\x80\x93", "\xE2\x80\x94", "\xE2\x80\x98", "\xE2\x80\x99",
    "\xE2\x80\x9C", "\xE2\x80\x9D", "\xC2\xAB",     "\xC2\xBB",
};

bool is_ascii_punct(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x21 && u <= 0x7E && !text::is_ascii_alnum(c);
}

std::size_t punct_front(std::string_view s) {
  if (s.empty()) return 0;
  if (is_ascii_punct(s.front())) return 1;
  for (auto p : kWidePunct) {
    if (s.substr(0, p.size()) == p) return p.size();
  }
  return 0;
}

std::size_t punct_back(std::string_view s) {
  if (s.empty()) return 0;
  char c = s.back();
  if (c == '+' || c == '#') {
    std::size_t p = s.size();
    while (p > 0 && (s[p - 1] == '+' || s[p - 1] == '#')) --p;
    if (p > 0 && text::is_word_byte(s[p - 1])) return 0;
    return 1;
  }
  if (is_ascii_punct(c)) return 1;
  for (auto p : kWidePunct) {
    if (s.size() >= p.size() && s.substr(s.size() - p.size()) == p) return p.size();
  }
  return 0;
}

bool is_colon_like(std::string_view t) {
  return t == ":" || t == "-" || t == "\xE2\x80\x93" || t == "\xE2\x80\x94";
}

}  // namespace

std::vector<Token> tokenize_title(std::string_view title) {
  std::vector<Token> tokens;
  auto delim = [&](std::size_t b, std::size_t e) {
    tokens.push_back({std::string(title.substr(b, e - b)), b, e, TokenKind::Delimiter, false});
  };
  std::size_t i = 0;
  bool seen_word = false;
  while (i < title.size()) {
    while (i < title.size() && text::is_space(title[i])) ++i;
    std::size_t b = i;
    while (i < title.size() && !text::is_space(title[i])) ++i;
    std::size_t e = i;
    if (b == e) break;

    while (b < e) {
      std::size_t n = punct_front(title.substr(b, e - b));
      if (n == 0) break;
      delim(b, b + n);
      b += n;
    }
    std::vector<std::pair<std::size_t, std::size_t>> trailing;
    while (e > b) {
      std::size_t n = punct_back(title.substr(b, e - b));
      if (n == 0) break;
      trailing.emplace_back(e - n, e);
      e -= n;
    }
    if (b < e) {
      tokens.push_back({std::string(title.substr(b, e - b)), b, e, TokenKind::Word, !seen_word});
      seen_word = true;
    }
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) delim(it->first, it->second);
  }
  return tokens;
}

bool is_namey(std::string_view token, bool sentence_initial, const RuleConfig& config) {
  if (token.empty() || config.triggers.contains(token) || text::is_version_token(token)) {
    return false;
  }
  std::size_t letters = 0, digits = 0, lower = 0;
  bool upper_after_first = false;
  for (std::size_t i = 0; i < token.size(); ++i) {
    char c = token[i];
    if (text::is_ascii_alpha(c)) {
      ++letters;
      if (text::is_ascii_lower(c)) ++lower;
      if (i > 0 && text::is_ascii_upper(c)) upper_after_first = true;
    } else if (text::is_ascii_digit(c)) {
      ++digits;
    }
  }
  if (letters == 0) return false;
  if (lower == 0 && text::utf8_length(token) >= 2) return true;  // all caps
  if (upper_after_first && lower > 0) return true;               // internal caps
  if (digits > 0) return true;                                   // letters and digits
  return text::is_ascii_upper(token.front()) && !sentence_initial &&
         !config.common_words.contains(token);
}

std::vector<CandidateHit> extract_candidates(std::string_view title, std::string_view pub_id,
                                             const RuleConfig& config) {
  const std::vector<Token> tokens = tokenize_title(title);
  std::vector<const Token*> words;
  std::size_t colon_word_index = std::string::npos;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::Word) {
      words.push_back(&t);
    } else if (colon_word_index == std::string::npos && is_colon_like(t.text) && !words.empty()) {
      colon_word_index = words.size();
    }
  }
  const std::size_t n = words.size();
  std::vector<char> trigger(n), namey(n);
  for (std::size_t i = 0; i < n; ++i) {
    trigger[i] = config.triggers.contains(words[i]->text);
    namey[i] = is_namey(words[i]->text, words[i]->sentence_initial, config);
  }

  std::vector<CandidateHit> hits;
  auto add = [&](std::string surface, RuleId rule) {
    for (auto& h : hits) {
      if (h.surface == surface) {
        h.rules.insert(rule);
        return;
      }
    }
    hits.push_back({std::move(surface), std::string(pub_id), RuleSet{rule}, 0.0});
  };

  // R1: "<phrase>: ..." with a trigger somewhere after the phrase.
  if (colon_word_index != std::string::npos) {
    std::size_t m = colon_word_index;
    while (m > 0 && trigger[m - 1]) --m;
    bool trigger_after = std::any_of(trigger.begin() + static_cast<std::ptrdiff_t>(m), trigger.end(),
                                     [](char t) { return t != 0; });
    if (m >= 1 && m <= 3 && namey[0] && trigger_after) {
      std::size_t b = words[0]->begin, e = words[m - 1]->end;
      add(std::string(title.substr(b, e - b)), RuleId::R1_ColonPattern);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!namey[i]) continue;
    const std::string& surface = words[i]->text;
    // R2: at most three word tokens between the name and a trigger.
    std::size_t lo = i >= 4 ? i - 4 : 0, hi = std::min(n - 1, i + 4);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j != i && trigger[j]) {
        add(surface, RuleId::R2_TriggerAdjacency);
        break;
      }
    }
    // R3: version right after the name, or after one trigger word.
    if ((i + 1 < n && text::is_version_token(words[i + 1]->text)) ||
        (i + 2 < n && trigger[i + 1] && text::is_version_token(words[i + 2]->text))) {
      add(surface, RuleId::R3_VersionSuffix);
    }
    // R4: "the <name> <trigger>".
    if (i >= 1 && i + 1 < n && text::ascii_lower(words[i - 1]->text) == "the" && trigger[i + 1]) {
      add(surface, RuleId::R4_DefinitePhrase);
    }
  }

  for (auto& h : hits) {
    double sum = 0.0;
    for (RuleId r : h.rules.rules()) sum += config.weights.of(r);
    h.hit_score = std::min(1.0, sum);
  }
  std::stable_sort(hits.begin(), hits.end(), [&](const CandidateHit& a, const CandidateHit& b) {
    return title.find(a.surface) < title.find(b.surface);
  });
  return hits;
}

std::vector<CandidateHit> extract_corpus_serial(const Corpus& corpus, const RuleConfig& config) {
  std::vector<CandidateHit> out;
  for (const auto& pub : corpus.records()) {
    auto hits = extract_candidates(pub.title, pub.pub_id, config);
    out.insert(out.end(), std::make_move_iterator(hits.begin()), std::make_move_iterator(hits.end()));
  }
  return out;
}

std::vector<CandidateHit> extract_corpus(const Corpus& corpus, const RuleConfig& config,
                                         Parallelism par) {
  const auto& pubs = corpus.records();
  std::vector<std::vector<CandidateHit>> per_pub(pubs.size());
  const auto n = static_cast<std::ptrdiff_t>(pubs.size());
#pragma omp parallel for schedule(dynamic, 64) num_threads(resolve_threads(par))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    per_pub[i] = extract_candidates(pubs[i].title, pubs[i].pub_id, config);
  }
  std::vector<CandidateHit> out;
  for (auto& hits : per_pub) {
    out.insert(out.end(), std::make_move_iterator(hits.begin()), std::make_move_iterator(hits.end()));
  }
  return out;
}

std::vector<SoftwareCandidate> merge_candidates(std::span<const CandidateHit> hits) {
  std::map<std::string, std::vector<const CandidateHit*>> groups;
  for (const auto& h : hits) groups[text::normalize_name(h.surface)].push_back(&h);

  std::vector<SoftwareCandidate> out;
  out.reserve(groups.size());
  for (auto& [name, group] : groups) {
    // Fixed multiplication order keeps the score independent of input order.
    std::sort(group.begin(), group.end(), [](const CandidateHit* a, const CandidateHit* b) {
      if (a->pub_id != b->pub_id) return a->pub_id < b->pub_id;
      if (a->surface != b->surface) return a->surface < b->surface;
      return a->hit_score < b->hit_score;
    });
    SoftwareCandidate c;
    c.normalized_name = name;
    double miss = 1.0;
    for (const CandidateHit* h : group) {
      c.surfaces.insert(h->surface);
      c.evidence.insert(h->pub_id);
      miss *= 1.0 - h->hit_score;
    }
    c.score = 1.0 - miss;
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const SoftwareCandidate& a, const SoftwareCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.normalized_name < b.normalized_name;
  });
  return out;
}

void write_worklist(const std::filesystem::path& path,
                    std::span<const SoftwareCandidate> candidates) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::UnreadableFile, "cannot write " + path.string());
  out << "# normalized_name\tscore\tsurfaces\tevidence\n";
  char buf[32];
  for (const auto& c : candidates) {
    std::snprintf(buf, sizeof buf, "%.17g", c.score);
    out << c.normalized_name << '\t' << buf << '\t'
        << text::join({c.surfaces.begin(), c.surfaces.end()}, "|") << '\t'
        << text::join({c.evidence.begin(), c.evidence.end()}, "|") << '\n';
  }
}

std::vector<SoftwareCandidate> read_worklist(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot read " + path.string());
  std::vector<SoftwareCandidate> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim_view(line).empty() || line.front() == '#') continue;
    auto fields = text::split(line, '\t');
    auto bad = [&](const std::string& why) {
      return Error(ErrorCode::MalformedRecord,
                   path.string() + ":" + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 4) throw bad("expected 4 tab-separated fields");
    SoftwareCandidate c;
    c.normalized_name = fields[0];
    try {
      c.score = std::stod(fields[1]);
    } catch (const std::exception&) {
      throw bad("bad score");
    }
    for (auto& s : text::split(fields[2], '|')) {
      if (!s.empty()) c.surfaces.insert(s);
    }
    for (auto& p : text::split(fields[3], '|')) {
      if (!p.empty()) c.evidence.insert(p);
    }
    if (c.normalized_name.empty() || c.evidence.empty()) throw bad("empty name or evidence");
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<CurationDecision> parse_curation(std::string_view content) {
  std::vector<CurationDecision> out;
  std::size_t line_no = 0;
  for (const std::string& raw : text::split(content, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim_view(line).empty() || text::trim_view(line).front() == '#') continue;
    auto bad = [&](const std::string& why) {
      return Error(ErrorCode::MalformedRecord,
                   "curation line " + std::to_string(line_no) + ": " + why);
    };
    auto fields = text::split(line, '\t');
    if (fields.size() < 2 || fields.size() > 3) throw bad("expected 2 or 3 tab-separated fields");
    CurationDecision d;
    d.normalized_name = text::normalize_name(fields[0]);
    if (d.normalized_name.empty()) throw bad("empty name");
    std::string verdict = text::ascii_lower(text::trim(fields[1]));
    if (verdict == "accept") {
      d.verdict = CurationDecision::Verdict::Accept;
      if (fields.size() < 3 || text::trim_view(fields[2]).empty()) {
        throw bad("accept needs a canonical name");
      }
      d.canonical_name = text::trim(fields[2]);
    } else if (verdict == "reject") {
      d.verdict = CurationDecision::Verdict::Reject;
    } else {
      throw bad("verdict must be accept or reject");
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<CurationDecision> load_curation(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_curation(ss.str());
}

CurationResult apply_curation(std::span<const SoftwareCandidate> candidates,
                              std::span<const CurationDecision> decisions,
                              const std::set<std::string>& existing_ids) {
  std::map<std::string, const CurationDecision*> by_name;
  for (const auto& d : decisions) by_name[d.normalized_name] = &d;

  std::vector<const SoftwareCandidate*> ordered;
  for (const auto& c : candidates) ordered.push_back(&c);
  std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    return a->normalized_name < b->normalized_name;
  });

  CurationResult result;
  std::set<std::string> ids = existing_ids;
  std::set<std::string> matched;
  for (const SoftwareCandidate* cand : ordered) {
    SoftwareCandidate c = *cand;
    auto it = by_name.find(c.normalized_name);
    if (it == by_name.end()) {
      c.status = CurationStatus::Pending;
      result.pending.push_back(std::move(c));
      continue;
    }
    matched.insert(c.normalized_name);
    const CurationDecision& d = *it->second;
    if (d.verdict == CurationDecision::Verdict::Reject) {
      c.status = CurationStatus::Rejected;
      result.rejected.push_back(std::move(c));
      continue;
    }
    SoftwareRecord rec;
    rec.sw_id = assign_persistent_id(d.canonical_name, ids);
    ids.insert(rec.sw_id);
    rec.name = d.canonical_name;
    for (const auto& s : c.surfaces) {
      if (s != rec.name) rec.aliases.push_back(s);
    }
    rec.provenance = Provenance::PublicationDerived;
    result.accepted.push_back(std::move(rec));
  }
  for (const auto& [name, d] : by_name) {
    if (matched.count(name) == 0) {
      result.warnings.push_back("no candidate named '" + name + "'");
    }
  }
  return result;
}

}  // namespace swcat
