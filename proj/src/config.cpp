#include "swcat/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "swcat/error.hpp"
#include "swcat/text.hpp"

namespace swcat {

KeyValueConfig KeyValueConfig::parse(std::string_view content, std::string_view origin) {
  KeyValueConfig cfg;
  cfg.origin_ = std::string(origin);
  std::size_t line_no = 0;
  for (const std::string& raw : text::split(content, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim_view(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidConfig, cfg.origin_ + ":" + std::to_string(line_no) +
                                                ": expected 'key = value'");
    }
    std::string key = text::trim(line.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::InvalidConfig,
                  cfg.origin_ + ":" + std::to_string(line_no) + ": empty key");
    }
    cfg.entries_[key] = text::trim(line.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  KeyValueConfig cfg = parse(ss.str(), path.string());
  cfg.base_dir_ = path.parent_path();
  return cfg;
}

bool KeyValueConfig::has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_or(std::string_view key, std::string_view fallback) const {
  auto v = get(key);
  return v ? *v : std::string(fallback);
}

double KeyValueConfig::get_double(std::string_view key, double fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    double d = std::stod(*v, &used);
    if (used != v->size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfig,
                origin_ + ": '" + std::string(key) + "' is not a number: " + *v);
  }
}

long long KeyValueConfig::get_int(std::string_view key, long long fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    long long n = std::stoll(*v, &used);
    if (used != v->size()) throw std::invalid_argument("trailing");
    return n;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfig,
                origin_ + ": '" + std::string(key) + "' is not an integer: " + *v);
  }
}

bool KeyValueConfig::get_bool(std::string_view key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::string s = text::ascii_lower(*v);
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw Error(ErrorCode::InvalidConfig,
              origin_ + ": '" + std::string(key) + "' is not a boolean: " + *v);
}

std::vector<std::string> KeyValueConfig::get_list(std::string_view key) const {
  std::vector<std::string> out;
  auto v = get(key);
  if (!v) return out;
  std::string cur;
  for (char c : *v) {
    if (c == ',' || text::is_space(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

void KeyValueConfig::set(std::string key, std::string value) {
  entries_[std::move(key)] = std::move(value);
}

std::filesystem::path KeyValueConfig::resolve_path(std::string_view value) const {
  std::filesystem::path p{std::string(value)};
  if (p.is_absolute() || base_dir_.empty()) return p;
  return base_dir_ / p;
}

WordList::WordList(std::initializer_list<std::string_view> words) {
  for (auto w : words) add(w);
}

WordList::WordList(const std::vector<std::string>& words) {
  for (const auto& w : words) add(w);
}

WordList WordList::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot read word list " + path.string());
  WordList list;
  std::string line;
  while (std::getline(in, line)) {
    auto w = text::trim_view(line);
    if (w.empty() || w.front() == '#') continue;
    list.add(w);
  }
  return list;
}

void WordList::add(std::string_view word) { words_.insert(text::ascii_lower(word)); }

bool WordList::contains(std::string_view word) const {
  return words_.count(text::ascii_lower(word)) > 0;
}

std::vector<std::string> WordList::sorted() const {
  std::vector<std::string> out(words_.begin(), words_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::filesystem::path default_common_words_path() {
  if (const char* dir = std::getenv("SWCAT_DATA_DIR"); dir != nullptr && *dir != '\0') {
    return std::filesystem::path(dir) / "common_words.txt";
  }
  return std::filesystem::path(SWCAT_DATA_DIR) / "common_words.txt";
}

}  // namespace swcat
