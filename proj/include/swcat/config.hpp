#pragma once

#include <filesystem>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace swcat {

/// `key = value` file: one pair per line, `#` starts a comment, later keys
/// override earlier ones. Used for the rule config and the pipeline config.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view content, std::string_view origin = "<string>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string_view fallback) const;
  double get_double(std::string_view key, double fallback) const;
  long long get_int(std::string_view key, long long fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  /// Comma- or whitespace-separated list.
  std::vector<std::string> get_list(std::string_view key) const;

  void set(std::string key, std::string value);
  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }
  /// Directory of the file the config was loaded from; relative paths in
  /// values resolve against it.
  const std::filesystem::path& base_dir() const { return base_dir_; }
  std::filesystem::path resolve_path(std::string_view value) const;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
  std::string origin_;
  std::filesystem::path base_dir_;
};

/// Set of lowercase words with case-insensitive lookup.
class WordList {
 public:
  WordList() = default;
  WordList(std::initializer_list<std::string_view> words);
  explicit WordList(const std::vector<std::string>& words);

  /// One word per line; blank lines and `#` comments skipped.
  static WordList load(const std::filesystem::path& path);

  void add(std::string_view word);
  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }
  std::vector<std::string> sorted() const;

 private:
  std::unordered_set<std::string> words_;
};

/// Path of the bundled ~50k-entry common-word list.
std::filesystem::path default_common_words_path();

}  // namespace swcat
