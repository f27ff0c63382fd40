#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Byte-level text helpers shared by every module. All case handling is
// ASCII-only so that folded text keeps the byte offsets of the original;
// non-ASCII bytes are treated as word characters.
namespace swcat::text {

inline bool is_ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_ascii_alnum(char c) { return is_ascii_alpha(c) || is_ascii_digit(c); }
inline bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool is_ascii_lower(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
inline char to_lower(char c) { return is_ascii_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

/// Word characters for whole-word boundaries: ASCII letters/digits and any
/// byte of a multi-byte UTF-8 sequence.
inline bool is_word_byte(char c) {
  return is_ascii_alnum(c) || static_cast<unsigned char>(c) >= 0x80;
}

std::string ascii_lower(std::string_view s);
std::string_view trim_view(std::string_view s);
std::string trim(std::string_view s);

/// Replaces Latin-1 / Latin Extended-A letters with their ASCII base letters
/// ("Gröbner" -> "Grobner", "Łódź" -> "Lodz"). Other code points pass through.
std::string ascii_fold(std::string_view utf8);

/// Matching key for software and portal names: ASCII-fold, lowercase,
/// internal whitespace runs collapsed to one space, trimmed.
std::string normalize_name(std::string_view name);

/// Lowercase ASCII-folded slug; non-alphanumeric runs become one hyphen.
/// Empty when the input has no ASCII letters or digits.
std::string slugify(std::string_view name);

/// `v?D(.D)*` where D is a run of digits.
bool is_version_token(std::string_view token);

/// Number of code points (bytes that are not UTF-8 continuation bytes).
std::size_t utf8_length(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool starts_with_ci(std::string_view haystack, std::string_view prefix);

}  // namespace swcat::text
