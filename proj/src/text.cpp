#include "swcat/text.hpp"

#include <array>
#include <omp.h>

#include "swcat/error.hpp"
#include "swcat/parallel.hpp"

namespace swcat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnreadableFile: return "UnreadableFile";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::InvalidRecord: return "InvalidRecord";
    case ErrorCode::EmptySlug: return "EmptySlug";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::SelfComparison: return "SelfComparison";
    case ErrorCode::StoreUnavailable: return "StoreUnavailable";
    case ErrorCode::InvalidSnapshot: return "InvalidSnapshot";
    case ErrorCode::EmptyQuery: return "EmptyQuery";
    case ErrorCode::NoCriteria: return "NoCriteria";
    case ErrorCode::InvalidQuery: return "InvalidQuery";
    case ErrorCode::InvalidKey: return "InvalidKey";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Internal: return "Internal";
  }
  return "Internal";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::SelfComparison:
    case ErrorCode::Internal:
      return false;
    default:
      return true;
  }
}

int resolve_threads(Parallelism p) {
  return p.threads > 0 ? p.threads : omp_get_max_threads();
}

}  // namespace swcat

namespace swcat::text {

namespace {

// U+00C0 .. U+00FF. Empty entries are not letters and pass through.
constexpr std::array<const char*, 64> kLatin1 = {
    "A", "A", "A", "A", "A", "A", "AE", "C", "E", "E", "E", "E", "I", "I", "I", "I",
    "D", "N", "O", "O", "O", "O", "O", "",  "O", "U", "U", "U", "U", "Y", "TH", "ss",
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    "d", "n", "o", "o", "o", "o", "o", "",  "o", "u", "u", "u", "u", "y", "th", "y",
};

// U+0100 .. U+017F.
constexpr std::array<const char*, 128> kLatinExtA = {
    "A", "a", "A", "a", "A", "a", "C", "c", "C", "c", "C", "c", "C", "c", "D", "d",
    "D", "d", "E", "e", "E", "e", "E", "e", "E", "e", "E", "e", "G", "g", "G", "g",
    "G", "g", "G", "g", "H", "h", "H", "h", "I", "i", "I", "i", "I", "i", "I", "i",
    "I", "i", "IJ", "ij", "J", "j", "K", "k", "k", "L", "l", "L", "l", "L", "l", "L",
    "l", "L", "l", "N", "n", "N", "n", "N", "n", "n", "N", "n", "O", "o", "O", "o",
    "O", "o", "OE", "oe", "R", "r", "R", "r", "R", "r", "S", "s", "S", "s", "S", "s",
    "S", "s", "T", "t", "T", "t", "T", "t", "U", "u", "U", "u", "U", "u", "U", "u",
    "U", "u", "U", "u", "W", "w", "Y", "y", "Y", "Z", "z", "Z", "z", "Z", "z", "s",
};

// Decodes one UTF-8 sequence at s[i]. Returns the code point and advances i;
// malformed bytes come back as themselves with length 1.
char32_t decode(std::string_view s, std::size_t& i) {
  auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  if ((b0 & 0xE0) == 0xC0) {
    int c1 = cont(1);
    if (c1 >= 0) {
      i += 2;
      return static_cast<char32_t>(((b0 & 0x1F) << 6) | c1);
    }
  } else if ((b0 & 0xF0) == 0xE0) {
    int c1 = cont(1), c2 = cont(2);
    if (c1 >= 0 && c2 >= 0) {
      i += 3;
      return static_cast<char32_t>(((b0 & 0x0F) << 12) | (c1 << 6) | c2);
    }
  } else if ((b0 & 0xF8) == 0xF0) {
    int c1 = cont(1), c2 = cont(2), c3 = cont(3);
    if (c1 >= 0 && c2 >= 0 && c3 >= 0) {
      i += 4;
      return static_cast<char32_t>(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3);
    }
  }
  ++i;
  return b0;
}

}  // namespace

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = to_lower(c);
  return out;
}

std::string_view trim_view(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string trim(std::string_view s) { return std::string(trim_view(s)); }

std::string ascii_fold(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  std::size_t i = 0;
  while (i < utf8.size()) {
    std::size_t start = i;
    char32_t cp = decode(utf8, i);
    const char* repl = nullptr;
    if (cp >= 0xC0 && cp <= 0xFF) {
      repl = kLatin1[cp - 0xC0];
    } else if (cp >= 0x100 && cp <= 0x17F) {
      repl = kLatinExtA[cp - 0x100];
    }
    if (repl != nullptr && *repl != '\0') {
      out += repl;
    } else {
      out.append(utf8.substr(start, i - start));
    }
  }
  return out;
}

std::string normalize_name(std::string_view name) {
  std::string folded = ascii_fold(name);
  std::string out;
  out.reserve(folded.size());
  bool pending_space = false;
  for (char c : folded) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(to_lower(c));
  }
  return out;
}

std::string slugify(std::string_view name) {
  std::string folded = ascii_fold(name);
  std::string out;
  bool pending_hyphen = false;
  for (char c : folded) {
    if (is_ascii_alnum(c)) {
      if (pending_hyphen && !out.empty()) out.push_back('-');
      pending_hyphen = false;
      out.push_back(to_lower(c));
    } else {
      pending_hyphen = true;
    }
  }
  return out;
}

bool is_version_token(std::string_view token) {
  std::size_t i = 0;
  if (i < token.size() && token[i] == 'v') ++i;
  bool need_digit = true;
  while (i < token.size()) {
    if (is_ascii_digit(token[i])) {
      need_digit = false;
      ++i;
    } else if (token[i] == '.' && !need_digit) {
      need_digit = true;
      ++i;
    } else {
      return false;
    }
  }
  return !need_digit;
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

bool starts_with_ci(std::string_view haystack, std::string_view prefix) {
  if (prefix.size() > haystack.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (to_lower(haystack[i]) != to_lower(prefix[i])) return false;
  }
  return true;
}

}  // namespace swcat::text
