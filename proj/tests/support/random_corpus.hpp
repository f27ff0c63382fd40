#pragma once

// Randomized corpora and catalogs built to stress whole-word matching: case
// mutations, names embedded in longer words, punctuation inside names,
// short names, common-word names, UTF-8 neighbours, duplicate patterns
// across records, triggers and version numbers near names.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "swcat/config.hpp"
#include "swcat/corpus.hpp"

namespace randgen {

struct Names {
  std::string name;
  std::vector<std::string> aliases;
};

inline const std::vector<Names>& name_pool() {
  static const std::vector<Names> pool = {
      {"SINGULAR", {"Singular"}},
      {"Maple", {}},
      {"R", {}},
      {"Z3", {}},
      {"deal.II", {"dealii"}},
      {"C++", {}},
      {"PARI/GP", {"PARI"}},
      {"Macaulay2", {"M2"}},
      {"GAP", {}},
      {"gap", {}},
      {"FLINT", {"flint"}},
      {"MuPAD", {}},
      {"Mathematica", {}},
      {"Computer Algebra System", {}},
      {"Gröbner Walk", {}},
      {"LAPACK", {"Lapack", " LAPACK "}},
      {"Newton", {}},
      {"PETSc", {"petsc"}},
      {"CoCoA", {}},
      {"F#", {}},
      {"X", {}},
      {"Octave", {"GNU Octave"}},
  };
  return pool;
}

inline swcat::WordList common_words() {
  return swcat::WordList{"maple", "gap", "flint", "singular", "newton", "octave", "system",
                         "tree", "code", "computer", "algebra", "walk", "r", "x"};
}

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

  std::vector<swcat::SoftwareRecord> catalog() {
    std::vector<swcat::SoftwareRecord> out;
    const auto& pool = name_pool();
    std::size_t n = 3 + below(pool.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& src = pick(pool);
      swcat::SoftwareRecord r;
      r.sw_id = "swm:r" + std::to_string(i);
      r.name = src.name;
      for (const auto& a : src.aliases) {
        if (chance(0.7)) r.aliases.push_back(a);
      }
      if (chance(0.1)) r.aliases.push_back(src.name);  // alias equal to name
      out.push_back(std::move(r));
    }
    return out;
  }

  static char lower(char c) { return c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c; }
  static char upper(char c) { return c >= 'a' && c <= 'z' ? static_cast<char>(c - 32) : c; }

  std::string mutate_case(const std::string& s) {
    std::string out = s;
    switch (below(4)) {
      case 0: break;
      case 1:
        for (auto& c : out) c = lower(c);
        break;
      case 2:
        for (auto& c : out) c = upper(c);
        break;
      default:
        for (auto& c : out) {
          if (chance(0.3)) c = c >= 'A' && c <= 'Z' ? lower(c) : upper(c);
        }
    }
    return out;
  }

  std::string name_fragment(const std::vector<swcat::SoftwareRecord>& cat) {
    const auto& r = pick(cat);
    std::string n = r.aliases.empty() || chance(0.6) ? r.name : pick(r.aliases);
    if (chance(0.3)) n = mutate_case(n);
    switch (below(8)) {
      case 0: return "x" + n;  // embedded on the left
      case 1: return n + "ity";
      case 2: return n + "é";
      case 3: return "(" + n + ")";
      case 4: return n + ",";
      case 5: return n + " " + pick(versions());
      case 6: return n + "+";
      default: return n;
    }
  }

  static const std::vector<std::string>& versions() {
    static const std::vector<std::string> v = {"4.0", "v2", "3.1.4", "2.", "10", "v1.2.3.", "4.0b", "1..2", "5"};
    return v;
  }

  static const std::vector<std::string>& filler() {
    static const std::vector<std::string> v = {
        "we",     "compute", "the",    "ideal",  "with",     "a",       "tree",   "under",   "software",
        "package", "solver", "library", "tool",  "code",     "system",  "maple",  "gap",     "newton",
        "method", "is",      "used",   "for",    "Gröbner", "bases",   "in",     "über",    "x",
        "r",      "and",     "then",   "solver.", "package!", "tool?", "e.g.",   "i.e.",    "3.0",
        "version", "program", "toolbox", "libraries", "via", "of",   "singularity", "–", "\"quoted\""};
    return v;
  }

  std::string text(const std::vector<swcat::SoftwareRecord>& cat, std::size_t words) {
    std::string out;
    for (std::size_t i = 0; i < words; ++i) {
      std::string w = chance(0.25) ? name_fragment(cat) : pick(filler());
      if (!out.empty()) {
        switch (below(10)) {
          case 0: out += ". "; break;
          case 1: out += "  "; break;
          case 2: out += "\n"; break;
          case 3: out += "! "; break;
          default: out += " ";
        }
      }
      out += w;
    }
    if (chance(0.5)) out += ".";
    return out;
  }

  swcat::Corpus corpus(const std::vector<swcat::SoftwareRecord>& cat, std::size_t max_pubs) {
    std::vector<swcat::PublicationRecord> pubs;
    std::size_t n = below(max_pubs + 1);
    for (std::size_t i = 0; i < n; ++i) {
      swcat::PublicationRecord p;
      p.pub_id = "p" + std::to_string(i);
      p.title = text(cat, 2 + below(10));
      p.abstract_text = chance(0.1) ? "" : text(cat, 5 + below(60));
      p.year = 1990 + static_cast<int>(below(30));
      p.keywords = {"k" + std::to_string(below(5))};
      pubs.push_back(std::move(p));
    }
    return swcat::Corpus(std::move(pubs));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace randgen
