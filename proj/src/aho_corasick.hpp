#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace swcat::detail {

/// Byte-level Aho-Corasick automaton. Reports every occurrence of every
/// pattern, overlapping ones included.
class AhoCorasick {
 public:
  AhoCorasick() = default;
  explicit AhoCorasick(const std::vector<std::string>& patterns);

  /// Calls on_match(pattern_index, end_offset) for each occurrence, in order
  /// of increasing end offset.
  template <typename F>
  void scan(std::string_view text, F&& on_match) const {
    if (nodes_.empty()) return;
    std::int32_t state = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      state = step(state, static_cast<unsigned char>(text[i]));
      for (std::int32_t s = nodes_[state].output ? state : nodes_[state].dict; s >= 0;
           s = nodes_[s].dict) {
        for (std::int32_t p : nodes_[s].patterns) on_match(static_cast<std::size_t>(p), i + 1);
      }
    }
  }

  std::size_t state_count() const { return nodes_.size(); }

 private:
  struct Node {
    std::vector<std::pair<unsigned char, std::int32_t>> edges;  // sorted by byte
    std::int32_t fail = 0;
    std::int32_t dict = -1;  // nearest proper suffix state that ends a pattern
    bool output = false;
    std::vector<std::int32_t> patterns;
  };

  std::int32_t child(std::int32_t state, unsigned char c) const;
  std::int32_t step(std::int32_t state, unsigned char c) const;

  std::vector<Node> nodes_;
  std::array<std::int32_t, 256> root_{};  // full transition row for the root
};

}  // namespace swcat::detail
