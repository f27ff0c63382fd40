#include "aho_corasick.hpp"

#include <algorithm>
#include <deque>

namespace swcat::detail {

AhoCorasick::AhoCorasick(const std::vector<std::string>& patterns) {
  nodes_.emplace_back();
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    if (patterns[p].empty()) continue;
    std::int32_t state = 0;
    for (unsigned char c : patterns[p]) {
      std::int32_t next = child(state, c);
      if (next < 0) {
        next = static_cast<std::int32_t>(nodes_.size());
        nodes_.emplace_back();
        auto& edges = nodes_[state].edges;
        edges.insert(std::upper_bound(edges.begin(), edges.end(), std::make_pair(c, std::int32_t{-1})),
                     {c, next});
      }
      state = next;
    }
    nodes_[state].output = true;
    nodes_[state].patterns.push_back(static_cast<std::int32_t>(p));
  }

  root_.fill(0);
  std::deque<std::int32_t> queue;
  for (auto [c, s] : nodes_[0].edges) {
    root_[c] = s;
    nodes_[s].fail = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    std::int32_t u = queue.front();
    queue.pop_front();
    for (auto [c, v] : nodes_[u].edges) {
      std::int32_t f = nodes_[u].fail;
      while (f != 0 && child(f, c) < 0) f = nodes_[f].fail;
      std::int32_t target = child(f, c);
      nodes_[v].fail = (target >= 0 && target != v) ? target : 0;
      std::int32_t vf = nodes_[v].fail;
      nodes_[v].dict = nodes_[vf].output ? vf : nodes_[vf].dict;
      queue.push_back(v);
    }
  }
}

std::int32_t AhoCorasick::child(std::int32_t state, unsigned char c) const {
  const auto& edges = nodes_[state].edges;
  auto it = std::lower_bound(edges.begin(), edges.end(), c,
                             [](const auto& e, unsigned char b) { return e.first < b; });
  return (it != edges.end() && it->first == c) ? it->second : -1;
}

std::int32_t AhoCorasick::step(std::int32_t state, unsigned char c) const {
  while (state != 0) {
    std::int32_t next = child(state, c);
    if (next >= 0) return next;
    state = nodes_[state].fail;
  }
  return root_[c];
}

}  // namespace swcat::detail
