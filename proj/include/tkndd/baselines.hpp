#pragma once

// DOM-based similarity baselines: token-level Levenshtein over the preorder
// tag sequence, a 64-bit simhash over tag 3-grams, and ordered tree edit
// distance (Zhang-Shasha).

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tkndd/dom_tree.hpp"
#include "tkndd/errors.hpp"
#include "tkndd/tree_kernels.hpp"

namespace tkndd {

enum class BaselineKind { LevenshteinDom = 0, Simhash64 = 1, TreeEditDistance = 2 };

inline constexpr std::array<BaselineKind, 3> kAllBaselines{
    BaselineKind::LevenshteinDom, BaselineKind::Simhash64, BaselineKind::TreeEditDistance};

inline std::string_view to_string(BaselineKind b) {
  switch (b) {
    case BaselineKind::LevenshteinDom:
      return "levenshtein";
    case BaselineKind::Simhash64:
      return "simhash";
    case BaselineKind::TreeEditDistance:
      return "ted";
  }
  return "?";
}

// Unit-cost edit distance between two token sequences.
template <class T>
std::size_t edit_distance(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

inline double levenshtein_similarity(const DomTree& t1, const DomTree& t2) {
  const auto s1 = serialize_preorder(t1);
  const auto s2 = serialize_preorder(t2);
  const std::size_t longest = std::max(s1.size(), s2.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(s1, s2)) / static_cast<double>(longest);
}

// ---- simhash --------------------------------------------------------------

// FNV-1a 64 followed by the splitmix64 finalizer, which spreads FNV's weak
// high-bit avalanche across all 64 bits.
inline std::uint64_t token_hash(std::string_view token) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : token) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

// 3-grams of the preorder tag sequence, tags joined by a single space.
// Sequences shorter than three tags form a single token.
inline std::vector<std::string> tag_shingles(const DomTree& t) {
  const auto seq = serialize_preorder(t);
  std::vector<std::string> out;
  auto join = [&](std::size_t from, std::size_t to) {
    std::string s;
    for (std::size_t i = from; i < to; ++i) {
      if (i > from) s += ' ';
      s += seq[i];
    }
    return s;
  };
  if (seq.size() < 3) {
    if (!seq.empty()) out.push_back(join(0, seq.size()));
    return out;
  }
  for (std::size_t i = 0; i + 3 <= seq.size(); ++i) out.push_back(join(i, i + 3));
  return out;
}

// Bit i is set when more token hashes have bit i set than clear.
inline std::uint64_t simhash_fingerprint(const DomTree& t) {
  std::array<long long, 64> votes{};
  for (const auto& tok : tag_shingles(t)) {
    const std::uint64_t h = token_hash(tok);
    for (int b = 0; b < 64; ++b) votes[b] += ((h >> b) & 1U) ? 1 : -1;
  }
  std::uint64_t f = 0;
  for (int b = 0; b < 64; ++b)
    if (votes[b] > 0) f |= std::uint64_t{1} << b;
  return f;
}

inline double simhash_similarity(const DomTree& t1, const DomTree& t2) {
  const int hamming = std::popcount(simhash_fingerprint(t1) ^ simhash_fingerprint(t2));
  return 1.0 - static_cast<double>(hamming) / 64.0;
}

// ---- tree edit distance ---------------------------------------------------

namespace ted_detail {

struct Postorder {
  std::vector<int> label;     // interned labels in postorder, 1-based
  std::vector<int> leftmost;  // leftmost leaf descendant, 1-based postorder index
  std::vector<int> keyroots;
};

inline Postorder postorder(const DomTree& t, std::vector<std::string_view>& dict) {
  const std::size_t n = t.node_count();
  Postorder p;
  p.label.assign(n + 1, 0);
  p.leftmost.assign(n + 1, 0);
  std::vector<int> post_of(n, 0);
  // Iterative postorder over (node, next child) frames.
  std::vector<std::pair<NodeId, std::size_t>> stack{{0, 0}};
  int counter = 0;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    const auto kids = t.children(node);
    if (next < kids.size()) {
      stack.emplace_back(kids[next++], 0);
      continue;
    }
    const int id = ++counter;
    post_of[node] = id;
    auto it = std::find(dict.begin(), dict.end(), std::string_view(t.label(node)));
    if (it == dict.end()) it = dict.insert(dict.end(), t.label(node));
    p.label[id] = static_cast<int>(it - dict.begin());
    p.leftmost[id] = kids.empty() ? id : p.leftmost[post_of[kids.front()]];
    stack.pop_back();
  }
  // Keyroots: the highest node for each distinct leftmost leaf.
  std::vector<int> highest(n + 1, 0);
  for (int i = 1; i <= static_cast<int>(n); ++i) highest[p.leftmost[i]] = i;
  for (int i = 1; i <= static_cast<int>(n); ++i)
    if (highest[p.leftmost[i]] == i) p.keyroots.push_back(i);
  return p;
}

}  // namespace ted_detail

// Ordered tree edit distance with unit insert, delete and relabel costs.
inline std::size_t tree_edit_distance(const DomTree& t1, const DomTree& t2,
                                      std::size_t pair_budget = kDefaultPairBudget) {
  const std::size_t pairs = t1.node_count() * t2.node_count();
  if (pairs > pair_budget) throw NodeBudgetExceeded(pairs, pair_budget);
  std::vector<std::string_view> dict;
  const auto a = ted_detail::postorder(t1, dict);
  const auto b = ted_detail::postorder(t2, dict);
  const std::size_t n = t1.node_count(), m = t2.node_count();

  std::vector<std::size_t> td((n + 1) * (m + 1), 0);
  std::vector<std::size_t> fd((n + 2) * (m + 2), 0);
  const std::size_t w = m + 2;
  for (int i : a.keyroots) {
    for (int j : b.keyroots) {
      const int li = a.leftmost[i], lj = b.leftmost[j];
      // fd is indexed relative to (li - 1, lj - 1).
      auto F = [&](int x, int y) -> std::size_t& {
        return fd[static_cast<std::size_t>(x - li + 1) * w + static_cast<std::size_t>(y - lj + 1)];
      };
      F(li - 1, lj - 1) = 0;
      for (int x = li; x <= i; ++x) F(x, lj - 1) = F(x - 1, lj - 1) + 1;
      for (int y = lj; y <= j; ++y) F(li - 1, y) = F(li - 1, y - 1) + 1;
      for (int x = li; x <= i; ++x) {
        for (int y = lj; y <= j; ++y) {
          const std::size_t del = F(x - 1, y) + 1;
          const std::size_t ins = F(x, y - 1) + 1;
          if (a.leftmost[x] == li && b.leftmost[y] == lj) {
            const std::size_t rel = F(x - 1, y - 1) + (a.label[x] == b.label[y] ? 0 : 1);
            F(x, y) = std::min({del, ins, rel});
            td[static_cast<std::size_t>(x) * (m + 1) + static_cast<std::size_t>(y)] = F(x, y);
          } else {
            const std::size_t sub =
                F(a.leftmost[x] - 1, b.leftmost[y] - 1) +
                td[static_cast<std::size_t>(x) * (m + 1) + static_cast<std::size_t>(y)];
            F(x, y) = std::min({del, ins, sub});
          }
        }
      }
    }
  }
  return td[n * (m + 1) + m];
}

inline double ted_similarity(const DomTree& t1, const DomTree& t2,
                             std::size_t pair_budget = kDefaultPairBudget) {
  const double d = static_cast<double>(tree_edit_distance(t1, t2, pair_budget));
  return 1.0 - d / static_cast<double>(t1.node_count() + t2.node_count());
}

inline double baseline_similarity(BaselineKind kind, const DomTree& t1, const DomTree& t2,
                                  std::size_t pair_budget = kDefaultPairBudget) {
  switch (kind) {
    case BaselineKind::LevenshteinDom:
      return levenshtein_similarity(t1, t2);
    case BaselineKind::Simhash64:
      return simhash_similarity(t1, t2);
    case BaselineKind::TreeEditDistance:
      return ted_similarity(t1, t2, pair_budget);
  }
  return 0.0;
}

}  // namespace tkndd
