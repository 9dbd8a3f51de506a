#pragma once

// Reference implementations used only by tests. They follow the textbook
// definitions directly (fragment enumeration, explicit subsequence sums,
// the forest recursion for edit distance) and share no code with the
// library's dynamic programs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "tkndd/dom_tree.hpp"

namespace oracle {

using tkndd::DomNode;
using tkndd::DomTree;

// ---- tree generators --------------------------------------------------------

// Random ordered tree with exactly n nodes: node i attaches below a uniformly
// chosen earlier node, appended as its last child.
inline DomNode random_tree(std::mt19937_64& rng, std::size_t n, const std::vector<std::string>& alphabet) {
  std::uniform_int_distribution<std::size_t> pick_label(0, alphabet.size() - 1);
  std::vector<std::vector<std::size_t>> kids(n);
  std::vector<std::string> label(n);
  for (std::size_t i = 0; i < n; ++i) {
    label[i] = alphabet[pick_label(rng)];
    if (i > 0) kids[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)].push_back(i);
  }
  std::function<DomNode(std::size_t)> build = [&](std::size_t i) {
    DomNode node{label[i], {}};
    for (std::size_t c : kids[i]) node.children.push_back(build(c));
    return node;
  };
  return build(0);
}

inline DomTree random_dom(std::mt19937_64& rng, std::size_t n, const std::vector<std::string>& alphabet) {
  return DomTree::from_node(random_tree(rng, n, alphabet));
}

// Every ordered forest with exactly n nodes over the alphabet.
inline std::vector<std::vector<DomNode>> all_forests(std::size_t n, const std::vector<std::string>& alphabet);

// Every ordered tree with exactly n nodes over the alphabet.
inline std::vector<DomNode> all_trees(std::size_t n, const std::vector<std::string>& alphabet) {
  std::vector<DomNode> out;
  if (n == 0) return out;
  for (const auto& kids : all_forests(n - 1, alphabet))
    for (const auto& l : alphabet) out.push_back(DomNode{l, kids});
  return out;
}

inline std::vector<std::vector<DomNode>> all_forests(std::size_t n, const std::vector<std::string>& alphabet) {
  if (n == 0) return {{}};
  std::vector<std::vector<DomNode>> out;
  for (std::size_t first = 1; first <= n; ++first)
    for (const auto& t : all_trees(first, alphabet))
      for (auto rest : all_forests(n - first, alphabet)) {
        rest.insert(rest.begin(), t);
        out.push_back(std::move(rest));
      }
  return out;
}

inline std::vector<DomTree> all_doms_up_to(std::size_t max_nodes, const std::vector<std::string>& alphabet) {
  std::vector<DomTree> out;
  for (std::size_t n = 1; n <= max_nodes; ++n)
    for (const auto& t : all_trees(n, alphabet)) out.push_back(DomTree::from_node(t));
  return out;
}

// ---- fragment enumeration (lambda = mu = 1) -----------------------------

// Fragments are written as strings. An expanded node is "x(...)" (a leaf
// fragment is "x()"); a node cut off at the fragment frontier is "x".
using FragmentCounts = std::map<std::string, std::int64_t>;

namespace detail {

inline std::string expanded(const std::string& label, const std::vector<std::string>& parts) {
  std::string s = label + "(";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s + ")";
}

// Cartesian product of per-slot options, each combination joined as one
// expanded node.
inline void combine(const std::string& label, const std::vector<std::vector<std::string>>& slots,
                    std::vector<std::string>& out) {
  std::vector<std::string> current;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == slots.size()) {
      out.push_back(expanded(label, current));
      return;
    }
    for (const auto& opt : slots[i]) {
      current.push_back(opt);
      rec(i + 1);
      current.pop_back();
    }
  };
  rec(0);
}

}  // namespace detail

// Proper subtrees: the full subtree below each node.
inline std::vector<std::string> st_fragments_at(const DomTree& t, tkndd::NodeId n) {
  std::vector<std::string> parts;
  for (auto c : t.children(n)) parts.push_back(st_fragments_at(t, c).front());
  return {detail::expanded(t.label(n), parts)};
}

// Subset trees: all children or none; each child either stops at the
// frontier or continues as one of its own subset trees.
inline std::vector<std::string> sst_fragments_at(const DomTree& t, tkndd::NodeId n) {
  std::vector<std::vector<std::string>> slots;
  for (auto c : t.children(n)) {
    std::vector<std::string> opts{t.label(c)};
    for (auto& f : sst_fragments_at(t, c)) opts.push_back(std::move(f));
    slots.push_back(std::move(opts));
  }
  std::vector<std::string> out;
  detail::combine(t.label(n), slots, out);
  return out;
}

// Partial trees: any ordered subsequence of children (possibly empty), each
// selected child continuing as one of its own partial trees.
inline std::vector<std::string> ptk_fragments_at(const DomTree& t, tkndd::NodeId n) {
  const auto kids = t.children(n);
  std::vector<std::vector<std::string>> child_frags;
  for (auto c : kids) child_frags.push_back(ptk_fragments_at(t, c));
  std::vector<std::string> out;
  for (std::uint32_t mask = 0; mask < (1U << kids.size()); ++mask) {
    std::vector<std::vector<std::string>> slots;
    for (std::size_t i = 0; i < kids.size(); ++i)
      if (mask & (1U << i)) slots.push_back(child_frags[i]);
    detail::combine(t.label(n), slots, out);
  }
  return out;
}

enum class Kind { ST, SST, PTK };

inline FragmentCounts fragments(Kind kind, const DomTree& t) {
  FragmentCounts counts;
  for (tkndd::NodeId n = 0; n < t.node_count(); ++n) {
    const auto frags = kind == Kind::ST    ? st_fragments_at(t, n)
                       : kind == Kind::SST ? sst_fragments_at(t, n)
                                           : ptk_fragments_at(t, n);
    for (const auto& f : frags) ++counts[f];
  }
  return counts;
}

// Number of matching fragment pairs: the kernel value at lambda = mu = 1.
inline std::int64_t common_fragments(const FragmentCounts& a, const FragmentCounts& b) {
  std::int64_t k = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      k += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return k;
}

// ---- weighted kernels by explicit summation ---------------------------------

// Direct evaluation of the Delta definitions for arbitrary decays. PTK sums
// over every pair of equal-length child subsequences by enumerating index
// masks instead of using the subsequence DP.
class WeightedKernel {
 public:
  WeightedKernel(Kind kind, double lambda, double mu) : kind_(kind), lambda_(lambda), mu_(mu) {}

  double operator()(const DomTree& t1, const DomTree& t2) const {
    double k = 0.0;
    for (tkndd::NodeId a = 0; a < t1.node_count(); ++a)
      for (tkndd::NodeId b = 0; b < t2.node_count(); ++b) k += delta(t1, a, t2, b);
    return k;
  }

  double delta(const DomTree& t1, tkndd::NodeId a, const DomTree& t2, tkndd::NodeId b) const {
    if (t1.label(a) != t2.label(b)) return 0.0;
    const auto ca = t1.children(a);
    const auto cb = t2.children(b);
    if (kind_ != Kind::PTK) {
      if (ca.size() != cb.size()) return 0.0;
      for (std::size_t j = 0; j < ca.size(); ++j)
        if (t1.label(ca[j]) != t2.label(cb[j])) return 0.0;
      double d = lambda_;
      for (std::size_t j = 0; j < ca.size(); ++j) {
        const double c = delta(t1, ca[j], t2, cb[j]);
        d *= kind_ == Kind::SST ? 1.0 + c : c;
      }
      return d;
    }
    double sum = 0.0;
    for (std::uint32_t m1 = 1; m1 < (1U << ca.size()); ++m1) {
      for (std::uint32_t m2 = 1; m2 < (1U << cb.size()); ++m2) {
        const auto i1 = indices(m1);
        const auto i2 = indices(m2);
        if (i1.size() != i2.size()) continue;
        double prod = std::pow(lambda_, static_cast<double>(span(i1) + span(i2)));
        for (std::size_t s = 0; s < i1.size() && prod != 0.0; ++s)
          prod *= delta(t1, ca[i1[s]], t2, cb[i2[s]]);
        sum += prod;
      }
    }
    return mu_ * (lambda_ * lambda_ + sum);
  }

 private:
  static std::vector<std::size_t> indices(std::uint32_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; mask >> i; ++i)
      if (mask & (1U << i)) out.push_back(i);
    return out;
  }
  static std::size_t span(const std::vector<std::size_t>& idx) { return idx.back() - idx.front() + 1; }

  Kind kind_;
  double lambda_;
  double mu_;
};

// ---- sequence and tree edit distance ------------------------------------

// Levenshtein distance straight from its recursive definition, memoized on
// suffix positions.
inline std::size_t levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<long>> memo(a.size() + 1, std::vector<long>(b.size() + 1, -1));
  std::function<std::size_t(std::size_t, std::size_t)> d = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    long& m = memo[i][j];
    if (m >= 0) return static_cast<std::size_t>(m);
    const std::size_t r = std::min({d(i + 1, j) + 1, d(i, j + 1) + 1, d(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1)});
    m = static_cast<long>(r);
    return r;
  };
  return d(0, 0);
}

// Ordered forest edit distance by the classical recursion on rightmost
// roots: delete it, insert it, or match the two rightmost trees. Forests are
// interned so subproblems are shared across every pair a test asks about.
class ForestDistance {
 public:
  std::size_t operator()(const DomTree& t1, const DomTree& t2) {
    return dist(intern({t1.to_node()}), intern({t2.to_node()}));
  }

 private:
  struct Forest {
    std::size_t size = 0;
    std::string last_label;
    int without_last = -1;        // F minus the rightmost tree
    int last_children = -1;       // children of the rightmost root
    int last_root_deleted = -1;   // F with the rightmost root removed
  };

  static std::string key(const std::vector<DomNode>& f) {
    std::string s;
    std::function<void(const DomNode&)> rec = [&](const DomNode& n) {
      s += n.label;
      s += '(';
      for (const auto& c : n.children) rec(c);
      s += ')';
    };
    for (const auto& t : f) rec(t);
    return s;
  }

  static std::size_t count(const std::vector<DomNode>& f) {
    std::size_t n = 0;
    for (const auto& t : f) n += 1 + count(t.children);
    return n;
  }

  int intern(const std::vector<DomNode>& f) {
    const std::string k = key(f);
    if (auto it = ids_.find(k); it != ids_.end()) return it->second;
    const int id = static_cast<int>(forests_.size());
    ids_.emplace(k, id);
    forests_.emplace_back();
    Forest info;
    info.size = count(f);
    if (!f.empty()) {
      const DomNode& last = f.back();
      info.last_label = last.label;
      std::vector<DomNode> rest(f.begin(), f.end() - 1);
      info.without_last = intern(rest);
      info.last_children = intern(last.children);
      rest.insert(rest.end(), last.children.begin(), last.children.end());
      info.last_root_deleted = intern(rest);
    }
    forests_[id] = std::move(info);
    return id;
  }

  std::size_t dist(int f, int g) {
    const std::uint64_t k = (static_cast<std::uint64_t>(f) << 32) | static_cast<std::uint32_t>(g);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    const Forest F = forests_[f];
    const Forest G = forests_[g];
    std::size_t r;
    if (F.size == 0) {
      r = G.size;
    } else if (G.size == 0) {
      r = F.size;
    } else {
      r = std::min({dist(F.last_root_deleted, g) + 1, dist(f, G.last_root_deleted) + 1,
                    dist(F.last_children, G.last_children) + dist(F.without_last, G.without_last) +
                        (F.last_label == G.last_label ? 0 : 1)});
    }
    memo_.emplace(k, r);
    return r;
  }

  std::unordered_map<std::string, int> ids_;
  std::vector<Forest> forests_;
  std::unordered_map<std::uint64_t, std::size_t> memo_;
};

}  // namespace oracle
