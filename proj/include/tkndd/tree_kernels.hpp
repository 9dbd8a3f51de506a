#pragma once

// Convolution tree kernels over ordered labeled trees.
//
//   ST  (subtree):     counts pairs of identical complete subtrees.
//   SST (subset tree): fragments take all children of a node or none.
//   PTK (partial tree): fragments may keep any ordered subset of children.
//
// K(t1, t2) = sum over node pairs of Delta(n1, n2). Delta is evaluated
// bottom-up only for candidate pairs (equal production for ST/SST, equal
// label for PTK); every other pair contributes zero. Fragment weights decay
// with lambda (size / span) and, for PTK, mu (depth).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tkndd/dom_tree.hpp"
#include "tkndd/errors.hpp"

namespace tkndd {

enum class KernelKind { ST = 0, SST = 1, PTK = 2 };

inline constexpr std::array<KernelKind, 3> kAllKernels{KernelKind::ST, KernelKind::SST,
                                                       KernelKind::PTK};

inline std::string_view to_string(KernelKind k) {
  switch (k) {
    case KernelKind::ST:
      return "st";
    case KernelKind::SST:
      return "sst";
    case KernelKind::PTK:
      return "ptk";
  }
  return "?";
}

inline constexpr std::size_t kDefaultPairBudget = 100'000'000;

struct KernelParams {
  double lambda = 0.4;
  double mu = 0.4;  // PTK only

  void validate() const {
    if (!(lambda > 0.0 && lambda <= 1.0))
      throw Error("lambda must be in (0, 1], got " + std::to_string(lambda));
    if (!(mu > 0.0 && mu <= 1.0)) throw Error("mu must be in (0, 1], got " + std::to_string(mu));
  }
};

// A node label followed by the ordered labels of its children.
struct Production {
  std::string parent_label;
  std::vector<std::string> child_labels;

  friend bool operator==(const Production&, const Production&) = default;
};

inline Production production_of(const DomTree& t, NodeId n) {
  Production p{t.label(n), {}};
  for (NodeId c : t.children(n)) p.child_labels.push_back(t.label(c));
  return p;
}

enum class MatchBy { Label, Production };

namespace kernel_detail {

// Dense integer keys shared by both trees of a pair.
struct Keys {
  std::vector<int> first;
  std::vector<int> second;
};

inline Keys label_keys(const DomTree& t1, const DomTree& t2) {
  std::unordered_map<std::string_view, int> ids;
  Keys k;
  auto assign = [&](const DomTree& t, std::vector<int>& out) {
    out.reserve(t.node_count());
    for (const auto& l : t.labels())
      out.push_back(ids.try_emplace(l, static_cast<int>(ids.size())).first->second);
  };
  assign(t1, k.first);
  assign(t2, k.second);
  return k;
}

inline Keys production_keys(const DomTree& t1, const DomTree& t2) {
  const Keys labels = label_keys(t1, t2);
  std::map<std::vector<int>, int> ids;
  Keys k;
  auto assign = [&](const DomTree& t, const std::vector<int>& lab, std::vector<int>& out) {
    out.reserve(t.node_count());
    std::vector<int> key;
    for (NodeId n = 0; n < t.node_count(); ++n) {
      key.assign(1, lab[n]);
      for (NodeId c : t.children(n)) key.push_back(lab[c]);
      out.push_back(ids.try_emplace(key, static_cast<int>(ids.size())).first->second);
    }
  };
  assign(t1, labels.first, k.first);
  assign(t2, labels.second, k.second);
  return k;
}

// Sparse table of values for node pairs sharing a key. Built by sorting both
// node lists by key and merging; storage is one dense block per shared key.
class PairTable {
 public:
  explicit PairTable(const Keys& keys) : key1_(keys.first), key2_(keys.second) {
    auto sorted = [](const std::vector<int>& key) {
      std::vector<NodeId> order(key.size());
      for (NodeId i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(),
                       [&](NodeId a, NodeId b) { return key[a] < key[b]; });
      return order;
    };
    const std::vector<NodeId> s1 = sorted(key1_);
    const std::vector<NodeId> s2 = sorted(key2_);

    row_.assign(key1_.size(), kNone);
    group_of_.assign(key1_.size(), 0);
    col_.assign(key2_.size(), 0);
    std::size_t i = 0, j = 0, total = 0;
    while (i < s1.size() && j < s2.size()) {
      const int k1 = key1_[s1[i]], k2 = key2_[s2[j]];
      if (k1 < k2) {
        ++i;
      } else if (k2 < k1) {
        ++j;
      } else {
        std::size_t i_end = i, j_end = j;
        while (i_end < s1.size() && key1_[s1[i_end]] == k1) ++i_end;
        while (j_end < s2.size() && key2_[s2[j_end]] == k1) ++j_end;
        const std::size_t width = j_end - j;
        const auto group = static_cast<std::uint32_t>(groups_.size());
        groups_.push_back(Group{{s2.begin() + static_cast<std::ptrdiff_t>(j),
                                 s2.begin() + static_cast<std::ptrdiff_t>(j_end)}});
        for (std::size_t p = j; p < j_end; ++p) col_[s2[p]] = static_cast<std::uint32_t>(p - j);
        for (std::size_t p = i; p < i_end; ++p) {
          row_[s1[p]] = total;
          group_of_[s1[p]] = group;
          total += width;
        }
        i = i_end;
        j = j_end;
      }
    }
    values_.assign(total, 0.0);
  }

  // Nodes of the second tree sharing node a's key.
  std::span<const NodeId> partners(NodeId a) const {
    if (row_[a] == kNone) return {};
    return groups_[group_of_[a]].nodes;
  }

  bool has_row(NodeId a) const { return row_[a] != kNone; }

  double& at(NodeId a, NodeId b) { return values_[row_[a] + col_[b]]; }

  double get(NodeId a, NodeId b) const {
    if (key1_[a] != key2_[b]) return 0.0;
    return values_[row_[a] + col_[b]];
  }

  std::size_t size() const noexcept { return values_.size(); }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  struct Group {
    std::vector<NodeId> nodes;
  };

  const std::vector<int>& key1_;
  const std::vector<int>& key2_;
  std::vector<std::size_t> row_;
  std::vector<std::uint32_t> col_;
  std::vector<std::uint32_t> group_of_;
  std::vector<Group> groups_;
  std::vector<double> values_;
};

inline void check_budget(const DomTree& t1, const DomTree& t2, std::size_t budget) {
  const std::size_t pairs = t1.node_count() * t2.node_count();
  if (pairs > budget) throw NodeBudgetExceeded(pairs, budget);
}

// Total order on trees by shape then labels; used to evaluate K(t1, t2) and
// K(t2, t1) with the same operand order so results are bit-identical.
inline bool canonical_less(const DomTree& a, const DomTree& b) {
  if (a.node_count() != b.node_count()) return a.node_count() < b.node_count();
  for (NodeId n = 0; n < a.node_count(); ++n) {
    if (a.child_count(n) != b.child_count(n)) return a.child_count(n) < b.child_count(n);
    if (const int c = a.label(n).compare(b.label(n)); c != 0) return c < 0;
  }
  return false;
}

inline double finite_or_throw(double k) {
  if (!std::isfinite(k)) throw NumericOverflow("tree kernel value overflowed double range");
  return k;
}

inline double st_sst(bool subset, double lambda, const DomTree& t1, const DomTree& t2) {
  const Keys keys = production_keys(t1, t2);
  PairTable delta(keys);
  double total = 0.0;
  for (NodeId a = static_cast<NodeId>(t1.node_count()); a-- > 0;) {
    if (!delta.has_row(a)) continue;
    const auto ca = t1.children(a);
    for (NodeId b : delta.partners(a)) {
      const auto cb = t2.children(b);
      double d = lambda;
      for (std::size_t j = 0; j < ca.size(); ++j) {
        const double child = delta.get(ca[j], cb[j]);
        d *= subset ? 1.0 + child : child;
      }
      delta.at(a, b) = d;
      total += d;
    }
  }
  return total;
}

inline double ptk(double lambda, double mu, const DomTree& t1, const DomTree& t2) {
  const Keys keys = label_keys(t1, t2);
  PairTable delta(keys);
  const double lambda2 = lambda * lambda;
  std::vector<double> g;  // G[i][j], (n+1) x (m+1), row-major
  std::vector<double> h;  // running row sums for the current i
  double total = 0.0;
  for (NodeId a = static_cast<NodeId>(t1.node_count()); a-- > 0;) {
    if (!delta.has_row(a)) continue;
    const auto ca = t1.children(a);
    for (NodeId b : delta.partners(a)) {
      const auto cb = t2.children(b);
      double s = 0.0;
      if (!ca.empty() && !cb.empty()) {
        // F[i][j] = D(i,j) * (1 + lambda^2 * G[i-1][j-1]) sums child
        // subsequence pairs ending at (i, j), weighted by the gaps taken so
        // far. G accumulates F with lambda per row/column step.
        const std::size_t n = ca.size(), m = cb.size(), w = m + 1;
        g.assign((n + 1) * w, 0.0);
        h.assign(w, 0.0);
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 1; j <= m; ++j) {
            const double dij = delta.get(ca[i - 1], cb[j - 1]);
            const double f = dij == 0.0 ? 0.0 : dij * (1.0 + lambda2 * g[(i - 1) * w + (j - 1)]);
            s += f;
            h[j] = f + lambda * h[j - 1];
            g[i * w + j] = h[j] + lambda * g[(i - 1) * w + j];
          }
        }
        s *= lambda2;
      }
      const double d = mu * (lambda2 + s);
      delta.at(a, b) = d;
      total += d;
    }
  }
  return total;
}

}  // namespace kernel_detail

// Node pairs that can contribute a non-zero Delta: equal labels (PTK) or
// equal productions (ST, SST).
inline std::vector<std::pair<NodeId, NodeId>> candidate_pairs(const DomTree& t1, const DomTree& t2,
                                                              MatchBy by) {
  const kernel_detail::Keys keys = by == MatchBy::Label ? kernel_detail::label_keys(t1, t2)
                                                        : kernel_detail::production_keys(t1, t2);
  const kernel_detail::PairTable table(keys);
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(table.size());
  for (NodeId a = 0; a < t1.node_count(); ++a)
    for (NodeId b : table.partners(a)) out.emplace_back(a, b);
  return out;
}

inline double raw_kernel(KernelKind kind, const KernelParams& params, const DomTree& t1,
                         const DomTree& t2, std::size_t pair_budget = kDefaultPairBudget) {
  params.validate();
  if (t1.empty() || t2.empty()) throw Error("tree kernel over an empty tree");
  kernel_detail::check_budget(t1, t2, pair_budget);
  const bool swap = kernel_detail::canonical_less(t2, t1);
  const DomTree& a = swap ? t2 : t1;
  const DomTree& b = swap ? t1 : t2;
  switch (kind) {
    case KernelKind::ST:
      return kernel_detail::finite_or_throw(kernel_detail::st_sst(false, params.lambda, a, b));
    case KernelKind::SST:
      return kernel_detail::finite_or_throw(kernel_detail::st_sst(true, params.lambda, a, b));
    case KernelKind::PTK:
      return kernel_detail::finite_or_throw(kernel_detail::ptk(params.lambda, params.mu, a, b));
  }
  return 0.0;
}

// Cosine normalization of a cross kernel by the two self kernels.
inline double normalize_kernel(double cross, double self1, double self2) {
  if (self1 == 0.0 || self2 == 0.0) return 0.0;
  return cross / std::sqrt(self1 * self2);
}

inline double normalized_kernel(KernelKind kind, const KernelParams& params, const DomTree& t1,
                                const DomTree& t2, std::size_t pair_budget = kDefaultPairBudget) {
  const double cross = raw_kernel(kind, params, t1, t2, pair_budget);
  const double self1 = raw_kernel(kind, params, t1, t1, pair_budget);
  const double self2 = raw_kernel(kind, params, t2, t2, pair_budget);
  return normalize_kernel(cross, self1, self2);
}

}  // namespace tkndd
