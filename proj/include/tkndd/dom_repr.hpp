#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tkndd/dom_tree.hpp"

namespace tkndd {

// DOM representation strategies. The enumerator order is the canonical
// order used to lay out similarity vectors.
enum class ReprStrategy { AsIs = 0, OnlyBody = 1, OnlyBodyNoScripts = 2 };

inline constexpr std::array<ReprStrategy, 3> kAllStrategies{
    ReprStrategy::AsIs, ReprStrategy::OnlyBody, ReprStrategy::OnlyBodyNoScripts};

inline std::string_view to_string(ReprStrategy s) {
  switch (s) {
    case ReprStrategy::AsIs:
      return "as_is";
    case ReprStrategy::OnlyBody:
      return "only_body";
    case ReprStrategy::OnlyBodyNoScripts:
      return "only_body_no_scripts";
  }
  return "?";
}

inline std::optional<ReprStrategy> parse_strategy(std::string_view s) {
  for (ReprStrategy r : kAllStrategies)
    if (to_string(r) == s) return r;
  return std::nullopt;
}

struct ReprResult {
  DomTree tree;
  // Set when a body-based strategy found no `body` element and fell back to
  // the whole tree.
  bool body_missing = false;
};

// Applies a strategy and reports diagnostics. When no `body` element exists
// the body-based strategies keep the whole tree; OnlyBodyNoScripts still
// drops script subtrees below the root in that case.
inline ReprResult transform(const DomTree& tree, ReprStrategy strategy) {
  if (strategy == ReprStrategy::AsIs || tree.empty()) return {tree, false};

  NodeId root = DomTree::root();
  bool missing = true;
  for (NodeId n = 0; n < tree.node_count(); ++n)
    if (tree.label(n) == "body") {
      root = n;
      missing = false;
      break;
    }

  const bool strip = strategy == ReprStrategy::OnlyBodyNoScripts;
  DomTree out = DomTree::build(
      root, [&](NodeId n) -> std::string_view { return tree.label(n); },
      [&](NodeId n) {
        std::vector<NodeId> kids;
        for (NodeId c : tree.children(n))
          if (!strip || tree.label(c) != "script") kids.push_back(c);
        return kids;
      },
      tree.source_id());
  return {std::move(out), missing};
}

inline DomTree apply_strategy(const DomTree& tree, ReprStrategy strategy) {
  return transform(tree, strategy).tree;
}

}  // namespace tkndd
