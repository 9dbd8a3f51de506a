#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tkndd/errors.hpp"

namespace tkndd {

using NodeId = std::uint32_t;

// Nested, value-semantic tree description. Convenient for building trees by
// hand; DomTree is the compact form every algorithm consumes.
struct DomNode {
  std::string label;
  std::vector<DomNode> children;
};

// Ordered labeled rooted tree stored in preorder. Node ids are dense
// 0..n-1 in preorder, the root is 0, and the children of a node are kept in
// document order. Immutable once built.
class DomTree {
 public:
  DomTree() = default;

  // Builds a tree from any graph reachable from `root`. `label_of(node)` must
  // return something convertible to std::string_view and `children_of(node)`
  // an iterable range of nodes in document order. Traversal is iterative so
  // arbitrarily deep inputs do not exhaust the call stack.
  template <class Node, class LabelFn, class ChildrenFn>
  static DomTree build(const Node& root, LabelFn&& label_of, ChildrenFn&& children_of,
                       std::string source_id = {}) {
    DomTree t;
    t.source_id_ = std::move(source_id);

    struct Frame {
      Node node;
      NodeId parent;
    };
    constexpr NodeId kNoParent = static_cast<NodeId>(-1);
    std::vector<Frame> stack{{root, kNoParent}};
    std::vector<std::vector<NodeId>> kids;
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      const auto id = static_cast<NodeId>(t.labels_.size());
      std::string label{std::string_view(label_of(f.node))};
      check_label(label);
      t.labels_.push_back(std::move(label));
      t.parent_.push_back(f.parent);
      t.depth_.push_back(f.parent == kNoParent ? 1 : t.depth_[f.parent] + 1);
      kids.emplace_back();
      if (f.parent != kNoParent) kids[f.parent].push_back(id);

      const std::size_t mark = stack.size();
      for (const auto& c : children_of(f.node)) stack.push_back(Frame{c, id});
      std::reverse(stack.begin() + static_cast<std::ptrdiff_t>(mark), stack.end());
    }

    t.child_begin_.reserve(kids.size() + 1);
    t.child_begin_.push_back(0);
    for (auto& k : kids) {
      t.child_ids_.insert(t.child_ids_.end(), k.begin(), k.end());
      t.child_begin_.push_back(static_cast<std::uint32_t>(t.child_ids_.size()));
    }
    return t;
  }

  static DomTree from_node(const DomNode& root, std::string source_id = {}) {
    return build(
        &root, [](const DomNode* n) -> std::string_view { return n->label; },
        [](const DomNode* n) {
          std::vector<const DomNode*> out;
          out.reserve(n->children.size());
          for (const auto& c : n->children) out.push_back(&c);
          return out;
        },
        std::move(source_id));
  }

  std::size_t node_count() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  static constexpr NodeId root() noexcept { return 0; }

  const std::string& label(NodeId n) const { return labels_[n]; }
  std::span<const std::string> labels() const noexcept { return labels_; }

  std::span<const NodeId> children(NodeId n) const {
    return {child_ids_.data() + child_begin_[n], child_ids_.data() + child_begin_[n + 1]};
  }
  std::size_t child_count(NodeId n) const { return child_begin_[n + 1] - child_begin_[n]; }
  bool is_leaf(NodeId n) const { return child_count(n) == 0; }

  std::optional<NodeId> parent(NodeId n) const {
    if (parent_[n] == static_cast<NodeId>(-1)) return std::nullopt;
    return parent_[n];
  }

  // Depth counted in nodes: a lone root has depth 1.
  std::size_t depth(NodeId n) const { return depth_[n]; }
  std::size_t height() const {
    return depth_.empty() ? 0 : *std::max_element(depth_.begin(), depth_.end());
  }

  // Number of nodes in the subtree rooted at n (preorder makes it contiguous).
  std::size_t subtree_size(NodeId n) const {
    NodeId end = n + 1;
    while (end < node_count() && depth_[end] > depth_[n]) ++end;
    return end - n;
  }

  const std::string& source_id() const noexcept { return source_id_; }

  // Structural equality: same labels and shape. source_id is ignored.
  friend bool operator==(const DomTree& a, const DomTree& b) {
    return a.labels_ == b.labels_ && a.child_begin_ == b.child_begin_ &&
           a.child_ids_ == b.child_ids_;
  }

  DomNode to_node(NodeId n = 0) const {
    DomNode out{labels_[n], {}};
    for (NodeId c : children(n)) out.children.push_back(to_node(c));
    return out;
  }

 private:
  static void check_label(const std::string& label) {
    if (label.empty()) throw Error("DOM node label must be non-empty");
    for (unsigned char ch : label)
      if (std::isspace(ch)) throw Error("DOM node label contains whitespace: '" + label + "'");
  }

  std::string source_id_;
  std::vector<std::string> labels_;
  std::vector<NodeId> parent_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> child_begin_;
  std::vector<NodeId> child_ids_;
};

// Labels in preorder; length equals node_count().
inline std::vector<std::string> serialize_preorder(const DomTree& tree) {
  return {tree.labels().begin(), tree.labels().end()};
}

// Compact bracket notation: `a(b(d),c)`. Used by tests and diagnostics.
inline std::string to_bracket(const DomTree& tree) {
  std::string out;
  if (tree.empty()) return out;
  // Explicit stack of (node, next child index).
  std::vector<std::pair<NodeId, std::size_t>> stack{{0, 0}};
  out += tree.label(0);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    const auto kids = tree.children(node);
    if (next < kids.size()) {
      out += next == 0 ? '(' : ',';
      const NodeId c = kids[next++];
      out += tree.label(c);
      stack.emplace_back(c, 0);
    } else {
      if (!kids.empty()) out += ')';
      stack.pop_back();
    }
  }
  return out;
}

inline DomTree parse_bracket(std::string_view text, std::string source_id = {}) {
  std::size_t pos = 0;
  auto fail = [&](const char* what) -> Error {
    return Error(std::string("bracket tree: ") + what + " at offset " + std::to_string(pos));
  };
  auto read_label = [&]() {
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] != '(' && text[pos] != ')' && text[pos] != ',' &&
           !std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (pos == start) throw fail("expected label");
    return std::string(text.substr(start, pos - start));
  };

  DomNode root{read_label(), {}};
  std::vector<DomNode*> open{&root};
  DomNode* last = &root;
  while (pos < text.size()) {
    const char ch = text[pos];
    if (ch == '(') {
      ++pos;
      open.push_back(last);
      last->children.push_back(DomNode{read_label(), {}});
      last = &last->children.back();
    } else if (ch == ',') {
      ++pos;
      if (open.size() < 2) throw fail("sibling without parent");
      open.back()->children.push_back(DomNode{read_label(), {}});
      last = &open.back()->children.back();
    } else if (ch == ')') {
      ++pos;
      if (open.size() < 2) throw fail("unbalanced ')'");
      last = open.back();
      open.pop_back();
    } else {
      throw fail("unexpected character");
    }
  }
  if (open.size() != 1) throw fail("unclosed '('");
  return DomTree::from_node(root, std::move(source_id));
}

}  // namespace tkndd
