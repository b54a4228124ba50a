#pragma once

#include <map>
#include <string>
#include <vector>

#include "mso/structures.hpp"

namespace mso {

// Rooted tree with ordered child lists.  For unordered tree classes the
// order is a generation artifact; the ordered-tree class gives it meaning.
struct RootedTree {
  std::vector<int> parent;                 // parent[root] == -1
  std::vector<std::vector<int>> children;  // in sibling order
  std::vector<int> label;                  // empty when unlabelled

  int size() const { return static_cast<int>(parent.size()); }
  int root() const {
    for (int i = 0; i < size(); ++i)
      if (parent[i] < 0) return i;
    fail("tree has no root");
  }
  bool labelled() const { return !label.empty(); }

  int height() const {  // edges on the longest root-to-leaf path
    int h = 0;
    std::vector<int> depth(size(), 0);
    // parents precede children in the preorder numbering used throughout
    for (int v = 0; v < size(); ++v) {
      if (parent[v] >= 0) depth[v] = depth[parent[v]] + 1;
      h = std::max(h, depth[v]);
    }
    return h;
  }
};

inline RootedTree tree_from_parents(const std::vector<int>& parent,
                                    std::vector<int> label = {}) {
  RootedTree t;
  t.parent = parent;
  t.children.resize(parent.size());
  int roots = 0;
  for (size_t v = 0; v < parent.size(); ++v) {
    if (parent[v] < 0) {
      ++roots;
    } else {
      require(parent[v] < static_cast<int>(parent.size()),
              "tree parent out of range");
      t.children[parent[v]].push_back(static_cast<int>(v));
    }
  }
  require(roots == 1, "tree must have exactly one root");
  // reject cycles: walk to the root from every node
  for (size_t v = 0; v < parent.size(); ++v) {
    int steps = 0, x = static_cast<int>(v);
    while (parent[x] >= 0) {
      x = parent[x];
      require(++steps <= static_cast<int>(parent.size()), "parent cycle");
    }
  }
  t.label = std::move(label);
  if (!t.label.empty())
    require(t.label.size() == parent.size(), "label vector size mismatch");
  return t;
}

// ---------------------------------------------------------------------------
// Canonical generation.  Trees are produced as nested canonical strings and
// decoded into preorder-numbered RootedTrees, so each isomorphism class
// appears exactly once.

namespace detail {

// Canonical string: "(" + sorted child serials + ")", labels inline.
inline std::vector<std::vector<std::string>> tree_serials(int nmax, int labels,
                                                          int max_children) {
  std::vector<std::vector<std::string>> by_size(nmax + 1);
  if (nmax < 1) return by_size;
  for (int lab = 0; lab < std::max(labels, 1); ++lab) {
    std::string leaf = "(";
    if (labels > 0) leaf += std::to_string(lab) + ":";
    by_size[1].push_back(leaf + ")");
  }
  sort_unique(by_size[1]);
  // pool of (size, serial) in a fixed order for multiset enumeration
  for (int n = 2; n <= nmax; ++n) {
    std::vector<std::pair<int, std::string>> pool;
    for (int s = 1; s < n; ++s)
      for (const auto& ser : by_size[s]) pool.emplace_back(s, ser);
    std::vector<std::string> acc;
    // choose a non-decreasing sequence of pool indices with sizes summing n-1
    std::vector<std::string> out;
    auto rec = [&](auto&& self, size_t from, int remaining, int count,
                   std::string& body) -> void {
      if (remaining == 0) {
        for (int lab = 0; lab < std::max(labels, 1); ++lab) {
          std::string head = "(";
          if (labels > 0) head += std::to_string(lab) + ":";
          out.push_back(head + body + ")");
        }
        return;
      }
      if (max_children > 0 && count >= max_children) return;
      for (size_t i = from; i < pool.size(); ++i) {
        if (pool[i].first > remaining) continue;
        size_t len = body.size();
        body += pool[i].second;
        self(self, i, remaining - pool[i].first, count + 1, body);
        body.resize(len);
      }
    };
    std::string body;
    rec(rec, 0, n - 1, 0, body);
    sort_unique(out);
    by_size[n] = std::move(out);
  }
  return by_size;
}

inline RootedTree tree_from_serial(const std::string& s, bool labelled) {
  std::vector<int> parent, label;
  int cur = -1;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '(') {
      int id = static_cast<int>(parent.size());
      parent.push_back(cur);
      if (labelled) {
        size_t j = i + 1;
        int lab = 0;
        while (j < s.size() && s[j] != ':') lab = lab * 10 + (s[j++] - '0');
        label.push_back(lab);
        i = j + 1;
      } else {
        ++i;
      }
      cur = id;
    } else {  // ')'
      cur = parent[cur];
      ++i;
    }
  }
  return tree_from_parents(parent, labelled ? label : std::vector<int>{});
}

}  // namespace detail

// All rooted unlabelled trees with exactly n nodes, one per isomorphism
// class.  max_children = 0 means unbounded; 2 gives the binary tree class.
inline std::vector<RootedTree> generate_trees(int n, int max_children = 0) {
  auto serials = detail::tree_serials(n, 0, max_children);
  std::vector<RootedTree> out;
  for (const auto& s : serials[n]) out.push_back(detail::tree_from_serial(s, false));
  return out;
}

inline std::vector<RootedTree> generate_labelled_trees(int n, int labels) {
  auto serials = detail::tree_serials(n, labels, 0);
  std::vector<RootedTree> out;
  for (const auto& s : serials[n]) out.push_back(detail::tree_from_serial(s, true));
  return out;
}

// All ordered trees with exactly n nodes (children sequences significant).
inline std::vector<RootedTree> generate_ordered_trees(int n) {
  std::vector<std::vector<std::vector<int>>> by_size(n + 1);
  by_size[1] = {{-1}};
  for (int m = 2; m <= n; ++m) {
    std::vector<std::vector<int>> acc;
    // root + ordered sequence of subtrees
    auto rec = [&](auto&& self, int remaining, std::vector<int>& parent) -> void {
      if (remaining == 0) {
        acc.push_back(parent);
        return;
      }
      for (int s = 1; s <= remaining; ++s) {
        for (const auto& sub : by_size[s]) {
          size_t base = parent.size();
          for (int p : sub) parent.push_back(p < 0 ? 0 : p + static_cast<int>(base));
          self(self, remaining - s, parent);
          parent.resize(base);
        }
      }
    };
    std::vector<int> parent = {-1};
    rec(rec, m - 1, parent);
    by_size[m] = std::move(acc);
  }
  std::vector<RootedTree> out;
  for (const auto& p : by_size[n]) out.push_back(tree_from_parents(p));
  return out;
}

// ---------------------------------------------------------------------------
// Structure conversions.  Trees use a parent relation with tuples
// (child, parent); ordered trees add next(x, y) linking adjacent siblings;
// labelled trees add one unary relation per label.

inline Structure tree_to_structure(const RootedTree& t, bool ordered = false,
                                   int labels = 0) {
  Vocabulary voc;
  voc.symbols.push_back({"parent", {Kind::Element, Kind::Element}});
  if (ordered) voc.symbols.push_back({"next", {Kind::Element, Kind::Element}});
  for (int l = 0; l < labels; ++l)
    voc.symbols.push_back({"label" + std::to_string(l), {Kind::Element}});
  Structure a = make_structure(voc, t.size());
  for (int v = 0; v < t.size(); ++v)
    if (t.parent[v] >= 0)
      a.tuples("parent").push_back({Slot{v}, Slot{t.parent[v]}});
  if (ordered)
    for (const auto& cs : t.children)
      for (size_t i = 0; i + 1 < cs.size(); ++i)
        a.tuples("next").push_back({Slot{cs[i]}, Slot{cs[i + 1]}});
  if (labels > 0) {
    require(t.labelled(), "labelled conversion needs labels");
    for (int v = 0; v < t.size(); ++v) {
      require(0 <= t.label[v] && t.label[v] < labels, "label out of range");
      a.tuples("label" + std::to_string(t.label[v])).push_back({Slot{v}});
    }
  }
  a.normalize();
  return a;
}

// Reads a tree structure back; validates shape.  Labels are recovered when
// the vocabulary carries labelN symbols, sibling order when it carries next.
inline RootedTree tree_from_structure(const Structure& a) {
  int pi = a.voc.index("parent");
  require(pi >= 0, "tree structure needs a parent relation");
  std::vector<int> parent(a.n, -1);
  for (const auto& t : a.rels[pi]) {
    int c = std::get<int>(t[0]), p = std::get<int>(t[1]);
    require(parent[c] < 0, "node with two parents");
    parent[c] = p;
  }
  RootedTree tree = tree_from_parents(parent);

  int labels = 0;
  while (a.voc.index("label" + std::to_string(labels)) >= 0) ++labels;
  if (labels > 0) {
    tree.label.assign(a.n, -1);
    for (int l = 0; l < labels; ++l)
      for (const auto& t : a.tuples("label" + std::to_string(l))) {
        int v = std::get<int>(t[0]);
        require(tree.label[v] < 0, "node with two labels");
        tree.label[v] = l;
      }
    for (int v = 0; v < a.n; ++v)
      require(tree.label[v] >= 0, "node without a label");
  }

  int ni = a.voc.index("next");
  if (ni >= 0) {
    std::vector<int> succ(a.n, -1), pred(a.n, -1);
    for (const auto& t : a.rels[ni]) {
      int x = std::get<int>(t[0]), y = std::get<int>(t[1]);
      require(succ[x] < 0 && pred[y] < 0, "sibling order is not a chain");
      require(parent[x] == parent[y] && parent[x] >= 0,
              "next must link siblings");
      succ[x] = y;
      pred[y] = x;
    }
    for (auto& cs : tree.children) {
      if (cs.empty()) continue;
      int first = -1;
      for (int c : cs)
        if (pred[c] < 0) {
          require(first < 0, "sibling chain has two heads");
          first = c;
        }
      require(first >= 0, "sibling chain has a cycle");
      std::vector<int> ordered;
      for (int c = first; c >= 0; c = succ[c]) ordered.push_back(c);
      require(ordered.size() == cs.size(), "sibling chain misses nodes");
      cs = ordered;
    }
  }
  return tree;
}

}  // namespace mso
