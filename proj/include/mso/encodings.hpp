#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mso/classes.hpp"
#include "mso/common.hpp"
#include "mso/enumerate.hpp"
#include "mso/gf.hpp"
#include "mso/matroid.hpp"
#include "mso/structures.hpp"
#include "mso/transduction.hpp"
#include "mso/tree.hpp"
#include "mso/width.hpp"

namespace mso {

// A catalogued encoding: a deterministic forward map into another class and
// a decode map that inverts it up to isomorphism.  Decode also accepts any
// legal image of the nondeterministic reading of the entry (arbitrary ids,
// sibling orders, basis choices), and reports inputs outside the image by
// throwing rather than misbehaving.
struct CatalogEntry {
  std::string id;
  ClassId input;
  ClassId output;
  int expansion = 1;  // |forward(A)| <= expansion * |A| on the documented corpus
  std::function<Structure(const Structure&)> forward;
  std::function<Structure(const Structure&)> decode;
  std::optional<Transduction> realization;  // present for transduction-backed entries
};

// Weight assignment into the cyclic group of order three, one value per
// vertex of a laminar hypergraph.
struct Z3Weights {
  std::vector<int> weight;
};

// Converts a structure with a set-valued `edge` relation into the mask form
// used by the width machinery.
inline Hypergraph hypergraph_of(const Structure& a) {
  require(a.n <= 62, "hypergraph supports at most 62 vertices");
  auto masks = detail::hyperedges(a);
  sort_unique(masks);
  return Hypergraph{a.n, std::move(masks)};
}

namespace detail {

// --------------------------------------------------------------------------
// Laminar forests

struct LaminarForest {
  std::vector<int> parent;                 // -1 for maximal hyperedges
  std::vector<std::vector<int>> children;  // ascending edge indices
  std::vector<int> roots;
};

inline LaminarForest laminar_forest(const Hypergraph& g) {
  const auto& es = g.edges;
  for (auto e : es) require(e != 0, "laminar families contain no empty hyperedge");
  for (size_t i = 0; i < es.size(); ++i)
    for (size_t j = i + 1; j < es.size(); ++j) {
      auto meet = es[i] & es[j];
      require(!meet || meet == es[i] || meet == es[j],
              "hyperedges must be nested or disjoint");
    }
  int m = static_cast<int>(es.size());
  LaminarForest f;
  f.parent.assign(m, -1);
  f.children.resize(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j || (es[i] & ~es[j]) != 0) continue;  // not a proper superset
      if (f.parent[i] == -1 || popcount(es[j]) < popcount(es[f.parent[i]]))
        f.parent[i] = j;
    }
    if (f.parent[i] == -1)
      f.roots.push_back(i);
    else
      f.children[f.parent[i]].push_back(i);
  }
  return f;
}

// --------------------------------------------------------------------------
// strings-4-to-2: one four-letter position becomes two binary positions.

inline Transduction strings_4_to_2() {
  // After Copy 2, copy 0 of a position carries the high bit and copy 1 the
  // low bit; `_copy_2 u v` links copy 0 to copy 1 of one position.
  std::string same1 = "(or (= u x1) (or (_copy_2 u x1) (_copy_2 x1 u)))";
  std::string same2 = "(or (= v x2) (or (_copy_2 v x2) (_copy_2 x2 v)))";
  std::string pos_lt =
      "(exists u (exists v (and (and " + same1 + " " + same2 + ") (lt u v))))";
  std::string high = "(exists z (_copy_2 x1 z))";
  std::string low = "(exists z (_copy_2 z x1))";
  Interpretation interp;
  interp.universe = parse_formula("(= x x)");
  interp.relations.push_back({"lt",
                              {Kind::Element, Kind::Element},
                              parse_formula("(or " + pos_lt + " (_copy_2 x1 x2))")});
  interp.relations.push_back(
      {"letter0",
       {Kind::Element},
       parse_formula("(or (and " + high + " (or (letter0 x1) (letter1 x1)))" +
                     " (and " + low + " (or (letter0 x1) (letter2 x1))))")});
  interp.relations.push_back(
      {"letter1",
       {Kind::Element},
       parse_formula("(or (and " + high + " (or (letter2 x1) (letter3 x1)))" +
                     " (and " + low + " (or (letter1 x1) (letter3 x1))))")});
  Transduction t;
  t.input = class_id(ClassTag::Strings, 4);
  t.output = class_id(ClassTag::Strings, 2);
  t.steps.push_back(Copy{2});
  t.steps.push_back(std::move(interp));
  return t;
}

inline Structure strings_2_to_4(const Structure& b) {
  auto bits = string_letters(b);
  require(bits.size() % 2 == 0, "an odd-length string is outside the image");
  std::vector<int> word;
  for (size_t i = 0; i < bits.size(); i += 2)
    word.push_back(2 * bits[i] + bits[i + 1]);
  return string_structure(4, word);
}

// --------------------------------------------------------------------------
// labelled-tree-to-tree: subdivide every edge, give each original node one
// single-leaf marker and one pendant path of odd length 2*label+1.  Original
// nodes are then exactly the nodes whose child subtrees are not all chains,
// and the two chains below an original node spell its label.

inline Structure labelled_tree_forward(const Structure& a, int labels) {
  RootedTree t = tree_from_structure(a);
  int n = t.size();
  require(t.labelled(), "the input tree carries no labels");
  std::vector<int> par(n);
  int next = n;
  for (int v = 0; v < n; ++v) par[v] = -1;
  for (int v = 0; v < n; ++v) {
    if (t.parent[v] == -1) continue;
    par.push_back(t.parent[v]);  // subdivision point between v and its parent
    par[v] = next++;
  }
  for (int v = 0; v < n; ++v) {
    par.push_back(v);  // marker leaf
    ++next;
    require(t.label[v] >= 0 && t.label[v] < labels, "label index out of range");
    int prev = v;
    for (int step = 0; step < 2 * t.label[v] + 1; ++step) {
      par.push_back(prev);
      prev = next++;
    }
  }
  return tree_to_structure(tree_from_parents(par));
}

inline Structure labelled_tree_decode(const Structure& b, int labels) {
  RootedTree t = tree_from_structure(b);
  int n = t.size();
  // chain[u] >= 0: the subtree below u is a bare path with chain[u] edges
  std::vector<int> chain(n, -1);
  {
    std::vector<int> stack{t.root()}, post;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      post.push_back(u);
      for (int c : t.children[u]) stack.push_back(c);
    }
    for (auto it = post.rbegin(); it != post.rend(); ++it) {
      int u = *it;
      if (t.children[u].empty())
        chain[u] = 0;
      else if (t.children[u].size() == 1 && chain[t.children[u][0]] >= 0)
        chain[u] = chain[t.children[u][0]] + 1;
    }
  }
  std::vector<int> originals, label_of(n, -1), orig_parent(n, -1);
  std::vector<std::pair<int, int>> work{{t.root(), -1}};
  while (!work.empty()) {
    auto [v, up] = work.back();
    work.pop_back();
    originals.push_back(v);
    orig_parent[v] = up;
    std::vector<int> pendants;
    for (int c : t.children[v]) {
      if (chain[c] >= 0) {
        pendants.push_back(chain[c] + 1);
        continue;
      }
      require(t.children[c].size() == 1,
              "a subdivision point needs exactly one child");
      work.push_back({t.children[c][0], v});
    }
    require(pendants.size() == 2, "an original node needs exactly two pendant paths");
    std::sort(pendants.begin(), pendants.end());
    require(pendants[0] == 1, "an original node needs a single-leaf marker");
    require(pendants[1] % 2 == 1, "a pendant path has even length");
    label_of[v] = (pendants[1] - 1) / 2;
    require(label_of[v] < labels, "label index out of range");
  }
  std::sort(originals.begin(), originals.end());
  std::vector<int> index(n, -1);
  for (size_t i = 0; i < originals.size(); ++i) index[originals[i]] = static_cast<int>(i);
  std::vector<int> par(originals.size()), lab(originals.size());
  for (size_t i = 0; i < originals.size(); ++i) {
    int v = originals[i];
    par[i] = orig_parent[v] == -1 ? -1 : index[orig_parent[v]];
    lab[i] = label_of[v];
  }
  return tree_to_structure(tree_from_parents(par, lab), false, labels);
}

// --------------------------------------------------------------------------
// ordered-tree-to-binary: first-child-next-sibling.  Label 0 marks a first
// child (and the root), label 1 a next sibling.

inline Structure fcns_forward(const Structure& a) {
  RootedTree t = tree_from_structure(a);
  int n = t.size();
  std::vector<int> par(n, -1), lab(n, 0);
  for (int v = 0; v < n; ++v) {
    const auto& kids = t.children[v];
    for (size_t i = 0; i < kids.size(); ++i) {
      par[kids[i]] = i == 0 ? v : kids[i - 1];
      lab[kids[i]] = i == 0 ? 0 : 1;
    }
  }
  return tree_to_structure(tree_from_parents(par, lab), false, 2);
}

inline Structure fcns_decode(const Structure& b) {
  RootedTree t = tree_from_structure(b);
  int n = t.size();
  require(t.labelled(), "the input tree carries no labels");
  std::vector<int> first(n, -1), sibling(n, -1);
  for (int v = 0; v < n; ++v)
    for (int c : t.children[v]) {
      int& slot = t.label[c] == 0 ? first[v] : sibling[v];
      require(slot == -1, t.label[c] == 0
                              ? "a node carries two first-child markers"
                              : "a node carries two sibling markers");
      slot = c;
    }
  int root = t.root();
  require(t.label[root] == 0, "the root must carry the first-child label");
  require(sibling[root] == -1, "the root cannot have a sibling");
  std::vector<int> par(n, -1);
  std::vector<std::vector<int>> kids(n);
  for (int v = 0; v < n; ++v)
    for (int c = first[v]; c != -1; c = sibling[c]) {
      par[c] = v;
      kids[v].push_back(c);
    }
  int placed = 0;
  for (int v = 0; v < n; ++v) placed += par[v] == -1 ? 0 : 1;
  require(placed == n - 1, "a sibling chain escapes its parent");
  RootedTree out;
  out.parent = std::move(par);
  out.children = std::move(kids);
  return tree_to_structure(out, true);
}

inline Structure order_siblings_forward(const Structure& a) {
  RootedTree t = tree_from_structure(a);
  for (auto& kids : t.children) std::sort(kids.begin(), kids.end());
  return tree_to_structure(t, true);
}

inline Structure forget_order_decode(const Structure& b) {
  RootedTree t = tree_from_structure(b);
  for (const auto& kids : t.children)
    require(kids.size() <= 2, "a node with more than two children is not binary");
  return tree_to_structure(t);
}

// --------------------------------------------------------------------------
// laminar-to-tree: a fresh root, one node per hyperedge placed by strict
// containment, and one leaf per vertex below its minimal hyperedge.

inline Structure laminar_forward(const Structure& a) {
  Hypergraph g = hypergraph_of(a);
  LaminarForest f = laminar_forest(g);
  int m = static_cast<int>(g.edges.size());
  std::vector<int> par(1 + m + g.n, -1);
  for (int i = 0; i < m; ++i) par[1 + i] = f.parent[i] == -1 ? 0 : 1 + f.parent[i];
  for (int v = 0; v < g.n; ++v) {
    int best = -1;
    for (int i = 0; i < m; ++i)
      if ((g.edges[i] >> v) & 1)
        if (best == -1 || popcount(g.edges[i]) < popcount(g.edges[best])) best = i;
    par[1 + m + v] = best == -1 ? 0 : 1 + best;
  }
  return tree_to_structure(tree_from_parents(par));
}

inline Structure laminar_decode(const Structure& b) {
  RootedTree t = tree_from_structure(b);
  int n = t.size();
  if (n == 1)  // a bare root decodes to the one-vertex family without edges
    return hypergraph_structure(1, {});
  std::vector<int> leaf_index(n, -1);
  int leaves = 0;
  for (int u = 0; u < n; ++u)
    if (t.children[u].empty()) leaf_index[u] = leaves++;
  int root = t.root();
  for (int u = 0; u < n; ++u) {
    if (u == root || leaf_index[u] >= 0 || t.children[u].size() != 1) continue;
    require(leaf_index[t.children[u][0]] >= 0,
            "a hyperedge node wraps a single hyperedge");
  }
  std::set<std::uint64_t> edges;
  for (int u = 0; u < n; ++u) {
    if (u == root || leaf_index[u] >= 0) continue;
    std::uint64_t mask = 0;
    std::vector<int> stack{u};
    while (!stack.empty()) {
      int w = stack.back();
      stack.pop_back();
      if (leaf_index[w] >= 0) mask |= std::uint64_t{1} << leaf_index[w];
      for (int c : t.children[w]) stack.push_back(c);
    }
    require(edges.insert(mask).second, "two hyperedge nodes cover the same vertices");
  }
  return hypergraph_structure(leaves, {edges.begin(), edges.end()});
}

// --------------------------------------------------------------------------
// relations-to-hypergraph: k+1 copies of every element tied by an all-copies
// hyperedge, a palette whose edges form the prefix chain {p0} c {p0,p1} c ...,
// colour edges {p_c, copy_c(v)} for c >= 1, and one size-k hyperedge per
// tuple.  Copy 0 stays uncoloured: it is the member of the all-copies edge
// that carries no colour.

inline Structure relations_forward(const Structure& a, int k) {
  int n = a.n;
  auto copy = [&](int v, int c) { return (k + 1) * v + c; };
  int palette = (k + 1) * n;
  std::set<std::vector<int>> edges;
  std::vector<int> chain;
  for (int c = 0; c <= k; ++c) {
    chain.push_back(palette + c);
    edges.insert(chain);
  }
  for (int v = 0; v < n; ++v) {
    std::vector<int> all;
    for (int c = 0; c <= k; ++c) all.push_back(copy(v, c));
    edges.insert(all);
    for (int c = 1; c <= k; ++c) edges.insert({copy(v, c), palette + c});
  }
  for (const auto& tup : a.tuples("rel")) {
    std::set<int> e;
    for (int c = 1; c <= k; ++c) e.insert(copy(std::get<int>(tup[c - 1]), c));
    edges.insert({e.begin(), e.end()});
  }
  Structure out = make_structure(vocabulary_of(class_id(ClassTag::Hypergraphs)),
                                 (k + 1) * (n + 1));
  for (auto e : edges) out.tuples("edge").push_back({SetSlot{std::move(e)}});
  out.normalize();
  return out;
}

inline Structure relations_decode(const Structure& b, int k) {
  std::set<std::set<int>> edges;
  for (const auto& tup : b.tuples("edge")) {
    const auto& xs = std::get<SetSlot>(tup[0]);
    edges.insert({xs.begin(), xs.end()});
  }
  // the palette marker is the unique vertex whose singleton is an edge and
  // whose edges form a containment chain
  int p0 = -1;
  for (int x = 0; x < b.n; ++x) {
    if (!edges.count({x})) continue;
    std::vector<std::set<int>> holding;
    for (const auto& e : edges)
      if (e.count(x)) holding.push_back(e);
    std::sort(holding.begin(), holding.end(),
              [](const auto& l, const auto& r) { return l.size() < r.size(); });
    bool is_chain = true;
    for (size_t i = 0; i + 1 < holding.size(); ++i)
      for (int y : holding[i])
        if (!holding[i + 1].count(y)) is_chain = false;
    if (!is_chain) continue;
    require(p0 == -1, "the palette marker is ambiguous");
    p0 = x;
  }
  require(p0 != -1, "no palette marker found");
  std::vector<std::set<int>> chain;
  for (const auto& e : edges)
    if (e.count(p0)) chain.push_back(e);
  std::sort(chain.begin(), chain.end(),
            [](const auto& l, const auto& r) { return l.size() < r.size(); });
  require(static_cast<int>(chain.size()) == k + 1 &&
              static_cast<int>(chain.back().size()) == k + 1,
          "the palette chain is broken");
  std::vector<int> pal{p0};
  std::set<int> palette_set{p0};
  for (int c = 1; c <= k; ++c) {
    require(chain[c].size() == static_cast<size_t>(c + 1), "the palette chain is broken");
    int added = -1;
    for (int y : chain[c])
      if (!palette_set.count(y)) added = y;
    require(added != -1, "the palette chain is broken");
    pal.push_back(added);
    palette_set.insert(added);
  }
  std::vector<int> level(b.n, 0);
  for (int c = 1; c <= k; ++c)
    for (int x = 0; x < b.n; ++x) {
      if (palette_set.count(x)) continue;
      if (!edges.count({std::min(pal[c], x), std::max(pal[c], x)})) continue;
      require(level[x] == 0, "an element carries two colours");
      level[x] = c;
    }
  // copy classes: the size-k+1 edges away from the palette
  std::vector<int> element(b.n, -1);
  std::vector<std::vector<int>> classes;
  for (const auto& e : edges) {
    if (e.size() != static_cast<size_t>(k + 1) || e.count(p0)) continue;
    bool pal_free = true;
    for (int y : e) pal_free = pal_free && !palette_set.count(y);
    if (!pal_free) continue;
    std::vector<int> by_level(k + 1, -1);
    for (int y : e) {
      require(by_level[level[y]] == -1, "a copy class repeats a colour");
      by_level[level[y]] = y;
    }
    classes.push_back(by_level);
  }
  std::sort(classes.begin(), classes.end());
  for (size_t i = 0; i < classes.size(); ++i)
    for (int y : classes[i]) {
      require(element[y] == -1, "an element sits in two copy classes");
      element[y] = static_cast<int>(i);
    }
  for (int x = 0; x < b.n; ++x)
    require(palette_set.count(x) || element[x] != -1,
            "an element sits outside every copy class");
  Structure out = make_structure(vocabulary_of(class_id(ClassTag::KAryRelations, k)),
                                 static_cast<int>(classes.size()));
  for (const auto& e : edges) {
    if (e.count(p0) || e.size() == static_cast<size_t>(k + 1)) continue;
    bool colour = false;
    for (int y : e) colour = colour || palette_set.count(y);
    if (colour) continue;  // a colour edge {p_c, v}
    require(e.size() == static_cast<size_t>(k), "a tuple edge has the wrong size");
    std::vector<int> by_level(k + 1, -1);
    for (int y : e) {
      require(level[y] >= 1 && by_level[level[y]] == -1, "a tuple edge misses a level");
      by_level[level[y]] = y;
    }
    Tuple tup;
    for (int c = 1; c <= k; ++c) tup.emplace_back(element[by_level[c]]);
    out.tuples("rel").push_back(std::move(tup));
  }
  out.normalize();
  return out;
}

// --------------------------------------------------------------------------
// uniform-k-to-matroid: double the ground set and declare the doubled
// hyperedges the non-bases of a sparse paving matroid of rank 2k.

inline Structure uniform_forward(const Structure& a, int k) {
  Hypergraph g = hypergraph_of(a);
  int ground = 2 * g.n;
  require(ground <= 20, "the doubled ground set is too large to enumerate");
  std::set<std::uint64_t> non_bases;
  for (auto e : g.edges) {
    std::uint64_t d = 0;
    for (int v = 0; v < g.n; ++v)
      if ((e >> v) & 1) d |= std::uint64_t{3} << (2 * v);
    non_bases.insert(d);
  }
  int rank = std::min(2 * k, ground);
  std::vector<std::uint64_t> indep;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << ground); ++s) {
    int size = popcount(s);
    if (size > rank || (size == rank && non_bases.count(s))) continue;
    indep.push_back(s);
  }
  return independence_structure(make_general(ground, std::move(indep)));
}

inline Structure uniform_decode(const Structure& b, int k) {
  GeneralMatroid gm = general_from_structure(b);
  require(gm.n % 2 == 0, "the ground set cannot split into copies");
  int rank = std::min(2 * k, gm.n);
  std::vector<std::uint64_t> non_bases;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << gm.n); ++s)
    if (popcount(s) == rank && !gm.independent(s)) non_bases.push_back(s);
  // elements with the same non-basis incidence are interchangeable, so any
  // pairing inside an incidence class decodes to an isomorphic hypergraph
  std::map<std::vector<int>, std::vector<int>> classes;
  for (int x = 0; x < gm.n; ++x) {
    std::vector<int> vec;
    for (size_t i = 0; i < non_bases.size(); ++i)
      if ((non_bases[i] >> x) & 1) vec.push_back(static_cast<int>(i));
    classes[vec].push_back(x);
  }
  std::vector<int> partner(gm.n, -1);
  std::vector<std::pair<int, int>> pairs;
  for (const auto& [vec, xs] : classes) {
    require(xs.size() % 2 == 0, "the copy classes have odd size");
    for (size_t i = 0; i < xs.size(); i += 2) {
      partner[xs[i]] = xs[i + 1];
      partner[xs[i + 1]] = xs[i];
      pairs.emplace_back(xs[i], xs[i + 1]);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<int> vertex(gm.n, -1);
  for (size_t i = 0; i < pairs.size(); ++i)
    vertex[pairs[i].first] = vertex[pairs[i].second] = static_cast<int>(i);
  std::set<std::uint64_t> edges;
  for (auto s : non_bases) {
    std::uint64_t e = 0;
    for (int x = 0; x < gm.n; ++x)
      if ((s >> x) & 1) {
        require((s >> partner[x]) & 1, "a non-basis splits a copy pair");
        e |= std::uint64_t{1} << vertex[x];
      }
    require(popcount(e) == k, "a non-basis has the wrong size");
    edges.insert(e);
  }
  return hypergraph_structure(static_cast<int>(pairs.size()),
                              {edges.begin(), edges.end()});
}

// --------------------------------------------------------------------------
// bipartite-to-matroid: every right vertex becomes a duplicated standard
// basis vector, every left vertex the sum of its neighbours' basis vectors.
// Requires that no two left vertices share a neighbourhood.

inline Structure bipartite_forward(const Structure& a) {
  std::vector<bool> left(a.n, false);
  for (const auto& t : a.tuples("left")) left[std::get<int>(t[0])] = true;
  std::vector<std::vector<int>> nbr(a.n);
  for (const auto& t : a.tuples("edge"))
    nbr[std::get<int>(t[0])].push_back(std::get<int>(t[1]));
  std::vector<int> rights, lefts;
  for (int v = 0; v < a.n; ++v) (left[v] ? lefts : rights).push_back(v);
  std::map<int, int> slot;
  for (size_t t = 0; t < rights.size(); ++t) slot[rights[t]] = static_cast<int>(t);
  std::set<std::vector<int>> seen;
  for (int x : lefts) {
    auto nb = nbr[x];
    std::sort(nb.begin(), nb.end());
    require(seen.insert(nb).second, "two left vertices share a neighbourhood");
  }
  int d = std::max<int>(1, static_cast<int>(rights.size()));
  gf::Mat vectors;
  for (size_t t = 0; t < rights.size(); ++t) {
    gf::Vec e(d, 0);
    e[t] = 1;
    vectors.push_back(e);
    vectors.push_back(e);
  }
  for (int x : lefts) {
    gf::Vec v(d, 0);
    for (int r : nbr[x]) v[slot[r]] ^= 1;
    vectors.push_back(std::move(v));
  }
  int ground = static_cast<int>(vectors.size());
  require(ground >= 1 && ground <= 20, "the matroid ground set is out of range");
  return independence_structure(to_general(RepresentedMatroid{2, d, std::move(vectors)}));
}

inline Structure bipartite_decode(const Structure& b) {
  GeneralMatroid gm = general_from_structure(b);
  auto single = [&](int x) { return std::uint64_t{1} << x; };
  std::vector<int> klass(gm.n, -1);
  std::vector<std::vector<int>> classes;
  for (int x = 0; x < gm.n; ++x) {
    if (gm.rank(single(x)) == 0) continue;  // loops become isolated lefts
    for (int y = 0; y < x; ++y)
      if (klass[y] != -1 && gm.rank(single(x) | single(y)) == 1) {
        klass[x] = klass[y];
        break;
      }
    if (klass[x] == -1) {
      klass[x] = static_cast<int>(classes.size());
      classes.emplace_back();
    }
    classes[klass[x]].push_back(x);
  }
  std::vector<int> reps;
  std::vector<std::vector<int>> right_classes;
  for (const auto& xs : classes)
    if (xs.size() >= 2) {
      reps.push_back(xs[0]);
      right_classes.push_back(xs);
    }
  int r = static_cast<int>(reps.size());
  require(r == gm.rank(gm.n == 62 ? ~std::uint64_t{0} >> 2
                                  : (std::uint64_t{1} << gm.n) - 1),
          "the duplicated basis classes do not match the rank");
  // a left vertex's neighbourhood is the unique minimal dependency over the
  // class representatives
  std::vector<std::pair<int, std::vector<int>>> left_records;  // (element, classes)
  for (int x = 0; x < gm.n; ++x) {
    if (gm.rank(single(x)) == 0) {
      left_records.push_back({x, {}});
      continue;
    }
    if (classes[klass[x]].size() >= 2) continue;  // sits in a right class
    std::vector<int> found;
    for (int size = 1; size <= r && found.empty(); ++size) {
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << r); ++s) {
        if (popcount(s) != size) continue;
        std::uint64_t mask = single(x);
        for (int t = 0; t < r; ++t)
          if ((s >> t) & 1) mask |= single(reps[t]);
        if (gm.rank(mask) != size) continue;
        for (int t = 0; t < r; ++t)
          if ((s >> t) & 1) found.push_back(t);
        break;
      }
    }
    require(!found.empty(), "a left vertex spans no neighbourhood");
    left_records.push_back({x, found});
  }
  // extra members of a right class are degree-one lefts attached to it
  for (int t = 0; t < r; ++t)
    for (size_t i = 2; i < right_classes[t].size(); ++i)
      left_records.push_back({right_classes[t][i], {t}});
  std::sort(left_records.begin(), left_records.end());
  int lefts = static_cast<int>(left_records.size());
  Structure out = make_structure(vocabulary_of(class_id(ClassTag::BipartiteGraphs)),
                                 lefts + r);
  for (int j = 0; j < lefts; ++j) {
    out.tuples("left").push_back({Slot{j}});
    for (int t : left_records[j].second) {
      out.tuples("edge").push_back({Slot{j}, Slot{lefts + t}});
      out.tuples("edge").push_back({Slot{lefts + t}, Slot{j}});
    }
  }
  out.normalize();
  return out;
}

// --------------------------------------------------------------------------
// matrix-to-graph: subdivide every nonzero entry, hang a pendant path of
// length value+1 from the midpoint, and mark the sides with odd cycles —
// a triangle per row, a pentagon per column.  The subdivided part is
// bipartite, so those are the only odd cycles.

struct MatrixData {
  std::vector<int> rows, cols;               // ascending universe ids
  std::map<std::pair<int, int>, int> value;  // by (row index, col index)
};

inline MatrixData read_matrix(const Structure& a, int q) {
  MatrixData m;
  std::set<int> rows, cols;
  for (int v = 0; v < q; ++v)
    for (const auto& t : a.tuples("entry" + std::to_string(v))) {
      rows.insert(std::get<int>(t[0]));
      cols.insert(std::get<int>(t[1]));
    }
  m.rows.assign(rows.begin(), rows.end());
  m.cols.assign(cols.begin(), cols.end());
  std::map<int, int> ri, ci;
  for (size_t i = 0; i < m.rows.size(); ++i) ri[m.rows[i]] = static_cast<int>(i);
  for (size_t j = 0; j < m.cols.size(); ++j) ci[m.cols[j]] = static_cast<int>(j);
  for (int v = 0; v < q; ++v)
    for (const auto& t : a.tuples("entry" + std::to_string(v)))
      m.value[{ri[std::get<int>(t[0])], ci[std::get<int>(t[1])]}] = v;
  return m;
}

inline void add_edge(Structure& a, int x, int y) {
  a.tuples("edge").push_back({Slot{x}, Slot{y}});
  a.tuples("edge").push_back({Slot{y}, Slot{x}});
}

inline Structure matrix_forward(const Structure& a, int q) {
  MatrixData m = read_matrix(a, q);
  int r = static_cast<int>(m.rows.size()), c = static_cast<int>(m.cols.size());
  std::vector<std::pair<int, int>> edges;
  int next = r + c;
  std::vector<std::tuple<int, int, int>> gadgets;  // (row, col, value)
  for (const auto& [rc, v] : m.value)
    if (v != 0) gadgets.emplace_back(rc.first, rc.second, v);
  for (auto [i, j, v] : gadgets) {
    int mid = next++;
    edges.push_back({i, mid});
    edges.push_back({mid, r + j});
    int prev = mid;
    for (int step = 0; step < v + 1; ++step) {
      edges.push_back({prev, next});
      prev = next++;
    }
  }
  for (int i = 0; i < r; ++i) {
    int h1 = next++, h2 = next++;
    edges.push_back({i, h1});
    edges.push_back({h1, h2});
    edges.push_back({h2, i});
  }
  for (int j = 0; j < c; ++j) {
    int prev = r + j;
    for (int step = 0; step < 4; ++step) {
      edges.push_back({prev, next});
      prev = next++;
    }
    edges.push_back({prev, r + j});
  }
  Structure out = make_structure(vocabulary_of(class_id(ClassTag::GraphsEdge)), next);
  for (auto [x, y] : edges) add_edge(out, x, y);
  out.normalize();
  return out;
}

inline Structure matrix_decode(const Structure& b, int q) {
  int n = b.n;
  std::vector<std::set<int>> adj(n);
  for (const auto& t : b.tuples("edge"))
    adj[std::get<int>(t[0])].insert(std::get<int>(t[1]));
  std::set<std::vector<int>> triangles, pentagons;
  for (int x = 0; x < n; ++x)
    for (int y : adj[x])
      for (int z : adj[y])
        if (x < y && y < z && adj[z].count(x) && adj[x].count(y)) {
          if (adj[x].count(z) && adj[y].count(z)) triangles.insert({x, y, z});
        }
  for (int v = 0; v < n; ++v) {  // 5-cycles with v as the least vertex
    std::vector<int> path{v};
    auto dfs = [&](auto&& self) -> void {
      if (path.size() == 5) {
        if (adj[path.back()].count(v)) {
          auto key = path;
          std::sort(key.begin(), key.end());
          pentagons.insert(key);
        }
        return;
      }
      for (int w : adj[path.back()]) {
        if (w <= v || std::find(path.begin(), path.end(), w) != path.end()) continue;
        path.push_back(w);
        self(self);
        path.pop_back();
      }
    };
    dfs(dfs);
  }
  std::vector<int> role(n, 0);  // 1 marker helper, 2 row, 3 col
  auto claim_cycles = [&](const std::set<std::vector<int>>& cycles, int anchor_role,
                          std::vector<int>& anchors) {
    for (const auto& cyc : cycles) {
      std::set<int> members(cyc.begin(), cyc.end());
      int anchor = -1;
      for (int x : cyc) {
        require(role[x] == 0, "marker cycles overlap");
        bool outside = false;
        for (int y : adj[x]) outside = outside || !members.count(y);
        if (!outside) continue;
        require(anchor == -1, "a marker cycle touches the graph twice");
        anchor = x;
      }
      if (anchor == -1) anchor = cyc[0];  // an all-zero line: isolated marker
      for (int x : cyc) role[x] = 1;
      role[anchor] = anchor_role;
      anchors.push_back(anchor);
    }
  };
  std::vector<int> rows, cols;
  claim_cycles(triangles, 2, rows);
  claim_cycles(pentagons, 3, cols);
  require(!rows.empty() && !cols.empty(), "no marker cycles found");
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  int r = static_cast<int>(rows.size()), c = static_cast<int>(cols.size());
  std::map<int, int> ri, ci;
  for (int i = 0; i < r; ++i) ri[rows[i]] = i;
  for (int j = 0; j < c; ++j) ci[cols[j]] = j;
  std::map<std::pair<int, int>, int> value;
  std::vector<bool> used(n, false);
  for (int u : rows)
    for (int mid : adj[u]) {
      if (role[mid] != 0) continue;  // a triangle helper
      int col = -1, tail = -1;
      for (int y : adj[mid]) {
        if (role[y] == 3)
          col = y;
        else if (y != u)
          tail = y;
      }
      require(col != -1, "an entry gadget misses its column");
      require(adj[mid].size() == 3 && tail != -1, "an entry gadget misses its pendant");
      int steps = 1, prev = mid, cur = tail;
      while (true) {
        used[cur] = true;
        int fwd = -1;
        for (int y : adj[cur])
          if (y != prev) {
            require(fwd == -1, "a pendant path branches");
            fwd = y;
          }
        if (fwd == -1) break;
        prev = cur;
        cur = fwd;
        ++steps;
      }
      int entry = steps - 1;
      require(entry >= 1 && entry < q, "an entry gadget is too long");
      auto key = std::make_pair(ri[u], ci[col]);
      require(!value.count(key), "two gadgets for one entry");
      value[key] = entry;
      used[mid] = true;
    }
  for (int x = 0; x < n; ++x)
    require(role[x] != 0 || used[x], "a stray vertex sits outside every gadget");
  Structure out =
      make_structure(vocabulary_of(class_id(ClassTag::Matrices, q)), r + c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      auto it = value.find({i, j});
      int v = it == value.end() ? 0 : it->second;
      out.tuples("entry" + std::to_string(v)).push_back({Slot{i}, Slot{r + j}});
    }
  out.normalize();
  return out;
}

// --------------------------------------------------------------------------
// null-to-matrix: rebuild vectors whose dependencies are the given null
// space, pick the lexicographically least basis among the elements, and
// write every element's coefficients over that basis.

inline gf::Mat null_space_rows(const Structure& a, int q) {
  gf::Mat rows;
  for (const auto& t : a.tuples("null")) {
    gf::Vec x(a.n, 0);
    for (int c = 0; c + 1 < q; ++c)
      for (int e : std::get<SetSlot>(t[c]))
        x[e] = static_cast<std::uint8_t>(c + 1);
    rows.push_back(std::move(x));
  }
  return rows;
}

inline Structure null_forward(const Structure& a, int q) {
  gf::Mat null_rows = null_space_rows(a, q);
  gf::rref(null_rows, q);
  int n = a.n, r = n - static_cast<int>(null_rows.size());
  require(r >= 1, "a rank-zero matroid has no basis to decompose over");
  gf::Mat m = gf::nullspace(null_rows, q, n);  // rows span the orthogonal space
  auto column = [&](int e) {
    gf::Vec v(r, 0);
    for (int i = 0; i < r; ++i) v[i] = m[i][e];
    return v;
  };
  gf::Mat basis;
  std::vector<int> basis_elems;
  for (int e = 0; e < n && static_cast<int>(basis.size()) < r; ++e) {
    gf::Mat probe = basis;
    probe.push_back(column(e));
    if (gf::rank(probe, q) == static_cast<int>(probe.size())) {
      basis = std::move(probe);
      basis_elems.push_back(e);
    }
  }
  require(static_cast<int>(basis.size()) == r, "the reconstructed vectors lost rank");
  Structure out =
      make_structure(vocabulary_of(class_id(ClassTag::Matrices, q)), r + n);
  for (int e = 0; e < n; ++e) {
    auto coeff = gf::express(basis, column(e), q);
    require(coeff.has_value(), "an element falls outside the basis span");
    for (int i = 0; i < r; ++i)
      out.tuples("entry" + std::to_string((*coeff)[i]))
          .push_back({Slot{i}, Slot{r + e}});
  }
  out.normalize();
  return out;
}

inline Structure null_decode(const Structure& b, int q) {
  MatrixData m = read_matrix(b, q);
  int r = static_cast<int>(m.rows.size()), n = static_cast<int>(m.cols.size());
  gf::Mat vectors(n, gf::Vec(r, 0));
  for (const auto& [rc, v] : m.value)
    vectors[rc.second][rc.first] = static_cast<std::uint8_t>(v);
  return null_structure(RepresentedMatroid{q, r, std::move(vectors)});
}

// --------------------------------------------------------------------------

inline std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> out;
  {
    CatalogEntry e;
    e.id = "strings-4-to-2";
    e.input = class_id(ClassTag::Strings, 4);
    e.output = class_id(ClassTag::Strings, 2);
    e.expansion = 2;
    e.realization = strings_4_to_2();
    Transduction t = *e.realization;
    e.forward = [t](const Structure& a) {
      auto res = apply(t, a);
      require(res.size() == 1, "the letter split must be deterministic");
      return res[0].output;
    };
    e.decode = [](const Structure& b) { return strings_2_to_4(b); };
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "labelled-tree-to-tree";
    e.input = class_id(ClassTag::LabelledTrees, 2);
    e.output = class_id(ClassTag::Trees);
    e.expansion = 6;
    e.forward = [](const Structure& a) { return labelled_tree_forward(a, 2); };
    e.decode = [](const Structure& b) { return labelled_tree_decode(b, 2); };
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "ordered-tree-to-binary";
    e.input = class_id(ClassTag::OrderedTrees);
    e.output = class_id(ClassTag::LabelledTrees, 2);
    e.forward = [](const Structure& a) { return fcns_forward(a); };
    e.decode = [](const Structure& b) { return fcns_decode(b); };
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "binary-tree-to-ordered";
    e.input = class_id(ClassTag::BinaryTrees);
    e.output = class_id(ClassTag::OrderedTrees);
    e.forward = [](const Structure& a) { return order_siblings_forward(a); };
    e.decode = [](const Structure& b) { return forget_order_decode(b); };
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "laminar-to-tree";
    e.input = class_id(ClassTag::LaminarHypergraphs);
    e.output = class_id(ClassTag::Trees);
    e.expansion = 3;
    e.forward = [](const Structure& a) { return laminar_forward(a); };
    e.decode = [](const Structure& b) { return laminar_decode(b); };
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "relations-to-hypergraph";
    e.input = class_id(ClassTag::KAryRelations, 2);
    e.output = class_id(ClassTag::Hypergraphs);
    e.expansion = 6;
    e.forward = [](const Structure& a) { return relations_forward(a, 2); };
    e.decode = [](const Structure& b) { return relations_decode(b, 2); };
    out.push_back(std::move(e));
  }
  for (int k : {1, 2}) {
    CatalogEntry e;
    e.id = "uniform-" + std::to_string(k) + "-to-matroid";
    e.input = class_id(ClassTag::KUniformHypergraphs, k);
    e.output = class_id(ClassTag::MatroidIndependence);
    e.expansion = 2;
    e.forward = [k](const Structure& a) { return uniform_forward(a, k); };
    e.decode = [k](const Structure& b) { return uniform_decode(b, k); };
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "bipartite-to-matroid";
    e.input = class_id(ClassTag::BipartiteGraphs);
    e.output = class_id(ClassTag::MatroidIndependence);
    e.expansion = 2;
    e.forward = [](const Structure& a) { return bipartite_forward(a); };
    e.decode = [](const Structure& b) { return bipartite_decode(b); };
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "matrix-to-graph";
    e.input = class_id(ClassTag::Matrices, 2);
    e.output = class_id(ClassTag::GraphsEdge);
    e.expansion = 12;  // linear on the documented corpus of small matrices
    e.forward = [](const Structure& a) { return matrix_forward(a, 2); };
    e.decode = [](const Structure& b) { return matrix_decode(b, 2); };
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "null-to-matrix";
    e.input = class_id(ClassTag::MatroidNull, 2);
    e.output = class_id(ClassTag::Matrices, 2);
    e.expansion = 2;
    e.forward = [](const Structure& a) { return null_forward(a, 2); };
    e.decode = [](const Structure& b) { return null_decode(b, 2); };
    out.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.id = "graph-with-flag";
    e.input = class_id(ClassTag::GraphsEdge);
    e.output = pairs_class(class_id(ClassTag::GraphsEdge), class_id(ClassTag::Bool));
    e.expansion = 2;
    e.forward = [](const Structure& a) {
      return pair_structures(a, bool_structure(false));
    };
    e.decode = [](const Structure& b) { return project_pair(b, true); };
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace detail

inline const std::vector<CatalogEntry>& encoding_catalog() {
  static const std::vector<CatalogEntry> entries = detail::build_catalog();
  return entries;
}

inline const CatalogEntry& encoding_entry(const std::string& id) {
  for (const auto& e : encoding_catalog())
    if (e.id == id) return e;
  fail("unknown encoding id: " + id);
}

inline Structure encode(const std::string& id, const Structure& a) {
  const CatalogEntry& e = encoding_entry(id);
  check_member(e.input, a, "encode input");
  Structure out = e.forward(a);
  check_member(e.output, out, "encode output");
  return out;
}

inline Structure decode(const std::string& id, const Structure& b) {
  const CatalogEntry& e = encoding_entry(id);
  check_member(e.output, b, "decode input");
  Structure out = e.decode(b);
  check_member(e.input, out, "decode output");
  return out;
}

// Round-trip verification over a corpus: decode(forward(A)) must contain a
// structure isomorphic to A.
inline EncodingReport roundtrip_report(const std::string& id,
                                       const std::vector<Structure>& corpus,
                                       const Budget& budget = default_budget()) {
  const CatalogEntry& e = encoding_entry(id);
  Codec enc = e.realization ? codec_of(*e.realization)
                            : codec_of(NativeMap([&e](const Structure& a) {
                                return std::vector<Structure>{e.forward(a)};
                              }));
  Codec dec = codec_of(NativeMap(
      [&e](const Structure& b) { return std::vector<Structure>{e.decode(b)}; }));
  return check_encoding(enc, dec, corpus, budget);
}

// --------------------------------------------------------------------------
// Weight assignments in the three-element cyclic group over a laminar family.
// Each hyperedge's total is steered to a target value; the chosen child of
// every non-leaf hyperedge receives the unique maximal total among its
// siblings under the order 0 < 1 < 2.

inline Z3Weights z3_weight_assignment(const Hypergraph& g,
                                      const std::map<int, int>& chosen_child,
                                      int root_target = 2) {
  require(root_target >= 0 && root_target <= 2,
          "the target total must lie in the three-element group");
  detail::LaminarForest f = detail::laminar_forest(g);
  Z3Weights w{std::vector<int>(g.n, 0)};
  auto assign = [&](auto&& self, int e, int target) -> void {
    const auto& kids = f.children[e];
    if (kids.empty()) {
      for (int v = 0; v < g.n; ++v)
        if ((g.edges[e] >> v) & 1) {
          w.weight[v] = target;  // the first member carries the whole total
          break;
        }
      return;
    }
    auto it = chosen_child.find(e);
    require(it != chosen_child.end(),
            "chosenChild must pick a child for every non-leaf hyperedge");
    require(std::find(kids.begin(), kids.end(), it->second) != kids.end(),
            "the chosen child is not a child of its hyperedge");
    std::vector<int> order{it->second};
    for (int k : kids)
      if (k != it->second) order.push_back(k);
    // child targets 2,1,0,...,0 / 1,0,...,0 / 2,0,...,0 sum to the parent's
    // target, and the chosen child's total is the unique maximum
    for (size_t i = 0; i < order.size(); ++i) {
      int child_target = 0;
      if (order.size() == 1)
        child_target = target;
      else if (i == 0)
        child_target = target == 1 ? 1 : 2;
      else if (i == 1 && target == 0)
        child_target = 1;
      self(self, order[i], child_target);
    }
  };
  for (int root : f.roots) assign(assign, root, root_target);
  return w;
}

// The walk recovering a non-branching representative: step to the child the
// left weights single out, then follow the right weights while the current
// hyperedge still branches.
struct LeftRightSelection {
  int left_child = -1;
  int representative = -1;
  bool operator==(const LeftRightSelection&) const = default;
};

inline std::map<int, LeftRightSelection> verify_left_right_selection(
    const Hypergraph& g, const Z3Weights& left, const Z3Weights& right) {
  for (const Z3Weights* w : {&left, &right}) {
    require(static_cast<int>(w->weight.size()) == g.n,
            "weights must cover every vertex");
    for (int v : w->weight)
      require(v >= 0 && v <= 2, "weights must lie in the three-element group");
  }
  detail::LaminarForest f = detail::laminar_forest(g);
  auto total = [&](const Z3Weights& w, int e) {
    int s = 0;
    for (int v = 0; v < g.n; ++v)
      if ((g.edges[e] >> v) & 1) s += w.weight[v];
    return s % 3;
  };
  auto chosen = [&](const Z3Weights& w, int e) {
    int best = -1, best_total = -1;
    bool tie = false;
    for (int c : f.children[e]) {
      int t = total(w, c);
      if (t > best_total) {
        best = c;
        best_total = t;
        tie = false;
      } else if (t == best_total) {
        tie = true;
      }
    }
    require(!tie, "two children share the maximal weight");
    return best;
  };
  std::map<int, LeftRightSelection> out;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (f.children[e].size() < 2) continue;
    int first = chosen(left, e), cur = first;
    while (f.children[cur].size() >= 2) cur = chosen(right, cur);
    out[e] = {first, cur};
  }
  return out;
}

}  // namespace mso
