#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "mso/common.hpp"
#include "mso/gf.hpp"
#include "mso/matroid.hpp"
#include "mso/structures.hpp"

namespace mso {

// ---------------------------------------------------------------------------
// Hypergraphs

struct Hypergraph {
  int n = 0;
  std::vector<std::uint64_t> edges;  // distinct vertex-set masks, ascending
};

inline void check_hypergraph(const Hypergraph& g) {
  require(0 <= g.n && g.n <= 62, "hypergraph must have between 0 and 62 vertices");
  std::uint64_t full = (std::uint64_t{1} << g.n) - 1;
  for (size_t i = 0; i < g.edges.size(); ++i) {
    require((g.edges[i] & ~full) == 0, "hyperedge mentions a vertex out of range");
    if (i > 0) require(g.edges[i - 1] < g.edges[i], "duplicate hyperedge");
  }
}

inline Hypergraph make_hypergraph(int n, const std::vector<std::vector<int>>& edges) {
  Hypergraph g{n, {}};
  for (const auto& e : edges) {
    std::uint64_t mask = 0;
    for (int v : e) {
      require(0 <= v && v < n, "hyperedge mentions a vertex out of range");
      require(!(mask >> v & 1), "repeated vertex in a hyperedge");
      mask |= std::uint64_t{1} << v;
    }
    g.edges.push_back(mask);
  }
  std::sort(g.edges.begin(), g.edges.end());
  check_hypergraph(g);
  return g;
}

inline Json hypergraph_to_json(const Hypergraph& g) {
  Json j;
  j["n"] = g.n;
  j["edges"] = Json::array();
  for (std::uint64_t e : g.edges) j["edges"].push_back(mask_to_set(e));
  return j;
}

inline Hypergraph hypergraph_from_json(const Json& j) {
  require(j.is_object() && j.contains("n") && j.contains("edges") &&
              j["n"].is_number_integer() && j["edges"].is_array(),
          "hypergraph needs n and edges");
  std::vector<std::vector<int>> edges;
  for (const auto& e : j["edges"]) {
    require(e.is_array(), "hyperedges must be arrays of vertices");
    std::vector<int> vs;
    for (const auto& v : e) {
      require(v.is_number_integer(), "hyperedges must be arrays of vertices");
      vs.push_back(v);
    }
    edges.push_back(vs);
  }
  return make_hypergraph(j["n"], edges);
}

namespace detail {

inline std::uint64_t apply_perm_mask(std::uint64_t mask, const std::vector<int>& perm) {
  std::uint64_t out = 0;
  for (int i = 0; i < static_cast<int>(perm.size()); ++i)
    if (mask >> i & 1) out |= std::uint64_t{1} << perm[i];
  return out;
}

}  // namespace detail

// Relabels vertices: vertex i becomes perm[i].
inline Hypergraph permute_hypergraph(const Hypergraph& g, const std::vector<int>& perm) {
  check_hypergraph(g);
  require(static_cast<int>(perm.size()) == g.n, "permutation size mismatch");
  std::uint64_t image = 0;
  for (int p : perm) {
    require(0 <= p && p < g.n, "permutation value out of range");
    image |= std::uint64_t{1} << p;
  }
  require(popcount(image) == g.n, "not a permutation");
  Hypergraph out{g.n, {}};
  for (std::uint64_t e : g.edges) out.edges.push_back(detail::apply_perm_mask(e, perm));
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

inline bool hypergraphs_isomorphic(const Hypergraph& a, const Hypergraph& b) {
  check_hypergraph(a);
  check_hypergraph(b);
  if (a.n != b.n || a.edges.size() != b.edges.size()) return false;
  require(a.n <= 8, "hypergraph isomorphism search supports up to 8 vertices");
  std::vector<int> perm(a.n);
  for (int i = 0; i < a.n; ++i) perm[i] = i;
  do {
    std::vector<std::uint64_t> mapped;
    for (std::uint64_t e : a.edges) mapped.push_back(detail::apply_perm_mask(e, perm));
    std::sort(mapped.begin(), mapped.end());
    if (mapped == b.edges) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// ---------------------------------------------------------------------------
// Bipartition rank and sensitivity
//
// The membership matrix of a cut (U, V \ U) has a row per subset X of U and a
// column per subset Z of the complement, with a 1 where X ∪ Z is a hyperedge.

namespace detail {

struct CutRows {
  std::vector<gf::Vec> rows;  // the distinct nonzero rows
  bool zero_row = false;      // whether some subset of U has an all-zero row
};

// Materializes only the columns Z = E \ U realized by some hyperedge and only
// the rows realized by some hyperedge; the omitted all-zero columns and rows
// change neither the rank nor which rows coincide.
inline CutRows cut_rows(const Hypergraph& g, std::uint64_t u_mask) {
  std::map<std::uint64_t, int> column;
  for (std::uint64_t e : g.edges) column.emplace(e & ~u_mask, 0);
  int next = 0;
  for (auto& [z, idx] : column) idx = next++;
  std::map<std::uint64_t, gf::Vec> by_x;
  for (std::uint64_t e : g.edges) {
    auto& row = by_x.try_emplace(e & u_mask, gf::Vec(column.size(), 0)).first->second;
    row[column[e & ~u_mask]] = 1;
  }
  CutRows out;
  out.zero_row = by_x.size() < (std::uint64_t{1} << popcount(u_mask));
  for (auto& [x, row] : by_x) out.rows.push_back(std::move(row));
  std::sort(out.rows.begin(), out.rows.end());
  out.rows.erase(std::unique(out.rows.begin(), out.rows.end()), out.rows.end());
  return out;
}

inline void check_cut(const Hypergraph& g, std::uint64_t u_mask) {
  check_hypergraph(g);
  std::uint64_t full = (std::uint64_t{1} << g.n) - 1;
  require((u_mask & ~full) == 0, "cut side mentions a vertex out of range");
  int side = popcount(u_mask);
  require(std::min(side, g.n - side) <= 20,
          "bipartition side exceeds the supported bound (min side <= 20)");
}

}  // namespace detail

inline int bipartition_rank(const Hypergraph& g, std::uint64_t u_mask) {
  detail::check_cut(g, u_mask);
  return gf::rank(detail::cut_rows(g, u_mask).rows, 2);
}

inline int bipartition_rank(const Hypergraph& g, const std::vector<int>& u) {
  return bipartition_rank(g, set_to_mask(u));
}

// Number of Myhill-Nerode classes of subsets of U: X ~ Y when X ∪ Z and Y ∪ Z
// agree on being hyperedges for every Z disjoint from U; equivalently the
// number of distinct membership-matrix rows.
inline int sensitivity(const Hypergraph& g, std::uint64_t u_mask) {
  detail::check_cut(g, u_mask);
  auto cut = detail::cut_rows(g, u_mask);
  int classes = static_cast<int>(cut.rows.size()) + (cut.zero_row ? 1 : 0);
  int r = gf::rank(cut.rows, 2);
  require(r <= classes, "rank exceeded the class count");
  require(r >= 62 || classes <= (std::int64_t{1} << r),
          "class count exceeded 2^rank");
  return classes;
}

inline int sensitivity(const Hypergraph& g, const std::vector<int>& u) {
  return sensitivity(g, set_to_mask(u));
}

// ---------------------------------------------------------------------------
// Hyper-rankwidth

using RankDecomposition = BranchDecomposition;

struct HyperRankwidthResult {
  int width = 0;
  RankDecomposition decomposition;
};

// Exhaustive search over all cubic leaf trees for the decomposition whose
// worst edge-cut bipartition rank is least; ties resolved toward the
// lexicographically least edge list.
inline HyperRankwidthResult hyper_rankwidth(const Hypergraph& g) {
  check_hypergraph(g);
  int n = g.n;
  require(1 <= n && n <= 9, "hyper-rankwidth search supports 1 to 9 vertices");
  std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<int> rk(std::uint64_t{1} << n, 0);
  for (std::uint64_t mask = 1; mask < full; ++mask)
    rk[mask] = gf::rank(detail::cut_rows(g, mask).rows, 2);
  HyperRankwidthResult best;
  bool first = true;
  detail::for_each_cubic_tree(n, [&](const std::vector<std::pair<int, int>>& edges) {
    BranchDecomposition b{n, edges};
    int width = 0;
    for (size_t i = 0; i < edges.size(); ++i) {
      std::uint64_t side = detail::leaf_side(b, i, true);
      if (side == 0 || side == full) continue;
      width = std::max(width, rk[side]);
    }
    auto canon = edges;
    for (auto& [u, v] : canon)
      if (u > v) std::swap(u, v);
    std::sort(canon.begin(), canon.end());
    if (first || width < best.width ||
        (width == best.width && canon < best.decomposition.edges)) {
      best = {width, {n, canon}};
      first = false;
    }
  });
  return best;
}

// ---------------------------------------------------------------------------
// Compiled decompositions
//
// Rooting a decomposition at an edge yields a binary tree whose node x covers
// a vertex set U_x.  Colours 1..2^k number the Myhill-Nerode classes of
// subsets of U_x, ordered by lexicographically least member (so the empty set
// always has colour 1), and α_x maps child colour pairs to the parent colour.

struct CompiledNode {
  int left = -1;  // child node ids; both -1 on leaves
  int right = -1;
  int colour_empty = 0;   // leaf: colours of the sets ∅ and {x}
  int colour_single = 0;
  std::vector<std::vector<int>> alpha;  // internal: alpha[a-1][b-1], 2^k square
  bool is_leaf() const { return left < 0; }
};

struct CompiledDecomposition {
  int k = 0;
  std::vector<int> accepting;  // root colours whose class consists of hyperedges
  std::vector<CompiledNode> nodes;  // nodes[0] is the root
};

inline void check_compiled(const CompiledDecomposition& s) {
  require(0 <= s.k && s.k <= 8, "colour budget must be between 0 and 8");
  int top = 1 << s.k;
  require(!s.nodes.empty(), "compiled decomposition needs at least one node");
  for (size_t i = 0; i < s.accepting.size(); ++i) {
    require(1 <= s.accepting[i] && s.accepting[i] <= top,
            "accepting colour out of range");
    if (i > 0)
      require(s.accepting[i - 1] < s.accepting[i], "accepting colours must ascend");
  }
  int count = static_cast<int>(s.nodes.size());
  std::vector<bool> seen(count, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int visited = 0;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    ++visited;
    const CompiledNode& node = s.nodes[x];
    if (node.is_leaf()) {
      require(node.right < 0, "leaves cannot have a single child");
      require(1 <= node.colour_empty && node.colour_empty <= top &&
                  1 <= node.colour_single && node.colour_single <= top,
              "leaf colour out of range");
      require(node.alpha.empty(), "leaves carry no colour table");
      continue;
    }
    require(static_cast<int>(node.alpha.size()) == top,
            "colour table must be square of side 2^k");
    for (const auto& row : node.alpha) {
      require(static_cast<int>(row.size()) == top,
              "colour table must be square of side 2^k");
      for (int c : row) require(1 <= c && c <= top, "table colour out of range");
    }
    for (int child : {node.left, node.right}) {
      require(0 <= child && child < count, "child node out of range");
      require(!seen[child], "node appears twice in the tree");
      seen[child] = true;
      stack.push_back(child);
    }
  }
  require(visited == count, "unreachable nodes in the tree");
}

namespace detail {

// Spreads the bits of `packed` onto the set positions of `mask`, low to low.
inline std::uint64_t deposit_bits(std::uint64_t packed, std::uint64_t mask) {
  std::uint64_t out = 0;
  for (int i = 0; mask; ++i, mask &= mask - 1)
    if (packed >> i & 1) out |= mask & ~(mask - 1);
  return out;
}

// Packs the bits of `value` at the set positions of `mask`, low to low.
inline std::uint64_t extract_bits(std::uint64_t value, std::uint64_t mask) {
  std::uint64_t out = 0;
  for (int i = 0; mask; ++i, mask &= mask - 1)
    if (value & mask & ~(mask - 1)) out |= std::uint64_t{1} << i;
  return out;
}

struct RootedCut {
  std::uint64_t u_mask = 0;
  int left = -1;  // ids within the rooted tree; both -1 on leaves
  int right = -1;
  int vertex = -1;          // leaves only
  std::vector<int> colour;  // colour of X ⊆ U_x, indexed by packed submask
  int classes = 0;
};

// Colours the subsets of U in first-appearance order over ascending masks;
// two subsets share a colour exactly when no hyperedge completion separates
// them, so the empty set always receives colour 1.
inline void colour_cut(const Hypergraph& g, RootedCut& cut) {
  std::map<std::uint64_t, std::vector<std::uint64_t>> completions;
  for (std::uint64_t e : g.edges)
    completions[e & cut.u_mask].push_back(e & ~cut.u_mask);
  int size = popcount(cut.u_mask);
  cut.colour.assign(std::uint64_t{1} << size, 0);
  std::map<std::vector<std::uint64_t>, int> colour_of;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << size); ++p) {
    std::uint64_t x = deposit_bits(p, cut.u_mask);
    std::vector<std::uint64_t> signature;
    if (auto it = completions.find(x); it != completions.end()) {
      signature = it->second;
      std::sort(signature.begin(), signature.end());
    }
    int fresh = static_cast<int>(colour_of.size()) + 1;
    cut.colour[p] = colour_of.try_emplace(std::move(signature), fresh).first->second;
  }
  cut.classes = static_cast<int>(colour_of.size());
}

}  // namespace detail

// Compiles the decomposition rooted at `root_edge` (an index into t.edges;
// -1 selects the edge whose removal minimizes the larger side, ties broken by
// the lexicographically least endpoint pair).  The subtree of the smaller
// endpoint becomes the left child and inner children are ordered by node id.
// Pass k = -1 to use the smallest colour budget that fits every cut; an
// explicit smaller k is rejected.
inline CompiledDecomposition compile_decomposition(const Hypergraph& g,
                                                   const RankDecomposition& t,
                                                   int root_edge = -1, int k = -1) {
  check_hypergraph(g);
  check_decomposition(t);
  require(t.leaves == g.n, "decomposition leaves must match the vertices");
  require(g.n <= 16, "compilation enumerates all vertex subsets (n <= 16)");
  int n = g.n;
  std::uint64_t full = (std::uint64_t{1} << n) - 1;

  std::vector<detail::RootedCut> cuts;
  if (n == 1) {
    require(root_edge == -1, "a one-leaf decomposition has no edges");
    cuts.push_back({std::uint64_t{1}, -1, -1, 0, {}, 0});
  } else {
    if (root_edge == -1) {
      int best_larger = 0;
      std::pair<int, int> best_pair;
      for (size_t i = 0; i < t.edges.size(); ++i) {
        std::uint64_t side = detail::leaf_side(t, i, true);
        int larger = std::max(popcount(side), n - popcount(side));
        std::pair<int, int> pair = std::minmax(t.edges[i].first, t.edges[i].second);
        if (root_edge == -1 || larger < best_larger ||
            (larger == best_larger && pair < best_pair)) {
          root_edge = static_cast<int>(i);
          best_larger = larger;
          best_pair = pair;
        }
      }
    }
    require(0 <= root_edge && root_edge < static_cast<int>(t.edges.size()),
            "root edge out of range");
    int nodes = t.leaves == 1 ? 1 : 2 * t.leaves - 2;
    std::vector<std::vector<int>> adj(nodes);
    for (auto [u, v] : t.edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    auto build = [&](auto&& self, int w, int parent) -> int {
      int id = static_cast<int>(cuts.size());
      cuts.push_back({});
      if (w < t.leaves) {
        cuts[id].u_mask = std::uint64_t{1} << w;
        cuts[id].vertex = w;
        return id;
      }
      std::vector<int> kids;
      for (int nb : adj[w])
        if (nb != parent) kids.push_back(nb);
      require(kids.size() == 2, "internal nodes must have two children");
      std::sort(kids.begin(), kids.end());
      int left = self(self, kids[0], w);
      int right = self(self, kids[1], w);
      cuts[id].left = left;
      cuts[id].right = right;
      cuts[id].u_mask = cuts[left].u_mask | cuts[right].u_mask;
      return id;
    };
    auto [u, v] = t.edges[root_edge];
    cuts.push_back({full, -1, -1, -1, {}, 0});
    cuts[0].left = build(build, std::min(u, v), std::max(u, v));
    cuts[0].right = build(build, std::max(u, v), std::min(u, v));
  }

  int max_classes = 1;
  for (auto& cut : cuts) {
    detail::colour_cut(g, cut);
    max_classes = std::max(max_classes, cut.classes);
  }
  int needed = 0;
  while ((1 << needed) < max_classes) ++needed;
  if (k == -1) k = needed;
  require(k >= needed, "cut sensitivity exceeds the declared colour budget");
  require(k <= 8, "colour budget must be between 0 and 8");

  CompiledDecomposition out;
  out.k = k;
  out.nodes.resize(cuts.size());
  int top = 1 << k;
  for (size_t i = 0; i < cuts.size(); ++i) {
    const detail::RootedCut& cut = cuts[i];
    CompiledNode& node = out.nodes[i];
    node.left = cut.left;
    node.right = cut.right;
    if (cut.left < 0) {
      node.colour_empty = cut.colour[0];
      node.colour_single = cut.colour[1];
      continue;
    }
    const detail::RootedCut& lhs = cuts[cut.left];
    const detail::RootedCut& rhs = cuts[cut.right];
    node.alpha.assign(top, std::vector<int>(top, 0));
    for (std::uint64_t p = 0; p < (std::uint64_t{1} << popcount(cut.u_mask)); ++p) {
      std::uint64_t x = detail::deposit_bits(p, cut.u_mask);
      int a = lhs.colour[detail::extract_bits(x, lhs.u_mask)];
      int b = rhs.colour[detail::extract_bits(x, rhs.u_mask)];
      int& slot = node.alpha[a - 1][b - 1];
      require(slot == 0 || slot == cut.colour[p],
              "child colours failed to determine the parent colour");
      slot = cut.colour[p];
    }
    for (auto& row : node.alpha)
      for (int& c : row)
        if (c == 0) c = 1;
  }
  for (std::uint64_t e : g.edges)
    out.accepting.push_back(cuts[0].colour[detail::extract_bits(e, full)]);
  sort_unique(out.accepting);
  check_compiled(out);
  return out;
}

namespace detail {

inline Json compiled_node_to_json(const CompiledDecomposition& s, int id) {
  const CompiledNode& node = s.nodes[id];
  Json j;
  if (node.is_leaf()) {
    j["colours"] = Json::array({node.colour_empty, node.colour_single});
    return j;
  }
  j["alpha"] = node.alpha;
  j["children"] = Json::array({compiled_node_to_json(s, node.left),
                               compiled_node_to_json(s, node.right)});
  return j;
}

inline int compiled_node_from_json(const Json& j, CompiledDecomposition& s) {
  require(j.is_object(), "compiled node must be an object");
  int id = static_cast<int>(s.nodes.size());
  s.nodes.push_back({});
  if (j.contains("colours")) {
    const Json& c = j["colours"];
    require(c.is_array() && c.size() == 2 && c[0].is_number_integer() &&
                c[1].is_number_integer(),
            "leaf colours must be a pair of integers");
    s.nodes[id].colour_empty = c[0];
    s.nodes[id].colour_single = c[1];
    return id;
  }
  require(j.contains("alpha") && j.contains("children") && j["alpha"].is_array() &&
              j["children"].is_array() && j["children"].size() == 2,
          "internal node needs alpha and two children");
  std::vector<std::vector<int>> alpha;
  for (const auto& row : j["alpha"]) {
    require(row.is_array(), "alpha must be a table of integers");
    std::vector<int> out_row;
    for (const auto& c : row) {
      require(c.is_number_integer(), "alpha must be a table of integers");
      out_row.push_back(c);
    }
    alpha.push_back(out_row);
  }
  int left = compiled_node_from_json(j["children"][0], s);
  int right = compiled_node_from_json(j["children"][1], s);
  s.nodes[id].left = left;
  s.nodes[id].right = right;
  s.nodes[id].alpha = std::move(alpha);
  return id;
}

}  // namespace detail

inline Json compiled_to_json(const CompiledDecomposition& s) {
  check_compiled(s);
  Json j;
  j["k"] = s.k;
  j["accepting"] = s.accepting;
  j["tree"] = detail::compiled_node_to_json(s, 0);
  return j;
}

inline CompiledDecomposition compiled_from_json(const Json& j) {
  require(j.is_object() && j.contains("k") && j.contains("accepting") &&
              j.contains("tree") && j["k"].is_number_integer() &&
              j["accepting"].is_array(),
          "compiled decomposition needs k, accepting and tree");
  CompiledDecomposition s;
  s.k = j["k"];
  for (const auto& c : j["accepting"]) {
    require(c.is_number_integer(), "accepting colours must be integers");
    s.accepting.push_back(c);
  }
  detail::compiled_node_from_json(j["tree"], s);
  check_compiled(s);
  return s;
}

// Runs the bottom-up colour automaton on every leaf subset; leaves are
// numbered 0..n-1 in depth-first order, left child first.
inline Hypergraph decode_decomposition(const CompiledDecomposition& s) {
  check_compiled(s);
  std::vector<int> vertex_of(s.nodes.size(), -1);
  int n = 0;
  auto number = [&](auto&& self, int id) -> void {
    if (s.nodes[id].is_leaf()) {
      vertex_of[id] = n++;
      return;
    }
    self(self, s.nodes[id].left);
    self(self, s.nodes[id].right);
  };
  number(number, 0);
  require(n <= 20, "decoding enumerates all vertex subsets (n <= 20)");
  Hypergraph g{n, {}};
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    auto run = [&](auto&& self, int id) -> int {
      const CompiledNode& node = s.nodes[id];
      if (node.is_leaf())
        return x >> vertex_of[id] & 1 ? node.colour_single : node.colour_empty;
      return node.alpha[self(self, node.left) - 1][self(self, node.right) - 1];
    };
    int colour = run(run, 0);
    if (std::binary_search(s.accepting.begin(), s.accepting.end(), colour))
      g.edges.push_back(x);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Matroid sensitivity
//
// Myhill-Nerode classes of subsets of X₁ with respect to the hypergraph whose
// hyperedges are the independent sets of the matroid.

inline Hypergraph independence_hypergraph(const RepresentedMatroid& m) {
  check_represented(m);
  require(m.n() <= 16, "independence hypergraph enumerates all subsets (n <= 16)");
  GeneralMatroid g = to_general(m);
  return Hypergraph{g.n, g.indep};
}

inline int matroid_sensitivity(const RepresentedMatroid& m, std::uint64_t x1) {
  return sensitivity(independence_hypergraph(m), x1);
}

inline int matroid_sensitivity(const RepresentedMatroid& m, const std::vector<int>& x1) {
  return matroid_sensitivity(m, set_to_mask(x1));
}

}  // namespace mso
