#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mso/classes.hpp"
#include "mso/gf.hpp"
#include "mso/structures.hpp"

namespace mso {

// ---------------------------------------------------------------------------
// Matroid types

// A list of vectors over a prime field; element i is vectors[i].
struct RepresentedMatroid {
  int q = 2;        // prime field order
  int d = 1;        // ambient dimension
  gf::Mat vectors;  // one row per element

  int n() const { return static_cast<int>(vectors.size()); }
};

inline void check_represented(const RepresentedMatroid& m) {
  gf::check_prime(m.q);
  require(m.d >= 1, "matroid needs ambient dimension at least 1");
  require(!m.vectors.empty(), "matroid needs at least one element");
  for (const auto& v : m.vectors) {
    require(static_cast<int>(v.size()) == m.d, "vector length must equal dim");
    for (int x : v)
      require(0 <= x && x < m.q, "vector entries must lie in 0..q-1");
  }
}

// Independence family over ground positions 0..n-1.  Minors keep the names
// of surviving elements in `labels`, so circuits and components report the
// original ids.
struct GeneralMatroid {
  int n = 0;
  std::vector<int> labels;           // external element names
  std::vector<std::uint64_t> indep;  // sorted set of independent masks

  bool independent(std::uint64_t mask) const {
    return std::binary_search(indep.begin(), indep.end(), mask);
  }
  int rank(std::uint64_t mask) const {
    int best = 0;
    for (auto s : indep)
      if ((s & ~mask) == 0) best = std::max(best, popcount(s));
    return best;
  }
  int position(int label) const {
    for (int i = 0; i < n; ++i)
      if (labels[i] == label) return i;
    fail("unknown matroid element: " + std::to_string(label));
  }
  bool operator==(const GeneralMatroid&) const = default;
};

inline GeneralMatroid make_general(int n, std::vector<std::uint64_t> indep,
                                   std::vector<int> labels = {}) {
  GeneralMatroid g;
  g.n = n;
  if (labels.empty())
    for (int i = 0; i < n; ++i) labels.push_back(i);
  g.labels = std::move(labels);
  sort_unique(indep);
  g.indep = std::move(indep);
  return g;
}

// Nonempty + downward closed + exchange; throws on the first violation.
inline void check_general(const GeneralMatroid& g) {
  require(g.n >= 1 && g.n <= 62, "ground-set size out of range");
  require(static_cast<int>(g.labels.size()) == g.n, "labels must cover the ground set");
  std::set<int> distinct(g.labels.begin(), g.labels.end());
  require(static_cast<int>(distinct.size()) == g.n, "labels must be distinct");
  require(std::is_sorted(g.indep.begin(), g.indep.end()), "family must be sorted");
  require(g.independent(0), "the empty set must be independent");
  std::uint64_t full = g.n == 62 ? ~std::uint64_t{0} >> 2
                                 : (std::uint64_t{1} << g.n) - 1;
  for (auto s : g.indep) {
    require((s & ~full) == 0, "independent set outside the ground set");
    for (int i = 0; i < g.n; ++i)
      if ((s >> i) & 1)
        require(g.independent(s & ~(std::uint64_t{1} << i)),
                "independence family is not downward closed");
  }
  for (auto s : g.indep)
    for (auto t : g.indep) {
      if (popcount(s) >= popcount(t)) continue;
      bool found = false;
      for (int i = 0; i < g.n && !found; ++i)
        if (((t >> i) & 1) && !((s >> i) & 1))
          found = g.independent(s | (std::uint64_t{1} << i));
      require(found, "exchange axiom fails");
    }
}

// Rank of the subset of elements selected by `mask`.
inline int rank(const RepresentedMatroid& m, std::uint64_t mask) {
  gf::Mat rows;
  for (int i = 0; i < m.n(); ++i)
    if ((mask >> i) & 1) rows.push_back(m.vectors[i]);
  return gf::rank(rows, m.q);
}

inline int rank(const RepresentedMatroid& m, const std::vector<int>& xs) {
  return rank(m, set_to_mask(xs));
}

inline GeneralMatroid to_general(const RepresentedMatroid& m) {
  check_represented(m);
  require(m.n() <= 20, "independence enumeration supports up to 20 elements");
  std::vector<std::uint64_t> indep;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m.n()); ++mask)
    if (rank(m, mask) == popcount(mask)) indep.push_back(mask);
  return make_general(m.n(), std::move(indep));
}

// Ranks of every subset at once: rank(m) is |m| when independent, else the
// best of its facets.
inline std::vector<int> rank_table(const GeneralMatroid& g) {
  require(g.n <= 22, "rank table supports up to 22 elements");
  std::vector<int> rk(std::uint64_t{1} << g.n, 0);
  for (std::uint64_t m = 1; m < rk.size(); ++m) {
    if (g.independent(m)) {
      rk[m] = popcount(m);
      continue;
    }
    for (int i = 0; i < g.n; ++i)
      if ((m >> i) & 1)
        rk[m] = std::max(rk[m], rk[m & ~(std::uint64_t{1} << i)]);
  }
  return rk;
}

// ---------------------------------------------------------------------------
// JSON forms

inline Json represented_to_json(const RepresentedMatroid& m) {
  Json j;
  j["field"] = m.q;
  j["dim"] = m.d;
  j["vectors"] = Json::array();
  for (const auto& v : m.vectors) {
    Json row = Json::array();
    for (int x : v) row.push_back(x);
    j["vectors"].push_back(row);
  }
  return j;
}

inline RepresentedMatroid represented_from_json(const Json& j) {
  require(j.is_object() && j.contains("field") && j.contains("dim") &&
              j.contains("vectors") && j["vectors"].is_array(),
          "represented matroid needs field, dim and vectors");
  RepresentedMatroid m;
  require(j["field"].is_number_integer() && j["dim"].is_number_integer(),
          "field and dim must be integers");
  m.q = j["field"];
  m.d = j["dim"];
  for (const auto& row : j["vectors"]) {
    require(row.is_array(), "vectors must be arrays");
    gf::Vec v;
    for (const auto& x : row) {
      require(x.is_number_integer(), "vector entries must be integers");
      int e = x;
      require(0 <= e && e < 256, "vector entry out of range");
      v.push_back(static_cast<std::uint8_t>(e));
    }
    m.vectors.push_back(std::move(v));
  }
  check_represented(m);
  return m;
}

inline Json general_to_json(const GeneralMatroid& g) {
  Json j;
  j["ground"] = g.n;
  bool identity = true;
  for (int i = 0; i < g.n; ++i) identity &= g.labels[i] == i;
  if (!identity) j["labels"] = g.labels;
  j["independent"] = Json::array();
  for (auto s : g.indep) j["independent"].push_back(mask_to_set(s));
  return j;
}

inline GeneralMatroid general_from_json(const Json& j) {
  require(j.is_object() && j.contains("ground") && j.contains("independent") &&
              j["ground"].is_number_integer() && j["independent"].is_array(),
          "general matroid needs ground and independent");
  GeneralMatroid g;
  g.n = j["ground"];
  require(1 <= g.n && g.n <= 62, "ground-set size out of range");
  if (j.contains("labels")) {
    require(j["labels"].is_array(), "labels must be an array");
    for (const auto& x : j["labels"]) {
      require(x.is_number_integer(), "labels must be integers");
      g.labels.push_back(x);
    }
  } else {
    for (int i = 0; i < g.n; ++i) g.labels.push_back(i);
  }
  for (const auto& row : j["independent"]) {
    require(row.is_array(), "independent sets must be arrays");
    std::uint64_t mask = 0;
    for (const auto& x : row) {
      require(x.is_number_integer(), "independent sets hold integers");
      int e = x;
      require(0 <= e && e < g.n, "independent-set entry out of range");
      mask |= std::uint64_t{1} << e;
    }
    g.indep.push_back(mask);
  }
  sort_unique(g.indep);
  check_general(g);
  return g;
}

// Either representation; the independence view is always available.
struct Matroid {
  std::optional<RepresentedMatroid> rep;
  GeneralMatroid gen;
};

inline Matroid matroid_from_json(const Json& j) {
  Matroid m;
  if (j.is_object() && j.contains("field")) {
    m.rep = represented_from_json(j);
    m.gen = to_general(*m.rep);
  } else {
    m.gen = general_from_json(j);
  }
  return m;
}

inline const RepresentedMatroid& need_representation(const Matroid& m,
                                                     const std::string& op) {
  require(m.rep.has_value(), op + " needs a vector representation");
  return *m.rep;
}

// ---------------------------------------------------------------------------
// Structure exports

inline Structure independence_structure(const GeneralMatroid& g) {
  Structure a = make_structure(
      vocabulary_of(class_id(ClassTag::MatroidIndependence)), g.n);
  for (auto s : g.indep) a.rels[0].push_back(Tuple{mask_to_set(s)});
  a.normalize();
  return a;
}

inline GeneralMatroid general_from_structure(const Structure& a) {
  check_member(class_id(ClassTag::MatroidIndependence), a, "independence structure");
  std::vector<std::uint64_t> indep;
  for (const auto& t : a.tuples("indep"))
    indep.push_back(set_to_mask(std::get<SetSlot>(t[0])));
  return make_general(a.n, std::move(indep));
}

// All linear combinations that vanish: the tuple puts element i into set
// slot c exactly when its coefficient is c+1.
inline Structure null_structure(const RepresentedMatroid& m) {
  check_represented(m);
  int n = m.n();
  double space = std::pow(static_cast<double>(m.q), n);
  require(space <= (1 << 22), "null enumeration space too large");
  Structure a = make_structure(vocabulary_of(class_id(ClassTag::MatroidNull, m.q)), n);
  std::vector<int> coeff(n, 0);
  while (true) {
    gf::Vec sum(m.d, 0);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < m.d; ++c)
        sum[c] = gf::add(sum[c], gf::mul(coeff[i], m.vectors[i][c], m.q), m.q);
    if (std::all_of(sum.begin(), sum.end(), [](std::uint8_t x) { return x == 0; })) {
      Tuple t(m.q - 1);
      for (int c = 0; c < m.q - 1; ++c) t[c] = SetSlot{};
      for (int i = 0; i < n; ++i)
        if (coeff[i] > 0) std::get<SetSlot>(t[coeff[i] - 1]).push_back(i);
      a.rels[0].push_back(std::move(t));
    }
    int i = n - 1;
    while (i >= 0 && coeff[i] == m.q - 1) coeff[i--] = 0;
    if (i < 0) break;
    ++coeff[i];
  }
  a.normalize();
  return a;
}

// ---------------------------------------------------------------------------
// Circuits and components

namespace detail {

inline std::vector<std::uint64_t> circuit_masks(const GeneralMatroid& g) {
  require(g.n <= 20, "circuit enumeration supports up to 20 elements");
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << g.n); ++m) {
    if (g.independent(m)) continue;
    bool minimal = true;
    for (int i = 0; i < g.n && minimal; ++i)
      if ((m >> i) & 1)
        minimal = g.independent(m & ~(std::uint64_t{1} << i));
    if (minimal) out.push_back(m);
  }
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int x, int y) { parent[find(x)] = find(y); }
};

inline std::vector<std::vector<int>> positions_to_label_partition(
    const GeneralMatroid& g, UnionFind& uf) {
  std::vector<std::vector<int>> blocks;
  std::vector<int> block_of(g.n, -1);
  for (int i = 0; i < g.n; ++i) {
    int r = uf.find(i);
    if (block_of[r] < 0) {
      block_of[r] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[block_of[r]].push_back(g.labels[i]);
  }
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

// Partition induced by 0-connectivity separations: two elements share a
// component exactly when no separation splits them.
inline std::vector<std::vector<int>> separation_components(const GeneralMatroid& g) {
  require(g.n <= 12, "separation oracle supports up to 12 elements");
  std::vector<int> rk = rank_table(g);
  std::uint64_t full = (std::uint64_t{1} << g.n) - 1;
  std::vector<std::uint64_t> signature(g.n, 0);
  int separations = 0;
  for (std::uint64_t m = 1; m < full; ++m) {
    if (!((m >> 0) & 1)) continue;  // fix element 0's side, halving the scan
    if (rk[m] + rk[full & ~m] != rk[full]) continue;
    ++separations;
    require(separations <= 62, "separation signature overflow");
    for (int i = 0; i < g.n; ++i)
      if ((m >> i) & 1) signature[i] |= std::uint64_t{1} << (separations - 1);
  }
  UnionFind uf(g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (signature[i] == signature[j]) uf.unite(i, j);
  return positions_to_label_partition(g, uf);
}

}  // namespace detail

inline std::vector<std::vector<int>> circuits(const GeneralMatroid& g) {
  std::vector<std::vector<int>> out;
  for (auto m : detail::circuit_masks(g)) {
    std::vector<int> c;
    for (int i = 0; i < g.n; ++i)
      if ((m >> i) & 1) c.push_back(g.labels[i]);
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::vector<int>> circuits(const RepresentedMatroid& m) {
  return circuits(to_general(m));
}

// Components of the circuit relation; for small matroids the result is
// cross-checked against the separation characterization.
inline std::vector<std::vector<int>> connected_components(const GeneralMatroid& g) {
  detail::UnionFind uf(g.n);
  for (auto m : detail::circuit_masks(g)) {
    int first = -1;
    for (int i = 0; i < g.n; ++i)
      if ((m >> i) & 1) {
        if (first < 0)
          first = i;
        else
          uf.unite(first, i);
      }
  }
  auto blocks = detail::positions_to_label_partition(g, uf);
  if (g.n <= 12)
    require(blocks == detail::separation_components(g),
            "circuit components disagree with the separation oracle");
  return blocks;
}

inline std::vector<std::vector<int>> connected_components(const RepresentedMatroid& m) {
  return connected_components(to_general(m));
}

// ---------------------------------------------------------------------------
// Dual and minors

inline GeneralMatroid dual(const GeneralMatroid& g) {
  int r = g.rank((std::uint64_t{1} << g.n) - 1);
  std::uint64_t full = (std::uint64_t{1} << g.n) - 1;
  std::set<std::uint64_t> indep;
  for (auto s : g.indep)
    if (popcount(s) == r)
      for_each_subset(full & ~s, [&](std::uint64_t sub) { indep.insert(sub); });
  GeneralMatroid out =
      make_general(g.n, {indep.begin(), indep.end()}, g.labels);
  check_general(out);
  return out;
}

namespace detail {

inline std::uint64_t labels_to_positions(const GeneralMatroid& g,
                                         const std::vector<int>& labels) {
  std::uint64_t mask = 0;
  for (int x : labels) {
    int p = g.position(x);
    require(!((mask >> p) & 1), "repeated matroid element");
    mask |= std::uint64_t{1} << p;
  }
  return mask;
}

}  // namespace detail

// Restriction to the complement of X (given by element names).
inline GeneralMatroid delete_elements(const GeneralMatroid& g,
                                      const std::vector<int>& x) {
  std::uint64_t drop = detail::labels_to_positions(g, x);
  std::uint64_t full = (std::uint64_t{1} << g.n) - 1;
  require(drop != full, "deleting every element leaves nothing");
  std::vector<int> survivors;
  for (int i = 0; i < g.n; ++i)
    if (!((drop >> i) & 1)) survivors.push_back(i);
  std::vector<int> labels, compress(g.n, -1);
  for (size_t j = 0; j < survivors.size(); ++j) {
    labels.push_back(g.labels[survivors[j]]);
    compress[survivors[j]] = static_cast<int>(j);
  }
  std::vector<std::uint64_t> indep;
  for (auto s : g.indep) {
    if (s & drop) continue;
    std::uint64_t t = 0;
    for (int i = 0; i < g.n; ++i)
      if ((s >> i) & 1) t |= std::uint64_t{1} << compress[i];
    indep.push_back(t);
  }
  return make_general(static_cast<int>(survivors.size()), std::move(indep),
                      std::move(labels));
}

// Contraction, computed through the dual and through basis extension; the
// two answers must agree.
inline GeneralMatroid contract_elements(const GeneralMatroid& g,
                                        const std::vector<int>& x) {
  std::uint64_t drop = detail::labels_to_positions(g, x);
  std::uint64_t full = (std::uint64_t{1} << g.n) - 1;
  require(drop != full, "contracting every element leaves nothing");
  GeneralMatroid via_dual = dual(delete_elements(dual(g), x));

  // Basis extension: grow a maximal independent subset Y inside X, then a
  // set is independent in the contraction when its union with Y is.
  std::uint64_t y = 0;
  for (int i = 0; i < g.n; ++i)
    if (((drop >> i) & 1) && g.independent(y | (std::uint64_t{1} << i)))
      y |= std::uint64_t{1} << i;
  std::vector<int> survivors;
  for (int i = 0; i < g.n; ++i)
    if (!((drop >> i) & 1)) survivors.push_back(i);
  std::vector<int> labels, compress(g.n, -1);
  for (size_t j = 0; j < survivors.size(); ++j) {
    labels.push_back(g.labels[survivors[j]]);
    compress[survivors[j]] = static_cast<int>(j);
  }
  std::vector<std::uint64_t> indep;
  for (auto s : g.indep) {
    if (s & drop) continue;
    if (!g.independent(s | y)) continue;
    std::uint64_t t = 0;
    for (int i = 0; i < g.n; ++i)
      if ((s >> i) & 1) t |= std::uint64_t{1} << compress[i];
    indep.push_back(t);
  }
  GeneralMatroid via_basis = make_general(static_cast<int>(survivors.size()),
                                          std::move(indep), std::move(labels));
  require(via_dual == via_basis,
          "contraction via the dual disagrees with basis extension");
  return via_basis;
}

inline RepresentedMatroid delete_elements(const RepresentedMatroid& m,
                                          const std::vector<int>& x) {
  std::uint64_t drop = set_to_mask(x);
  require((drop >> m.n()) == 0, "element out of range");
  require(popcount(drop) < m.n(), "deleting every element leaves nothing");
  RepresentedMatroid out;
  out.q = m.q;
  out.d = m.d;
  for (int i = 0; i < m.n(); ++i)
    if (!((drop >> i) & 1)) out.vectors.push_back(m.vectors[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Connectivity and branchwidth

// rank(X1) + rank(X2) - rank(E); asserted to equal the dimension of the
// intersection of the two spanned subspaces.
inline int connectivity(const RepresentedMatroid& m, std::uint64_t x1) {
  std::uint64_t full = (std::uint64_t{1} << m.n()) - 1;
  require(x1 != 0 && (x1 & ~full) == 0 && x1 != full,
          "connectivity needs a proper nonempty subset");
  std::uint64_t x2 = full & ~x1;
  int value = rank(m, x1) + rank(m, x2) - rank(m, full);
  gf::Mat a, b;
  for (int i = 0; i < m.n(); ++i)
    ((x1 >> i) & 1 ? a : b).push_back(m.vectors[i]);
  int interface_dim = static_cast<int>(gf::intersect_row_spaces(a, b, m.q).size());
  require(value == interface_dim,
          "connectivity formula disagrees with the interface subspace");
  return value;
}

inline int connectivity(const RepresentedMatroid& m, const std::vector<int>& x1) {
  return connectivity(m, set_to_mask(x1));
}

// Unrooted tree whose leaves 0..leaves-1 carry the matroid elements and
// whose internal nodes (ids from `leaves` upward) all have degree 3.
struct BranchDecomposition {
  int leaves = 0;
  std::vector<std::pair<int, int>> edges;
};

inline void check_decomposition(const BranchDecomposition& b) {
  require(b.leaves >= 1, "decomposition needs at least one leaf");
  int nodes = b.leaves == 1 ? 1 : 2 * b.leaves - 2;
  require(static_cast<int>(b.edges.size()) == (b.leaves == 1 ? 0 : 2 * b.leaves - 3),
          "wrong number of edges for a cubic tree");
  std::vector<int> deg(nodes, 0);
  detail::UnionFind uf(nodes);
  for (auto [u, v] : b.edges) {
    require(0 <= u && u < nodes && 0 <= v && v < nodes && u != v, "bad edge");
    ++deg[u];
    ++deg[v];
    uf.unite(u, v);
  }
  for (int i = 1; i < nodes; ++i)
    require(uf.find(i) == uf.find(0), "decomposition tree is disconnected");
  for (int i = 0; i < nodes; ++i) {
    if (i < b.leaves)
      require(deg[i] == (b.leaves == 1 ? 0 : 1), "leaves must have degree 1");
    else
      require(deg[i] == 3, "internal nodes must have degree 3");
  }
}

inline Json decomposition_to_json(const BranchDecomposition& b) {
  Json j;
  j["leaves"] = b.leaves;
  j["edges"] = Json::array();
  for (auto [u, v] : b.edges) j["edges"].push_back(Json::array({u, v}));
  return j;
}

inline BranchDecomposition decomposition_from_json(const Json& j) {
  require(j.is_object() && j.contains("leaves") && j.contains("edges") &&
              j["leaves"].is_number_integer() && j["edges"].is_array(),
          "decomposition needs leaves and edges");
  BranchDecomposition b;
  b.leaves = j["leaves"];
  for (const auto& e : j["edges"]) {
    require(e.is_array() && e.size() == 2 && e[0].is_number_integer() &&
                e[1].is_number_integer(),
            "edges must be integer pairs");
    b.edges.push_back({e[0], e[1]});
  }
  check_decomposition(b);
  return b;
}

namespace detail {

// Leaf set (as a mask) on the `u` side of edge index `cut`.
inline std::uint64_t leaf_side(const BranchDecomposition& b, size_t cut, bool u_side) {
  int nodes = b.leaves == 1 ? 1 : 2 * b.leaves - 2;
  std::vector<std::vector<int>> adj(nodes);
  for (size_t i = 0; i < b.edges.size(); ++i) {
    if (i == cut) continue;
    adj[b.edges[i].first].push_back(b.edges[i].second);
    adj[b.edges[i].second].push_back(b.edges[i].first);
  }
  int start = u_side ? b.edges[cut].first : b.edges[cut].second;
  std::uint64_t mask = 0;
  std::vector<int> stack{start};
  std::vector<bool> seen(nodes, false);
  seen[start] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (v < b.leaves) mask |= std::uint64_t{1} << v;
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return mask;
}

// Visits every unrooted cubic tree on n labelled leaves exactly once, by
// inserting leaves in ascending order into each edge.
template <typename F>
void for_each_cubic_tree(int n, F&& f) {
  if (n == 1) {
    f(std::vector<std::pair<int, int>>{});
    return;
  }
  if (n == 2) {
    f(std::vector<std::pair<int, int>>{{0, 1}});
    return;
  }
  std::vector<std::pair<int, int>> edges{{0, n}, {1, n}, {2, n}};
  auto rec = [&](auto&& self, int leaf) -> void {
    if (leaf == n) {
      f(edges);
      return;
    }
    size_t count = edges.size();
    for (size_t i = 0; i < count; ++i) {
      auto [u, v] = edges[i];
      int w = n + leaf - 2;
      edges[i] = {u, w};
      edges.push_back({w, v});
      edges.push_back({w, leaf});
      self(self, leaf + 1);
      edges.pop_back();
      edges.pop_back();
      edges[i] = {u, v};
    }
  };
  rec(rec, 3);
}

}  // namespace detail

// Width of one decomposition: the worst connectivity over its edge cuts.
inline int decomposition_width(const RepresentedMatroid& m,
                               const BranchDecomposition& b) {
  check_decomposition(b);
  require(b.leaves == m.n(), "decomposition leaves must match the elements");
  int width = 0;
  std::uint64_t full = (std::uint64_t{1} << m.n()) - 1;
  for (size_t i = 0; i < b.edges.size(); ++i) {
    std::uint64_t side = detail::leaf_side(b, i, true);
    if (side == 0 || side == full) continue;
    width = std::max(width, connectivity(m, side));
  }
  return width;
}

struct BranchwidthResult {
  int width = 0;
  BranchDecomposition decomposition;
};

// Exhaustive search over all cubic leaf trees; ties resolved toward the
// lexicographically least edge list.
inline BranchwidthResult branchwidth(const RepresentedMatroid& m) {
  check_represented(m);
  int n = m.n();
  require(n <= 9, "branchwidth search supports up to 9 elements");
  std::vector<int> conn(std::uint64_t{1} << n, 0);
  std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t mask = 1; mask < full; ++mask)
    conn[mask] = rank(m, mask) + rank(m, full & ~mask) - rank(m, full);
  BranchwidthResult best;
  bool first = true;
  detail::for_each_cubic_tree(n, [&](const std::vector<std::pair<int, int>>& edges) {
    BranchDecomposition b{n, edges};
    int width = 0;
    for (size_t i = 0; i < edges.size(); ++i) {
      std::uint64_t side = detail::leaf_side(b, i, true);
      if (side == 0 || side == full) continue;
      width = std::max(width, conn[side]);
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
// Multi-matroids

struct MultiMatroid {
  std::vector<GeneralMatroid> members;
};

inline void check_multi(const MultiMatroid& mm) {
  require(!mm.members.empty(), "multi-matroid needs at least one member");
  for (const auto& g : mm.members) {
    check_general(g);
    require(g.n == mm.members[0].n && g.labels == mm.members[0].labels,
            "multi-matroid members must share the ground set");
  }
}

inline MultiMatroid multi_from_json(const Json& j) {
  MultiMatroid mm;
  if (j.is_object() && j.contains("members")) {
    require(j["members"].is_array(), "members must be an array");
    for (const auto& jm : j["members"]) mm.members.push_back(matroid_from_json(jm).gen);
  } else {
    mm.members.push_back(matroid_from_json(j).gen);
  }
  check_multi(mm);
  return mm;
}

inline Json multi_to_json(const MultiMatroid& mm) {
  Json j;
  j["members"] = Json::array();
  for (const auto& g : mm.members) j["members"].push_back(general_to_json(g));
  return j;
}

// Join of the member component partitions.
inline std::vector<std::vector<int>> multi_connected_components(const MultiMatroid& mm) {
  check_multi(mm);
  const GeneralMatroid& g0 = mm.members[0];
  detail::UnionFind uf(g0.n);
  for (const auto& g : mm.members)
    for (const auto& block : connected_components(g)) {
      for (size_t i = 1; i < block.size(); ++i)
        uf.unite(g0.position(block[0]), g0.position(block[i]));
    }
  return detail::positions_to_label_partition(g0, uf);
}

// ---------------------------------------------------------------------------
// Homogeneous ordered partitions

struct OrderedPartition {
  std::vector<std::vector<int>> blocks;  // element names, ordered blocks
};

inline void check_partition(const OrderedPartition& p, const std::vector<int>& labels) {
  require(!p.blocks.empty(), "partition needs at least one block");
  std::set<int> seen;
  for (const auto& b : p.blocks) {
    require(!b.empty(), "partition blocks must be nonempty");
    for (int x : b) require(seen.insert(x).second, "partition repeats an element");
  }
  std::set<int> ground(labels.begin(), labels.end());
  require(seen == ground, "partition must cover the ground set exactly");
}

inline OrderedPartition partition_from_json(const Json& j) {
  require(j.is_object() && j.contains("blocks") && j["blocks"].is_array(),
          "partition needs a blocks array");
  OrderedPartition p;
  for (const auto& jb : j["blocks"]) {
    require(jb.is_array(), "blocks must be arrays");
    std::vector<int> b;
    for (const auto& x : jb) {
      require(x.is_number_integer(), "block entries must be integers");
      b.push_back(x);
    }
    p.blocks.push_back(std::move(b));
  }
  return p;
}

struct HomogeneityReport {
  bool homogeneous = true;
  std::string violation;
};

namespace detail {

inline std::string name_set(const std::vector<int>& xs) {
  std::string s = "{";
  for (size_t i = 0; i < xs.size(); ++i)
    s += (i ? "," : "") + std::to_string(xs[i]);
  return s + "}";
}

}  // namespace detail

// Checks the two homogeneity conditions:
//  (1) the block indices used by any circuit of any member form an interval;
//  (2) elements whose indices differ by d in {0,1} lie on some member's
//      circuit visiting at most d+3 indices.
inline HomogeneityReport is_homogeneous(const MultiMatroid& mm,
                                        const OrderedPartition& p) {
  check_multi(mm);
  const GeneralMatroid& g0 = mm.members[0];
  check_partition(p, g0.labels);
  std::map<int, int> index;
  for (size_t b = 0; b < p.blocks.size(); ++b)
    for (int x : p.blocks[b]) index[x] = static_cast<int>(b);

  std::vector<std::vector<std::vector<int>>> member_circuits;
  for (const auto& g : mm.members) member_circuits.push_back(circuits(g));

  for (const auto& cs : member_circuits)
    for (const auto& c : cs) {
      std::set<int> used;
      for (int x : c) used.insert(index.at(x));
      if (*used.rbegin() - *used.begin() + 1 != static_cast<int>(used.size()))
        return {false, "circuit " + detail::name_set(c) +
                           " does not visit an interval of indices"};
    }

  for (int delta = 0; delta <= 1; ++delta)
    for (int x : g0.labels)
      for (int y : g0.labels) {
        if (x >= y || std::abs(index.at(y) - index.at(x)) != delta) continue;
        bool connected = false;
        for (const auto& cs : member_circuits)
          for (const auto& c : cs) {
            if (!std::binary_search(c.begin(), c.end(), x) ||
                !std::binary_search(c.begin(), c.end(), y))
              continue;
            std::set<int> used;
            for (int z : c) used.insert(index.at(z));
            if (static_cast<int>(used.size()) <= delta + 3) {
              connected = true;
              break;
            }
          }
        if (!connected)
          return {false, "elements " + std::to_string(x) + " and " +
                             std::to_string(y) + " (index difference " +
                             std::to_string(delta) +
                             ") lack a small connecting circuit"};
      }
  return {};
}

inline HomogeneityReport is_homogeneous(const GeneralMatroid& g,
                                        const OrderedPartition& p) {
  return is_homogeneous(MultiMatroid{{g}}, p);
}

}  // namespace mso
